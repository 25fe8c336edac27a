"""Data for the static (state-space) figures, driven by ``configs/static/*.json``.

Each config names a ``figure`` kind:

``discord_vs_geometric_line``
    D and D_G along a segment of Bell-diagonal states, with D_G also given
    doubled (2 D_G, which is 1 on a Bell state).  The output also marks
    where D_G rises while D falls.
``bell_plane``
    D, D_G, physicality and separability on a grid in a plane of
    Bell-diagonal states.
``constant_discord_sections``
    D on the physical part of 2-sections where only two coordinates are
    nonzero.  Contours of the ``D`` column give the constant-discord curves.
``three_sections``
    The concordant grid points of 3-sections, with the section geometry.

Everything is written to ``output/<config name>*.csv``.

Usage::

    python3 demos/static_figures.py [NAME ...]
"""
import argparse
import json
import sys
from pathlib import Path

import numpy as np

from qdiscord import (
    BlochVector,
    concurrence,
    geometric_discord_left,
    is_physical,
    quantum_discord_left,
    section3_classify,
)
from qdiscord.manifold import _section_masks
from qdiscord.state import axis_index

HERE = Path(__file__).resolve().parent
CONFIGS = HERE / "configs" / "static"
OUTPUT = HERE / "output"


def _label(name: str) -> str:
    """'N12' -> 'XY', as used by the section routines."""
    return "".join("0XYZ"[int(c)] for c in name[1:])


def _write(path: Path, header, rows):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(v if isinstance(v, str) else format(float(v), ".17g") for v in row)
                     + "\n")
    print(f"  wrote {path.relative_to(HERE)} ({len(rows)} rows)")


def _measures(comps):
    N = BlochVector.from_components(**comps)
    if not is_physical(N):
        return None
    return quantum_discord_left(N)[0], geometric_discord_left(N), concurrence(N)


def discord_vs_geometric_line(cfg, name):
    lo, hi = cfg["range"]
    rows = []
    for x in np.linspace(lo, hi, cfg["samples"]):
        m = _measures({**cfg["fixed"], cfg["vary"]: x})
        if m is not None:
            rows.append([x, *m])
    arr = np.array(rows)
    dD, dG = np.diff(arr[:, 1]), np.diff(arr[:, 2])
    opposite = np.r_[False, (dD * dG) < 0]
    _write(OUTPUT / f"{name}.csv", [cfg["vary"], "D", "D_G", "2D_G", "C", "opposite_trend"],
           [[r[0], r[1], r[2], 2 * r[2], r[3], str(bool(o)).lower()]
            for r, o in zip(rows, opposite)])
    print(f"  D and D_G move in opposite directions on {int(opposite.sum())} steps")


def _plane(cfg, name, axes, fixed=None):
    lo, hi = cfg.get("range", [-1.0, 1.0])
    u = np.linspace(lo, hi, cfg["grid"])
    rows = []
    for a in u:
        for b in u:
            comps = {**(fixed or {}), axes[0]: a, axes[1]: b}
            m = _measures(comps)
            if m is None:
                rows.append([a, b, "nan", "nan", "nan", "false", "false"])
            else:
                rows.append([a, b, *m, "true", str(m[2] == 0.0).lower()])
    _write(OUTPUT / f"{name}.csv", [*axes, "D", "D_G", "C", "physical", "separable"], rows)


def bell_plane(cfg, name):
    _plane(cfg, name, cfg["axes"], cfg["fixed"])


def constant_discord_sections(cfg, name):
    for axes in cfg["sections"]:
        _plane(cfg, f"{name}_{axes[0]}_{axes[1]}", axes)


def three_sections(cfg, name):
    for axes in cfg["sections"]:
        labels = [_label(a) for a in axes]
        res = section3_classify(*labels, grid_n=cfg["grid"])
        pts, _, conc = _section_masks([axis_index(lab) for lab in labels], cfg["grid"])
        inside = pts[conc]
        print(f"  {' '.join(labels)}: {res.geometry.value}, grid volume {res.volume:.4f}")
        _write(OUTPUT / f"{name}_{'_'.join(axes)}.csv", axes, inside.tolist())


FIGURES = {f.__name__: f for f in (discord_vs_geometric_line, bell_plane,
                                   constant_discord_sections, three_sections)}


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("names", nargs="*", help="config names (default: all)")
    args = ap.parse_args(argv)
    OUTPUT.mkdir(exist_ok=True)
    for path in sorted(CONFIGS.glob("*.json")):
        if args.names and path.stem not in args.names:
            continue
        cfg = json.loads(path.read_text())
        print(path.stem)
        FIGURES[cfg["figure"]](cfg, path.stem)
    return 0


if __name__ == "__main__":
    sys.exit(main())
