"""Command-line front end.

Exit status: 0 on success, 2 for configuration errors, 3 when a numerical
consistency check fails.
"""
from __future__ import annotations

import argparse
import contextlib
import itertools
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from contextlib import contextmanager

import numpy as np

from . import classifier as cl
from .config import ConfigError, load_json, parse_config, run_trajectory, sweep_points
from .manifold import (
    NotOnManifold,
    format_section_table,
    integrate,
    section2_table,
    section3_classify,
)
from .measures import correlation_report, geometric_discord_batch, quantum_discord_left
from .noise import NumericalConsistencyError
from .state import (
    AXIS_LABELS,
    BlochVector,
    UnphysicalStateError,
    bloch_matrix_to_density,
    concurrence,
    flat_to_matrix,
)

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC = 0, 2, 3
PHYS_CHECK = 1e-9


class NumericalFailure(RuntimeError):
    pass


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


@contextmanager
def _output(path):
    if path in (None, "-"):
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            yield fh


def _dump(obj, fh):
    fh.write(json.dumps(obj, indent=2, sort_keys=True, default=cl._json_default))
    fh.write("\n")


def _config(args):
    return parse_config(load_json(args.config), horizon=args.horizon,
                        samples=args.samples, seed=args.seed)


def _check_physical(flat):
    lam = np.linalg.eigvalsh(bloch_matrix_to_density(flat_to_matrix(flat)))[:, 0]
    if lam.min() < -PHYS_CHECK:
        k = int(np.argmin(lam))
        raise NumericalFailure(f"state at sample {k} has eigenvalue {lam[k]:.3g}")


# ----------------------------------------------------------------- commands


def _parse_state_arg(text: str) -> BlochVector:
    text = text.strip()
    if "=" in text:
        comps = {}
        for item in text.split(","):
            key, _, val = item.partition("=")
            key = key.strip()
            if not key.startswith("N"):
                key = "N" + key
            try:
                comps[key] = float(val)
            except ValueError:
                raise ConfigError(f"--state: bad value in {item!r}") from None
        try:
            return BlochVector.from_components(**comps)
        except ValueError as exc:
            raise ConfigError(f"--state: {exc}") from None
    try:
        vals = [float(v) for v in text.split(",")]
        return BlochVector.from_flat(vals)
    except ValueError as exc:
        raise ConfigError(f"--state: {exc}") from None


def cmd_measure(args) -> int:
    if args.state:
        N = _parse_state_arg(args.state)
    elif args.config:
        N = _config(args).initial_state()
    else:
        raise ConfigError("measure: give --state or --config")
    try:
        rep = correlation_report(N, seed=args.seed or 0)
    except UnphysicalStateError as exc:
        raise ConfigError(f"state: {exc}") from None
    out = rep.to_dict()
    out["components"] = dict(zip(COLUMN_NAMES, N.flat().tolist()))
    with _output(args.out) as fh:
        _dump(out, fh)
    return EXIT_OK


COLUMN_NAMES = tuple("N" + lab.replace("X", "1").replace("Y", "2").replace("Z", "3")
                     for lab in AXIS_LABELS)


def _states(cfg) -> np.ndarray:
    flat = run_trajectory(cfg)
    if not np.all(np.isfinite(flat)):
        raise NumericalFailure("trajectory contains non-finite values")
    _check_physical(flat)
    return flat


def _measures(flat, seed):
    D = np.array([quantum_discord_left(BlochVector.from_flat(v), seed=seed)[0] for v in flat])
    C = np.array([concurrence(BlochVector.from_flat(v)) for v in flat])
    return D, geometric_discord_batch(flat), C


def _trajectory(cfg) -> cl.Trajectory:
    flat = _states(cfg)
    return cl.Trajectory(cfg.times, flat, *_measures(flat, cfg.seed))


def cmd_evolve(args) -> int:
    cfg = _config(args)
    flat = _states(cfg)
    D, D_G, C = _measures(flat, cfg.seed)
    cols = ["t", *COLUMN_NAMES, "D", "D_G", "C"]
    noisy = cfg.noise is not None
    if noisy:
        cols.append("norm")
    with _output(args.out) as fh:
        fh.write(",".join(cols) + "\n")
        for k, t in enumerate(cfg.times):
            row = [t, *flat[k], D[k], D_G[k], C[k]]
            if noisy:
                row.append(np.linalg.norm(flat[k]))
            fh.write(",".join(_fmt(v) for v in row) + "\n")
    return EXIT_OK


def _classify(cfg):
    traj = _trajectory(cfg)
    opts = dict(cfg.classifier)
    window = opts.pop("frozen_window", cfg.horizon / 4)
    flat_tol = opts.pop("frozen_tol", 1e-6)
    if "dwell_min" in opts:
        opts["dwell_min"] = int(opts["dwell_min"])
    verdict = cl.classify_joint(traj, strict=False, **opts)
    frozen = cl.detect_frozen(traj.D, traj.t, window=window, flat_tol=flat_tol)
    params = {"state": cfg.raw["state"], "hamiltonian": cfg.raw["hamiltonian"],
              "noise": cfg.raw.get("noise"), "horizon": cfg.horizon, "samples": cfg.samples}
    return cl.verdict_record(cfg.name, params, verdict, frozen)


def cmd_classify(args) -> int:
    record = _classify(_config(args))
    with _output(args.out) as fh:
        _dump(record, fh)
    return EXIT_OK


def cmd_sweep(args) -> int:
    raw = load_json(args.config)
    points = list(sweep_points(raw))
    # validate every grid point before running any of them
    cfgs = [parse_config(d, horizon=args.horizon, samples=args.samples, seed=args.seed)
            for _, _, d in points]
    if args.jobs < 1:
        raise ConfigError("--jobs must be at least 1")
    with _output(args.out) as fh, contextlib.ExitStack() as stack:
        if args.jobs > 1 and len(cfgs) > 1:
            pool = stack.enter_context(ProcessPoolExecutor(max_workers=args.jobs))
            records = pool.map(_classify, cfgs)  # yields in grid order
        else:
            records = map(_classify, cfgs)
        for (idx, assign, _), rec in zip(points, records):
            rec = {"index": idx, "assignment": assign, **rec}
            fh.write(json.dumps(rec, sort_keys=True, default=cl._json_default) + "\n")
            fh.flush()
    return EXIT_OK


def cmd_sections(args) -> int:
    with _output(args.out) as fh:
        if args.dim == 2:
            fh.write(format_section_table(section2_table(args.grid or 201)) + "\n")
            return EXIT_OK
        grid = args.grid or 41
        if args.axes:
            triples = [tuple(a.strip() for a in args.axes.split(","))]
            if len(triples[0]) != 3:
                raise ConfigError("--axes: expected three comma-separated axis labels")
        else:
            triples = list(itertools.combinations(AXIS_LABELS, 3))
        counts = {}
        for tri in triples:
            try:
                res = section3_classify(*tri, grid_n=grid)
            except ValueError as exc:
                raise ConfigError(f"--axes: {exc}") from None
            faces = "".join(f.value for f in res.faces)
            counts[res.geometry.value] = counts.get(res.geometry.value, 0) + 1
            fh.write(f"{' '.join(tri)}  {faces}  {res.geometry.value:<12} {_fmt(res.volume)}\n")
        if len(triples) > 1:
            fh.write("# " + ", ".join(f"{k}: {v}" for k, v in sorted(counts.items())) + "\n")
    return EXIT_OK


_INTEGRANDS = {
    "volume": None,
    "purity": lambda flat: np.sum(flat * flat, axis=1),
    "dg_right": lambda flat: geometric_discord_batch(
        np.concatenate([flat[:, 3:6], flat[:, 0:3],
                        flat[:, 6:].reshape(-1, 3, 3).transpose(0, 2, 1).reshape(-1, 9)], axis=1)),
}


def cmd_integrate(args) -> int:
    n = args.samples or 100_000
    if n < 2:
        raise ConfigError("--samples must be at least 2")
    fn = _INTEGRANDS[args.fn]
    res = integrate(fn, n_samples=n, seed=args.seed or 0, vectorized=fn is not None)
    out = res.to_dict()
    out["integrand"] = args.fn
    with _output(args.out) as fh:
        _dump(out, fh)
    return EXIT_OK


# ------------------------------------------------------------------ parser


def _u64(text: str) -> int:
    v = int(text)
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return v


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="qdiscord",
                                 description="Two-qubit discord, geometry and dynamics")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, config_required=False):
        p.add_argument("--config", required=config_required, help="scenario JSON file")
        p.add_argument("--out", help="output file (default: stdout)")
        p.add_argument("--seed", type=_u64, default=None)
        p.add_argument("--samples", type=int, default=None)
        p.add_argument("--horizon", type=float, default=None)

    p = sub.add_parser("measure", help="correlation report for one state")
    common(p)
    p.add_argument("--state", help="'N11=-1,N22=-1,N33=-1' or 15 comma-separated components")
    p.set_defaults(func=cmd_measure)

    p = sub.add_parser("evolve", help="trajectory CSV")
    common(p, True)
    p.set_defaults(func=cmd_evolve)

    p = sub.add_parser("classify", help="category verdict JSON")
    common(p, True)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("sweep", help="one verdict per sweep grid point (JSON lines)")
    common(p, True)
    p.add_argument("--jobs", type=int, default=1,
                   help="worker processes; output stays in grid order")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("sections", help="2- and 3-sections of the concordant set")
    common(p)
    p.add_argument("--dim", type=int, choices=(2, 3), default=2)
    p.add_argument("--grid", type=int, default=None)
    p.add_argument("--axes", help="three axis labels for a single 3-section, e.g. XX,YY,ZZ")
    p.set_defaults(func=cmd_sections)

    p = sub.add_parser("integrate", help="Monte Carlo integral over the concordant manifold")
    common(p)
    p.add_argument("--fn", choices=sorted(_INTEGRANDS), default="volume")
    p.set_defaults(func=cmd_integrate)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code not in (0, None) else EXIT_OK
    try:
        return args.func(args)
    except (NumericalFailure, NumericalConsistencyError, NotOnManifold,
            UnphysicalStateError, np.linalg.LinAlgError) as exc:
        print(f"numerical consistency failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ValueError as exc:  # ConfigError and invalid parameter values
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
