"""Regenerate the data series for every dynamical scenario in ``configs/``.

For a plain scenario ``NAME.json`` this writes ``output/NAME.csv`` (the
trajectory: time, the 15 Bloch components, D, D_G, C and, with noise, the
Bloch-vector norm) and ``output/NAME.verdict.json`` (the category
verdict).  For a scenario with a ``sweep`` block it writes one JSON line
per grid point to ``output/NAME.jsonl``.

Usage::

    python3 demos/run_scenarios.py [NAME ...]
"""
import argparse
import json
import sys
import time
from pathlib import Path

from qdiscord import cli

HERE = Path(__file__).resolve().parent
CONFIGS = HERE / "configs"
OUTPUT = HERE / "output"


def run(path: Path) -> int:
    raw = json.loads(path.read_text())
    name = path.stem
    if "sweep" in raw:
        return cli.main(["sweep", "--config", str(path), "--out", str(OUTPUT / f"{name}.jsonl")])
    code = cli.main(["evolve", "--config", str(path), "--out", str(OUTPUT / f"{name}.csv")])
    if code:
        return code
    dest = OUTPUT / f"{name}.verdict.json"
    code = cli.main(["classify", "--config", str(path), "--out", str(dest)])
    if not code:
        rec = json.loads(dest.read_text())
        frozen = len(rec["frozen_intervals"])
        print(f"  C: {rec['category_C']:<10} D: {rec['category_D']:<10} joint: {rec['joint']}"
              + (f"  frozen intervals: {frozen}" if frozen else ""))
    return code


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("names", nargs="*", help="config names (default: all)")
    args = ap.parse_args(argv)
    OUTPUT.mkdir(exist_ok=True)
    paths = sorted(CONFIGS.glob("*.json"))
    if args.names:
        paths = [p for p in paths if p.stem in set(args.names)]
    status = 0
    for path in paths:
        t0 = time.perf_counter()
        print(f"{path.stem}")
        code = run(path)
        print(f"  exit {code}, {time.perf_counter() - t0:.1f} s")
        status = status or code
    return status


if __name__ == "__main__":
    sys.exit(main())
