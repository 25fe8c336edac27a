"""Scenario configuration files.

A scenario is a JSON object::

    {
      "schema": 1,
      "name": "ising-rtn-werner",
      "state": {"kind": "werner", "alpha": 0.5},
      "hamiltonian": {"kind": "ising", "J": 1, "B_z": "1/3"},
      "noise": {"g_z": "1/3", "gamma": 1},
      "time": {"horizon": 12, "samples": 2401},
      "seed": 0
    }

Numbers may be given as strings holding fractions (``"1/3"``).  Unknown
keys anywhere are rejected.  ``noise`` may be omitted or null for unitary
evolution.  A ``sweep`` block maps dotted parameter paths to value lists;
the cartesian product is enumerated in row-major order.
"""
from __future__ import annotations

import copy
import itertools
import json
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import numpy as np

from .evolution import HamiltonianSpec, InitialStateSpec, Model, unitary_trajectory
from .noise import NoiseMode, NoiseSpec, build_quasi_hamiltonian, rtn_trajectory
from .state import BlochVector, require_physical

SCHEMA_VERSION = 1

_TOP_KEYS = {"schema", "name", "description", "state", "hamiltonian", "noise", "time",
             "seed", "outputs", "sweep", "classifier"}
_STATE_KEYS = {
    "werner": {"alpha"},
    "bell_diagonal": {"N11", "N22", "N33"},
    "bell_beta": {"beta"},
    "dqc1": set(),
    "raw": {"components"},
}
_H_KEYS = {"kind", "J", "J_xy", "J_yx", "B_z"}
_NOISE_KEYS = {"g_z", "gamma", "xi", "mode"}
_TIME_KEYS = {"horizon", "samples"}
_CLASSIFIER_KEYS = {"rel_tol", "dwell_min", "asymptote_tol", "dip_ratio", "frozen_window",
                    "frozen_tol"}


class ConfigError(ValueError):
    """Malformed or out-of-range scenario configuration."""


def _num(value, where: str) -> float:
    if isinstance(value, bool):
        raise ConfigError(f"{where}: expected a number, got {value!r}")
    if isinstance(value, (int, float)):
        return float(value)
    if isinstance(value, str):
        try:
            return float(Fraction(value.strip()))
        except (ValueError, ZeroDivisionError):
            pass
    raise ConfigError(f"{where}: expected a number, got {value!r}")


def _only(d, allowed, where):
    if not isinstance(d, dict):
        raise ConfigError(f"{where}: expected an object")
    extra = set(d) - set(allowed)
    if extra:
        raise ConfigError(f"{where}: unknown key(s) {sorted(extra)}")


@dataclass(frozen=True)
class ScenarioConfig:
    name: str
    state: InitialStateSpec
    hamiltonian: HamiltonianSpec
    noise: NoiseSpec | None
    horizon: float
    samples: int
    seed: int
    classifier: dict
    raw: dict

    @property
    def times(self) -> np.ndarray:
        return np.linspace(0.0, self.horizon, self.samples)

    def initial_state(self) -> BlochVector:
        return self.state.build()


def parse_state(d: dict) -> InitialStateSpec:
    if not isinstance(d, dict) or "kind" not in d:
        raise ConfigError("state: expected an object with a 'kind'")
    kind = str(d["kind"]).lower()
    if kind not in _STATE_KEYS:
        raise ConfigError(f"state.kind: unknown kind {d['kind']!r}")
    _only(d, _STATE_KEYS[kind] | {"kind"}, "state")
    missing = _STATE_KEYS[kind] - set(d)
    if missing:
        raise ConfigError(f"state: missing {sorted(missing)}")
    if kind == "werner":
        params = (_num(d["alpha"], "state.alpha"),)
    elif kind == "bell_diagonal":
        params = tuple(_num(d[k], f"state.{k}") for k in ("N11", "N22", "N33"))
    elif kind == "bell_beta":
        params = (_num(d["beta"], "state.beta"),)
    elif kind == "raw":
        comps = d["components"]
        if not isinstance(comps, list) or len(comps) != 15:
            raise ConfigError("state.components: expected 15 numbers")
        params = tuple(_num(c, "state.components") for c in comps)
    else:
        params = ()
    spec = InitialStateSpec(kind, params)
    try:
        require_physical(spec.build())
    except ValueError as exc:
        raise ConfigError(f"state: {exc}") from None
    return spec


def parse_hamiltonian(d: dict) -> HamiltonianSpec:
    _only(d, _H_KEYS, "hamiltonian")
    try:
        kind = Model(str(d.get("kind", "")).lower())
    except ValueError:
        raise ConfigError(f"hamiltonian.kind: unknown model {d.get('kind')!r}") from None
    vals = {k: _num(d[k], f"hamiltonian.{k}") for k in ("J", "J_xy", "J_yx", "B_z") if k in d}
    if kind is Model.XYAntisym and "J_xy" not in vals:
        vals["J_xy"] = -vals.get("J_yx", 0.0)
    try:
        return HamiltonianSpec(kind, **vals)
    except ValueError as exc:
        raise ConfigError(f"hamiltonian: {exc}") from None


def parse_noise(d) -> NoiseSpec | None:
    if d is None:
        return None
    _only(d, _NOISE_KEYS, "noise")
    try:
        return NoiseSpec(
            g_z=_num(d.get("g_z", 0.0), "noise.g_z"),
            gamma=_num(d.get("gamma", 0.0), "noise.gamma"),
            xi=_num(d.get("xi", 1.0), "noise.xi"),
            mode=NoiseMode(d.get("mode", "single")),
        )
    except ValueError as exc:
        raise ConfigError(f"noise: {exc}") from None


def parse_config(d: dict, horizon: float | None = None, samples: int | None = None,
                 seed: int | None = None) -> ScenarioConfig:
    """Validate a decoded JSON object; command-line overrides win."""
    _only(d, _TOP_KEYS, "config")
    if d.get("schema") != SCHEMA_VERSION:
        raise ConfigError(f"config.schema: expected {SCHEMA_VERSION}, got {d.get('schema')!r}")
    for req in ("state", "hamiltonian"):
        if req not in d:
            raise ConfigError(f"config: missing '{req}'")
    t = d.get("time", {})
    _only(t, _TIME_KEYS, "time")
    T = horizon if horizon is not None else _num(t.get("horizon", 10.0), "time.horizon")
    n = samples if samples is not None else t.get("samples", 1025)
    if isinstance(n, bool) or not isinstance(n, int) or n < 2:
        raise ConfigError("time.samples: expected an integer >= 2")
    if not T > 0:
        raise ConfigError("time.horizon: must be positive")
    s = seed if seed is not None else d.get("seed", 0)
    if isinstance(s, bool) or not isinstance(s, int) or s < 0:
        raise ConfigError("seed: expected a non-negative integer")
    cl = d.get("classifier", {})
    _only(cl, _CLASSIFIER_KEYS, "classifier")
    return ScenarioConfig(
        name=str(d.get("name", "scenario")),
        state=parse_state(d["state"]),
        hamiltonian=parse_hamiltonian(d["hamiltonian"]),
        noise=parse_noise(d.get("noise")),
        horizon=float(T),
        samples=int(n),
        seed=int(s),
        classifier={k: _num(v, f"classifier.{k}") for k, v in cl.items()},
        raw=d,
    )


def load_json(path) -> dict:
    try:
        with open(Path(path), encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON in {path}: {exc}") from None


def sweep_points(d: dict):
    """Yield ``(index, assignments, config_dict)`` for each sweep grid point."""
    grid = d.get("sweep")
    if not grid:
        raise ConfigError("config: a 'sweep' block is required for sweeps")
    if not isinstance(grid, dict):
        raise ConfigError("sweep: expected an object of path -> list")
    keys = list(grid)
    for k in keys:
        if not isinstance(grid[k], list) or not grid[k]:
            raise ConfigError(f"sweep.{k}: expected a non-empty list")
    base = {k: v for k, v in d.items() if k != "sweep"}
    for idx, combo in enumerate(itertools.product(*(grid[k] for k in keys))):
        cfg = copy.deepcopy(base)
        for path, val in zip(keys, combo):
            parts = path.split(".")
            node = cfg
            for p in parts[:-1]:
                if not isinstance(node.get(p), dict):
                    raise ConfigError(f"sweep: path {path!r} does not exist")
                node = node[p]
            node[parts[-1]] = val
        yield idx, dict(zip(keys, combo)), cfg


def run_trajectory(cfg: ScenarioConfig) -> np.ndarray:
    """Flat Bloch vectors on the configured time grid."""
    N0 = cfg.initial_state()
    if cfg.noise is None:
        return unitary_trajectory(cfg.hamiltonian, N0, cfg.times)
    Hq = build_quasi_hamiltonian(cfg.hamiltonian, cfg.noise)
    return rtn_trajectory(Hq, N0, cfg.times)
