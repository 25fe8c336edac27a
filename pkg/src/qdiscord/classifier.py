"""Zero sets of correlation time series and evolution categories.

A trajectory's zero set for a measure is the set of times where the
measure vanishes.  Its topology gives the category:

* ``E`` (entering): the zero set contains a terminal interval ``[t_c, T]``;
* ``O`` (oscillating): a union of finite intervals;
* ``B`` (bouncing): isolated points;
* ``A`` (approaching): empty, with the series decaying towards zero.

Two further labels cover degenerate series: ``AlwaysZero`` and
``NeverZero``.  Series that dip repeatedly and deeply towards zero without
reaching it are reported as ``B`` with the flagged sub-label
``"B-like (asymptotic)"``.

Everything here works on finite samples, so verdicts depend on the horizon
and resolution; :class:`SeriesVerdict` records the margins used.
"""
from __future__ import annotations

import enum
import json
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .measures import geometric_discord_batch, quantum_discord_left
from .state import BlochVector, concurrence

__all__ = [
    "Category",
    "JointCategory",
    "InvalidCombination",
    "ZeroFeature",
    "SeriesVerdict",
    "FrozenInterval",
    "Trajectory",
    "zero_set",
    "analyze_series",
    "joint_from_categories",
    "classify_single",
    "classify_joint",
    "detect_frozen",
    "verdict_record",
    "TABLE_II",
]

MIN_SAMPLES = 16
B_LIKE = "B-like (asymptotic)"


class Category(enum.Enum):
    A = "A"
    B = "B"
    E = "E"
    O = "O"
    NeverZero = "NeverZero"
    AlwaysZero = "AlwaysZero"


class JointCategory(enum.Enum):
    """Entanglement category first, discord second.

    The first five are the routes of simultaneous disappearance.  The
    ``Zero*`` members are the degenerate cases with no entanglement at any
    time, and ``Persistent`` is used when either measure never vanishes.
    """

    AA = "AA"
    EA = "EA"
    EB = "EB"
    BB = "BB"
    OB = "OB"
    ZeroA = "0A"
    ZeroB = "0B"
    ZeroZero = "00"
    Persistent = "persistent"

    @property
    def degenerate(self) -> bool:
        return self not in TABLE_II


TABLE_II = frozenset({JointCategory.AA, JointCategory.EA, JointCategory.EB,
                      JointCategory.BB, JointCategory.OB})


class InvalidCombination(ValueError):
    """Joint verdict outside the allowed routes (e.g. discord of type E or O)."""

    def __init__(self, category_C, category_D, reason):
        super().__init__(f"({category_C.value}, {category_D.value}): {reason}")
        self.category_C = category_C
        self.category_D = category_D
        self.reason = reason


@dataclass(frozen=True)
class ZeroFeature:
    """A zero interval ``[t0, t1]`` or an isolated zero ``t0 == t1``."""

    kind: str  # "interval" | "point"
    t0: float
    t1: float


@dataclass
class SeriesVerdict:
    category: Category
    zeros: list
    sub_label: str | None = None
    flagged: bool = False
    margins: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "category": self.category.value,
            "sub_label": self.sub_label,
            "flagged": self.flagged,
            "zeros": [asdict(z) for z in self.zeros],
            "margins": self.margins,
        }


@dataclass(frozen=True)
class FrozenInterval:
    t0: float
    t1: float
    level: float
    flatness: float


def _check(series, t_grid):
    x = np.asarray(series, dtype=float)
    t = np.asarray(t_grid, dtype=float)
    if x.ndim != 1 or x.shape != t.shape:
        raise ValueError("series and time grid must be 1-D arrays of equal length")
    if len(x) < MIN_SAMPLES:
        raise ValueError(f"need at least {MIN_SAMPLES} samples, got {len(x)}")
    if np.any(np.diff(t) <= 0):
        raise ValueError("time grid must be strictly increasing")
    return x, t


def _local_scale(x: np.ndarray, half_width: int) -> np.ndarray:
    """Running maximum of ``|x|`` over ``[i - w, i + w]``."""
    from scipy.ndimage import maximum_filter1d

    return maximum_filter1d(np.abs(x), size=2 * half_width + 1, mode="nearest")


def _below(x, rel_tol, abs_tol, window):
    n = len(x)
    w = max(1, int(round(window * n)))
    thresh = np.maximum(rel_tol * _local_scale(x, w), abs_tol)
    return x <= thresh, thresh


def _runs(mask):
    d = np.diff(np.r_[0, mask.astype(np.int8), 0])
    return np.flatnonzero(d == 1), np.flatnonzero(d == -1)  # [start, end)


def _v_extrapolated_min(x, k):
    """Intersection height of the secants on either side of sample ``k``."""
    if k < 2 or k > len(x) - 3:
        return x[k]
    sl, sr = x[k - 1] - x[k - 2], x[k + 2] - x[k + 1]
    if sl >= 0 or sr <= 0:
        return x[k]
    # lines through (k-1, x[k-1]) slope sl and (k+1, x[k+1]) slope sr
    s = (x[k + 1] - x[k - 1] - 2 * sr) / (sl - sr) if sl != sr else 0.0
    s = min(max(s, 0.0), 2.0)  # intersection abscissa relative to k - 1
    return min(x[k], x[k - 1] + sl * s)


def zero_set(series, t_grid, zero_tol: float | None = None, dwell_min: int = 3,
             rel_tol: float = 1e-4, window: float = 0.125, abs_tol: float = 1e-14,
             flat_frac: float = 0.01):
    """Zero intervals and isolated zeros of a sampled non-negative series.

    Parameters
    ----------
    zero_tol : float, optional
        Absolute threshold.  When omitted the threshold is ``rel_tol`` times
        the running maximum over a window of ``+- window * len(series)``
        samples, so that zeros of a decaying oscillation are judged against
        the local amplitude rather than the initial one.
    dwell_min : int
        Runs of at least this many samples below threshold are intervals.

    Notes
    -----
    A run only counts as an interval if the series is flat at zero there:
    the middle half of the run must stay below ``flat_frac`` times the
    threshold.  Otherwise a smooth touch of zero, whose sub-threshold run
    widens as ``sqrt(tol)``, would be mistaken for an interval.  Shorter or
    non-flat runs, and local minima whose V-shaped secant extrapolation
    reaches the threshold, are isolated points.
    """
    x, t = _check(series, t_grid)
    if zero_tol is None:
        mask, thresh = _below(x, rel_tol, abs_tol, window)
    else:
        thresh = np.full_like(x, zero_tol)
        mask = x <= thresh
    feats = []
    starts, ends = _runs(mask)
    for s, e in zip(starts, ends):
        q = (e - s) // 4
        core = x[s + q:e - q]
        if e - s >= dwell_min and np.all(core <= flat_frac * thresh[s + q:e - q]):
            feats.append(ZeroFeature("interval", float(t[s]), float(t[e - 1])))
        else:
            k = s + int(np.argmin(x[s:e]))
            feats.append(ZeroFeature("point", float(t[k]), float(t[k])))
    # V-shaped zero crossings that fall between samples
    interior = np.flatnonzero((x[1:-1] < x[:-2]) & (x[1:-1] <= x[2:])) + 1
    for k in interior:
        if mask[k]:
            continue
        if _v_extrapolated_min(x, k) <= thresh[k]:
            feats.append(ZeroFeature("point", float(t[k]), float(t[k])))
    feats.sort(key=lambda f: f.t0)
    return feats


def _deep_dips(x, dip_ratio):
    """Local minima lying below ``dip_ratio`` times both neighbouring maxima."""
    mins = np.flatnonzero((x[1:-1] < x[:-2]) & (x[1:-1] <= x[2:])) + 1
    maxs = np.flatnonzero((x[1:-1] > x[:-2]) & (x[1:-1] >= x[2:])) + 1
    ratios = []
    for k in mins:
        left, right = maxs[maxs < k], maxs[maxs > k]
        if not len(left) or not len(right):
            continue
        ref = min(x[left[-1]], x[right[0]])
        if ref > 0:
            ratios.append(x[k] / ref)
    ratios = np.asarray(ratios)
    return ratios[ratios < dip_ratio]


def analyze_series(series, t_grid, zero_tol: float | None = None, dwell_min: int = 3,
                   asymptote_tol: float = 0.1, dip_ratio: float = 0.25,
                   min_dips: int = 2, zero_floor: float = 1e-10, **zero_kw) -> SeriesVerdict:
    """Category of one measure along a trajectory, with diagnostics.

    A series whose largest magnitude is below ``zero_floor`` is identically
    zero up to rounding, whatever the relative thresholds say.
    """
    x, t = _check(series, t_grid)
    peak = float(np.max(np.abs(x)))
    margins = {"max": peak, "terminal": float(x[-1])}
    if peak <= zero_floor:
        whole = [ZeroFeature("interval", float(t[0]), float(t[-1]))]
        return SeriesVerdict(Category.AlwaysZero, whole, margins=margins)
    zeros = zero_set(x, t, zero_tol=zero_tol, dwell_min=dwell_min, **zero_kw)
    intervals = [z for z in zeros if z.kind == "interval"]
    points = [z for z in zeros if z.kind == "point"]

    if intervals and intervals[0].t0 == t[0] and intervals[0].t1 == t[-1]:
        return SeriesVerdict(Category.AlwaysZero, zeros, margins=margins)
    if intervals and intervals[-1].t1 == t[-1]:
        # a terminal interval is sudden death only if it clearly outlasts the
        # recurrent structure before it; otherwise the horizon merely cut an
        # oscillation short
        last = intervals[-1]
        prior = [z.t1 - z.t0 for z in intervals[:-1]]
        prior += [b.t0 - a.t1 for a, b in zip(zeros[:-1], zeros[1:])]
        scale = max(prior, default=0.0)
        margins["terminal_interval"] = last.t1 - last.t0
        if last.t1 - last.t0 > 2 * scale:
            return SeriesVerdict(Category.E, zeros, margins=margins)
        if len(intervals) == 1:
            return SeriesVerdict(Category.E, zeros, flagged=True, margins=margins)
    if intervals:
        return SeriesVerdict(Category.O, zeros, flagged=len(intervals) < 2, margins=margins)
    if points:
        return SeriesVerdict(Category.B, zeros, margins=margins)

    dips = _deep_dips(x, dip_ratio)
    margins["deep_dips"] = int(len(dips))
    if len(dips) >= min_dips:
        margins["deepest_dip_ratio"] = float(dips.min())
        return SeriesVerdict(Category.B, zeros, sub_label=B_LIKE, flagged=True,
                             margins=margins)

    # empty zero set: decaying towards zero (A) or not (NeverZero)
    tail = x[-max(len(x) // 4, 4):]
    terminal_ratio = float(x[-1] / peak) if peak > 0 else 0.0
    slope = float(np.polyfit(t[-len(tail):], np.log(np.maximum(tail, 1e-300)), 1)[0])
    margins.update(terminal_ratio=terminal_ratio, log_slope=slope)
    if terminal_ratio < asymptote_tol and slope < 0:
        return SeriesVerdict(Category.A, zeros, margins=margins)
    return SeriesVerdict(Category.NeverZero, zeros, margins=margins)


def classify_single(series, t_grid, **kw) -> Category:
    return analyze_series(series, t_grid, **kw).category


_JOINT = {
    (Category.A, Category.A): JointCategory.AA,
    (Category.E, Category.A): JointCategory.EA,
    (Category.E, Category.B): JointCategory.EB,
    (Category.B, Category.B): JointCategory.BB,
    (Category.O, Category.B): JointCategory.OB,
    (Category.AlwaysZero, Category.A): JointCategory.ZeroA,
    (Category.AlwaysZero, Category.B): JointCategory.ZeroB,
    (Category.AlwaysZero, Category.AlwaysZero): JointCategory.ZeroZero,
}


def joint_from_categories(cat_C: Category, cat_D: Category) -> JointCategory:
    if cat_D in (Category.E, Category.O):
        raise InvalidCombination(cat_C, cat_D,
                                 "E and O types of behaviour are not allowed for discord")
    if Category.NeverZero in (cat_C, cat_D):
        return JointCategory.Persistent
    try:
        return _JOINT[(cat_C, cat_D)]
    except KeyError:
        raise InvalidCombination(cat_C, cat_D, "not a route of joint disappearance") from None


@dataclass
class Trajectory:
    """Aligned samples of a trajectory and its correlation measures."""

    t: np.ndarray
    N: np.ndarray
    D: np.ndarray
    D_G: np.ndarray
    C: np.ndarray

    def __post_init__(self):
        self.t = np.asarray(self.t, dtype=float)
        self.N = np.asarray(self.N, dtype=float)
        self.D, self.D_G, self.C = (np.asarray(a, dtype=float) for a in (self.D, self.D_G, self.C))
        n = len(self.t)
        if n < MIN_SAMPLES:
            raise ValueError(f"need at least {MIN_SAMPLES} samples, got {n}")
        if self.N.shape != (n, 15) or any(len(a) != n for a in (self.D, self.D_G, self.C)):
            raise ValueError("trajectory series are not aligned")

    @classmethod
    def from_states(cls, t, flat_states, **opt) -> "Trajectory":
        """Evaluate ``D``, ``D_G`` and ``C`` on each sampled state."""
        flat = np.asarray(flat_states, dtype=float)
        D = np.array([quantum_discord_left(BlochVector.from_flat(v), **opt)[0] for v in flat])
        C = np.array([concurrence(BlochVector.from_flat(v)) for v in flat])
        return cls(t, flat, D, geometric_discord_batch(flat), C)


@dataclass
class JointVerdict:
    C: SeriesVerdict
    D: SeriesVerdict
    joint: JointCategory | None
    error: str | None = None

    @property
    def flagged(self) -> bool:
        return self.C.flagged or self.D.flagged or self.joint is None or self.joint.degenerate


def classify_joint(traj: Trajectory, strict: bool = True, **kw) -> JointVerdict:
    """Pair the entanglement (concurrence) and discord categories.

    With ``strict`` an :class:`InvalidCombination` is raised for pairs
    outside the allowed routes; otherwise it is recorded in the verdict.
    """
    vC = analyze_series(traj.C, traj.t, **kw)
    vD = analyze_series(traj.D, traj.t, **kw)
    try:
        joint = joint_from_categories(vC.category, vD.category)
    except InvalidCombination as exc:
        if strict:
            raise
        return JointVerdict(vC, vD, None, str(exc))
    return JointVerdict(vC, vD, joint)


def detect_frozen(series, t_grid, window: float, flat_tol: float = 1e-6,
                  zero_tol: float | None = None) -> list[FrozenInterval]:
    """Maximal intervals of length >= ``window`` on which the series is constant.

    Constant means every sample lies within ``flat_tol`` of the interval
    mean; the level must also exceed ``zero_tol`` (default ``1e-4`` times
    the series maximum, and at least ``1e-10``), since a vanishing series
    is not frozen discord.
    """
    x, t = _check(series, t_grid)
    if zero_tol is None:
        zero_tol = max(1e-4 * float(np.max(np.abs(x))), 1e-10)
    out = []
    i, n = 0, len(x)
    while i < n:
        if x[i] <= zero_tol:
            i += 1
            continue
        lo = hi = x[i]
        j = i + 1
        while j < n and x[j] > zero_tol:
            lo2, hi2 = min(lo, x[j]), max(hi, x[j])
            if hi2 - lo2 > flat_tol:
                break
            lo, hi = lo2, hi2
            j += 1
        seg = x[i:j]
        mean = float(seg.mean())
        dev = float(np.max(np.abs(seg - mean)))
        if t[j - 1] - t[i] >= window and dev <= flat_tol:
            out.append(FrozenInterval(float(t[i]), float(t[j - 1]), mean, dev))
            i = j
        else:
            i += 1
    return out


def verdict_record(scenario: str, params: dict, verdict: JointVerdict,
                   frozen: list[FrozenInterval] = ()) -> dict:
    """JSON-serializable verdict record."""
    return {
        "scenario": scenario,
        "params": params,
        "category_C": verdict.C.category.value,
        "category_D": verdict.D.category.value,
        "sub_label_C": verdict.C.sub_label,
        "sub_label_D": verdict.D.sub_label,
        "joint": verdict.joint.value if verdict.joint else None,
        "flagged": verdict.flagged,
        "error": verdict.error,
        "zero_sets": {"C": [asdict(z) for z in verdict.C.zeros],
                      "D": [asdict(z) for z in verdict.D.zeros]},
        "margins": {"C": verdict.C.margins, "D": verdict.D.margins},
        "frozen_intervals": [asdict(f) for f in frozen],
    }


def dumps_record(record: dict) -> str:
    return json.dumps(record, indent=2, sort_keys=True, default=_json_default)


def _json_default(o):
    if isinstance(o, (np.floating, np.integer)):
        return o.item()
    if isinstance(o, float) and math.isnan(o):
        return None
    raise TypeError(f"not JSON serializable: {type(o).__name__}")
