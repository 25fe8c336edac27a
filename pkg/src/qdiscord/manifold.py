"""Coordinate chart on the zero-discord (concordant) states.

A concordant state ``p P0 (x) rho0 + (1-p) P1 (x) rho1`` with projectors
``P0,1 = (1 +- m.sigma)/2`` is labelled by ``(p, m, n0, n1)`` where
``n0, n1`` are the Bloch vectors of ``rho0, rho1``.  The chart maps the
open domain ``(0, 1/2) x S2 x B3 x B3`` onto a 9-dimensional smooth piece
of the concordant set inside the 15-dimensional Bloch space.
"""
from __future__ import annotations

import enum
import functools
import math
from dataclasses import dataclass

import numpy as np

from .measures import geometric_discord_batch
from .state import AXIS_LABELS, BlochVector, axis_index, bloch_matrix_to_density

__all__ = [
    "ChartPoint",
    "ChartGeometry",
    "NotInvertible",
    "NotOnManifold",
    "SectionGeometry",
    "Singularity",
    "chart_forward",
    "chart_forward_batch",
    "chart_inverse",
    "concordant_eigenvalues",
    "product_form_eigenvalues",
    "tangent_frame",
    "tangent_frame_fd",
    "sqrt_det_g",
    "integrate",
    "IntegrationResult",
    "singularity_kind",
    "section2_classify",
    "section2_table",
    "format_section_table",
    "section3_classify",
    "sample_chart_points",
    "sample_concordant",
    "brute_force_geometric_discord",
    "TABLE_I",
]


class NotInvertible(ValueError):
    """Bloch vector lies on the p = 1/2 fiber, where the chart is not injective."""


class NotOnManifold(ValueError):
    """Bloch vector is not in the image of the chart."""


@dataclass(frozen=True)
class ChartPoint:
    """Chart coordinates ``(p, m, n0, n1)``; ``m`` is a unit 3-vector.

    ``strict=False`` admits closure points (``p`` in ``[0, 1/2]``, closed balls),
    which the chart extends to continuously.
    """

    p: float
    m: np.ndarray
    n0: np.ndarray
    n1: np.ndarray
    strict: bool = True

    def __post_init__(self):
        m = np.asarray(self.m, dtype=float).reshape(3)
        n0 = np.asarray(self.n0, dtype=float).reshape(3)
        n1 = np.asarray(self.n1, dtype=float).reshape(3)
        if abs(np.linalg.norm(m) - 1.0) > 1e-12:
            raise ValueError("m must be a unit vector")
        if self.strict:
            if not 0.0 < self.p < 0.5:
                raise ValueError("p must lie in the open interval (0, 1/2)")
            if np.linalg.norm(n0) >= 1.0 or np.linalg.norm(n1) >= 1.0:
                raise ValueError("n0 and n1 must lie in the open unit ball")
        else:
            if not 0.0 <= self.p <= 0.5:
                raise ValueError("p must lie in [0, 1/2]")
            if np.linalg.norm(n0) > 1.0 + 1e-12 or np.linalg.norm(n1) > 1.0 + 1e-12:
                raise ValueError("n0 and n1 must lie in the closed unit ball")
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "n0", n0)
        object.__setattr__(self, "n1", n1)

    @classmethod
    def from_angles(cls, p, theta, phi, n0, n1, strict=True) -> "ChartPoint":
        m = np.array([math.sin(theta) * math.cos(phi),
                      math.sin(theta) * math.sin(phi),
                      math.cos(theta)])
        return cls(p, m, n0, n1, strict=strict)

    @property
    def theta(self) -> float:
        return math.acos(max(-1.0, min(1.0, self.m[2])))

    @property
    def phi(self) -> float:
        return math.atan2(self.m[1], self.m[0])

    def coords(self) -> np.ndarray:
        """The 9 chart coordinates ``(theta, phi, p, n01..n03, n11..n13)``."""
        return np.concatenate([[self.theta, self.phi, self.p], self.n0, self.n1])


# ------------------------------------------------------------------ chart map


def _forward_flat(p, m, n0, n1):
    """Vectorized chart map; arrays broadcast over leading axes."""
    p = np.asarray(p, dtype=float)[..., None]
    w = p * n0 - (1 - p) * n1
    out = np.empty(np.broadcast_shapes(m.shape, n0.shape)[:-1] + (15,))
    out[..., 0:3] = p * n0 + (1 - p) * n1
    out[..., 3:6] = (2 * p - 1) * m
    out[..., 6:15] = (m[..., :, None] * w[..., None, :]).reshape(out.shape[:-1] + (9,))
    return out


def chart_forward(x: ChartPoint) -> BlochVector:
    return BlochVector.from_flat(_forward_flat(x.p, x.m, x.n0, x.n1))


def chart_forward_batch(p, m, n0, n1) -> np.ndarray:
    """Flat ``(n, 15)`` Bloch vectors for stacked chart coordinates."""
    return _forward_flat(np.asarray(p), np.asarray(m), np.asarray(n0), np.asarray(n1))


def chart_inverse(N, tol: float = 1e-9) -> ChartPoint:
    """Recover ``(p, m, n0, n1)`` from a concordant Bloch vector."""
    if not isinstance(N, BlochVector):
        N = BlochVector.from_flat(N)
    a = N.nA
    r = float(np.linalg.norm(a))
    if r <= tol:
        raise NotInvertible("local Bloch vector of A vanishes (p = 1/2 fiber)")
    if r >= 1.0:
        raise NotOnManifold("|N_A| >= 1 is outside the image of the chart")
    # N_A = (2p - 1) m with p < 1/2 points against m
    m = -a / r
    p = 0.5 - r / 2
    w = _row(N, m)
    # N0 = p n0 + (1-p) n1 and w = p n0 - (1-p) n1
    n0 = (N.n0 + w) / (2 * p)
    n1 = (N.n0 - w) / (2 * (1 - p))
    for n in (n0, n1):
        # division by small p amplifies roundoff just past the unit sphere
        r_n = np.linalg.norm(n)
        if 1.0 < r_n <= 1.0 + 1e-6:
            n /= r_n
    x = ChartPoint(p, m, n0, n1, strict=False)
    back = _forward_flat(x.p, x.m, x.n0, x.n1)
    if np.max(np.abs(back - N.flat())) > max(tol, 1e-8) * 10:
        raise NotOnManifold("correlation tensor is not of the form m (x) w")
    if not (np.linalg.norm(n0) < 1 + 1e-12 and np.linalg.norm(n1) < 1 + 1e-12):
        raise NotOnManifold("reconstructed n0/n1 leave the unit ball")
    return x


def _row(N: BlochVector, m: np.ndarray) -> np.ndarray:
    """``w = T[j, :] / m_j`` for the best-conditioned row ``j``."""
    j = int(np.argmax(np.abs(m)))
    return N.corr[j, :] / m[j]


# ----------------------------------------------------------------- spectrum


def concordant_eigenvalues(x: ChartPoint) -> np.ndarray:
    """Density-matrix eigenvalues of the chart image (numeric, descending)."""
    M = np.empty((4, 4))
    flat = _forward_flat(x.p, x.m, x.n0, x.n1)
    M[0, 0] = 1.0
    M[0, 1:] = flat[0:3]
    M[1:, 0] = flat[3:6]
    M[1:, 1:] = flat[6:15].reshape(3, 3)
    return np.linalg.eigvalsh(bloch_matrix_to_density(M))[::-1]


def product_form_eigenvalues(x: ChartPoint) -> np.ndarray:
    """``p(1 +- |n0|)/2`` and ``(1-p)(1 +- |n1|)/2``, descending.

    These follow from the block form of the state (each ``rho_k`` is a qubit
    state with Bloch radius ``|n_k|``); the numeric eigensolver is the
    reference and agrees with this to roundoff.
    """
    r0, r1 = np.linalg.norm(x.n0), np.linalg.norm(x.n1)
    lam = [x.p * (1 + r0) / 2, x.p * (1 - r0) / 2,
           (1 - x.p) * (1 + r1) / 2, (1 - x.p) * (1 - r1) / 2]
    return np.sort(lam)[::-1]


# ---------------------------------------------------------------- geometry


@dataclass(frozen=True)
class ChartGeometry:
    tangents: np.ndarray  # (9, 15), rows are d N / d x_k
    g: np.ndarray  # (9, 9)
    sqrt_det_g: float
    rank: int

    @property
    def degenerate(self) -> bool:
        return self.rank < 9


def _tangents(theta, phi, p, n0, n1):
    """Analytic tangent vectors in chart order (theta, phi, p, n0, n1)."""
    st, ct, sp, cp = math.sin(theta), math.cos(theta), math.sin(phi), math.cos(phi)
    m = np.array([st * cp, st * sp, ct])
    dm_dth = np.array([ct * cp, ct * sp, -st])
    dm_dph = np.array([-st * sp, st * cp, 0.0])
    w = p * n0 - (1 - p) * n1
    t = np.zeros((9, 15))

    def put(k, local0, localA, corr):
        t[k, 0:3] = local0
        t[k, 3:6] = localA
        t[k, 6:15] = corr.ravel()

    put(0, 0.0, (2 * p - 1) * dm_dth, np.outer(dm_dth, w))
    put(1, 0.0, (2 * p - 1) * dm_dph, np.outer(dm_dph, w))
    put(2, n0 - n1, 2 * m, np.outer(m, n0 + n1))
    for k in range(3):
        e = np.zeros(3)
        e[k] = 1.0
        put(3 + k, p * e, 0.0, p * np.outer(m, e))
        put(6 + k, (1 - p) * e, 0.0, -(1 - p) * np.outer(m, e))
    return t


def tangent_frame(x: ChartPoint, rank_tol: float = 1e-10) -> ChartGeometry:
    """Tangent vectors, induced metric ``g_ij = t_i . t_j`` and ``sqrt|g|``.

    Degenerate points (coordinate poles, the ``p = 1/2`` fiber with
    ``n0 = n1``, ``p = 0``) return a rank-deficient frame instead of raising.
    """
    t = _tangents(x.theta, x.phi, x.p, x.n0, x.n1)
    g = t @ t.T
    sv = np.linalg.svd(t, compute_uv=False)
    rank = int(np.sum(sv > rank_tol * max(1.0, sv[0])))
    return ChartGeometry(t, g, sqrt_det_g(x), rank)


def tangent_frame_fd(x: ChartPoint, h: float = 1e-6) -> np.ndarray:
    """Central finite differences of the chart map in chart coordinates."""
    c = x.coords()

    def f(cc):
        th, ph, p = cc[:3]
        m = np.array([math.sin(th) * math.cos(ph), math.sin(th) * math.sin(ph), math.cos(th)])
        return _forward_flat(p, m, cc[3:6], cc[6:9])

    out = np.empty((9, 15))
    for k in range(9):
        e = np.zeros(9)
        e[k] = h
        out[k] = (f(c + e) - f(c - e)) / (2 * h)
    return out


def sqrt_det_g(x: ChartPoint) -> float:
    """Closed-form volume density of the induced metric.

    ``16 p^3 (1-p)^3 sin(theta) (|p n0 - (1-p) n1|^2 + (1-2p)^2)``.
    """
    return _sqrt_det_g(x.p, math.sin(x.theta), x.n0, x.n1)


def _sqrt_det_g(p, sin_theta, n0, n1):
    p = np.asarray(p, dtype=float)
    pe = p[..., None]
    w = pe * np.asarray(n0) - (1 - pe) * np.asarray(n1)
    return 16 * p**3 * (1 - p) ** 3 * np.abs(sin_theta) * (
        np.sum(w**2, axis=-1) + (1 - 2 * p) ** 2)


# ------------------------------------------------------------- integration

_PARAM_VOLUME = math.pi * (2 * math.pi) * 0.5 * (4 * math.pi / 3) ** 2


def _uniform_ball(rng, n):
    d = rng.normal(size=(n, 3))
    d /= np.linalg.norm(d, axis=1, keepdims=True)
    return d * rng.uniform(size=(n, 1)) ** (1 / 3)


def sample_chart_points(n: int, rng: np.random.Generator):
    """Uniform samples of the parameter box: ``(theta, phi, p, n0, n1)`` arrays.

    Uniform in ``theta`` (not in ``cos theta``) because the integration weight
    ``sqrt|g|`` already carries the ``sin theta`` factor.
    """
    theta = rng.uniform(0, math.pi, n)
    phi = rng.uniform(0, 2 * math.pi, n)
    p = rng.uniform(0, 0.5, n)
    n0 = _uniform_ball(rng, n)
    n1 = _uniform_ball(rng, n)
    return theta, phi, p, n0, n1


def sample_concordant(seed, n: int | None = None):
    """Random concordant Bloch vector(s), uniform over the chart parameters.

    This is *not* uniform with respect to the induced surface measure; weight
    by ``sqrt_det_g`` for that.  Returns a ``BlochVector`` when ``n`` is None,
    else a flat ``(n, 15)`` array.
    """
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    k = 1 if n is None else n
    theta, phi, p, n0, n1 = sample_chart_points(k, rng)
    m = np.stack([np.sin(theta) * np.cos(phi), np.sin(theta) * np.sin(phi), np.cos(theta)], -1)
    flat = _forward_flat(p, m, n0, n1)
    return BlochVector.from_flat(flat[0]) if n is None else flat


def _to_ball(v):
    r = np.linalg.norm(v, axis=-1, keepdims=True)
    return np.where(r > 1.0, v / np.maximum(r, 1e-300), v)


def brute_force_geometric_discord(states, n_samples: int = 1_000_000, refine_rounds: int = 0,
                                  refine_samples: int = 300, starts: int = 6, seed: int = 0,
                                  chunk: int = 100_000) -> np.ndarray:
    """Sampled upper bound on the geometric discord of each state.

    ``n_samples`` chart-uniform concordant states are shared by all targets
    and the smallest ``|N - M|^2 / 4`` is kept.  With ``refine_rounds > 0``
    the ``starts`` best global samples of each target seed independent
    local searches: every round draws ``refine_samples`` chart points from a
    Gaussian neighbourhood of the current best parameters and shrinks the
    spread.  Only function values are used (no gradients), so this is an
    independent check of the closed form.
    """
    S = np.atleast_2d(np.asarray(states, dtype=float))
    k = len(S)
    rng = np.random.default_rng(seed)
    s2 = np.sum(S * S, axis=1)
    K = max(1, starts)
    top_d = np.full((k, K), np.inf)
    top_p = np.zeros((k, K))
    top_v = np.zeros((k, K, 9))  # m, n0, n1
    done = 0
    while done < n_samples:
        c = min(chunk, n_samples - done)
        theta, phi, p, n0, n1 = sample_chart_points(c, rng)
        m = np.stack([np.sin(theta) * np.cos(phi), np.sin(theta) * np.sin(phi),
                      np.cos(theta)], -1)
        M = _forward_flat(p, m, n0, n1)
        d = 0.25 * (s2[:, None] + np.sum(M * M, axis=1)[None, :] - 2.0 * S @ M.T)
        kk = min(K, c)
        j = np.argpartition(d, kk - 1, axis=1)[:, :kk]
        cand_d = np.concatenate([top_d, np.take_along_axis(d, j, 1)], axis=1)
        cand_p = np.concatenate([top_p, p[j]], axis=1)
        cand_v = np.concatenate([top_v, np.concatenate([m[j], n0[j], n1[j]], -1)], axis=1)
        order = np.argsort(cand_d, axis=1)[:, :K]
        top_d = np.take_along_axis(cand_d, order, 1)
        top_p = np.take_along_axis(cand_p, order, 1)
        top_v = np.take_along_axis(cand_v, order[..., None], 1)
        done += c
    best = top_d.reshape(k * K)
    bp = top_p.reshape(k * K)
    bm, b0, b1 = (top_v.reshape(k * K, 9)[:, 3 * i:3 * i + 3].copy() for i in range(3))
    target = np.repeat(S, K, axis=0)
    live = np.isfinite(best)
    for lo in range(0, k * K, 512):
        sl = slice(lo, min(lo + 512, k * K))
        sigma = 0.25
        for _ in range(refine_rounds):
            shape = (sl.stop - sl.start, refine_samples)
            p = np.clip(bp[sl, None] + 0.5 * sigma * rng.normal(size=shape), 1e-12, 0.5)
            m = bm[sl, None, :] + sigma * rng.normal(size=shape + (3,))
            m /= np.linalg.norm(m, axis=-1, keepdims=True)
            n0 = _to_ball(b0[sl, None, :] + sigma * rng.normal(size=shape + (3,)))
            n1 = _to_ball(b1[sl, None, :] + sigma * rng.normal(size=shape + (3,)))
            d = 0.25 * np.sum((_forward_flat(p, m, n0, n1) - target[sl, None, :]) ** 2, axis=-1)
            j = np.argmin(d, axis=1)
            r = np.arange(shape[0])
            dj = d[r, j]
            better = (dj < best[sl]) & live[sl]
            idx = np.flatnonzero(better) + lo
            best[idx] = dj[better]
            bp[idx] = p[r, j][better]
            bm[idx], b0[idx], b1[idx] = m[r, j][better], n0[r, j][better], n1[r, j][better]
            sigma *= 0.75
    return np.maximum(best.reshape(k, K).min(axis=1), 0.0)


@dataclass(frozen=True)
class IntegrationResult:
    estimate: float
    stderr: float
    n: int
    seed: int

    def to_dict(self) -> dict:
        return {"estimate": self.estimate, "stderr": self.stderr, "n": self.n, "seed": self.seed}


def integrate(fn=None, n_samples: int = 100_000, seed: int = 0, chunk: int = 50_000,
              vectorized: bool = False) -> IntegrationResult:
    """Monte Carlo integral of ``fn`` over the concordant 9-manifold.

    The surface element is ``sqrt|g| dtheta dphi dp d^3n0 d^3n1``.  ``fn``
    takes a ``BlochVector`` (or, with ``vectorized=True``, a flat ``(k, 15)``
    array and returns ``(k,)`` values); ``None`` integrates 1, giving the
    9-volume.  Chunks draw from independent ``SeedSequence`` children, so the
    result depends only on ``(n_samples, seed, chunk)``.
    """
    children = np.random.SeedSequence(seed).spawn((n_samples + chunk - 1) // chunk)
    s1 = 0.0
    s2 = 0.0
    done = 0
    for child in children:
        k = min(chunk, n_samples - done)
        rng = np.random.default_rng(child)
        theta, phi, p, n0, n1 = sample_chart_points(k, rng)
        w = _sqrt_det_g(p, np.sin(theta), n0, n1)
        if fn is not None:
            m = np.stack([np.sin(theta) * np.cos(phi), np.sin(theta) * np.sin(phi),
                          np.cos(theta)], -1)
            flat = _forward_flat(p, m, n0, n1)
            if vectorized:
                vals = np.asarray(fn(flat), dtype=float)
            else:
                vals = np.array([fn(BlochVector.from_flat(v)) for v in flat], dtype=float)
            w = w * vals
        w = w * _PARAM_VOLUME
        s1 += float(np.sum(w))
        s2 += float(np.sum(w * w))
        done += k
    mean = s1 / n_samples
    var = max(s2 / n_samples - mean**2, 0.0)
    return IntegrationResult(mean, math.sqrt(var / n_samples), n_samples, seed)


# ------------------------------------------------------------ singularities


class Singularity(enum.Enum):
    Interior = "interior"
    PureBoundary = "pure-boundary"  # |n0| = 1 or |n1| = 1
    ProductBoundary = "product-boundary"  # p = 0
    MixedFiber = "mixed-fiber"  # p = 1/2
    CoordSingular = "coordinate-singular"  # theta in {0, pi}


def singularity_kind(x: ChartPoint, tol: float = 1e-12) -> Singularity:
    """Classify a point of the closed parameter domain.

    Genuine singular classes take precedence over the coordinate pole.
    """
    if x.p <= tol:
        return Singularity.ProductBoundary
    if x.p >= 0.5 - tol:
        return Singularity.MixedFiber
    if abs(np.linalg.norm(x.n0) - 1) <= tol or abs(np.linalg.norm(x.n1) - 1) <= tol:
        return Singularity.PureBoundary
    if abs(x.m[0]) <= tol and abs(x.m[1]) <= tol:
        return Singularity.CoordSingular
    return Singularity.Interior


# ----------------------------------------------------------------- sections


class SectionGeometry(enum.Enum):
    Square = "S"
    Disk = "D"
    Cross = "+"
    Tetrahedron = "tetrahedron"
    Ball = "ball"
    DoubleCone = "double-cone"
    MixedSolid = "mixed-solid"
    ZeroVolume = "zero-volume"


# Reference 2-section table (lower triangle, rows 2..15), axis order 0X..ZZ.
TABLE_I = [
    "D",
    "DD",
    "SSS",
    "SSSD",
    "SSSDD",
    "SDDS++",
    "DSDS++D",
    "DDSS++DD",
    "SDD+S+D++",
    "DSD+S++D+D",
    "DDS+S+++DDD",
    "SDD++SD++D++",
    "DSD++S+D++D+D",
    "DDS++S++D++DDD",
]


def _resolve_axis(axis) -> int:
    return axis_index(axis) if isinstance(axis, str) else int(axis)


def _section_masks(idx, grid_n, phys_tol=1e-10, dg_tol=1e-9):
    """Physical and concordant masks on a grid in the span of the given axes."""
    k = len(idx)
    u = np.linspace(-1.0, 1.0, grid_n)
    mesh = np.meshgrid(*([u] * k), indexing="ij")
    pts = np.stack([c.ravel() for c in mesh], axis=-1)
    flat = np.zeros((pts.shape[0], 15))
    flat[:, idx] = pts
    M = np.zeros((pts.shape[0], 4, 4))
    M[:, 0, 0] = 1.0
    M[:, 0, 1:] = flat[:, 0:3]
    M[:, 1:, 0] = flat[:, 3:6]
    M[:, 1:, 1:] = flat[:, 6:15].reshape(-1, 3, 3)
    lam_min = np.linalg.eigvalsh(bloch_matrix_to_density(M))[:, 0]
    phys = lam_min >= -phys_tol
    conc = phys & (geometric_discord_batch(flat) < dg_tol)
    shape = (grid_n,) * k
    return pts.reshape(shape + (k,)), phys.reshape(shape), conc.reshape(shape)


def section2_classify(axis1, axis2, grid_n: int = 201) -> SectionGeometry:
    """Shape of the concordant set in the plane of two coordinate axes.

    Cross when concordant points essentially only sit on the axes (off-axis
    fraction below ``2/grid_n``); otherwise the concordant region is compared
    with the diamond ``|x| + |y| <= 1`` and the unit disk, using the corner
    probe ``(0.7, 0.7)`` (inside the disk, outside the diamond) and the best
    area overlap.
    """
    i, j = _resolve_axis(axis1), _resolve_axis(axis2)
    if i == j:
        raise ValueError("section axes must be distinct")
    # the shape is symmetric under exchanging the two axes
    return _section2_cached(min(i, j), max(i, j), int(grid_n))


@functools.lru_cache(maxsize=512)
def _section2_cached(i: int, j: int, grid_n: int) -> SectionGeometry:
    pts, phys, conc = _section_masks([i, j], grid_n)
    x, y = pts[..., 0], pts[..., 1]
    off = (np.abs(x) > 1e-12) & (np.abs(y) > 1e-12)
    off_phys = np.count_nonzero(off & phys)
    frac = np.count_nonzero(off & conc) / max(off_phys, 1)
    if frac < 2.0 / grid_n:
        return SectionGeometry.Cross
    diamond = np.abs(x) + np.abs(y) <= 1.0 + 1e-12
    disk = x**2 + y**2 <= 1.0 + 1e-12

    def iou(a, b):
        return np.count_nonzero(a & b) / max(np.count_nonzero(a | b), 1)

    probe = _grid_lookup(conc, grid_n, (0.7, 0.7))
    if probe and iou(conc, disk) >= iou(conc, diamond):
        return SectionGeometry.Disk
    return SectionGeometry.Square


def _grid_lookup(mask, grid_n, point):
    step = 2.0 / (grid_n - 1)
    ix = tuple(int(round((c + 1.0) / step)) for c in point)
    return bool(mask[ix])


def section2_table(grid_n: int = 201) -> list[str]:
    """Lower-triangular table of 2-section symbols in ``TABLE_I`` layout."""
    rows = []
    for r in range(1, 15):
        rows.append("".join(section2_classify(r, c, grid_n).value for c in range(r)))
    return rows


def format_section_table(rows: list[str]) -> str:
    """Render a section table as text with axis labels on rows and columns."""
    lines = ["      " + " ".join(f"{lab:>2}" for lab in AXIS_LABELS)]
    lines.append(f"{AXIS_LABELS[0]:>2}  1 ")
    for r, row in enumerate(rows, start=1):
        cells = " ".join(f"{ch:>2}" for ch in row)
        lines.append(f"{AXIS_LABELS[r]:>2} {r + 1:>2}  {cells}")
    return "\n".join(lines)


@dataclass(frozen=True)
class Section3Result:
    geometry: SectionGeometry
    faces: tuple  # 2-section geometries of (a1,a2), (a1,a3), (a2,a3)
    volume: float  # grid-counted volume of the concordant region


def section3_classify(axis1, axis2, axis3, grid_n: int = 41) -> Section3Result:
    """Classify a 3-section from its three 2-sections; attach a grid volume."""
    idx = [_resolve_axis(a) for a in (axis1, axis2, axis3)]
    if len(set(idx)) != 3:
        raise ValueError("section axes must be distinct")
    n2 = max(grid_n, 101)
    faces = (section2_classify(idx[0], idx[1], n2),
             section2_classify(idx[0], idx[2], n2),
             section2_classify(idx[1], idx[2], n2))
    _, _, conc = _section_masks(idx, grid_n)
    cell = (2.0 / (grid_n - 1)) ** 3
    volume = float(np.count_nonzero(conc) * cell)
    kinds = [f.value for f in faces]
    if "+" in kinds:
        geom = SectionGeometry.ZeroVolume
    else:
        n_square = kinds.count("S")
        geom = {3: SectionGeometry.Tetrahedron, 0: SectionGeometry.Ball,
                1: SectionGeometry.DoubleCone, 2: SectionGeometry.MixedSolid}[n_square]
    return Section3Result(geom, faces, volume)
