"""Correlation measures: quantum discord, geometric discord, geometric entanglement.

Discord here is the "left" quantity D(B|A): qubit A (first tensor factor)
is measured with rank-one projectors.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np
from scipy.optimize import minimize

from .state import (
    BlochVector,
    _as_bloch,
    bloch_to_density,
    concurrence,
    entropy_from_eigs,
    require_physical,
)

__all__ = [
    "CorrelationReport",
    "Measurement",
    "geometric_discord_left",
    "geometric_discord_right",
    "geometric_discord_batch",
    "conditional_entropy",
    "quantum_discord_left",
    "mutual_information",
    "classical_correlation",
    "geometric_entanglement",
    "is_concordant",
    "correlation_report",
]


@dataclass(frozen=True)
class Measurement:
    """Projective measurement of qubit A along the unit axis ``axis``."""

    axis: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.axis, dtype=float).reshape(3)
        nrm = np.linalg.norm(v)
        if nrm == 0:
            raise ValueError("measurement axis must be nonzero")
        object.__setattr__(self, "axis", v / nrm)

    @classmethod
    def from_angles(cls, theta: float, phi: float) -> "Measurement":
        return cls(_sphere(theta, phi))

    @property
    def angles(self) -> tuple[float, float]:
        x, y, z = self.axis
        return math.acos(max(-1.0, min(1.0, z))), math.atan2(y, x)


@dataclass(frozen=True)
class CorrelationReport:
    D: float
    D_G: float
    D_G_right: float
    C: float
    I: float
    J_class: float
    k_max: float
    axis: tuple

    def to_dict(self) -> dict:
        return asdict(self)


def _sphere(theta, phi):
    st = np.sin(theta)
    return np.stack([st * np.cos(phi), st * np.sin(phi), np.cos(theta) + 0 * phi], axis=-1)


# ---------------------------------------------------------------- geometric


def _k_max(N: BlochVector) -> float:
    a = N.nA
    L = np.outer(a, a) + N.corr @ N.corr.T
    return float(np.linalg.eigvalsh(L)[-1])


def geometric_discord_left(N, check: bool = True) -> float:
    """Closed-form Hilbert-Schmidt distance to the zero-discord set.

    ``D_G = (|N_A|^2 + |T|^2 - k_max) / 4`` with ``k_max`` the top eigenvalue
    of ``L = N_A N_A^T + T T^T``.
    """
    N = require_physical(N) if check else _as_bloch(N)
    total = float(N.nA @ N.nA + np.sum(N.corr**2))
    return max(0.0, 0.25 * (total - _k_max(N)))


def geometric_discord_right(N, check: bool = True) -> float:
    """Geometric discord with qubit B measured instead of A."""
    N = require_physical(N) if check else _as_bloch(N)
    return geometric_discord_left(N.swap(), check=False)


def geometric_discord_batch(flat: np.ndarray) -> np.ndarray:
    """Left geometric discord for a stack of flat ``(..., 15)`` vectors, unchecked."""
    flat = np.asarray(flat, dtype=float)
    a = flat[..., 3:6]
    T = flat[..., 6:15].reshape(flat.shape[:-1] + (3, 3))
    L = a[..., :, None] * a[..., None, :] + T @ np.swapaxes(T, -1, -2)
    kmax = np.linalg.eigvalsh(L)[..., -1]
    total = np.sum(a**2, axis=-1) + np.sum(T**2, axis=(-1, -2))
    return np.maximum(0.25 * (total - kmax), 0.0)


def is_concordant(N, tol: float = 1e-10) -> bool:
    return geometric_discord_left(N, check=False) <= tol


# ---------------------------------------------------------------- entropic


def _h(r):
    """Entropy (bits) of a qubit with Bloch radius ``r``; vectorized."""
    r = np.clip(np.abs(r), 0.0, 1.0)
    p = 0.5 * (1.0 + r)
    q = 0.5 * (1.0 - r)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = -(p * np.log2(p)) - np.where(q > 0, q * np.log2(np.where(q > 0, q, 1.0)), 0.0)
    return out


def _h_scalar(r: float) -> float:
    r = abs(r)
    if r >= 1.0:
        return 0.0
    p = 0.5 * (1.0 + r)
    q = 0.5 * (1.0 - r)
    return -(p * math.log2(p) + q * math.log2(q))


def _cond_entropy_vec(a, b, T, v):
    """Conditional entropy of B for measurement axes ``v`` of shape (..., 3)."""
    va = v @ a
    Tv = v @ T  # (T^T v)
    pp = 0.5 * (1.0 + va)
    pm = 0.5 * (1.0 - va)
    with np.errstate(divide="ignore", invalid="ignore"):
        rp = np.linalg.norm(b + Tv, axis=-1) / (1.0 + va)
        rm = np.linalg.norm(b - Tv, axis=-1) / (1.0 - va)
    sp = np.where(pp > 1e-300, pp * _h(np.nan_to_num(rp)), 0.0)
    sm = np.where(pm > 1e-300, pm * _h(np.nan_to_num(rm)), 0.0)
    return sp + sm


def _cond_entropy_scalar(a, b, T, theta, phi):
    st = math.sin(theta)
    v0, v1, v2 = st * math.cos(phi), st * math.sin(phi), math.cos(theta)
    va = v0 * a[0] + v1 * a[1] + v2 * a[2]
    s = 0.0
    for sign in (1.0, -1.0):
        p2 = 1.0 + sign * va
        if p2 <= 1e-300:
            continue
        x = b[0] + sign * (v0 * T[0][0] + v1 * T[1][0] + v2 * T[2][0])
        y = b[1] + sign * (v0 * T[0][1] + v1 * T[1][1] + v2 * T[2][1])
        z = b[2] + sign * (v0 * T[0][2] + v1 * T[1][2] + v2 * T[2][2])
        s += 0.5 * p2 * _h_scalar(math.sqrt(x * x + y * y + z * z) / p2)
    return s


def conditional_entropy(N, M: Measurement) -> float:
    """``sum_k p_k S(rho_B|k)`` after measuring qubit A along ``M.axis``."""
    N = _as_bloch(N)
    return float(_cond_entropy_vec(N.nA, N.n0, N.corr, M.axis))


_GRID_CACHE: dict = {}


def _grid(n_theta: int, n_phi: int):
    key = (n_theta, n_phi)
    if key not in _GRID_CACHE:
        th = (np.arange(n_theta) + 0.5) * np.pi / n_theta
        ph = np.arange(n_phi) * 2 * np.pi / n_phi
        TH, PH = np.meshgrid(th, ph, indexing="ij")
        _GRID_CACHE[key] = (TH.ravel(), PH.ravel(), _sphere(TH.ravel(), PH.ravel()))
    return _GRID_CACHE[key]


def min_conditional_entropy(N, grid=(32, 64), restarts: int = 3, tol: float = 1e-7,
                            seed: int = 0):
    """Minimize the conditional entropy over projective measurements of A.

    A ``32 x 64`` (theta, phi) grid seeds Nelder-Mead; ``restarts`` extra
    seeded random starts guard against degenerate minima.
    Returns ``(S_min, Measurement)``.
    """
    N = _as_bloch(N)
    a, b, T = N.nA, N.n0, N.corr
    TH, PH, V = _grid(*grid)
    vals = _cond_entropy_vec(a, b, T, V)
    i0 = int(np.argmin(vals))
    starts = [(TH[i0], PH[i0])]
    rng = np.random.default_rng(seed)
    for _ in range(restarts):
        starts.append((math.acos(rng.uniform(-1, 1)), rng.uniform(0, 2 * np.pi)))

    al, bl, Tl = a.tolist(), b.tolist(), T.tolist()

    def f(x):
        return _cond_entropy_scalar(al, bl, Tl, x[0], x[1])

    best = (float(vals[i0]), starts[0])
    step = np.pi / grid[0]
    for th0, ph0 in starts:
        x, fx = _nelder_mead_2d(f, th0, ph0, step, ftol=tol * 1e-3)
        if fx < best[0]:
            best = (fx, x)
    return best[0], Measurement.from_angles(*best[1])


def _nelder_mead_2d(f, x0, y0, step, ftol=1e-10, xtol=1e-8, maxiter=400):
    """Plain Nelder-Mead on two variables.

    scipy's implementation spends most of its time in array bookkeeping for
    a problem this small; this loop is several times faster per evaluation.
    """
    pts = [(x0, y0), (x0 + step, y0), (x0, y0 + 2 * step)]
    vals = [f(p) for p in pts]
    for _ in range(maxiter):
        order = sorted(range(3), key=vals.__getitem__)
        pts = [pts[i] for i in order]
        vals = [vals[i] for i in order]
        (bx, by), (mx, my), (wx, wy) = pts
        if vals[2] - vals[0] <= ftol and max(abs(wx - bx), abs(wy - by),
                                             abs(mx - bx), abs(my - by)) <= xtol:
            break
        cx, cy = 0.5 * (bx + mx), 0.5 * (by + my)
        r = (2 * cx - wx, 2 * cy - wy)
        fr = f(r)
        if fr < vals[0]:
            e = (3 * cx - 2 * wx, 3 * cy - 2 * wy)
            fe = f(e)
            pts[2], vals[2] = (e, fe) if fe < fr else (r, fr)
        elif fr < vals[1]:
            pts[2], vals[2] = r, fr
        else:
            if fr < vals[2]:
                c = (1.5 * cx - 0.5 * wx, 1.5 * cy - 0.5 * wy)
            else:
                c = (0.5 * (cx + wx), 0.5 * (cy + wy))
            fc = f(c)
            if fc < min(fr, vals[2]):
                pts[2], vals[2] = c, fc
            else:
                for i in (1, 2):
                    pts[i] = (0.5 * (bx + pts[i][0]), 0.5 * (by + pts[i][1]))
                    vals[i] = f(pts[i])
    i = min(range(3), key=vals.__getitem__)
    return pts[i], vals[i]


def _entropies(N: BlochVector):
    rho = bloch_to_density(N)
    s_ab = entropy_from_eigs(np.linalg.eigvalsh(rho))
    s_a = float(_h(np.linalg.norm(N.nA)))
    s_b = float(_h(np.linalg.norm(N.n0)))
    return s_a, s_b, s_ab


def mutual_information(N) -> float:
    s_a, s_b, s_ab = _entropies(require_physical(N))
    return s_a + s_b - s_ab


def classical_correlation(N, **opt) -> float:
    """``J(B|A) = S(B) - min_M S(B|M)``."""
    N = require_physical(N)
    s_min, _ = min_conditional_entropy(N, **opt)
    return float(_h(np.linalg.norm(N.n0))) - s_min


def quantum_discord_left(N, **opt) -> tuple[float, Measurement]:
    """Quantum discord ``D(B|A)`` in bits and the optimal measurement axis."""
    N = require_physical(N)
    s_a, _, s_ab = _entropies(N)
    s_min, meas = min_conditional_entropy(N, **opt)
    return max(0.0, s_a - s_ab + s_min), meas


def correlation_report(N, **opt) -> CorrelationReport:
    N = require_physical(N)
    s_a, s_b, s_ab = _entropies(N)
    s_min, meas = min_conditional_entropy(N, **opt)
    return CorrelationReport(
        D=max(0.0, s_a - s_ab + s_min),
        D_G=geometric_discord_left(N, check=False),
        D_G_right=geometric_discord_right(N, check=False),
        C=concurrence(N),
        I=s_a + s_b - s_ab,
        J_class=s_b - s_min,
        k_max=_k_max(N),
        axis=tuple(float(x) for x in meas.axis),
    )


# ---------------------------------------------------------------- entanglement


def _random_qubit_blochs(rng, n):
    """Uniform points in the unit ball (mixed single-qubit states)."""
    d = rng.normal(size=(n, 3))
    d /= np.linalg.norm(d, axis=1, keepdims=True)
    return d * rng.uniform(size=(n, 1)) ** (1 / 3)


def geometric_entanglement(N, samples: int = 20000, terms: int = 4, seed: int = 0,
                           refine: bool = False) -> float:
    """Monte Carlo upper bound on the squared HS distance to the separable set.

    Candidates are mixtures ``sum_a p_a rho_A^a (x) rho_B^a`` of ``terms``
    random product states.  The result is an estimator: it can only
    overestimate the true distance and is non-increasing in ``samples`` for
    a fixed seed.  ``refine`` polishes the best few candidates with L-BFGS-B.
    """
    N = require_physical(N)
    target = N.matrix()
    rng = np.random.default_rng(seed)
    cands = []  # (distance, (w, a, b)) of the best few samples of each chunk
    chunk = 4096
    done = 0
    while done < samples:
        n = min(chunk, samples - done)
        # draw whole chunks so smaller sample counts see a prefix of the same stream
        a = _random_qubit_blochs(rng, chunk * terms).reshape(chunk, terms, 3)[:n]
        b = _random_qubit_blochs(rng, chunk * terms).reshape(chunk, terms, 3)[:n]
        w = rng.dirichlet(np.ones(terms), size=chunk)[:n]
        M = _product_mixture(w, a, b)
        d = 0.25 * np.sum((M - target) ** 2, axis=(-1, -2))
        for k in np.argsort(d)[:2]:
            cands.append((float(d[k]), (w[k], a[k], b[k])))
        done += n
    cands.sort(key=lambda c: c[0])
    best = cands[0][0]
    if refine and best > 0:
        for _, x in cands[:4]:
            best = min(best, _refine_separable(target, x, terms))
    return best


def _product_mixture(w, a, b):
    # returns (..., 4, 4) Bloch component arrays of sum_k w_k rhoA_k x rhoB_k
    a1 = np.concatenate([np.ones(a.shape[:-1] + (1,)), a], axis=-1)
    b1 = np.concatenate([np.ones(b.shape[:-1] + (1,)), b], axis=-1)
    return np.einsum("...k,...ki,...kj->...ij", w, a1, b1)


def _to_ball(v):
    """Smooth map of R^3 onto the open unit ball, ``v tanh|v| / |v|``."""
    r = np.linalg.norm(v, axis=-1, keepdims=True)
    return v * np.where(r > 1e-12, np.tanh(r) / np.maximum(r, 1e-12), 1.0)


def _from_ball(a):
    r = np.clip(np.linalg.norm(a, axis=-1, keepdims=True), 0.0, 1 - 1e-9)
    return a * np.where(r > 1e-12, np.arctanh(r) / np.maximum(r, 1e-12), 1.0)


def _refine_separable(target, x0, terms):
    """Local polish of a product mixture with L-BFGS on a smooth parametrisation."""
    w0, a0, b0 = x0

    def unpack(x):
        logits = x[:terms]
        w = np.exp(logits - logits.max())
        w /= w.sum()
        a = _to_ball(x[terms:4 * terms].reshape(terms, 3))
        b = _to_ball(x[4 * terms:].reshape(terms, 3))
        return w, a, b

    def f(x):
        w, a, b = unpack(x)
        return 0.25 * float(np.sum((_product_mixture(w, a, b) - target) ** 2))

    x0v = np.concatenate([np.log(np.maximum(w0, 1e-12)), _from_ball(a0).ravel(),
                          _from_ball(b0).ravel()])
    res = minimize(f, x0v, method="L-BFGS-B", options={"maxiter": 2000, "ftol": 1e-15,
                                                       "gtol": 1e-10})
    return float(min(res.fun, f(x0v)))
