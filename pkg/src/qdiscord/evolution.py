"""Unitary two-qubit dynamics and closed-form trajectories.

Couplings are in energy units with hbar = 1.  Generic propagation
diagonalizes the 4x4 Hermitian Hamiltonian, so any time is exact.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar

from .measures import _cond_entropy_scalar, _entropies
from .state import (
    BASIS,
    FLAT_INDEX,
    PAULI,
    BlochVector,
    _as_bloch,
    bell_diagonal,
    bloch_to_density,
    density_to_bloch,
    require_physical,
    werner,
)

__all__ = [
    "Model",
    "HamiltonianSpec",
    "InitialStateSpec",
    "hamiltonian_matrix",
    "bloch_generator",
    "unitary_propagate",
    "unitary_trajectory",
    "ising_closed_form",
    "heisenberg_closed_form",
    "xy_antisym_closed_form",
    "dqc1_trajectory",
    "dqc1_discord_oracle",
    "werner_xy_trajectory",
    "werner_xy_oracles",
    "bell_beta_trajectory",
    "bell_beta_oracles",
    "axial_discord",
]


class Model(enum.Enum):
    Ising = "ising"
    Heisenberg = "heisenberg"
    XY = "xy"
    XYAntisym = "xy_antisym"


@dataclass(frozen=True)
class HamiltonianSpec:
    """Two-qubit Hamiltonian plus a Zeeman field ``B_z`` on qubit B.

    Ising: ``J sz sz``; Heisenberg: ``J sum_i si si``;
    XY: ``J_xy sx sy + J_yx sy sx``.  XYAntisym is XY with ``J_xy = -J_yx``.
    """

    kind: Model
    J: float = 0.0
    J_xy: float = 0.0
    J_yx: float = 0.0
    B_z: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "kind", Model(self.kind))
        if self.kind is Model.XYAntisym and not math.isclose(self.J_xy, -self.J_yx,
                                                             rel_tol=0, abs_tol=1e-14):
            raise ValueError("XYAntisym requires J_xy = -J_yx")

    @classmethod
    def xy_antisym(cls, J_yx: float, B_z: float = 0.0) -> "HamiltonianSpec":
        return cls(Model.XYAntisym, J_xy=-J_yx, J_yx=J_yx, B_z=B_z)


def _kron(a, b):
    return np.kron(PAULI[a], PAULI[b])


def hamiltonian_matrix(H: HamiltonianSpec) -> np.ndarray:
    """4x4 Hermitian matrix of a Hamiltonian spec."""
    M = np.zeros((4, 4), dtype=complex)
    if H.kind is Model.Ising:
        M += H.J * _kron(3, 3)
    elif H.kind is Model.Heisenberg:
        M += H.J * (_kron(1, 1) + _kron(2, 2) + _kron(3, 3))
    else:
        M += H.J_xy * _kron(1, 2) + H.J_yx * _kron(2, 1)
    if H.B_z:
        M += H.B_z * _kron(0, 3)
    return M


_FLAT_OPS = np.array([BASIS[a, b] for a, b in FLAT_INDEX])


def bloch_generator(Hm: np.ndarray) -> np.ndarray:
    """Real 15x15 matrix ``G`` with ``dN/dt = G N`` for ``drho/dt = -i[H, rho]``."""
    comm = np.einsum("ij,njk->nik", Hm, _FLAT_OPS) - np.einsum("nij,jk->nik", _FLAT_OPS, Hm)
    # G[m, n] = Tr(P_m (-i)[H, P_n]) / 4
    G = np.einsum("mji,nij->mn", _FLAT_OPS, -1j * comm) / 4
    return G.real


def _unitary(Hm: np.ndarray, t: float) -> np.ndarray:
    w, V = np.linalg.eigh(Hm)
    return (V * np.exp(-1j * w * t)) @ V.conj().T


def unitary_propagate(H: HamiltonianSpec, N0, t: float) -> BlochVector:
    """Bloch vector after evolving ``N0`` for time ``t`` under ``H``."""
    N0 = require_physical(N0)
    U = _unitary(hamiltonian_matrix(H), t)
    rho = U @ bloch_to_density(N0) @ U.conj().T
    return density_to_bloch(0.5 * (rho + rho.conj().T), tol=1e-8)


def unitary_trajectory(H: HamiltonianSpec, N0, times) -> np.ndarray:
    """Flat ``(len(times), 15)`` Bloch vectors along a time grid."""
    N0 = require_physical(N0)
    w, V = np.linalg.eigh(hamiltonian_matrix(H))
    rho0 = bloch_to_density(N0)
    out = np.empty((len(times), 15))
    for k, t in enumerate(np.asarray(times, dtype=float)):
        if t == 0.0:
            out[k] = N0.flat()
            continue
        U = (V * np.exp(-1j * w * t)) @ V.conj().T
        rho = U @ rho0 @ U.conj().T
        out[k] = np.einsum("nji,ij->n", _FLAT_OPS, rho).real
    return out


# ------------------------------------------------------------- closed forms


def ising_closed_form(J: float, N0, t: float) -> BlochVector:
    """Component map under ``J sz sz``.

    The X-state components ``N03, N30, N33, N11, N12, N21, N22`` are
    constant; the other eight rotate pairwise at frequency ``2J``::

        N01(t) = N01 C3 + N32 S3      N10(t) = N10 C3 + N23 S3
        N32(t) = N32 C3 - N01 S3      N23(t) = N23 C3 - N10 S3
        N02(t) = N02 C3 - N31 S3      N20(t) = N20 C3 - N13 S3
        N31(t) = N31 C3 + N02 S3      N13(t) = N13 C3 + N20 S3

    These rotation blocks are generated by ``-J sz sz``; for the
    Hamiltonian ``+J sz sz`` used throughout, ``C3 = cos 2Jt`` and
    ``S3 = -sin 2Jt``.
    """
    M = _as_bloch(N0).matrix()
    c, s = math.cos(2 * J * t), -math.sin(2 * J * t)
    out = M.copy()
    out[0, 1] = M[0, 1] * c + M[3, 2] * s
    out[3, 2] = M[3, 2] * c - M[0, 1] * s
    out[0, 2] = M[0, 2] * c - M[3, 1] * s
    out[3, 1] = M[3, 1] * c + M[0, 2] * s
    out[1, 0] = M[1, 0] * c + M[2, 3] * s
    out[2, 3] = M[2, 3] * c - M[1, 0] * s
    out[2, 0] = M[2, 0] * c - M[1, 3] * s
    out[1, 3] = M[1, 3] * c + M[2, 0] * s
    return BlochVector.from_matrix(out)


_EPS = np.zeros((3, 3, 3))
for _i, _j, _k in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
    _EPS[_i, _j, _k] = 1.0
    _EPS[_i, _k, _j] = -1.0


def heisenberg_closed_form(J: float, N0, t: float) -> BlochVector:
    """Component map under ``J (sx sx + sy sy + sz sz)``.

    With ``c = cos 2Jt``, ``s = sin 2Jt`` and ``tau_l = eps_ijl T_ij``::

        a(t) = c^2 a + s^2 b - c s tau
        b(t) = c^2 b + s^2 a + c s tau
        T(t) = c^2 T + s^2 T^T + c s eps_ipq (a - b)_i

    Bell-diagonal states (``a = b = 0``, ``T`` diagonal) are fixed points.
    """
    N = _as_bloch(N0)
    a, b, T = N.nA, N.n0, N.corr
    c, s = math.cos(2 * J * t), math.sin(2 * J * t)
    tau = np.einsum("ijl,ij->l", _EPS, T)
    a_t = c * c * a + s * s * b - c * s * tau
    b_t = c * c * b + s * s * a + c * s * tau
    T_t = c * c * T + s * s * T.T + c * s * np.einsum("ipq,i->pq", _EPS, a - b)
    return BlochVector(b_t, a_t, T_t)


def xy_antisym_closed_form(J_yx: float, N0, t: float) -> BlochVector:
    """Component map under ``J_yx (sy sx - sx sy)``."""
    M = _as_bloch(N0).matrix()
    c4, s4 = math.cos(4 * J_yx * t), math.sin(4 * J_yx * t)
    c2, s2 = math.cos(2 * J_yx * t), math.sin(2 * J_yx * t)
    out = M.copy()
    n03, n30, n11, n22 = M[0, 3], M[3, 0], M[1, 1], M[2, 2]
    out[0, 3] = 0.5 * (n03 + n30 + (n03 - n30) * c4 + (n11 + n22) * s4)
    out[3, 0] = 0.5 * (n03 + n30 + (n30 - n03) * c4 - (n11 + n22) * s4)
    out[1, 1] = 0.5 * (n11 - n22 + (n30 - n03) * s4 + (n11 + n22) * c4)
    out[2, 2] = 0.5 * (n22 - n11 + (n30 - n03) * s4 + (n11 + n22) * c4)
    out[0, 1] = M[0, 1] * c2 - M[1, 3] * s2
    out[1, 3] = M[0, 1] * s2 + M[1, 3] * c2
    out[0, 2] = M[0, 2] * c2 - M[2, 3] * s2
    out[2, 3] = M[0, 2] * s2 + M[2, 3] * c2
    out[1, 0] = M[1, 0] * c2 + M[3, 1] * s2
    out[3, 1] = -M[1, 0] * s2 + M[3, 1] * c2
    out[2, 0] = M[2, 0] * c2 + M[3, 2] * s2
    out[3, 2] = -M[2, 0] * s2 + M[3, 2] * c2
    return BlochVector.from_matrix(out)


# ---------------------------------------------------------- named scenarios


def _log2(x):
    return math.log2(x) if x > 0 else 0.0


def _xlog2x(x):
    return x * math.log2(x) if x > 0 else 0.0


def dqc1_trajectory(J: float, t: float) -> BlochVector:
    """Ising evolution of the state with only ``N20 = 1``: a unit circle.

    ``N20 = cos 2Jt`` and ``N13 = -sin 2Jt`` under ``+J sz sz``.
    """
    return BlochVector.from_components(N20=math.cos(2 * J * t), N13=-math.sin(2 * J * t))


def dqc1_discord_oracle(J: float, t: float) -> tuple[float, float]:
    """Closed-form ``(D, D_G)`` along :func:`dqc1_trajectory`."""
    C3, S3 = math.cos(2 * J * t), math.sin(2 * J * t)
    D = (-0.5 * (_xlog2x(1 + C3) + _xlog2x(1 - C3)) + 1
         - 0.5 * (_xlog2x(1 - S3) + _xlog2x(1 + S3)))
    D_G = 0.25 * (1 - max(C3 * C3, S3 * S3))
    return max(D, 0.0), D_G


def werner_xy_trajectory(alpha: float, J_yx: float, t: float) -> BlochVector:
    """Werner state under the antisymmetric XY coupling."""
    s, c = math.sin(4 * J_yx * t), math.cos(4 * J_yx * t)
    return BlochVector.from_components(N03=-alpha * s, N30=alpha * s,
                                       N11=-alpha * c, N22=-alpha * c, N33=-alpha)


def werner_xy_oracles(alpha: float, J_yx: float, t: float) -> tuple[float, float]:
    """Closed-form ``(C, D)`` for the Werner XY trajectory at ``alpha`` = 1 or 1/2."""
    if math.isclose(alpha, 1.0):
        c2, s2 = math.cos(2 * J_yx * t), math.sin(2 * J_yx * t)
        u, v = (c2 + s2) ** 2, (c2 - s2) ** 2
        D = 1 - 0.5 * (u * _log2(u) + v * _log2(v))
        return abs(math.cos(4 * J_yx * t)), D
    if math.isclose(alpha, 0.5):
        c8 = math.cos(8 * J_yx * t)
        delta = math.sqrt(max(2 * math.cos(16 * J_yx * t) + 18 * c8 + 16, 0.0))
        lam = (math.sqrt(9 + 4 * c8 + 2 * delta)
               - math.sqrt(max(9 + 4 * c8 - 2 * delta, 0.0)) - 2) / 8
        return max(0.0, lam), _five_eighths(math.sin(4 * J_yx * t))
    raise ValueError("closed forms are available for alpha = 1 and alpha = 1/2 only")


def _five_eighths(s4: float) -> float:
    return (5 / 8 * math.log2(5) - (3 - 2 * s4) / 8 * _log2(3 - 2 * s4)
            - (3 + 2 * s4) / 8 * _log2(3 + 2 * s4))


def bell_beta_trajectory(beta: float, J_yx: float, t: float) -> BlochVector:
    """Bell-diagonal ``N11 = N22 = -N33/2 = beta`` under antisymmetric XY."""
    if not 0.0 <= beta <= 0.5:
        raise ValueError("beta must lie in [0, 1/2]")
    s, c = math.sin(4 * J_yx * t), math.cos(4 * J_yx * t)
    return BlochVector.from_components(N03=beta * s, N30=-beta * s,
                                       N11=beta * c, N22=beta * c, N33=-2 * beta)


def axial_discord(N) -> float:
    """Discord ``D(B|A)`` of a state symmetric under joint rotations about z.

    For such states (``a``, ``b`` along z and ``T = diag(t, t, t3)``) the
    conditional entropy depends only on the polar angle of the measurement
    axis, so the minimization is one-dimensional.
    """
    N = _as_bloch(N)
    T = N.corr
    if (abs(N.nA[0]) + abs(N.nA[1]) + abs(N.n0[0]) + abs(N.n0[1]) > 1e-12
            or abs(T[0, 0] - T[1, 1]) > 1e-12
            or np.abs(T - np.diag(np.diag(T))).max() > 1e-12):
        raise ValueError("state is not symmetric about the z axis")
    a, b = N.nA.tolist(), N.n0.tolist()
    Tl = T.tolist()

    def f(theta):
        return _cond_entropy_scalar(a, b, Tl, theta, 0.0)

    grid = np.linspace(0.0, math.pi, 721)
    vals = [f(x) for x in grid]
    k = int(np.argmin(vals))
    lo, hi = grid[max(k - 1, 0)], grid[min(k + 1, len(grid) - 1)]
    res = minimize_scalar(f, bounds=(lo, hi), method="bounded",
                          options={"xatol": 1e-12})
    s_min = min(res.fun, vals[k])
    s_a, _, s_ab = _entropies(N)
    return float(max(s_a - s_ab + s_min, 0.0))


def bell_beta_oracles(beta: float, J_yx: float, t: float) -> tuple[float, float]:
    """``(C, D)`` along :func:`bell_beta_trajectory`.

    ``C = max(0, Delta_B)`` in closed form.  ``D`` uses the one-dimensional
    reduction of :func:`axial_discord`; the five-eighths logarithmic
    expression of the Werner ``alpha = 1/2`` case does not carry over to
    this family.
    """
    c = math.cos(4 * J_yx * t)
    gam = math.sqrt(c * c * (1 + 4 * beta + 4 * beta**2 * c * c))
    base = 1 + 4 * beta + 8 * beta**2 * c * c
    dB = 0.25 * (math.sqrt(base + 4 * beta * gam)
                 - math.sqrt(max(base - 4 * beta * gam, 0.0)) - 2 * (1 - 2 * beta))
    return max(0.0, dB), float(axial_discord(bell_beta_trajectory(beta, J_yx, t)))


def werner_state(alpha: float) -> BlochVector:
    return werner(alpha)


def bell_state(c1, c2, c3) -> BlochVector:
    return bell_diagonal(c1, c2, c3)


@dataclass(frozen=True)
class InitialStateSpec:
    """Named initial-state families.

    ``kind`` is one of ``werner`` (``alpha``), ``bell_diagonal``
    (``N11, N22, N33``), ``bell_beta`` (``beta``), ``dqc1`` or ``raw``
    (15 flat components).
    """

    kind: str
    params: tuple = ()

    def build(self) -> BlochVector:
        k = self.kind.lower()
        if k == "werner":
            (alpha,) = self.params
            return werner(alpha)
        if k == "bell_diagonal":
            return bell_diagonal(*self.params)
        if k == "bell_beta":
            (beta,) = self.params
            if not 0.0 <= beta <= 0.5:
                raise ValueError("beta must lie in [0, 1/2]")
            return bell_diagonal(beta, beta, -2 * beta)
        if k == "dqc1":
            return BlochVector.from_components(N20=1.0)
        if k == "raw":
            return BlochVector.from_flat(self.params)
        raise ValueError(f"unknown initial state kind {self.kind!r}")
