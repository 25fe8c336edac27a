"""Random telegraph noise via the quasi-Hamiltonian method.

A fluctuator ``s(t) = +-1`` flips at rate ``gamma`` and couples as
``g_z s(t) sz (x) s0`` (qubit A).  Writing ``N_s`` for the Bloch vector
weighted by the probability of fluctuator state ``s``::

    dN_s/dt = L_s N_s + gamma (N_{-s} - N_s)

where ``L_s`` is the real Bloch-space generator of ``-i[H(s), .]``.
Stacking the ``N_s`` gives a real generator ``M``; the quasi-Hamiltonian is
``H_q = i M`` and ``N(t) = <f| exp(-i H_q t) |i> N0`` with uniform entry
and exit vectors.  The zero-step limit is taken analytically.
"""
from __future__ import annotations

import cmath
import enum
import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

from .evolution import HamiltonianSpec, bloch_generator, hamiltonian_matrix, ising_closed_form
from .state import PAULI, BlochVector, _as_bloch, require_physical

__all__ = [
    "NoiseMode",
    "NoiseSpec",
    "QuasiHamiltonian",
    "NumericalConsistencyError",
    "build_quasi_hamiltonian",
    "rtn_evolve",
    "rtn_trajectory",
    "is_markovian",
    "f_envelope",
    "g_envelope",
    "h_envelope",
    "decay_factor",
    "rtn_ising_dqc1_oracle",
    "rtn_ising_bell_oracle",
    "rtn_werner_discord_oracle",
    "two_fluctuator_evolve",
    "xy_quasi_hamiltonian_spectrum",
]

IMAG_TOL = 1e-10


class NumericalConsistencyError(ArithmeticError):
    """An envelope that must be real came out with a large imaginary part."""


class NoiseMode(enum.Enum):
    SingleOnA = "single"
    TwoUncorrelated = "two_uncorrelated"
    Correlated = "correlated"


@dataclass(frozen=True)
class NoiseSpec:
    """Telegraph-noise parameters.

    ``SingleOnA``: one fluctuator on qubit A.  ``TwoUncorrelated``: rate
    ``gamma`` on A and an independent fluctuator with rate ``xi * gamma``
    on B.  ``Correlated``: one fluctuator coupled to both qubits with the
    same sign, ``g_z s(t) (sz s0 + s0 sz)``.
    """

    g_z: float
    gamma: float
    xi: float = 1.0
    mode: NoiseMode = NoiseMode.SingleOnA

    def __post_init__(self):
        object.__setattr__(self, "mode", NoiseMode(self.mode))
        if not self.gamma > 0:
            raise ValueError("switching rate gamma must be positive")
        if not self.xi > 0:
            raise ValueError("rate ratio xi must be positive")


@dataclass(frozen=True)
class QuasiHamiltonian:
    """Stacked generator over ``K`` fluctuator configurations.

    Attributes
    ----------
    M : (15K, 15K) real array
        ``d/dt`` of the stacked vector; ``H_q = i M``.
    K : int
        Number of fluctuator configurations (2 or 4).
    """

    M: np.ndarray
    K: int

    @property
    def H_q(self) -> np.ndarray:
        return 1j * self.M

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvals(self.H_q)

    def entry(self) -> np.ndarray:
        return np.full(self.K, 1.0 / math.sqrt(self.K))


def _noise_terms(noise: NoiseSpec):
    """Per-configuration coupling matrices and the flip-rate matrix."""
    zA = np.kron(PAULI[3], PAULI[0])
    zB = np.kron(PAULI[0], PAULI[3])
    g, gam = noise.g_z, noise.gamma
    if noise.mode is NoiseMode.TwoUncorrelated:
        configs = [(1, 1), (1, -1), (-1, 1), (-1, -1)]
        terms = [g * (s1 * zA + s2 * zB) for s1, s2 in configs]
        rates = np.zeros((4, 4))
        for i, (a1, a2) in enumerate(configs):
            for j, (b1, b2) in enumerate(configs):
                if a1 != b1 and a2 == b2:
                    rates[i, j] = gam
                elif a1 == b1 and a2 != b2:
                    rates[i, j] = noise.xi * gam
        return terms, rates
    coupling = zA + zB if noise.mode is NoiseMode.Correlated else zA
    return [g * coupling, -g * coupling], np.array([[0.0, gam], [gam, 0.0]])


def build_quasi_hamiltonian(H: HamiltonianSpec, noise: NoiseSpec) -> QuasiHamiltonian:
    """Quasi-Hamiltonian of ``H`` plus telegraph noise."""
    H0 = hamiltonian_matrix(H)
    terms, rates = _noise_terms(noise)
    K = len(terms)
    M = np.zeros((15 * K, 15 * K))
    out_rate = rates.sum(axis=1)
    for i in range(K):
        blk = slice(15 * i, 15 * i + 15)
        M[blk, blk] = bloch_generator(H0 + terms[i]) - out_rate[i] * np.eye(15)
        for j in range(K):
            if rates[j, i]:
                # probability flows from configuration j into i
                M[blk, 15 * j:15 * j + 15] += rates[j, i] * np.eye(15)
    return QuasiHamiltonian(M, K)


def rtn_evolve(Hq: QuasiHamiltonian, N0, t: float) -> BlochVector:
    """Noise-averaged Bloch vector at time ``t``."""
    N0 = require_physical(N0)
    if t == 0:
        return N0
    v = _as_bloch(N0).flat()
    w = Hq.entry()
    P = expm(Hq.M * t)
    # <f| P |i> N0 with |i> = |f> = uniform / sqrt(K)
    blocks = P.reshape(Hq.K, 15, Hq.K, 15)
    prop = np.einsum("a,aibj,b->ij", w, blocks, w)
    return BlochVector.from_flat(prop @ v)


def rtn_trajectory(Hq: QuasiHamiltonian, N0, times) -> np.ndarray:
    """Flat ``(len(times), 15)`` Bloch vectors; each time is exponentiated directly."""
    N0 = require_physical(N0)
    v = np.tile(_as_bloch(N0).flat(), Hq.K) / Hq.K
    out = np.empty((len(times), 15))
    for k, t in enumerate(np.asarray(times, dtype=float)):
        if t == 0.0:
            out[k] = _as_bloch(N0).flat()
            continue
        out[k] = (expm(Hq.M * t) @ v).reshape(Hq.K, 15).sum(axis=0)
    return out


def is_markovian(noise: NoiseSpec) -> bool:
    """``gamma / 2 > g_z`` for every fluctuator.

    At the boundary ``gamma / 2 == g_z`` this returns ``False`` and warns.
    """
    rates = [noise.gamma]
    if noise.mode is NoiseMode.TwoUncorrelated:
        rates.append(noise.xi * noise.gamma)
    g = abs(noise.g_z)
    for r in rates:
        if math.isclose(r / 2, g, rel_tol=1e-12, abs_tol=1e-15):
            warnings.warn("gamma/2 = g_z: critical damping boundary, treated as non-Markovian",
                          RuntimeWarning, stacklevel=2)
            return False
    return all(r / 2 > g for r in rates)


# ------------------------------------------------------------- envelopes


def _sinc(z: complex) -> complex:
    if abs(z) < 1e-4:
        z2 = z * z
        return 1 - z2 / 6 + z2 * z2 / 120
    return cmath.sin(z) / z


def _real(z: complex, what: str) -> float:
    if abs(z.imag) > IMAG_TOL * max(1.0, abs(z.real)):
        raise NumericalConsistencyError(f"{what} has imaginary residue {z.imag:.3g}")
    return z.real


def _f_from_sq(R_sq: float, rate: float, t: float) -> complex:
    # cos(2Rt) + rate/(2R) sin(2Rt), written so that R -> 0 is regular
    z = 2 * t * cmath.sqrt(R_sq)
    return cmath.cos(z) + rate * t * _sinc(z)


def f_envelope(g_z: float, gamma: float, t: float) -> float:
    """``F(R0) = [2 R0 cosh(2i R0 t) - i gamma sinh(2i R0 t)] / (2 R0)``.

    ``R0 = sqrt(g_z^2 - gamma^2/4)`` may be imaginary; the result is real.
    """
    return _real(_f_from_sq(g_z * g_z - gamma * gamma / 4, gamma, t), "F")


def decay_factor(g_z: float, gamma: float, t: float) -> float:
    """Coherence factor ``exp(-gamma t) F(R0)`` of one fluctuator."""
    return math.exp(-gamma * t) * f_envelope(g_z, gamma, t)


def g_envelope(g_z: float, gamma: float, t: float) -> float:
    """``G(R0) = [4 g^2 + (4R0^2 - gamma^2) cosh(4i R0 t) - 4i gamma R0 sinh(4i R0 t)] / (8 R0^2)``."""
    R_sq = g_z * g_z - gamma * gamma / 4
    if abs(R_sq) < 1e-8 * max(1.0, g_z * g_z):
        # removable singularity; G = F^2 identically
        return f_envelope(g_z, gamma, t) ** 2
    R0 = cmath.sqrt(R_sq)
    z = 4j * R0 * t
    val = (4 * g_z * g_z + (4 * R_sq - gamma**2) * cmath.cosh(z)
           - 4j * gamma * R0 * cmath.sinh(z)) / (8 * R_sq)
    return _real(val, "G")


def h_envelope(g_z: float, gamma: float, xi: float, t: float) -> float:
    """Two-fluctuator envelope ``H(R0, xi)``.

    ``H = [2R0 cosh(2iR0t) - i gamma sinh(2iR0t)] [2X0 cosh(2iX0t) - i xi gamma sinh(2iX0t)] / (4 R0 X0)``
    with ``X0 = sqrt(4 R0^2 - gamma^2 (xi^2 - 1)) / 2``.
    """
    R_sq = g_z * g_z - gamma * gamma / 4
    X_sq = R_sq - gamma * gamma * (xi * xi - 1) / 4
    val = _f_from_sq(R_sq, gamma, t) * _f_from_sq(X_sq, xi * gamma, t)
    return _real(val, "H")


# --------------------------------------------------------------- oracles


def rtn_ising_dqc1_oracle(J: float, g_z: float, gamma: float, t: float) -> BlochVector:
    """Ising + noise on A, initial state ``N20 = 1``.

    ``N20 = e^{-gamma t} cos(2Jt) F``, ``N13 = -e^{-gamma t} sin(2Jt) F``
    (sign of the second follows ``H = +J sz sz``); independent of ``B_z``.
    """
    E = decay_factor(g_z, gamma, t)
    return BlochVector.from_components(N20=E * math.cos(2 * J * t),
                                       N13=-E * math.sin(2 * J * t))


def rtn_ising_bell_oracle(N11: float, N22: float, N33: float, g_z: float, gamma: float,
                          B_z: float, t: float) -> BlochVector:
    """Ising + noise on A + field on B, Bell-diagonal initial state.

    The noise damps ``N11, N22`` by ``e^{-gamma t} F`` and the field rotates
    the second index at frequency ``2 B_z``; ``N33`` is constant.
    """
    E = decay_factor(g_z, gamma, t)
    c, s = math.cos(2 * B_z * t), math.sin(2 * B_z * t)
    return BlochVector.from_components(N11=N11 * E * c, N12=N11 * E * s,
                                       N21=-N22 * E * s, N22=N22 * E * c, N33=N33)


def _xlog2x(x):
    return x * math.log2(x) if x > 0 else 0.0


def rtn_werner_discord_oracle(alpha: float, g_z: float, gamma: float, B_z: float,
                              t: float) -> tuple[float, float]:
    """``(D, C)`` of a Werner state under Ising + noise on A + field on B.

    ``D = 2 - (1+a)/2 log(1+a) - (1-a)/2 log(1-a) - S(rho)`` with spectrum
    ``(1-a)/4`` (twice) and ``(1 + a +- 2 r)/4``, ``r = sqrt(N11^2 + N12^2)``.
    ``C = max(0, (a (1 + 2|E|) - 1) / 2)`` with ``E = e^{-gamma t} F``;
    at ``a = 1`` this is ``|E|``.
    """
    E = decay_factor(g_z, gamma, t)
    N = rtn_ising_bell_oracle(-alpha, -alpha, -alpha, g_z, gamma, B_z, t)
    r = math.hypot(N["N11"], N["N12"])
    lam = [(1 - alpha) / 4, (1 - alpha) / 4, (1 + alpha + 2 * r) / 4, (1 + alpha - 2 * r) / 4]
    S = -sum(_xlog2x(x) for x in lam)
    D = 2 - _xlog2x(1 + alpha) / 2 - _xlog2x(1 - alpha) / 2 - S
    C = max(0.0, (alpha * (1 + 2 * abs(E)) - 1) / 2)
    return max(D, 0.0), C


def two_fluctuator_evolve(N0, J: float, g_z: float, gamma: float, xi: float,
                          t: float) -> BlochVector:
    """Ising coupling with independent fluctuators on A (rate ``gamma``) and B (``xi gamma``).

    The three commuting terms factorize:

    * ``N01, N32, N02, N31`` rotate under ``J`` and decay with the B factor;
    * ``N10, N23, N20, N13`` rotate under ``J`` and decay with the A factor;
    * ``N11, N12, N21, N22`` decay with ``e^{-gamma(1+xi)t} H(R0, xi)``;
    * ``N03, N30, N33`` are constant.
    """
    M = ising_closed_form(J, N0, t).matrix()
    EA = decay_factor(g_z, gamma, t)
    EB = decay_factor(g_z, xi * gamma, t)
    EX = math.exp(-gamma * (1 + xi) * t) * h_envelope(g_z, gamma, xi, t)
    for a, b in ((0, 1), (3, 2), (0, 2), (3, 1)):
        M[a, b] *= EB
    for a, b in ((1, 0), (2, 3), (2, 0), (1, 3)):
        M[a, b] *= EA
    M[1:3, 1:3] *= EX
    return BlochVector.from_matrix(M)


def xy_quasi_hamiltonian_spectrum(J_yx: float, g_z: float, gamma: float,
                                  quoted: bool = False) -> np.ndarray:
    """Closed-form distinct eigenvalues of ``H_q``: antisymmetric XY, noise on A, ``B_z = 0``.

    The spectrum consists of ``0``, ``-2i gamma``, ``-i gamma +- 2R0``,
    ``-i gamma +- W1``, ``-i gamma +- W2`` with::

        W_{1,2}^2 = 4J^2 + 2g^2 - gamma^2 +- 2 sqrt(g^4 + 4J^2 g^2 - 4J^2 gamma^2)

    and the roots of the cubics::

        w^3 + 2i gamma w^2 - 4(4J^2 + g^2) w - 32i J^2 gamma
        W^3 + 4i gamma W^2 - 4(4J^2 + g^2 + gamma^2) W - 8i g^2 gamma

    14 distinct values for generic parameters.

    With ``quoted=True`` the widely quoted (incorrect) variant is returned instead:
    it lists ``-i gamma`` and ``-2 R0`` in place of ``0``, omits the factor
    2 inside ``W``, and has constant term ``-32 J^2`` in the first cubic.
    That list does not match the exact generator and is kept for comparison.
    """
    J, g, gam = J_yx, g_z, gamma
    R0 = cmath.sqrt(g * g - gam * gam / 4)
    inner = cmath.sqrt(g**4 + 4 * J * J * g * g - 4 * J * J * gam * gam)
    k = 1 if quoted else 2
    W1 = cmath.sqrt(4 * J * J + 2 * g * g - gam * gam + k * inner)
    W2 = cmath.sqrt(4 * J * J + 2 * g * g - gam * gam - k * inner)
    vals = [-2j * gam] + ([-1j * gam, -2 * R0] if quoted else [0j])
    for w in (2 * R0, W1, W2):
        vals += [-1j * gam + w, -1j * gam - w]
    c0 = -32 * J * J if quoted else -32j * J * J * gam
    vals += list(np.roots([1, 2j * gam, -4 * (4 * J * J + g * g), c0]))
    vals += list(np.roots([1, 4j * gam, -4 * (4 * J * J + g * g + gam * gam), -8j * g * g * gam]))
    return np.array(vals, dtype=complex)
