"""Two-qubit states as generalized Bloch vectors.

A state is stored as 15 real numbers in the Pauli tensor basis::

    rho = 1/4 (s0 x s0 + sum_i N0i s0 x si + sum_i Ni0 si x s0 + sum_ij Nij si x sj)

Qubit A is the first tensor factor.  The flat ordering used for all file
I/O is (N01, N02, N03, N10, N20, N30, N11, N12, N13, N21, ..., N33).
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "PAULI",
    "BlochVector",
    "UnphysicalStateError",
    "bloch_to_density",
    "density_to_bloch",
    "is_physical",
    "eigenvalues",
    "purity",
    "concurrence",
    "entropy",
    "partial_trace_A",
    "partial_trace_B",
    "werner",
    "bell_diagonal",
    "random_physical",
    "AXIS_LABELS",
    "axis_index",
]

PHYS_TOL = 1e-10

_s0 = np.eye(2, dtype=complex)
_sx = np.array([[0, 1], [1, 0]], dtype=complex)
_sy = np.array([[0, -1j], [1j, 0]], dtype=complex)
_sz = np.array([[1, 0], [0, -1]], dtype=complex)
PAULI = np.array([_s0, _sx, _sy, _sz])

# BASIS[a, b] = sigma_a (x) sigma_b
BASIS = np.einsum("aij,bkl->abikjl", PAULI, PAULI).reshape(4, 4, 4, 4)

# (a, b) Pauli index pairs in flat serialization order
FLAT_INDEX = (
    [(0, j) for j in (1, 2, 3)]
    + [(i, 0) for i in (1, 2, 3)]
    + [(i, j) for i in (1, 2, 3) for j in (1, 2, 3)]
)

_LETTER = "0XYZ"
AXIS_LABELS = tuple(_LETTER[a] + _LETTER[b] for a, b in FLAT_INDEX)
# Table ordering: 0X 0Y 0Z X0 Y0 Z0 XX XY ... ZZ -- identical to FLAT_INDEX.


def axis_index(label: str) -> int:
    """Flat index of an axis label such as ``"0X"``, ``"Z0"`` or ``"XY"``."""
    try:
        return AXIS_LABELS.index(label.upper())
    except ValueError:
        raise ValueError(f"unknown axis label {label!r}") from None


class UnphysicalStateError(ValueError):
    """Raised when an operation requires a positive semidefinite state."""


@dataclass(frozen=True)
class BlochVector:
    """Generalized Bloch vector of a two-qubit state.

    Attributes
    ----------
    n0 : (3,) array
        Local Bloch vector of qubit B, the ``N0i`` components.
    nA : (3,) array
        Local Bloch vector of qubit A, the ``Ni0`` components.
    corr : (3, 3) array
        Correlation tensor ``Nij``.
    """

    n0: np.ndarray = field(default_factory=lambda: np.zeros(3))
    nA: np.ndarray = field(default_factory=lambda: np.zeros(3))
    corr: np.ndarray = field(default_factory=lambda: np.zeros((3, 3)))

    def __post_init__(self):
        n0 = np.array(self.n0, dtype=float).reshape(3)
        nA = np.array(self.nA, dtype=float).reshape(3)
        corr = np.array(self.corr, dtype=float).reshape(3, 3)
        for a in (n0, nA, corr):
            a.setflags(write=False)
        object.__setattr__(self, "n0", n0)
        object.__setattr__(self, "nA", nA)
        object.__setattr__(self, "corr", corr)

    @classmethod
    def from_flat(cls, values) -> "BlochVector":
        v = np.asarray(values, dtype=float)
        if v.shape != (15,):
            raise ValueError(f"expected 15 components, got shape {v.shape}")
        return cls(v[0:3], v[3:6], v[6:15].reshape(3, 3))

    @classmethod
    def from_matrix(cls, M) -> "BlochVector":
        """Build from a 4x4 array ``M[a, b] = N_ab`` (``M[0, 0]`` ignored)."""
        M = np.asarray(M, dtype=float)
        return cls(M[0, 1:], M[1:, 0], M[1:, 1:])

    @classmethod
    def from_components(cls, **comps: float) -> "BlochVector":
        """``BlochVector.from_components(N11=-1, N22=-1, N33=-1)``."""
        M = np.zeros((4, 4))
        for key, val in comps.items():
            if len(key) != 3 or key[0] != "N" or not key[1:].isdigit():
                raise ValueError(f"bad component name {key!r}")
            a, b = int(key[1]), int(key[2])
            if (a, b) == (0, 0) or a > 3 or b > 3:
                raise ValueError(f"bad component name {key!r}")
            M[a, b] = val
        return cls.from_matrix(M)

    def flat(self) -> np.ndarray:
        return np.concatenate([self.n0, self.nA, self.corr.ravel()])

    def matrix(self) -> np.ndarray:
        """4x4 array with ``M[0, 0] = 1`` and ``M[a, b] = N_ab``."""
        M = np.empty((4, 4))
        M[0, 0] = 1.0
        M[0, 1:] = self.n0
        M[1:, 0] = self.nA
        M[1:, 1:] = self.corr
        return M

    def __getitem__(self, key: str) -> float:
        a, b = int(key[-2]), int(key[-1])
        return float(self.matrix()[a, b])

    def swap(self) -> "BlochVector":
        """Exchange the roles of qubits A and B."""
        return BlochVector(self.nA, self.n0, self.corr.T)

    def __eq__(self, other):
        if not isinstance(other, BlochVector):
            return NotImplemented
        return bool(np.array_equal(self.flat(), other.flat()))

    def __hash__(self):
        return hash(self.flat().tobytes())

    def __repr__(self):
        nz = [f"{lab}={v:.6g}" for lab, v in zip(AXIS_LABELS, self.flat()) if v != 0]
        return f"BlochVector({', '.join(nz)})"


def _as_bloch(N) -> BlochVector:
    if isinstance(N, BlochVector):
        return N
    return BlochVector.from_flat(N)


def bloch_to_density(N) -> np.ndarray:
    """4x4 density matrix of a Bloch vector (no positivity check)."""
    M = _as_bloch(N).matrix()
    return 0.25 * np.einsum("ab,abij->ij", M, BASIS)


def bloch_matrix_to_density(M: np.ndarray) -> np.ndarray:
    """Vectorized ``bloch_to_density`` on stacked ``(..., 4, 4)`` component arrays."""
    return 0.25 * np.einsum("...ab,abij->...ij", M, BASIS)


def flat_to_matrix(flat: np.ndarray) -> np.ndarray:
    """Stacked ``(..., 15)`` flat vectors to ``(..., 4, 4)`` component arrays."""
    flat = np.asarray(flat, dtype=float)
    M = np.zeros(flat.shape[:-1] + (4, 4))
    M[..., 0, 0] = 1.0
    M[..., 0, 1:] = flat[..., 0:3]
    M[..., 1:, 0] = flat[..., 3:6]
    M[..., 1:, 1:] = flat[..., 6:15].reshape(flat.shape[:-1] + (3, 3))
    return M


def density_to_bloch(rho, tol: float = 1e-10) -> BlochVector:
    """Pauli-basis components of a Hermitian, unit-trace 4x4 matrix."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (4, 4):
        raise ValueError(f"expected a 4x4 matrix, got shape {rho.shape}")
    if np.max(np.abs(rho - rho.conj().T)) > tol:
        raise ValueError("density matrix is not Hermitian")
    if abs(np.trace(rho) - 1.0) > tol:
        raise ValueError(f"density matrix trace is {np.trace(rho).real:.3g}, not 1")
    M = np.einsum("abji,ij->ab", BASIS, rho).real
    return BlochVector.from_matrix(M)


def eigenvalues(N) -> np.ndarray:
    """Density-matrix eigenvalues, descending."""
    return np.linalg.eigvalsh(bloch_to_density(N))[::-1]


def is_physical(N, tol: float = PHYS_TOL) -> bool:
    return bool(eigenvalues(N)[-1] >= -tol)


def require_physical(N, tol: float = PHYS_TOL) -> BlochVector:
    N = _as_bloch(N)
    lam = eigenvalues(N)[-1]
    if lam < -tol:
        raise UnphysicalStateError(f"state has negative eigenvalue {lam:.3g}")
    return N


def purity(N) -> float:
    """Squared length of the 15-component Bloch vector (3 for pure states)."""
    v = _as_bloch(N).flat()
    return float(v @ v)


_YY = np.kron(_sy, _sy)


def concurrence(N) -> float:
    """Wootters concurrence of a physical two-qubit state.

    The ``lambda_i`` are the singular values of ``sqrt(rho) sqrt(rho_tilde)``.
    With ``rho = V diag(p) V^dagger`` and ``rho_tilde = YY rho* YY`` these
    equal the singular values of ``diag(sqrt p) V^dagger YY V* diag(sqrt p)``,
    which keeps the small ``lambda_i`` accurate to roundoff (taking square
    roots of eigenvalues of ``rho rho_tilde`` would lose half the digits).
    """
    rho = bloch_to_density(require_physical(N))
    p, V = np.linalg.eigh(rho)
    d = np.sqrt(np.clip(p, 0.0, None))
    A = d[:, None] * (V.conj().T @ _YY @ V.conj()) * d[None, :]
    lam = np.linalg.svd(A, compute_uv=False)
    return float(max(0.0, lam[0] - lam[1] - lam[2] - lam[3]))


def entropy_from_eigs(p) -> float:
    """Shannon entropy in bits, with 0 log 0 = 0 and tiny negatives clipped."""
    p = np.clip(np.asarray(p, dtype=float), 0.0, None)
    p = p[p > 0]
    return float(-np.sum(p * np.log2(p)))


def entropy(rho) -> float:
    """Von Neumann entropy (bits) of a density matrix or a Bloch vector."""
    if isinstance(rho, BlochVector):
        rho = bloch_to_density(rho)
    return entropy_from_eigs(np.linalg.eigvalsh(np.asarray(rho)))


def partial_trace_B(rho) -> np.ndarray:
    """Reduced state of qubit A."""
    if isinstance(rho, BlochVector):
        rho = bloch_to_density(rho)
    return np.einsum("ijkj->ik", np.asarray(rho).reshape(2, 2, 2, 2))


def partial_trace_A(rho) -> np.ndarray:
    """Reduced state of qubit B."""
    if isinstance(rho, BlochVector):
        rho = bloch_to_density(rho)
    return np.einsum("ijil->jl", np.asarray(rho).reshape(2, 2, 2, 2))


def werner(alpha: float) -> BlochVector:
    """Singlet weight ``alpha`` mixed with white noise: ``N_ii = -alpha``."""
    if not 0.0 <= alpha <= 1.0:
        raise ValueError("Werner weight must lie in [0, 1]")
    return BlochVector(corr=-alpha * np.eye(3))


def bell_diagonal(c1: float, c2: float, c3: float) -> BlochVector:
    return BlochVector(corr=np.diag([c1, c2, c3]))


def random_physical(rng: np.random.Generator, rank: int = 4) -> BlochVector:
    """Random state ``G G^dag / Tr`` with complex Ginibre ``G`` of the given rank."""
    G = rng.normal(size=(4, rank)) + 1j * rng.normal(size=(4, rank))
    rho = G @ G.conj().T
    rho /= np.trace(rho).real
    return density_to_bloch(0.5 * (rho + rho.conj().T))
