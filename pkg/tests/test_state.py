import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from qdiscord import (
    AXIS_LABELS,
    BlochVector,
    UnphysicalStateError,
    axis_index,
    bell_diagonal,
    bloch_to_density,
    concurrence,
    density_to_bloch,
    eigenvalues,
    entropy,
    is_physical,
    partial_trace_A,
    partial_trace_B,
    purity,
    random_physical,
    werner,
)
from qdiscord.state import require_physical

seeds = st.integers(min_value=0, max_value=2**32 - 1)


def test_axis_labels_order():
    assert AXIS_LABELS[:6] == ("0X", "0Y", "0Z", "X0", "Y0", "Z0")
    assert AXIS_LABELS[-1] == "ZZ" and len(AXIS_LABELS) == 15
    assert axis_index("XY") == AXIS_LABELS.index("XY")


def test_component_access_and_flat_order():
    N = BlochVector.from_components(N01=0.1, N20=0.2, N13=0.3)
    flat = N.flat()
    assert flat[0] == 0.1 and flat[4] == 0.2 and flat[8] == 0.3
    assert N["N13"] == 0.3
    assert BlochVector.from_flat(flat) == N


def test_swap_exchanges_qubits():
    N = BlochVector.from_components(N01=0.1, N30=0.2, N12=0.3)
    S = N.swap()
    assert S["N10"] == 0.1 and S["N03"] == 0.2 and S["N21"] == 0.3
    assert S.swap() == N


@given(seeds)
def test_density_round_trip(seed):
    N = random_physical(np.random.default_rng(seed))
    rho = bloch_to_density(N)
    assert np.isclose(np.trace(rho).real, 1.0)
    assert np.allclose(rho, rho.conj().T)
    assert np.allclose(density_to_bloch(rho).flat(), N.flat(), atol=1e-12)


@given(seeds)
def test_purity_matches_trace(seed):
    N = random_physical(np.random.default_rng(seed))
    rho = bloch_to_density(N)
    assert math.isclose(np.trace(rho @ rho).real, (1 + purity(N)) / 4, abs_tol=1e-12)
    assert purity(N) <= 3 + 1e-12


@given(seeds)
def test_random_states_are_physical(seed):
    N = random_physical(np.random.default_rng(seed))
    ev = eigenvalues(N)
    assert ev.min() >= -1e-12 and math.isclose(ev.sum(), 1.0)
    assert is_physical(N)


def test_unphysical_rejected():
    N = BlochVector.from_components(N11=1, N22=1, N33=1)  # eigenvalue -1/2
    assert not is_physical(N)
    with pytest.raises(UnphysicalStateError):
        require_physical(N)
    with pytest.raises(UnphysicalStateError):
        concurrence(N)


def test_partial_traces_of_product_state():
    N = BlochVector.from_components(N10=0.6, N01=-0.4, N11=0.6 * 0.0, N33=0.0)
    rho = bloch_to_density(N)
    rA = partial_trace_B(rho)
    rB = partial_trace_A(rho)
    assert np.allclose(rA, 0.5 * np.array([[1, 0.6], [0.6, 1]]))
    assert np.allclose(rB, 0.5 * np.array([[1, -0.4], [-0.4, 1]]))


@pytest.mark.parametrize("alpha", [0.0, 0.2, 1 / 3, 0.5, 0.8, 1.0])
def test_werner_concurrence(alpha):
    assert math.isclose(concurrence(werner(alpha)), max(0.0, (3 * alpha - 1) / 2), abs_tol=1e-12)


def test_bell_states_maximally_entangled():
    for c in [(-1, -1, -1), (1, 1, -1), (1, -1, 1), (-1, 1, 1)]:
        N = bell_diagonal(*c)
        assert math.isclose(concurrence(N), 1.0, abs_tol=1e-12)
        assert math.isclose(entropy(bloch_to_density(N)), 0.0, abs_tol=1e-9)


def test_maximally_mixed_state():
    N = BlochVector.from_components()
    assert concurrence(N) == 0.0
    assert math.isclose(entropy(bloch_to_density(N)), 2.0)


@given(seeds)
def test_concurrence_local_unitary_invariance(seed):
    rng = np.random.default_rng(seed)
    N = random_physical(rng, rank=2)
    rho = bloch_to_density(N)
    U = np.kron(*(np.linalg.qr(rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2)))[0]
                  for _ in range(2)))
    N2 = density_to_bloch(U @ rho @ U.conj().T)
    assert math.isclose(concurrence(N), concurrence(N2), abs_tol=1e-10)


def test_concurrence_accurate_for_pure_states():
    # a rank-one state: small lambda_i must not leak sqrt(roundoff) into C
    theta = 0.3
    psi = np.array([math.cos(theta), 0, 0, math.sin(theta)])
    N = density_to_bloch(np.outer(psi, psi))
    assert abs(concurrence(N) - math.sin(2 * theta)) < 1e-13
