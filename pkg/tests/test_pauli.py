import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qtransversal.errors import ValidationError
from qtransversal.pauli import (
    LocalCliffordMap,
    PauliElement,
    all_elements,
    root_of_unity,
    symplectic_group,
)


@st.composite
def elements(draw, d=None, n=None):
    d = d or draw(st.integers(2, 6))
    n = n or draw(st.integers(1, 2))
    a = draw(st.lists(st.integers(0, d - 1), min_size=n, max_size=n))
    b = draw(st.lists(st.integers(0, d - 1), min_size=n, max_size=n))
    ph = draw(st.integers(0, 2 * d - 1))
    return PauliElement(d, n, ph, tuple(a), tuple(b))


@st.composite
def element_pairs(draw):
    d = draw(st.integers(2, 6))
    n = draw(st.integers(1, 2))
    return draw(elements(d, n)), draw(elements(d, n)), draw(elements(d, n))


def test_single_qudit_matrices():
    X = PauliElement(3, 1, 0, (1,), (0,)).to_matrix()
    Z = PauliElement(3, 1, 0, (0,), (1,)).to_matrix()
    q = np.exp(2j * np.pi / 3)
    assert np.allclose(X @ np.eye(3)[:, 0], np.eye(3)[:, 1])
    assert np.allclose(Z, np.diag([1, q, q * q]))
    assert np.allclose(Z @ X, q * X @ Z)


def test_qubit_labels_are_hermitian_paulis():
    Y = PauliElement.from_label("Y").to_matrix()
    assert np.allclose(Y, [[0, -1j], [1j, 0]])
    assert PauliElement.from_label("-iXZ").label() == "-iXZ"
    assert PauliElement.from_label("XZ") * PauliElement.from_label("ZX") == PauliElement.from_label("YY")


def test_support_is_one_based():
    p = PauliElement.from_label("IXIZ")
    assert p.support() == (2, 4)
    assert p.weight == 2
    assert p.local(4) == (0, 1)


@given(element_pairs())
@settings(max_examples=60, deadline=None)
def test_composition_matches_matrices(pqr):
    p, q, r = pqr
    assert np.allclose((p * q).to_matrix(), p.to_matrix() @ q.to_matrix())
    # associativity
    assert (p * q) * r == p * (q * r)


@given(element_pairs())
@settings(max_examples=60, deadline=None)
def test_commutation_exponent(pqr):
    p, q, _ = pqr
    c = p.commutation_exponent(q)
    qroot = np.exp(2j * np.pi / p.d)
    P, Q = p.to_matrix(), q.to_matrix()
    assert np.allclose(P @ Q, qroot**c * Q @ P)


@given(elements())
@settings(max_examples=60, deadline=None)
def test_inverse_power_and_order(p):
    assert (p * p.inverse()).is_identity
    assert np.allclose((p**3).to_matrix(), np.linalg.matrix_power(p.to_matrix(), 3))
    o = p.order()
    assert (p**o).is_identity
    assert all(not (p**k).is_identity for k in range(1, o))


@pytest.mark.parametrize("d", [2, 3, 4, 6])
def test_weyl_elements_have_order_d(d):
    for p in all_elements(d, 1):
        w = PauliElement.weyl(d, p.a, p.b)
        assert (w**d).is_identity
        if d == 2:
            M = w.to_matrix()
            assert np.allclose(M, M.conj().T)


def test_dimension_mismatch():
    with pytest.raises(ValidationError):
        PauliElement.from_label("X") * PauliElement.from_label("XX")


def test_root_of_unity_exact_quarters():
    assert root_of_unity(2, 4) == 1j
    assert root_of_unity(4, 2) == 1
    assert root_of_unity(3, 3) == -1


@pytest.mark.parametrize("d,size", [(2, 6), (3, 24), (4, 48), (5, 120), (6, 144)])
def test_symplectic_group_order(d, size):
    # |SL(2, Z_d)| = d^3 prod_{p | d} (1 - 1/p^2)
    assert len(symplectic_group(d)) == size


def test_local_clifford_condition():
    # the accepted pairs are exactly those that preserve Z X = q X Z
    assert LocalCliffordMap.from_pairs(1, 1, 1, 0, 3)
    with pytest.raises(ValidationError):
        LocalCliffordMap.from_pairs(1, 0, 0, 1, 3)
    with pytest.raises(ValidationError):
        LocalCliffordMap.from_pairs(2, 0, 0, 2, 4)


@pytest.mark.parametrize("d", [2, 3, 4])
def test_local_clifford_unitary_realises_map(d):
    for cmap in symplectic_group(d):
        U = cmap.unitary
        assert np.allclose(U.conj().T @ U, np.eye(d))
        for a in range(d):
            for b in range(d):
                p = PauliElement(d, 1, 0, (a,), (b,))
                img = cmap.conjugate(p, 1)
                assert np.allclose(U @ p.to_matrix() @ U.conj().T, img.to_matrix())


def test_from_matrix_round_trip():
    for cmap in symplectic_group(3):
        assert LocalCliffordMap.from_matrix(cmap.matrix, 3) == cmap
