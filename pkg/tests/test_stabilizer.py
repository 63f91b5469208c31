from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qtransversal import catalog, sweeps
from qtransversal.errors import ResourceError, ValidationError
from qtransversal.pauli import PauliElement
from qtransversal.stabilizer import (
    StabilizerGroup,
    centralizer,
    check_codeword,
    code_basis,
    codewords,
    css_codewords,
    from_labels,
    logical_basis,
    logical_operators,
    partial_trace,
    projector,
    reduced_projector,
    subcode_projector,
)

ORDERS = {"bell": 4, "422": 4, "513": 16, "steane": 64, "shor": 256, "rm15": 16384}


@pytest.mark.parametrize("name", list(ORDERS))
def test_catalog_orders(name):
    assert catalog.get(name).stabilizer.order == ORDERS[name]


def test_catalog_parameters():
    assert [catalog.get(n).k for n in ORDERS] == [0, 2, 1, 1, 1, 1]
    with pytest.raises(ValidationError, match="available"):
        catalog.get("surface")


def test_non_commuting_generators_rejected_with_witness():
    with pytest.raises(ValidationError) as exc:
        from_labels(["XI", "ZI"])
    assert {g.label() for g in exc.value.witness} == {"XI", "ZI"}


def test_xz_zx_commute():
    # two anticommuting positions cancel
    S = from_labels(["XZ", "ZX"])
    assert S.order == 4
    assert S.contains(PauliElement.from_label("YY"))


def test_phased_identity_rejected():
    with pytest.raises(ValidationError, match="phased identity"):
        from_labels(["XX", "-XX"])
    with pytest.raises(ValidationError, match="phased identity"):
        # (w1 X)^3 = tau^3 I = -I for d=3
        StabilizerGroup([PauliElement(3, 1, 1, (1,), (0,))])


def test_enumeration_bound():
    spec = catalog.steane()
    small = StabilizerGroup(spec.stabilizer.generators, max_elements=16)
    assert not small.enumerable
    with pytest.raises(ResourceError):
        small.elements()


def random_groups(d, n, count, seed):
    return list(sweeps.random_corpus(d, n, count, seed))


@pytest.mark.parametrize("d,n", [(2, 3), (3, 2), (4, 2), (6, 2)])
def test_projector_is_idempotent_with_trace_dimension(d, n):
    for S in random_groups(d, n, 15, seed=d * 10 + n):
        P = projector(S)
        assert np.allclose(P @ P, P, atol=1e-12)
        assert np.allclose(P, P.conj().T)
        assert np.isclose(np.trace(P).real, d**n / S.order)
        for g in S.generators:
            assert np.allclose(g.to_matrix() @ P, P)


@pytest.mark.parametrize("d,n", [(2, 4), (3, 3), (6, 2)])
def test_reduced_projector_is_partial_trace(d, n):
    for S in random_groups(d, n, 8, seed=7):
        P = projector(S)
        for w in range(1, n):
            for omega in combinations(range(1, n + 1), w):
                ref = partial_trace(P, omega, d, n)
                assert np.allclose(reduced_projector(S, omega), ref, atol=1e-10)
                rho = subcode_projector(S, omega)
                assert np.allclose(rho @ rho, rho, atol=1e-12)


def test_partial_trace_of_product_state():
    a = np.array([[0.75, 0.1], [0.1, 0.25]])
    b = np.diag([0.5, 0.5])
    c = np.array([[1, 0], [0, 0]])
    rho = np.kron(np.kron(a, b), c)
    assert np.allclose(partial_trace(rho, [1], 2, 3), a)
    assert np.allclose(partial_trace(rho, [1, 3], 2, 3), np.kron(a, c))


@pytest.mark.parametrize("name", ["bell", "422", "513", "steane", "shor"])
def test_centralizer_methods_agree(name):
    S = catalog.get(name).stabilizer
    scan, snf = centralizer(S, "scan"), centralizer(S, "snf")
    assert scan.size == snf.size
    assert scan.check_size(S)
    for g in snf.generators:
        assert all(g.commutes_with(s) for s in S.generators)


@pytest.mark.parametrize("d,n", [(4, 2), (6, 2)])
def test_centralizer_composite_d(d, n):
    for S in random_groups(d, n, 10, seed=3):
        assert centralizer(S, "scan").size == centralizer(S, "snf").size
        assert centralizer(S).check_size(S)


@pytest.mark.parametrize("name", ["bell", "422", "513", "steane", "shor"])
def test_code_bases_are_stabilized_and_orthonormal(name):
    spec = catalog.get(name)
    for C in (code_basis(spec), logical_basis(spec)):
        assert C.shape[1] == 2**spec.k
        assert np.allclose(C.conj().T @ C, np.eye(C.shape[1]), atol=1e-12)
        for v in C.T:
            assert check_codeword(spec.stabilizer, v) < 1e-10


def test_orbit_codewords_span_the_css_codespace():
    spec = catalog.steane()
    A, B = codewords(spec.stabilizer), css_codewords(spec)
    assert np.allclose(A @ A.conj().T, B @ B.conj().T, atol=1e-12)


def test_steane_zero_is_even_hamming_words():
    zero = css_codewords(catalog.steane(), logical_index=0)
    support = np.nonzero(np.abs(zero) > 1e-12)[0]
    assert len(support) == 8
    assert all(bin(int(x)).count("1") % 2 == 0 for x in support)


def test_shor_cat_state_is_a_codeword():
    cat = np.zeros(8)
    cat[0] = cat[7] = 1 / np.sqrt(2)
    ref = np.kron(np.kron(cat, cat), cat)
    L = logical_basis(catalog.shor())
    assert np.linalg.norm(L @ (L.conj().T @ ref)) == pytest.approx(1, abs=1e-12)
    # coset sums label by the Z-type logical, so the cat product is |+>
    plus = (L[:, 0] + L[:, 1]) / np.sqrt(2)
    assert abs(np.vdot(ref, plus)) == pytest.approx(1, abs=1e-12)


@pytest.mark.parametrize("name", ["422", "513", "steane", "shor"])
def test_logical_operators_pair_up(name):
    spec = catalog.get(name)
    protected, gauge = logical_operators(spec)
    assert len(protected) == spec.k and not gauge
    S = spec.stabilizer
    for i, (X, Z) in enumerate(protected):
        assert all(X.commutes_with(g) and Z.commutes_with(g) for g in S.generators)
        assert not S.contains(X) and not S.contains(Z)
        for j, (X2, Z2) in enumerate(protected):
            assert X.commutes_with(X2) and Z.commutes_with(Z2)
            assert (Z.commutation_exponent(X2) != 0) == (i == j)


def test_gauge_pairs_for_subsystem_code():
    # Bacon-Shor style [[4,1,2]] with one gauge qubit
    S = from_labels(["XXXX", "ZZZZ"])
    from qtransversal.stabilizer import CodeSpec

    spec = CodeSpec("bs4", S, gauge=[PauliElement.from_label("XXII"), PauliElement.from_label("ZIZI")],
                    k=1, gauge_count=1)
    protected, gauge = logical_operators(spec)
    assert len(protected) == 1 and len(gauge) == 1
    gx, gz = gauge[0]
    assert not gx.commutes_with(gz)
    for X, Z in protected:
        assert X.commutes_with(gx) and X.commutes_with(gz)
    with pytest.raises(ValidationError):
        CodeSpec("bad", S, gauge=[PauliElement.from_label("XIII")])


@given(st.integers(0, 10**6))
@settings(max_examples=20, deadline=None)
def test_contains_and_index(seed):
    S = random_groups(3, 2, 1, seed)[0]
    for i in range(S.order):
        e = S.element(i)
        assert S.contains(e)
        assert S.index_of(e) == i
        assert not S.contains(e.with_phase(e.phase + 2))
