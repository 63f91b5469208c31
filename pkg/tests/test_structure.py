import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qtransversal import catalog, structure, sweeps
from qtransversal.errors import ValidationError
from qtransversal.pauli import PauliElement
from qtransversal.stabilizer import StabilizerGroup, from_labels


def brute_minimal(S):
    supports = {e.support() for e in S.elements() if e.support()}
    return sorted(w for w in supports if not any(set(v) < set(w) for v in supports))


@given(st.integers(0, 10**6), st.sampled_from([(2, 4), (3, 3), (4, 2), (6, 2)]))
@settings(max_examples=40, deadline=None)
def test_minimal_supports_match_brute_force(seed, dn):
    S = next(sweeps.random_corpus(*dn, 1, seed))
    assert structure.minimal_supports(S) == brute_minimal(S)


def _check_minimal_masks(S, mins):
    masks = np.unique(S.masks[S.masks != 0])
    m = np.array(mins)
    # every support contains some minimal one, and nothing lies strictly inside a minimal one
    assert ((masks[:, None] & m[None, :]) == m[None, :]).any(axis=1).all()
    inside = ((masks[:, None] & ~m[None, :]) == 0) & (masks[:, None] != m[None, :])
    assert not inside.any()


def test_minimal_supports_rm15():
    S = catalog.rm15().stabilizer
    mins = structure.minimal_masks(S)
    assert len(mins) == 385
    _check_minimal_masks(S, mins)


def test_minimal_supports_subset_sum_path():
    # 8192 elements with distinct supports exceed the pairwise threshold
    rng = np.random.default_rng(5)
    rows = rng.integers(0, 2, size=(13, 16))
    gens = [PauliElement(2, 16, 0, (0,) * 16, tuple(r)) for r in rows]
    S = StabilizerGroup(gens)
    assert len(np.unique(S.masks)) > 4096
    _check_minimal_masks(S, structure.minimal_masks(S))


def test_steane_minimal_subcodes():
    S = catalog.steane().stabilizer
    mins = structure.minimal_supports(S)
    assert len(mins) == 7 and all(len(w) == 4 for w in mins)
    for w in mins:
        info = structure.classify_minimal_subcode(S, w)
        assert info.a_omega == 3 and info.n_g == 2 and info.form == "<X,Z>"
        assert info.normalization is not None


def test_shor_minimal_supports_are_pairs():
    S = catalog.shor().stabilizer
    mins = structure.minimal_supports(S)
    assert len(mins) == 9 and all(len(w) == 2 for w in mins)
    assert all(structure.a_omega(S, w) == 1 for w in mins)


def test_a_omega_rejects_non_minimal():
    S = catalog.steane().stabilizer
    with pytest.raises(ValidationError):
        structure.a_omega(S, (1, 2, 3, 4, 5, 6, 7))


@pytest.mark.parametrize("pairs,d,expected", [
    ([(0, 2)], 4, (1, "<Z^2>", (2,))),
    ([(1, 0), (0, 1)], 3, (2, "<X,Z>", (1, 1))),
    ([(2, 0), (0, 2)], 4, (2, "<X^2,Z^2>", (2, 2))),
    ([(1, 1)], 2, (1, "<Z>", (1,))),
    ([], 3, (0, "<I>", ())),
])
def test_subgroup_form(pairs, d, expected):
    assert structure.subgroup_form(pairs, d) == expected


@given(st.integers(0, 10**6), st.sampled_from([(3, 3), (4, 3), (6, 2)]))
@settings(max_examples=30, deadline=None)
def test_qudit_element_orders_equal(seed, dn):
    S = next(sweeps.random_corpus(*dn, 1, seed))
    for w in structure.minimal_supports(S):
        assert structure.element_orders_equal(S, w)
        info = structure.classify_minimal_subcode(S, w)
        assert info.count + 1 == len(structure.local_closure(
            [e.local(w[0]) for e in info.elements], S.d))


def test_find_local_map():
    cmap = structure.find_local_map([(1, 0), (0, 1)], [(0, 1), (2, 0)], 3)
    assert cmap is not None
    X = PauliElement(3, 1, 0, (1,), (0,))
    assert cmap.conjugate(X, 1).key == (0, 1)
    # X and X^2 cannot both go to Z
    assert structure.find_local_map([(1, 0), (2, 0)], [(0, 1), (0, 1)], 3) is None


CLASSES = {
    "steane": {"Clifford"},
    "513": {"Clifford"},
    "422": {"Clifford"},
    "shor": {"GeneralizedSemiClifford"},
    "rm15": {"SemiClifford"},
}


@pytest.mark.parametrize("name", list(CLASSES))
def test_catalog_coordinate_classes(name):
    cons = structure.classify_all(catalog.get(name).stabilizer)
    assert {c.cls for c in cons} == CLASSES[name]
    assert [c.j for c in cons] == list(range(1, len(cons) + 1))
    if name in ("shor", "rm15"):
        assert {c.label for c in cons} == {"Z"}


def test_uncovered_coordinate_paths():
    c = structure.classify_coordinate(from_labels(["IZZ", "ZXX"]), 1)
    assert (c.cls, c.coverage, c.label) == ("GeneralizedSemiClifford", "single-qudit-subgroup", "Z")
    S = from_labels(["IIZZ", "IZXX"])
    c = structure.classify_coordinate(S, 2)
    assert (c.cls, c.coverage, c.label) == ("GeneralizedSemiClifford", "restricted-minimal", "Z")
    assert structure.restricted_minimal_supports(S, 2) == [(2, 3, 4)]
    assert structure.restricted_minimal_claim(S, 2) == (True, None)


def test_unsupported_and_trivial_coordinates():
    cons = structure.classify_all(from_labels(["IIZ"]))
    assert [c.cls for c in cons] == ["Unconstrained", "Unconstrained", "GeneralizedSemiClifford"]
    assert cons[2].degenerate == "trivial-qudit"


def test_qudit_class_names():
    cons = structure.classify_all(catalog.pair_code(3, 3).stabilizer)
    assert {c.cls for c in cons} == {"Clifford"}
    S = next(sweeps.random_corpus(3, 3, 1, seed=11))
    names = {c.cls for c in structure.classify_all(S)}
    assert names <= {"Clifford", "SubgroupInvariant", "SpanInvariant", "Unconstrained"}


def test_single_qudit_subgroups_and_pi():
    S = catalog.code_422().stabilizer
    assert [structure.single_qudit_subgroup(S, i).index for i in range(1, 5)] == [4] * 4
    pi = structure.pi_subgroup(S)
    assert (pi.index, pi.tag, pi.confirmed) == (4, "[2m,2m-2,2]", True)
    pi = structure.pi_subgroup(catalog.steane().stabilizer)
    assert (pi.index, pi.tag, pi.order) == (1, "trivial", 64)


@pytest.mark.parametrize("d,n", [(2, 4), (3, 3), (4, 4), (3, 6), (2, 6)])
def test_pair_codes_have_index_d_squared(d, n):
    S = catalog.pair_code(d, n).stabilizer
    pi = structure.pi_subgroup(S)
    assert pi.index == d * d and pi.confirmed
    assert pi.details["local_clifford_to_pair_form"]


def test_qutrit_bell_pair_is_not_locally_the_pair_form():
    # <XX, Z Z^-1>: index 9 and full support, but the local symplectic values differ
    pi = structure.pi_subgroup(catalog.bell(3).stabilizer)
    assert pi.index == 9 and pi.confirmed
    assert structure.local_symplectic_values(catalog.bell(3).stabilizer) in ([2, 1], [1, 2])
    assert not pi.details["local_clifford_to_pair_form"]


def test_degenerate_factor_detection():
    code = catalog.tensor_codes(catalog.bell(), catalog.steane())
    rep = structure.detect_degenerate_factors(code.stabilizer)
    assert rep.bell_pairs == [(1, 2)]
    assert not rep.trivial_qudits and not rep.unsupported
    cons = structure.classify_all(code.stabilizer)
    assert [c.degenerate for c in cons[:2]] == ["bell-pair", "bell-pair"]
    assert {c.cls for c in cons[2:]} == {"Clifford"}
    assert structure.detect_degenerate_factors(catalog.steane().stabilizer).clean


def test_permute_group():
    S = catalog.code_513().stabilizer
    T = structure.permute_group(S, [2, 3, 4, 5, 1])
    assert np.array_equal(S.keys, T.keys)
    U = structure.permute_group(catalog.steane().stabilizer, [2, 1, 3, 4, 5, 6, 7])
    assert not np.array_equal(U.keys, catalog.steane().stabilizer.keys)
