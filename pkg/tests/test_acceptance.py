"""The twelve acceptance criteria, each at its stated tolerance and time budget."""

import functools
import time
from itertools import combinations

import numpy as np
import pytest

from conftest import ACCEPTANCE_LINES, random_unitary
from qtransversal import catalog, structure, sweeps, unitary
from qtransversal.stabilizer import (
    check_codeword,
    css_codewords,
    partial_trace,
    projector,
    reduced_projector,
)


def criterion(number, summary, budget=None):
    """Record one pass/fail line per criterion and enforce its time budget."""

    def wrap(fn):
        @functools.wraps(fn)
        def run(*args, **kwargs):
            t0 = time.perf_counter()
            try:
                fn(*args, **kwargs)
                elapsed = time.perf_counter() - t0
                if budget is not None:
                    assert elapsed < budget, f"took {elapsed:.1f}s, budget {budget}s"
            except BaseException as exc:
                elapsed = time.perf_counter() - t0
                ACCEPTANCE_LINES.append(f"criterion {number}: FAIL  {summary} ({elapsed:.1f}s): {exc}")
                print(ACCEPTANCE_LINES[-1])
                raise
            ACCEPTANCE_LINES.append(f"criterion {number}: PASS  {summary} ({elapsed:.1f}s)")
            print(ACCEPTANCE_LINES[-1])

        return run

    return wrap


def qubit_corpus_reports(families):
    reps = [sweeps.verify_lemmas(2, n, exhaustive=True, families=families) for n in (1, 2, 3, 4)]
    reps.append(sweeps.verify_lemmas(2, 5, samples=1000, seed=2024, families=families))
    return sweeps.merge_reports(reps)


@criterion(1, "minimal subcodes: A_omega in {1,3}, A_omega=3 => |omega| even", budget=120)
def test_criterion_01_minimal_subcode_sizes():
    rep = qubit_corpus_reports(("minimal",))
    assert rep["groups_tested"] == 3 + 30 + 513 + 19380 + 1000
    assert rep["lemmas"]["minimal_subcode_size"]["violations"] == 0


@criterion(2, "single-qubit subgroup indices in {1,2,4}", budget=60)
def test_criterion_02_qubit_indices():
    rep = qubit_corpus_reports(("index",))
    assert rep["lemmas"]["qubit_index"]["checked"] == 20926
    assert rep["lemmas"]["qubit_index"]["violations"] == 0


@criterion(3, "single-qudit subgroup indices <= d^2 for d in {3,4,6}, n <= 3", budget=120)
def test_criterion_03_qudit_indices():
    for d in (3, 4, 6):
        for n in (1, 2, 3):
            rep = sweeps.verify_lemmas(d, n, samples=500, seed=100 * d + n, families=("index",))
            assert rep["groups_tested"] == 500
            assert rep["lemmas"]["qudit_index"]["violations"] == 0, (d, n)


@criterion(4, "Pi index d^2 instances with confirmed full-support structure", budget=30)
def test_criterion_04_pi_instances():
    pi = structure.pi_subgroup(catalog.code_422().stabilizer)
    assert (pi.index, pi.tag, pi.confirmed) == (4, "[2m,2m-2,2]", True)
    for d, n in [(2, 4), (3, 3), (4, 4)]:
        pi = structure.pi_subgroup(catalog.pair_code(d, n).stabilizer)
        assert pi.index == d * d and pi.confirmed, (d, n)
        assert pi.details["full_support"] and pi.details["pairwise_distinct"]


@criterion(5, "Steane: 7 minimal supports, bitwise H and P, logical H, all Clifford", budget=30)
def test_criterion_05_steane():
    spec = catalog.steane()
    S = spec.stabilizer
    mins = structure.minimal_supports(S)
    assert len(mins) == 7 and all(len(w) == 4 for w in mins)
    assert all(structure.a_omega(S, w) == 3 for w in mins)
    H, P = unitary.named_gate("H"), unitary.named_gate("P")
    for U in (H, P):
        res = unitary.preserves_code(unitary.TransversalGate.bitwise(U, 7), spec)
        assert res.residual < 1e-9
    M = unitary.logical_action(unitary.TransversalGate.bitwise(H, 7), spec)
    assert unitary.phase_distance(M, H) < 1e-8
    assert {c.cls for c in structure.classify_all(S)} == {"Clifford"}


@criterion(6, "Shor: exp(i theta Z) x exp(-i theta Z) preserved with logical identity", budget=60)
def test_criterion_06_shor():
    spec = catalog.shor()
    P = projector(spec.stabilizer)
    for theta in (0.3, 1.1):
        gate = unitary.TransversalGate.local(
            9, {1: unitary.z_rotation(theta), 2: unitary.z_rotation(-theta)}
        )
        res = unitary.preserves_code(gate, spec)
        assert res.residual < 1e-9
        # dense 512 x 512 cross-check
        D = unitary.dense_transversal(gate)
        assert np.linalg.norm(D @ P @ D.conj().T - P) < 1e-9
        M = unitary.logical_action(gate, spec)
        assert unitary.phase_distance(M, np.eye(2)) < 1e-8
    cons = structure.classify_all(spec.stabilizer)
    assert len(cons) == 9
    assert all(c.cls == "GeneralizedSemiClifford" and c.label == "Z" for c in cons)


@criterion(7, "[[15,1,3]]: 16-term codewords, bitwise T-dagger acts as logical T", budget=60)
def test_criterion_07_rm15():
    spec = catalog.rm15()
    C = css_codewords(spec)
    assert C.shape[1] == 2
    for v in C.T:
        assert np.count_nonzero(np.abs(v) > 1e-12) == 16
        assert check_codeword(spec.stabilizer, v) < 1e-10
    gate = unitary.TransversalGate.bitwise(unitary.named_gate("Tdag"), 15)
    assert unitary.preserves_code(gate, spec).residual < 1e-9
    M = unitary.logical_action(gate, spec)
    assert unitary.phase_distance(M, unitary.named_gate("T")) < 1e-8


@criterion(8, "Bell pair: U x conj(U) preserved; Bell factor found in Bell x Steane", budget=30)
def test_criterion_08_bell():
    rng = np.random.default_rng(8)
    bell = catalog.bell()
    for _ in range(20):
        U = random_unitary(2, rng)
        gate = unitary.TransversalGate(2, 1, [U, U.conj()])
        assert unitary.preserves_code(gate, bell).residual < 1e-9
    code = catalog.tensor_codes(bell, catalog.steane())
    rep = structure.detect_degenerate_factors(code.stabilizer)
    assert rep.bell_pairs == [(1, 2)]


@criterion(9, "classifier truth table and bitwise T on Steane rejected", budget=10)
def test_criterion_09_truth_table():
    assert unitary.classify_unitary(unitary.named_gate("H"), 2).cls == "Clifford"
    t = unitary.classify_unitary(unitary.named_gate("T"), 2)
    assert t.cls == "SemiClifford" and t.cls != "Clifford" and t.witness_labels == ["Z"]
    rot = unitary.axis_rotation(np.ones(3) / np.sqrt(3), 0.3)
    assert unitary.classify_unitary(rot, 2).cls == "General"
    res = unitary.preserves_code(unitary.TransversalGate.bitwise(unitary.named_gate("T"), 7),
                                 catalog.steane())
    assert not res.preserved and res.residual > 0.1


@criterion(10, "negative control: Z rotations by pi/8, pi/5 never preserve [[5,1,3]] or Steane",
           budget=60)
def test_criterion_10_negative_control():
    false_positives = []
    for spec in (catalog.code_513(), catalog.steane()):
        n = spec.n
        for theta in (np.pi / 8, np.pi / 5):
            R = unitary.z_rotation(theta)
            gates = [unitary.TransversalGate.local(n, {j: R}) for j in range(1, n + 1)]
            gates.append(unitary.TransversalGate.bitwise(R, n))
            for g in gates:
                if unitary.preserves_code(g, spec).preserved:
                    false_positives.append((spec.name, theta))
    assert false_positives == []


@criterion(11, "automorphisms: 513 cyclic shift, Bell swap, Steane non-automorphism", budget=30)
def test_criterion_11_automorphisms():
    eye = np.eye(2)
    assert unitary.check_code_automorphism(
        unitary.TransversalGate.bitwise(eye, 5), [2, 3, 4, 5, 1], catalog.code_513()).preserved
    assert unitary.check_code_automorphism(
        unitary.TransversalGate.bitwise(eye, 2), [2, 1], catalog.bell()).preserved
    steane = catalog.steane()
    rng = np.random.default_rng(11)
    while True:
        perm = [int(x) + 1 for x in rng.permutation(7)]
        if not np.array_equal(structure.permute_group(steane.stabilizer, perm).keys,
                              steane.stabilizer.keys):
            break
    res = unitary.check_code_automorphism(unitary.TransversalGate.bitwise(eye, 7), perm, steane)
    assert not res.preserved


@criterion(12, "reduced projector equals the dense partial trace for |omega| <= 3")
def test_criterion_12_cross_oracle():
    checked = 0
    for spec in catalog.all_codes():
        S = spec.stabilizer
        if S.d**S.n > 512:
            continue
        P = projector(S)
        for w in range(1, min(3, S.n) + 1):
            for omega in combinations(range(1, S.n + 1), w):
                ref = partial_trace(P, omega, S.d, S.n)
                assert np.abs(reduced_projector(S, omega) - ref).max() < 1e-10, (spec.name, omega)
                checked += 1
    # bell, 422, 513, steane, shor
    assert checked == 3 + 14 + 25 + 63 + 129
