"""Corpus sweeps that check the structural lemmas on many stabilizer groups.

The qubit corpus for ``n <= 4`` is exhaustive: every isotropic subspace of
``GF(2)^{2n}`` (every dimension), presented by Hermitian generators.
Random corpora draw generator lists uniformly and keep those that pass
validation (commuting, no phased identity).
"""

import numpy as np

from .errors import ValidationError
from .pauli import PauliElement
from .stabilizer import StabilizerGroup
from . import structure

MAX_COUNTEREXAMPLES = 5


# corpora ------------------------------------------------------------------------


def _symp_bits(u, v, n):
    mask = (1 << n) - 1
    ua, ub = u >> n, u & mask
    va, vb = v >> n, v & mask
    return bin((ua & vb) ^ (ub & va)).count("1") & 1


def isotropic_subspaces(n):
    """All nonzero isotropic subspaces of ``GF(2)^{2n}`` as reduced bases.

    Vectors are ``2n``-bit integers ``(a << n) | b``.  A subspace is stored
    by its reduced echelon basis, which is canonical.  Extending it by a
    vector that is zero on every pivot bit picks one representative per
    coset, so each extension is tried once.
    """
    total = (1 << (2 * n)) - 1
    level = {()}
    out = []
    while True:
        nxt = set()
        for basis in level:
            pivots = 0
            for u in basis:
                pivots |= 1 << (u.bit_length() - 1)
            free = total & ~pivots
            v = free
            while v:
                if not any(_symp_bits(v, u, n) for u in basis):
                    top = 1 << (v.bit_length() - 1)
                    reduced = tuple(sorted([u ^ v if u & top else u for u in basis] + [v]))
                    nxt.add(reduced)
                v = (v - 1) & free
        if not nxt:
            break
        level = nxt
        out.extend(sorted(level))
    return [list(b) for b in out]


def _bits_to_pauli(v, n):
    a = tuple((v >> (2 * n - 1 - i)) & 1 for i in range(n))
    b = tuple((v >> (n - 1 - i)) & 1 for i in range(n))
    return PauliElement.weyl(2, a, b)


def exhaustive_qubit_corpus(n):
    for basis in isotropic_subspaces(n):
        yield StabilizerGroup([_bits_to_pauli(v, n) for v in basis])


def random_corpus(d, n, samples, seed=0, max_generators=None):
    """``samples`` random valid groups (rejection sampling on generator lists)."""
    rng = np.random.default_rng(seed)
    top = max_generators or n
    produced, attempts = 0, 0
    while produced < samples:
        attempts += 1
        if attempts > 200 * samples + 1000:
            raise RuntimeError("rejection sampling is not producing valid groups")
        k = int(rng.integers(1, top + 1))
        vecs = rng.integers(0, d, size=(k, 2 * n))
        vecs = vecs[vecs.any(axis=1)]
        if len(vecs) == 0:
            continue
        # for d > 2 also draw a root-of-unity prefactor omega**m per generator
        shifts = rng.integers(0, d, size=len(vecs)) if d > 2 else np.zeros(len(vecs), int)
        gens = []
        for v, m in zip(vecs, shifts):
            base = PauliElement.weyl(d, tuple(int(x) for x in v[:n]), tuple(int(x) for x in v[n:]))
            gens.append(base.with_phase(base.phase + 2 * int(m)))
        try:
            S = StabilizerGroup(gens)
        except ValidationError:
            continue
        produced += 1
        yield S


# checks -------------------------------------------------------------------------


FAMILIES = ("minimal", "index", "pi", "restricted_minimal")


def check_group(S, families=FAMILIES):
    """Lemma verdicts for one group: ``{name: (ok, detail)}``.

    ``families`` selects which checks run: ``"minimal"`` (minimal-subcode
    sizes for qubits, equal element orders otherwise), ``"index"``
    (single-qudit subgroup indices), ``"pi"`` (index and structure of
    ``Pi``) and ``"restricted_minimal"`` (distinct restrictions in ``M_j`` for
    coordinates outside every minimal support).
    """
    d, n = S.d, S.n
    out = {}
    minimal = None
    if "minimal" in families or "restricted_minimal" in families:
        minimal = structure.minimal_supports(S)
    if "minimal" in families:
        if d == 2:
            bad = None
            for w in minimal:
                a = structure.a_omega(S, w)
                if a not in (1, 3) or (a == 3 and len(w) % 2):
                    bad = (w, a)
                    break
            out["minimal_subcode_size"] = (bad is None, bad)
        else:
            bad = next((w for w in minimal if not structure.element_orders_equal(S, w)), None)
            out["equal_orders"] = (bad is None, bad)
    if "index" in families:
        indices = [S.order // int(structure.single_qudit_rows(S, i).sum()) for i in range(1, n + 1)]
        allowed = (lambda x: x in (1, 2, 4)) if d == 2 else (lambda x: x <= d * d)
        bad = next((i for i, x in enumerate(indices, 1) if not allowed(x)), None)
        out["qubit_index" if d == 2 else "qudit_index"] = (
            bad is None, None if bad is None else (bad, indices[bad - 1])
        )
    if "pi" in families:
        pi = structure.pi_subgroup(S)
        ok = pi.index <= d * d and (d != 2 or pi.index in (1, 2, 4))
        if pi.index == d * d:
            ok = ok and bool(pi.confirmed)
        out["qubit_pi" if d == 2 else "qudit_pi"] = (ok, None if ok else (pi.index, pi.details))
        if d > 2 and pi.index == d * d:
            out["pi_local_clifford_form"] = (
                bool(pi.details.get("local_clifford_to_pair_form")), None
            )
    if "restricted_minimal" in families:
        covered = set(c for w in minimal for c in w)
        bad = None
        for j in range(1, n + 1):
            if j in covered:
                continue
            holds, wit = structure.restricted_minimal_claim(S, j)
            if not holds:
                bad = (j, [e.label() for e in wit])
                break
        out["restricted_minimal"] = (bad is None, bad)
    return out


INFORMATIONAL = {"pi_local_clifford_form"}


def run_sweep(groups, d, n, mode, families=FAMILIES):
    counts = {}
    violations = {}
    examples = {}
    info = {}
    tested = 0
    for S in groups:
        tested += 1
        for name, (ok, detail) in check_group(S, families).items():
            if name in INFORMATIONAL:
                tally = info.setdefault(name, {"instances": 0, "holds": 0})
                tally["instances"] += 1
                tally["holds"] += int(ok)
                continue
            counts[name] = counts.get(name, 0) + 1
            if not ok:
                violations[name] = violations.get(name, 0) + 1
                ex = examples.setdefault(name, [])
                if len(ex) < MAX_COUNTEREXAMPLES:
                    ex.append({"generators": [g.label() for g in S.generators],
                               "detail": _jsonable(detail)})
    lemmas = {}
    for name in counts:
        lemmas[name] = {"checked": counts[name], "violations": violations.get(name, 0)}
        if name in examples:
            lemmas[name]["counterexamples"] = examples[name]
    report = {"d": d, "n": n, "mode": mode, "groups_tested": tested, "lemmas": lemmas}
    if info:
        report["informational"] = info
    report["total_violations"] = sum(violations.values())
    return report


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.bool_,)):
        return bool(x)
    return x


def verify_lemmas(d, n, exhaustive=False, samples=None, seed=0, families=FAMILIES):
    """Sweep the lemma checks over a corpus and return a JSON-ready report."""
    if exhaustive:
        if d != 2 or n > 4:
            raise ValidationError("exhaustive mode is only available for d=2, n<=4")
        rep = run_sweep(exhaustive_qubit_corpus(n), d, n, "exhaustive", families)
    else:
        if not samples or samples < 1:
            raise ValidationError("give a positive sample count or use exhaustive mode")
        corpus = random_corpus(d, n, samples, seed)
        rep = run_sweep(corpus, d, n, f"samples({samples})", families)
        rep["seed"] = seed
    return rep


def merge_reports(reports):
    """Combine sweep reports into per-lemma totals."""
    lemmas = {}
    for rep in reports:
        for name, entry in rep["lemmas"].items():
            tot = lemmas.setdefault(name, {"checked": 0, "violations": 0})
            tot["checked"] += entry["checked"]
            tot["violations"] += entry["violations"]
    return {
        "groups_tested": sum(r["groups_tested"] for r in reports),
        "lemmas": lemmas,
        "total_violations": sum(r["total_violations"] for r in reports),
    }
