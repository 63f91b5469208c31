"""Minimal supports, single-qudit subgroups and per-coordinate gate constraints.

Everything here is a scan over the cached element stack of a
:class:`~qtransversal.stabilizer.StabilizerGroup`.  Single-coordinate
restrictions are handled modulo phases, i.e. as elements ``(a, b)`` of
``Z_d x Z_d``.
"""

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from . import linalg
from .errors import ResourceError, ValidationError
from .pauli import LocalCliffordMap, PauliElement, symplectic_group
from .stabilizer import (
    StabilizerGroup,
    _keys,
    mask_to_support,
    restricted_rows,
    support_to_mask,
)

LC_SEARCH_MAX_D = 6
DP_MAX_N = 24

# coordinate classes
CLIFFORD = "Clifford"
SEMI_CLIFFORD = "SemiClifford"
GENERALIZED_SEMI_CLIFFORD = "GeneralizedSemiClifford"
SUBGROUP_INVARIANT = "SubgroupInvariant"
SPAN_INVARIANT = "SpanInvariant"
UNCONSTRAINED = "Unconstrained"


# local subgroups of Z_d x Z_d ---------------------------------------------------


def local_closure(pairs, d):
    """Subgroup of ``Z_d^2`` generated by ``pairs`` as a sorted tuple."""
    group = {(0, 0)}
    for a, b in pairs:
        a, b = int(a) % d, int(b) % d
        if (a, b) in group:
            continue
        new = set(group)
        frontier = set(group)
        while frontier:
            nxt = {((x + a) % d, (y + b) % d) for x, y in frontier} - new
            new |= nxt
            frontier = nxt
        group = new
    return tuple(sorted(group))


def subgroup_form(pairs, d):
    """Normal form of the subgroup generated by ``pairs`` under ``GL(2, Z)``.

    Returns ``(n_g, tag, m)``: ``n_g`` in ``{0, 1, 2}`` generators,
    ``tag`` like ``"<Z^2>"`` or ``"<X,Z>"`` and the exponents ``m``
    (``(m,)`` or ``(m1, m2)``, each dividing ``d``).
    """
    rows = [list(p) for p in pairs if (p[0] % d, p[1] % d) != (0, 0)]
    if not rows:
        return 0, "<I>", ()
    M = np.array(rows + [[d, 0], [0, d]], dtype=object)
    D = linalg.smith_normal_form(M)[0]
    e1, e2 = int(D[0, 0]), int(D[1, 1])

    def power(letter, m):
        return letter if m == 1 else f"{letter}^{m}"

    if e2 == d:
        return 1, f"<{power('Z', e1)}>", (e1,)
    return 2, f"<{power('X', e1)},{power('Z', e2)}>", (e1, e2)


def pauli_name(pair, d):
    a, b = pair
    if d == 2:
        return "IXZY"[a + 2 * b]
    return f"x{a}z{b}"


def subgroup_label(elements, d):
    """Readable label of a local subgroup (qubit letters, or generator form)."""
    nonid = [p for p in elements if p != (0, 0)]
    if d == 2:
        return "".join(sorted(pauli_name(p, d) for p in nonid)) or "I"
    return subgroup_form(nonid, d)[1]


@lru_cache(maxsize=None)
def _symplectic_matrices(d):
    return tuple(g.matrix for g in symplectic_group(d))


def find_local_map(sources, targets, d):
    """A ``LocalCliffordMap`` sending each ``sources[i]`` to ``targets[i]`` (mod phases).

    Brute force over ``SL(2, Z_d)``; returns ``None`` when no map exists or
    ``d`` exceeds the search cap.
    """
    if d > LC_SEARCH_MAX_D:
        return None
    S = np.array(sources, dtype=np.int64).reshape(-1, 2).T
    T = np.array(targets, dtype=np.int64).reshape(-1, 2).T % d
    for L in _symplectic_matrices(d):
        if np.array_equal((L @ S) % d, T):
            return LocalCliffordMap.from_matrix(L, d)
    return None


# minimal supports ----------------------------------------------------------------


def _nonzero_masks(S):
    m = S.masks
    return np.unique(m[m != 0])


def minimal_masks(S):
    """Bitmasks of minimal supports, ascending."""
    uniq = _nonzero_masks(S)
    if len(uniq) == 0:
        return []
    if len(uniq) <= 4096 or S.n > DP_MAX_N:
        keep = np.ones(len(uniq), dtype=bool)
        chunk = 2048
        for s in range(0, len(uniq), chunk):
            block = uniq[s:s + chunk]
            sub = (block[:, None] & uniq[None, :]) == uniq[None, :]
            sub &= block[:, None] != uniq[None, :]
            keep[s:s + chunk] = ~sub.any(axis=1)
        return [int(x) for x in uniq[keep]]
    # sum-over-subsets: below[m] says some support is contained in m
    n = S.n
    below = np.zeros(1 << n, dtype=bool)
    below[uniq] = True
    for i in range(n):
        view = below.reshape(-1, 2, 1 << i)
        view[:, 1, :] |= view[:, 0, :]
    out = []
    for m in uniq:
        m = int(m)
        if not any(below[m ^ (1 << i)] for i in range(n) if m >> i & 1):
            out.append(m)
    return out


def minimal_supports(S):
    """All minimal supports as 1-based tuples, sorted lexicographically."""
    return sorted(mask_to_support(m) for m in minimal_masks(S))


def _omega_rows(S, omega):
    rows = restricted_rows(S, omega)
    return rows & (S.masks != 0)


def _require_minimal(S, omega):
    omega = tuple(sorted(omega))
    rows = _omega_rows(S, omega)
    if not rows.any():
        raise ValidationError(f"{omega} is not a support of any stabilizer element")
    if np.any(S.masks[rows] != support_to_mask(omega)):
        raise ValidationError(f"{omega} is not a minimal support", witness=omega)
    return omega, rows


def a_omega(S, omega):
    """Number of nonidentity elements of ``S`` supported inside a minimal ``omega``."""
    if S.d != 2:
        raise ValidationError("A_omega is defined for qubits; use classify_minimal_subcode")
    _, rows = _require_minimal(S, omega)
    return int(rows.sum())


@dataclass
class MinimalSubcodeInfo:
    omega: tuple
    d: int
    count: int
    n_g: int
    form: str
    m: tuple
    order: int
    elements: list
    normalization: tuple = None

    @property
    def a_omega(self):
        return self.count if self.d == 2 else None

    def as_dict(self):
        out = {"omega": list(self.omega), "count": self.count}
        if self.d == 2:
            out["A_omega"] = self.count
        out.update(n_g=self.n_g, form=self.form, m=list(self.m), order=self.order)
        out["elements"] = [e.label() for e in self.elements]
        if self.normalization is not None:
            out["normalization"] = [list(c.exponents) for c in self.normalization]
        return out


def classify_minimal_subcode(S, omega):
    """Size, generator count, normal form and element order of ``S_omega``.

    Every restriction map ``S_omega -> Z_d^2`` is injective for a minimal
    support, so the subgroup at the first coordinate describes ``S_omega``.
    ``normalization`` lists per-coordinate local Cliffords making all
    restrictions equal to the first coordinate's, when such maps exist.
    """
    omega, rows = _require_minimal(S, omega)
    d = S.d
    idx = [c - 1 for c in omega]
    A, B = S.A[rows][:, idx], S.B[rows][:, idx]
    first = list(zip(A[:, 0].tolist(), B[:, 0].tolist()))
    n_g, form, m = subgroup_form(first, d)
    order = d // m[0] if m else 1
    norm = []
    gens = _local_generators(first, d)
    for col in range(len(idx)):
        here = dict(zip(first, zip(A[:, col].tolist(), B[:, col].tolist())))
        cmap = find_local_map([here[g] for g in gens], gens, d)
        if cmap is None:
            norm = None
            break
        norm.append(cmap)
    elements = [S.element(i) for i in np.nonzero(rows)[0]]
    return MinimalSubcodeInfo(
        omega, d, int(rows.sum()), n_g, form, m, order, elements,
        tuple(norm) if norm is not None else None,
    )


def _local_generators(pairs, d):
    """Small generating set of the local subgroup spanned by ``pairs``."""
    gens, group = [], {(0, 0)}
    for p in pairs:
        p = (p[0] % d, p[1] % d)
        if p not in group:
            gens.append(p)
            group = set(local_closure(gens, d))
    return gens


def element_orders_equal(S, omega):
    """For each element of ``S_omega`` all single-coordinate factors share one order."""
    _, rows = _require_minimal(S, omega)
    idx = [c - 1 for c in omega]
    d = S.d
    A, B = S.A[rows][:, idx], S.B[rows][:, idx]
    g = np.gcd(np.gcd(A, B), d)
    return bool(np.all(g == g[:, :1]))


# restricted minimal elements ----------------------------------------------------


def restricted_minimal_rows(S, j):
    """Row selector of ``M_j``: elements through ``j`` with no smaller-support element through ``j``."""
    bit = 1 << (j - 1)
    through = (S.masks & bit) != 0
    masks = np.unique(S.masks[through])
    if len(masks) == 0:
        return through
    sub = (masks[:, None] & masks[None, :]) == masks[None, :]
    sub &= masks[:, None] != masks[None, :]
    good = set(int(x) for x in masks[~sub.any(axis=1)])
    return through & np.isin(S.masks, list(good))


def restricted_minimal_elements(S, j):
    rows = restricted_minimal_rows(S, j)
    return [S.element(i) for i in np.nonzero(rows)[0]]


def restricted_minimal_supports(S, j):
    rows = restricted_minimal_rows(S, j)
    return sorted(mask_to_support(m) for m in np.unique(S.masks[rows]))


def restricted_minimal_claim(S, j):
    """Check the restriction property of ``M_j`` at coordinate ``j``.

    Qubits: elements of ``M_j`` with different Paulis at ``j`` have different
    supports.  Qudits: for each support, the Paulis at ``j`` of the ``M_j``
    elements on it generate a proper subgroup of ``Z_d^2`` (powers of one
    element share a support, so distinctness alone cannot hold).

    Returns ``(holds, witness)``; the witness is a list of elements sharing
    one support.
    """
    rows = np.nonzero(restricted_minimal_rows(S, j))[0]
    by_support = {}
    for i in rows:
        by_support.setdefault(int(S.masks[i]), []).append(i)
    for key in sorted(by_support):
        group = by_support[key]
        local = [(int(S.A[i, j - 1]), int(S.B[i, j - 1])) for i in group]
        if S.d == 2:
            first = {}
            for i, loc in zip(group, local):
                if first and loc not in first:
                    other = next(iter(first.values()))
                    return False, [S.element(other), S.element(i)]
                first.setdefault(loc, i)
        elif len(local_closure(local, S.d)) == S.d**2:
            return False, [S.element(i) for i in group]
    return True, None


# single-qudit subgroups and Pi ---------------------------------------------------


@dataclass
class SingleQuditSubgroupInfo:
    i: int
    order: int
    index: int
    support: tuple
    generators: list

    def as_dict(self):
        return {
            "i": self.i, "order": self.order, "index": self.index,
            "support": list(self.support), "generators": [g.label() for g in self.generators],
        }


def single_qudit_rows(S, i):
    return (S.A[:, i - 1] == 0) & (S.B[:, i - 1] == 0)


def single_qudit_subgroup(S, i):
    """``S<i> = {R in S : R acts as identity on i}`` with its index in ``S``."""
    rows = single_qudit_rows(S, i)
    order = int(rows.sum())
    supp = 0
    for m in S.masks[rows]:
        supp |= int(m)
    gens = _group_generators(S, rows)
    return SingleQuditSubgroupInfo(i, order, S.order // order, mask_to_support(supp), gens)


def _span(S, rows):
    """Subgroup of ``S`` generated by the selected rows.

    Returns ``(row selector, generator rows)``.  Keys identify elements of
    ``S`` uniquely (no phased identities), so the closure runs on exponent
    vectors mod ``d`` and ignores phases.  Generators are picked greedily in
    row order.
    """
    d = S.d
    V = np.zeros((1, 2 * S.n), dtype=np.int64)
    have = {0}
    gens = []
    vecs = np.hstack([S.A, S.B])
    for r in np.nonzero(rows)[0] if rows.dtype == bool else rows:
        key = int(S.keys[r])
        if key in have:
            continue
        gens.append(int(r))
        v = vecs[r]
        steps = np.arange(d, dtype=np.int64)[:, None] * v[None, :]
        V = (V[:, None, :] + steps[None, :, :]).reshape(-1, 2 * S.n) % d
        V = np.unique(V, axis=0)
        have = {int(k) for k in _keys(V[:, : S.n], V[:, S.n:], d)}
    selector = np.isin(S.keys, np.array(sorted(have), dtype=S.keys.dtype))
    return selector, gens


def _group_generators(S, rows):
    """Greedy generating subset (as elements) of the subgroup spanned by ``rows``."""
    return [S.element(r) for r in _span(S, rows)[1]]


def local_restrictions(S, j, rows=None):
    """Set of ``(a_j, b_j)`` over the selected rows (all of ``S`` by default)."""
    A, B = S.A[:, j - 1], S.B[:, j - 1]
    if rows is not None:
        A, B = A[rows], B[rows]
    pairs = np.unique(A * S.d + B)
    return tuple((int(p) // S.d, int(p) % S.d) for p in pairs)


@dataclass
class PiInfo:
    order: int
    index: int
    tag: str
    generators: list
    support: tuple
    confirmed: bool = None
    details: dict = field(default_factory=dict)

    def as_dict(self):
        out = {
            "order": self.order, "index": self.index, "tag": self.tag,
            "support": list(self.support), "generators": [g.label() for g in self.generators],
        }
        if self.confirmed is not None:
            out["characterization_confirmed"] = self.confirmed
        out.update(self.details)
        return out


def pi_rows(S):
    """Row selector of ``Pi``, the subgroup generated by all ``S<i>``."""
    union = np.zeros(S.order, dtype=bool)
    for i in range(1, S.n + 1):
        union |= single_qudit_rows(S, i)
    return _span(S, union)[0]


def pi_subgroup(S):
    """``Pi`` with its index in ``S`` and a characterisation tag.

    Tags: ``"trivial"`` (``Pi = S``), ``"coset"`` (proper, index below
    ``d^2``), ``"[2m,2m-2,2]"`` (qubits, index 4) and
    ``"full-support-pair"`` (index ``d^2`` for ``d > 2``).  For index
    ``d^2`` the structure is confirmed independently: ``Pi`` is trivial,
    every nonidentity element has full support and the elements restrict to
    pairwise distinct Paulis on every coordinate.
    """
    d, n = S.d, S.n
    rows = pi_rows(S)
    order = int(rows.sum())
    index = S.order // order
    supp = 0
    for m in S.masks[rows]:
        supp |= int(m)
    gens = _group_generators(S, rows)
    if index == 1:
        tag = "trivial"
    elif index < d * d:
        tag = "coset"
    else:
        tag = "[2m,2m-2,2]" if d == 2 else "full-support-pair"
    info = PiInfo(order, index, tag, gens, mask_to_support(supp))
    if index == d * d:
        info.confirmed, info.details = _confirm_pair_structure(S)
    return info


def _confirm_pair_structure(S):
    d, n = S.d, S.n
    full = (1 << n) - 1
    nonid = S.masks != 0
    details = {
        "group_order": S.order,
        "full_support": bool(np.all(S.masks[nonid] == full)),
        "pairwise_distinct": all(
            len(local_restrictions(S, j)) == S.order for j in range(1, n + 1)
        ),
    }
    ok = S.order == d * d and details["full_support"] and details["pairwise_distinct"]
    if d == 2:
        details["m"] = n // 2
        ok = ok and n % 2 == 0
    witness = pair_form_witness(S)
    details["local_clifford_to_pair_form"] = witness is not None
    if witness is not None:
        details["local_clifford_witness"] = [list(c.exponents) for c in witness]
    return bool(ok), details


def local_symplectic_values(S):
    """``c_j(g1, g2)`` for two generators of a two-generator ``S`` (``None`` otherwise)."""
    gens = _group_generators(S, np.ones(S.order, dtype=bool))
    if len(gens) != 2:
        return None
    g1, g2 = gens
    d = S.d
    return [int(g1.b[j] * g2.a[j] - g1.a[j] * g2.b[j]) % d for j in range(S.n)]


def pair_form_witness(S):
    """Local Cliffords mapping ``S`` onto ``<X^n, Z^n>`` (mod phases), if they exist.

    Works with the generators ``g1, g2`` found for ``S``; any generator pair
    can be used because a change of generators acts on every coordinate by
    the same invertible matrix.  Returns ``None`` when the per-coordinate
    symplectic values differ or ``d`` is beyond the search cap.
    """
    d, n = S.d, S.n
    gens = _group_generators(S, np.ones(S.order, dtype=bool))
    if len(gens) != 2 or S.order != d * d:
        return None
    vals = local_symplectic_values(S)
    if len(set(vals)) != 1 or np.gcd(vals[0], d) != 1:
        return None
    g1, g2 = gens
    # rescale the second generator so every local value matches c(X, Z) = -1
    g2 = g2 ** (-pow(int(vals[0]), -1, d) % d)
    maps = []
    for j in range(1, n + 1):
        cmap = find_local_map([g1.local(j), g2.local(j)], [(1, 0), (0, 1)], d)
        if cmap is None:
            return None
        maps.append(cmap)
    return tuple(maps)


# degenerate factors ---------------------------------------------------------------


@dataclass
class DegenerateReport:
    bell_pairs: list
    trivial_qudits: list
    unsupported: list

    @property
    def clean(self):
        return not (self.bell_pairs or self.trivial_qudits or self.unsupported)

    def as_dict(self):
        return {
            "bell_pairs": [list(p) for p in self.bell_pairs],
            "trivial_qudits": list(self.trivial_qudits),
            "unsupported_coordinates": list(self.unsupported),
            "clean": self.clean,
        }


def detect_degenerate_factors(S):
    """Bell-pair factors and trivially encoded coordinates.

    ``{i, j}`` is a Bell factor when ``S`` restricted to ``{i, j}`` is a
    full two-qudit stabilizer state (``d^2`` elements) and neither coordinate
    carries a weight-1 element.  Coordinates with weight-1 elements are
    reported as trivial qudits; coordinates touched by no element as
    unsupported.
    """
    d, n = S.d, S.n
    weight1 = sorted({mask_to_support(m)[0] for m in S.masks if m and not (int(m) & (int(m) - 1))})
    touched = 0
    for m in S.masks:
        touched |= int(m)
    unsupported = [j for j in range(1, n + 1) if not touched >> (j - 1) & 1]
    pairs = []
    for m in minimal_masks(S):
        omega = mask_to_support(m)
        if len(omega) != 2 or set(omega) & set(weight1):
            continue
        if int(restricted_rows(S, omega).sum()) == d * d:
            pairs.append(omega)
    return DegenerateReport(sorted(pairs), weight1, unsupported)


# coordinate classification --------------------------------------------------------


@dataclass
class CoordinateConstraint:
    j: int
    cls: str
    coverage: str
    witness_supports: list
    witness_subgroup: tuple
    label: str
    degenerate: str = None

    def as_dict(self):
        out = {
            "j": self.j, "class": self.cls, "coverage": self.coverage,
            "witness_supports": [list(w) for w in self.witness_supports],
            "witness_subgroup": [list(p) for p in self.witness_subgroup],
            "witness_label": self.label,
        }
        if self.degenerate:
            out["degenerate"] = self.degenerate
        return out


def _class_names(d):
    if d == 2:
        return CLIFFORD, SEMI_CLIFFORD, GENERALIZED_SEMI_CLIFFORD
    return CLIFFORD, SUBGROUP_INVARIANT, SPAN_INVARIANT


def classify_coordinate(S, j, minimal=None, degenerate=None):
    """Constraint on ``U_j`` for any transversal gate preserving the code.

    Minimal supports through ``j`` of size at least 3 lock the Paulis they
    show at ``j``: if those generate the whole local group ``U_j`` is
    Clifford, otherwise it normalises the subgroup they generate.  Size-2
    (and size-1) minimal supports only force the span of the local
    subgroup to be preserved.  Uncovered coordinates use the restricted
    minimal elements ``M_j`` (or the coset structure of ``Pi`` when
    ``j`` lies outside its support).  ``minimal`` and ``degenerate`` can be
    passed in to avoid recomputation.
    """
    d, n = S.d, S.n
    if not 1 <= j <= n:
        raise ValidationError(f"coordinate {j} outside 1..{n}")
    full = d * d
    clifford, semi, span = _class_names(d)
    if minimal is None:
        minimal = minimal_supports(S)
    if degenerate is None:
        degenerate = detect_degenerate_factors(S)
    bell = [p for p in degenerate.bell_pairs if j in p]
    if bell:
        H = local_restrictions(S, j, restricted_rows(S, bell[0]))
        return CoordinateConstraint(j, UNCONSTRAINED, "minimal-support", bell, H,
                                    subgroup_label(H, d), "bell-pair")
    if j in degenerate.unsupported:
        return CoordinateConstraint(j, UNCONSTRAINED, "none", [], ((0, 0),), "I", "unconstrained")
    tag = "trivial-qudit" if j in degenerate.trivial_qudits else None

    through = [w for w in minimal if j in w]
    big = [w for w in through if len(w) >= 3]
    small = [w for w in through if len(w) < 3]
    if big:
        pairs = set()
        for w in big:
            pairs |= set(local_restrictions(S, j, restricted_rows(S, w)))
        H = local_closure(pairs, d)
        if len(H) == full:
            # witness: lexicographically first supports that already generate everything
            wit, acc = [], set()
            for w in big:
                wit.append(w)
                acc |= set(local_restrictions(S, j, restricted_rows(S, w)))
                if len(local_closure(acc, d)) == full:
                    break
            return CoordinateConstraint(j, clifford, "minimal-support", wit, H,
                                        subgroup_label(H, d), tag)
        return CoordinateConstraint(j, semi, "minimal-support", big, H, subgroup_label(H, d), tag)
    if small:
        pairs = set()
        for w in small:
            pairs |= set(local_restrictions(S, j, restricted_rows(S, w)))
        H = local_closure(pairs, d)
        return CoordinateConstraint(j, span, "minimal-support", small, H, subgroup_label(H, d), tag)

    # not covered by any minimal support
    pi = pi_rows(S)
    in_pi = any(int(m) >> (j - 1) & 1 for m in S.masks[pi])
    if not in_pi:
        H = local_restrictions(S, j)
        H = local_closure(H, d)
        if len(H) < full:
            return CoordinateConstraint(j, span, "single-qudit-subgroup", [], H,
                                        subgroup_label(H, d), tag)
    supports = restricted_minimal_supports(S, j)
    w = supports[0]
    rows = restricted_minimal_rows(S, j) & (S.masks == support_to_mask(w))
    H = local_closure(local_restrictions(S, j, rows), d)
    if len(H) == full:
        raise ValidationError(
            f"restricted minimal elements at coordinate {j} exhaust the local Pauli group",
            witness=w,
        )
    return CoordinateConstraint(j, span, "restricted-minimal", [w], H, subgroup_label(H, d), tag)


def classify_all(S):
    minimal = minimal_supports(S)
    degenerate = detect_degenerate_factors(S)
    return [classify_coordinate(S, j, minimal, degenerate) for j in range(1, S.n + 1)]


def permute_group(S, perm):
    """Relabel coordinates: the content of coordinate ``i`` moves to ``perm[i-1]``."""
    n = S.n
    inv = [0] * n
    for i, p in enumerate(perm):
        inv[p - 1] = i
    gens = [
        PauliElement(S.d, n, g.phase, tuple(g.a[inv[k]] for k in range(n)),
                     tuple(g.b[inv[k]] for k in range(n)))
        for g in S.generators
    ]
    return StabilizerGroup(gens, max_elements=S.max_elements)


def check_resources(S):
    if not S.enumerable:
        raise ResourceError("structure analysis needs an enumerable group")
