"""Generator-presented stabilizer groups and the things built from them.

A :class:`StabilizerGroup` enumerates its elements once (as numpy stacks of
exponent rows, sorted by a phase-free key) and every query after that is a
vectorised scan.  Projectors are normalised by ``1/|S|`` so they are
idempotent for every ``d``.
"""

from dataclasses import dataclass, field
from functools import cached_property
from itertools import product

import numpy as np

from . import linalg
from .errors import ResourceError, ValidationError
from .pauli import (
    DENSE_BOUND,
    PauliElement,
    compose_arrays,
    digit_table,
    monomial_action,
    root_of_unity,
    weyl_phase,
)

MAX_ELEMENTS = 2**20
STATE_BOUND = 2**20


def _keys(A, B, d):
    """Phase-free integer key per row (object ints if they would overflow)."""
    n = A.shape[1]
    if d ** (2 * n) < 2**62:
        w = d ** np.arange(2 * n, dtype=np.int64)
        return np.hstack([A, B]).astype(np.int64) @ w
    w = [d**i for i in range(2 * n)]
    rows = np.hstack([A, B]).tolist()
    return np.array([sum(x * y for x, y in zip(r, w)) for r in rows], dtype=object)


def _masks(A, B):
    nz = (A != 0) | (B != 0)
    n = nz.shape[1]
    if n <= 62:
        return nz.astype(np.int64) @ (np.int64(1) << np.arange(n, dtype=np.int64))
    return np.array([sum(1 << i for i in np.nonzero(r)[0]) for r in nz], dtype=object)


def mask_to_support(mask):
    mask = int(mask)
    out, i = [], 0
    while mask:
        if mask & 1:
            out.append(i + 1)
        mask >>= 1
        i += 1
    return tuple(out)


def support_to_mask(support):
    m = 0
    for c in support:
        m |= 1 << (c - 1)
    return m


class StabilizerGroup:
    """Abelian Pauli subgroup without phased identities, given by generators.

    Construct through :func:`validate` (or directly; the constructor
    validates).  ``max_elements`` bounds the cached element set.
    """

    def __init__(self, generators, max_elements=MAX_ELEMENTS):
        generators = tuple(generators)
        if not generators:
            raise ValidationError("generator list is empty")
        d, n = generators[0].d, generators[0].n
        for g in generators:
            if (g.d, g.n) != (d, n):
                raise ValidationError("generators disagree on d or n", witness=g)
        self.d, self.n = d, n
        self.generators = generators
        self.max_elements = max_elements
        for i, g in enumerate(generators):
            for h in generators[i + 1:]:
                if g.commutation_exponent(h):
                    raise ValidationError(
                        f"generators {g.label()} and {h.label()} do not commute", witness=(g, h)
                    )
        self._arrays = None
        self._enumerate()

    # enumeration -----------------------------------------------------------

    def _enumerate(self):
        d, n = self.d, self.n
        A = np.zeros((1, n), dtype=np.int64)
        B = np.zeros((1, n), dtype=np.int64)
        P = np.zeros(1, dtype=np.int64)
        keys = _keys(A, B, d)
        estimate = 1
        for g in self.generators:
            o = g.projective_order()
            top = g**o
            if top.phase:
                raise ValidationError(
                    f"{g.label()}^{o} is a phased identity", witness=top
                )
            estimate *= o
            if estimate > self.max_elements:
                self._fallback_validate()
                return
            pw = [g**k for k in range(o)]
            PA = np.array([p.a for p in pw], dtype=np.int64)
            PB = np.array([p.b for p in pw], dtype=np.int64)
            PP = np.array([p.phase for p in pw], dtype=np.int64)
            A2, B2, P2 = compose_arrays(
                d, A[:, None, :], B[:, None, :], P[:, None], PA[None], PB[None], PP[None]
            )
            A2, B2, P2 = A2.reshape(-1, n), B2.reshape(-1, n), P2.reshape(-1)
            k2 = _keys(A2, B2, d)
            uniq, first = np.unique(k2, return_index=True)
            # a repeated phase-free key with a different phase means q^l I is in S
            bad = P2 != P2[first[np.searchsorted(uniq, k2)]]
            if bad.any():
                i = int(np.nonzero(bad)[0][0])
                j = int(first[np.searchsorted(uniq, k2[i])])
                e1 = PauliElement(d, n, P2[i], A2[i], B2[i])
                e2 = PauliElement(d, n, P2[j], A2[j], B2[j])
                raise ValidationError(
                    "the generated group contains a phased identity",
                    witness=e1 * e2.inverse(),
                )
            A, B, P, keys = A2[first], B2[first], P2[first], uniq
            estimate = len(keys)
        self._arrays = (A, B, P, keys)

    def _fallback_validate(self):
        # too many elements to list; for prime d independence plus trivial
        # p-th powers rules out phased identities
        if not linalg.is_prime(self.d):
            raise ResourceError(
                f"group exceeds {self.max_elements} elements and d={self.d} is not prime"
            )
        rows = np.array([g.a + g.b for g in self.generators])
        if linalg.rank_mod_p(rows, self.d) != len(self.generators):
            raise ResourceError("dependent generators in a group too large to enumerate")
        self._arrays = None

    @property
    def enumerable(self):
        return self._arrays is not None

    def _need(self):
        if self._arrays is None:
            raise ResourceError(
                f"element set exceeds the bound of {self.max_elements}; only generator-level "
                "operations are available"
            )
        return self._arrays

    @property
    def A(self):
        return self._need()[0]

    @property
    def B(self):
        return self._need()[1]

    @property
    def phases(self):
        return self._need()[2]

    @property
    def keys(self):
        return self._need()[3]

    @cached_property
    def masks(self):
        return _masks(self.A, self.B)

    @property
    def order(self):
        if self._arrays is not None:
            return len(self._arrays[3])
        return self.d ** len(self.generators)

    def __len__(self):
        return self.order

    def element(self, i):
        return PauliElement(self.d, self.n, self.phases[i], self.A[i], self.B[i])

    def elements(self):
        return [self.element(i) for i in range(self.order)]

    def index_of(self, p):
        """Row index of ``p`` (phase-free match) or ``None``."""
        k = _keys(np.array([p.a]), np.array([p.b]), self.d)[0]
        i = int(np.searchsorted(self.keys, k))
        if i < len(self.keys) and self.keys[i] == k:
            return i
        return None

    def contains(self, p, up_to_phase=False):
        i = self.index_of(p)
        if i is None:
            return False
        return up_to_phase or int(self.phases[i]) == p.phase

    def sub(self, rows):
        """Subgroup given by a boolean row selector (assumed closed)."""
        return _SubsetGroup(self, np.asarray(rows))

    def dimension(self):
        """Dimension of the stabilized subspace, ``d**n / |S|``."""
        return self.d**self.n // self.order

    def __repr__(self):
        gens = ", ".join(g.label() for g in self.generators)
        return f"StabilizerGroup(d={self.d}, n={self.n}, [{gens}])"


class _SubsetGroup(StabilizerGroup):
    """A subgroup viewed through a row selection of its parent (no re-closure)."""

    def __init__(self, parent, rows):
        self.d, self.n = parent.d, parent.n
        self.max_elements = parent.max_elements
        A, B, P, K = parent._need()
        self._arrays = (A[rows], B[rows], P[rows], K[rows])
        self.generators = tuple(self.elements()[1:]) or (PauliElement.identity(self.d, self.n),)


def validate(generators, max_elements=MAX_ELEMENTS):
    """Check a generator list and return the stabilizer group it generates."""
    return StabilizerGroup(generators, max_elements=max_elements)


def enumerate_group(S):
    return S.elements()


def from_labels(labels):
    return StabilizerGroup([PauliElement.from_label(s) for s in labels])


# projectors ------------------------------------------------------------------


def _check_dense(d, n, bound=DENSE_BOUND):
    if d**n > bound:
        raise ResourceError(f"dense operator of size {d**n} exceeds bound {bound}")


def pauli_sum(d, A, B, P, coeffs=None):
    """Dense ``sum_R c_R R`` over the stacked elements."""
    n = A.shape[1]
    _check_dense(d, n)
    dim = d**n
    out = np.zeros((dim, dim), dtype=complex)
    cols = np.arange(dim)
    chunk = max(1, 2**18 // dim)
    for s in range(0, len(A), chunk):
        perm, ph = monomial_action(d, A[s:s + chunk], B[s:s + chunk], P[s:s + chunk])
        vals = root_of_unity(ph, d)
        if coeffs is not None:
            vals = vals * np.asarray(coeffs[s:s + chunk])[:, None]
        np.add.at(out, (perm.ravel(), np.broadcast_to(cols, perm.shape).ravel()), vals.ravel())
    return out


def projector(S):
    """Dense code projector ``(1/|S|) sum_{R in S} R``."""
    _check_dense(S.d, S.n)
    return pauli_sum(S.d, S.A, S.B, S.phases) / S.order


def restricted_rows(S, omega):
    """Row selector of ``S_omega = {R in S : supp(R) ⊆ omega}``."""
    m = support_to_mask(omega)
    return (S.masks & ~m) == 0


def restricted_subgroup(S, omega):
    return S.sub(restricted_rows(S, omega))


def subcode_group(S, omega):
    """``S_omega`` restricted to the coordinates of ``omega`` (relabelled 1..|omega|)."""
    omega = tuple(sorted(omega))
    rows = restricted_rows(S, omega)
    idx = [c - 1 for c in omega]
    A, B, P = S.A[rows][:, idx], S.B[rows][:, idx], S.phases[rows]
    gens = [PauliElement(S.d, len(idx), p, a, b) for a, b, p in zip(A, B, P)]
    nontrivial = [g for g in gens if not g.is_identity] or [PauliElement.identity(S.d, len(idx))]
    return StabilizerGroup(_independent_subset(nontrivial), max_elements=S.max_elements)


def _independent_subset(elements):
    """Greedy generating subset (keeps closure cost low)."""
    chosen = []
    d = elements[0].d
    zero = (0,) * len(elements[0].key)
    seen = {zero}
    for e in elements:
        if e.key in seen:
            continue
        chosen.append(e)
        new = set()
        for k in seen:
            for m in range(1, e.projective_order()):
                new.add(tuple((x + m * y) % d for x, y in zip(k, e.key)))
        seen |= new
    return chosen or [elements[0]]


def reduced_projector(S, omega):
    """``tr_{complement}`` of the code projector, as a matrix on ``omega``.

    Only elements supported inside ``omega`` survive the partial trace, each
    picking up a factor ``d**(n - |omega|)``.
    """
    omega = tuple(sorted(omega))
    _check_dense(S.d, len(omega))
    rows = restricted_rows(S, omega)
    idx = [c - 1 for c in omega]
    scale = S.d ** (S.n - len(omega)) / S.order
    return scale * pauli_sum(S.d, S.A[rows][:, idx], S.B[rows][:, idx], S.phases[rows])


def subcode_projector(S, omega):
    """Idempotent projector onto the subcode stabilized by ``S_omega`` on ``omega``."""
    omega = tuple(sorted(omega))
    _check_dense(S.d, len(omega))
    rows = restricted_rows(S, omega)
    idx = [c - 1 for c in omega]
    return pauli_sum(S.d, S.A[rows][:, idx], S.B[rows][:, idx], S.phases[rows]) / rows.sum()


def partial_trace(rho, keep, d, n):
    """Dense partial trace keeping the 1-based ``keep`` coordinates (sorted)."""
    keep = sorted(c - 1 for c in keep)
    drop = [i for i in range(n) if i not in keep]
    t = np.asarray(rho).reshape((d,) * (2 * n))
    letters = list("abcdefghijklmnopqrstuvwxyz")
    rows = letters[:n]
    cols = letters[n:2 * n]
    for i in drop:
        cols[i] = rows[i]
    out = [rows[i] for i in keep] + [cols[i] for i in keep]
    res = np.einsum("".join(rows + cols) + "->" + "".join(out), t)
    k = d ** len(keep)
    return res.reshape(k, k)


# centralizer -----------------------------------------------------------------


@dataclass
class Centralizer:
    d: int
    n: int
    generators: list
    size: int
    method: str

    def check_size(self, S):
        """``|C(S)| * |S| == d**(2n)`` (phase-free count)."""
        return self.size * S.order == self.d ** (2 * self.n)


def _symplectic_rows(gens):
    # row . (a'|b') = commutation exponent of g with (a', b')
    return np.array([list(g.b) + [-x for x in g.a] for g in gens], dtype=np.int64)


def centralizer_scan(S):
    """All phase-free Paulis commuting with ``S`` by scanning ``d**(2n)`` candidates."""
    d, n = S.d, S.n
    if d ** (2 * n) > 2**22:
        raise ResourceError(f"centralizer scan over {d ** (2 * n)} candidates is too large")
    cand = digit_table(d, 2 * n)
    rows = _symplectic_rows(S.generators)
    ok = ((cand @ rows.T) % d == 0).all(axis=1)
    return cand[ok]


def centralizer(S, method="auto"):
    """Generators of ``C(S)`` modulo phases.

    ``method`` is ``"scan"`` (exhaustive, ``n <= 6``), ``"snf"`` (Smith normal
    form kernel of the symplectic product over ``Z_d``) or ``"auto"``.
    """
    d, n = S.d, S.n
    if method == "auto":
        method = "scan" if n <= 6 and d ** (2 * n) <= 2**20 else "snf"
    if method == "scan":
        vecs = centralizer_scan(S)
        pool = [PauliElement(d, n, 0, v[:n], v[n:]) for v in vecs if v.any()]
        gens = _independent_subset(pool) if pool else []
        return Centralizer(d, n, gens, len(vecs), "scan")
    if method == "snf":
        vecs, size = linalg.kernel_mod(_symplectic_rows(S.generators), d)
        gens = [PauliElement(d, n, 0, v[:n], v[n:]) for v in vecs]
        return Centralizer(d, n, gens, size, "snf")
    raise ValueError(f"unknown centralizer method {method!r}")


def in_centralizer(S, p):
    return all(p.commutes_with(g) for g in S.generators)


# codes -------------------------------------------------------------------------


@dataclass(frozen=True)
class CSSPresentation:
    """Two classical parity-check style matrices over ``Z_d``.

    ``hx`` rows are X-type stabilizer exponents, ``hz`` rows Z-type ones; the
    X-type rows span the code ``C2`` used in the coset-sum codewords.
    """

    hx: tuple
    hz: tuple

    @classmethod
    def from_arrays(cls, hx, hz):
        return cls(tuple(map(tuple, np.asarray(hx, dtype=int).tolist())),
                   tuple(map(tuple, np.asarray(hz, dtype=int).tolist())))

    def generators(self, d):
        n = len((self.hx or self.hz)[0])
        zero = (0,) * n
        return [PauliElement(d, n, 0, r, zero) for r in self.hx] + [
            PauliElement(d, n, 0, zero, r) for r in self.hz
        ]


@dataclass
class CodeSpec:
    name: str
    stabilizer: StabilizerGroup
    gauge: list = field(default_factory=list)
    k: int = None
    distance: int = None
    gauge_count: int = 0
    css: CSSPresentation = None

    def __post_init__(self):
        S = self.stabilizer
        for g in self.gauge:
            if not in_centralizer(S, g):
                raise ValidationError(f"gauge generator {g.label()} does not commute with S", g)
        if self.css is not None:
            other = StabilizerGroup(self.css.generators(S.d), max_elements=S.max_elements)
            if not _same_group(S, other):
                raise ValidationError("CSS presentation does not generate the listed stabilizer")
        if self.k is None and not self.gauge and S.enumerable:
            dim = S.dimension()
            k = 0
            while S.d**k < dim:
                k += 1
            self.k = k if S.d**k == dim else None

    @property
    def d(self):
        return self.stabilizer.d

    @property
    def n(self):
        return self.stabilizer.n


def _same_group(S, T):
    if S.enumerable and T.enumerable:
        return (
            S.order == T.order
            and np.array_equal(S.keys, T.keys)
            and np.array_equal(S.phases, T.phases)
        )
    # generator-level check: each generator of one lies in the other's span
    p = S.d
    rs = np.array([g.a + g.b for g in S.generators])
    rt = np.array([g.a + g.b for g in T.generators])
    if not linalg.is_prime(p):
        raise ResourceError("cannot compare large groups for composite d")
    r = linalg.rank_mod_p(rs, p)
    return r == linalg.rank_mod_p(rt, p) == linalg.rank_mod_p(np.vstack([rs, rt]), p) and all(
        g.phase == 0 for g in S.generators + T.generators
    )


# codewords ---------------------------------------------------------------------


def apply_group_sum(S, x):
    """Sparse ``sum_{R in S} R|x>``: returns ``(indices, amplitudes)``."""
    d, n = S.d, S.n
    digits = np.array([(x // d ** (n - 1 - i)) % d for i in range(n)], dtype=np.int64)
    powers = d ** np.arange(n - 1, -1, -1)
    idx = ((digits[None, :] + S.A) % d) @ powers
    ph = (S.phases + 2 * (S.B @ digits)) % (2 * d)
    uniq, inv = np.unique(idx, return_inverse=True)
    amp = np.zeros(len(uniq), dtype=complex)
    np.add.at(amp, inv, root_of_unity(ph, d))
    return uniq, amp


def codewords(S, limit=None):
    """Orthonormal basis of the code space (columns), via orbit sums.

    ``P|x>`` only depends on the X-orbit of ``x``, so scanning basis states
    and skipping those already covered yields orthogonal codewords.
    """
    d, n = S.d, S.n
    dim = d**n
    if dim > STATE_BOUND:
        raise ResourceError(f"state vectors of size {dim} exceed bound {STATE_BOUND}")
    if dim * S.order > 5 * 10**7:
        raise ResourceError("orbit search too large; supply a CSS presentation")
    want = S.dimension() if limit is None else min(limit, S.dimension())
    covered = np.zeros(dim, dtype=bool)
    out = []
    for x in range(dim):
        if len(out) == want:
            break
        if covered[x]:
            continue
        idx, amp = apply_group_sum(S, x)
        keep = np.abs(amp) > 1e-9
        covered[idx] = True
        if not keep.any():
            continue
        v = np.zeros(dim, dtype=complex)
        v[idx[keep]] = amp[keep]
        out.append(v / np.linalg.norm(v))
    return np.array(out).T


def _span_mod(rows, d):
    """All Z_d combinations of ``rows`` (as a set of tuples)."""
    n = len(rows[0]) if len(rows) else 0
    span = {(0,) * n}
    for r in rows:
        new = set(span)
        for s in span:
            for m in range(1, d):
                new.add(tuple((x + m * y) % d for x, y in zip(s, r)))
        span = new
    return span


def css_logical_shifts(css, d):
    """Coset representatives ``g`` of ``C1 / C2`` with ``C1 = ker(hz)``, ``C2 = rowspace(hx)``."""
    if not linalg.is_prime(d):
        raise ValidationError("CSS codewords are only built for prime d")
    hx = np.array(css.hx, dtype=np.int64).reshape(len(css.hx), -1)
    hz = np.array(css.hz, dtype=np.int64)
    n = hx.shape[1] if hx.size else hz.shape[1]
    c1 = linalg.nullspace_mod_p(hz, d) if hz.size else np.eye(n, dtype=np.int64)
    basis = hx.copy() if hx.size else np.zeros((0, n), dtype=np.int64)
    shifts = []
    for v in c1:
        cand = np.vstack([basis, v]) if len(basis) else v.reshape(1, -1)
        if linalg.rank_mod_p(cand, d) > (linalg.rank_mod_p(basis, d) if len(basis) else 0):
            shifts.append(v % d)
            basis = cand
    return np.array(shifts, dtype=np.int64).reshape(len(shifts), n)


def css_codewords(spec, logical_index=None):
    """Coset-sum codewords ``|x> ∝ sum_{c in C2} |x.g + c>`` (columns).

    Ordered by ``x`` in lexicographic order over ``Z_d^k``; pass
    ``logical_index`` to get a single codeword vector.
    """
    if spec.css is None:
        raise ValidationError(f"code {spec.name!r} has no CSS presentation")
    d, n = spec.d, spec.n
    if d**n > STATE_BOUND:
        raise ResourceError(f"state vectors of size {d**n} exceed bound {STATE_BOUND}")
    hx = [np.array(r) for r in spec.css.hx]
    c2 = np.array(sorted(_span_mod(hx, d)), dtype=np.int64) if hx else np.zeros((1, n), np.int64)
    g = css_logical_shifts(spec.css, d)
    k = len(g)
    powers = d ** np.arange(n - 1, -1, -1)
    labels = list(product(range(d), repeat=k))
    if logical_index is not None:
        labels = [labels[logical_index]]
    out = np.zeros((d**n, len(labels)), dtype=complex)
    for col, x in enumerate(labels):
        shift = (np.array(x) @ g) % d if k else np.zeros(n, dtype=np.int64)
        idx = ((c2 + shift) % d) @ powers
        out[idx, col] = 1 / np.sqrt(len(c2))
    return out[:, 0] if logical_index is not None else out


def check_codeword(S, v, tol=1e-10):
    """Max deviation ``|g v - v|`` over the generators (no dense projector)."""
    worst = 0.0
    d, n = S.d, S.n
    for g in S.generators:
        w = apply_pauli(g, v, d, n)
        worst = max(worst, float(np.linalg.norm(w - v)))
    return worst


def apply_pauli(p, v, d, n):
    """``p|v>`` for a state vector on ``n`` qudits, without forming matrices."""
    digits = digit_table(d, n)
    powers = d ** np.arange(n - 1, -1, -1)
    dest = ((digits + np.array(p.a)) % d) @ powers
    ph = (p.phase + 2 * (digits @ np.array(p.b))) % (2 * d)
    out = np.zeros_like(v, dtype=complex)
    out[dest] = root_of_unity(ph, d) * v
    return out


# logical operators -------------------------------------------------------------


def _symp(u, v, d, n):
    """Commutation exponent between exponent vectors ``u``, ``v`` (length 2n)."""
    return int(u[n:] @ v[:n] - u[:n] @ v[n:]) % d


def _pairs(pool, d, n):
    """Symplectic Gram-Schmidt: pairs ``(x, z)`` with ``c(z, x) = 1``."""
    pool = [np.array(v, dtype=np.int64) % d for v in pool]
    pairs = []
    while pool:
        x = pool.pop(0)
        j = next((i for i, w in enumerate(pool) if _symp(w, x, d, n)), None)
        if j is None:
            continue
        z = pool.pop(j)
        z = z * pow(_symp(z, x, d, n), -1, d) % d
        rest = []
        for u in pool:
            u = (u + _symp(u, z, d, n) * x - _symp(u, x, d, n) * z) % d
            if u.any():
                rest.append(u)
        pool = rest
        pairs.append((x, z))
    return pairs


def _weyl_from(v, d, n):
    return PauliElement.weyl(d, tuple(v[:n]), tuple(v[n:]))


def logical_operators(spec):
    """``(protected, gauge)`` lists of ``(Xbar, Zbar)`` pairs (prime ``d``).

    Bare logicals commute with the stabilizer and the gauge generators; the
    gauge pairs come from the gauge generators modulo ``S``.
    """
    S = spec.stabilizer
    d, n = S.d, S.n
    if not linalg.is_prime(d):
        raise ValidationError(f"logical operators need prime d, got {d}")
    srows = np.array([g.a + g.b for g in S.generators], dtype=np.int64)
    sbasis = linalg.rref_mod_p(srows, d)[0]

    def quotient(vectors):
        basis = sbasis
        out = []
        for v in vectors:
            cand = np.vstack([basis, v])
            if linalg.rank_mod_p(cand, d) > len(basis):
                out.append(v)
                basis = linalg.rref_mod_p(cand, d)[0]
        return out

    gvecs = [np.array(g.a + g.b) for g in spec.gauge]
    gauge_pairs = _pairs(quotient(gvecs), d, n) if gvecs else []
    allrows = np.vstack([srows] + [v.reshape(1, -1) for v in gvecs]) if gvecs else srows
    symp = np.hstack([allrows[:, n:], -allrows[:, :n]]) % d
    bare = linalg.nullspace_mod_p(symp, d)
    protected = _pairs(quotient(list(bare)), d, n)
    wrap = lambda ps: [(_weyl_from(x, d, n), _weyl_from(z, d, n)) for x, z in ps]
    return wrap(protected), wrap(gauge_pairs)


def logical_basis(spec):
    """Orthonormal codewords (columns) labelled by logical computational states.

    CSS codes use the coset-sum construction.  Otherwise, for prime ``d``,
    ``|0...0>`` is the joint +1 eigenvector of ``S`` and every ``Zbar`` and
    ``|x> = prod Xbar_i^{x_i} |0...0>``.  Gauge qudits come after the
    protected ones in the labelling.
    """
    if spec.css is not None and not spec.gauge:
        return css_codewords(spec)
    S = spec.stabilizer
    d, n = S.d, S.n
    protected, gauge = logical_operators(spec)
    pairs = protected + gauge
    full = StabilizerGroup(list(S.generators) + [z for _, z in pairs], max_elements=S.max_elements)
    zero = codewords(full)[:, 0]
    cols = []
    for x in product(range(d), repeat=len(pairs)):
        v = zero
        for (X, _), e in zip(pairs, x):
            for _ in range(e):
                v = apply_pauli(X, v, d, n)
        cols.append(v)
    return np.array(cols).T


def code_basis(spec_or_group):
    """Any orthonormal code basis; cheapest route available."""
    if isinstance(spec_or_group, CodeSpec):
        if spec_or_group.css is not None and linalg.is_prime(spec_or_group.d):
            return css_codewords(spec_or_group)
        return codewords(spec_or_group.stabilizer)
    return codewords(spec_or_group)
