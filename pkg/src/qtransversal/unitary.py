"""Transfer matrices, unitary classification and transversal-gate checks.

Multi-block states use block-major qudit order: qudit ``j`` (1-based) of
block ``b`` (0-based) sits at tensor axis ``b*n + j - 1``.  ``U_j`` acts on
the axes ``{b*n + j - 1}`` of all blocks, with block 0 as its most
significant factor.
"""

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from math import comb

import numpy as np

from . import linalg
from .errors import ResourceError, ValidationError
from .pauli import PauliElement, digit_table, root_of_unity, symplectic_group, weyl_phase
from .stabilizer import (
    STATE_BOUND,
    CodeSpec,
    StabilizerGroup,
    code_basis,
    codewords,
    logical_basis,
    logical_operators,
    subcode_projector,
)

TRANSFER_BOUND = 256
TERM_BOUND = 2**20
SEARCH_BOUND = 2**22

TOL_CONSTRUCT = 1e-12
TOL_UNITARY = 1e-10
TOL_PRESERVE = 1e-9
TOL_BLOCK = 1e-8

CLIFFORD = "Clifford"
SEMI_CLIFFORD = "SemiClifford"
GENERALIZED_SEMI_CLIFFORD = "GeneralizedSemiClifford"
GENERAL = "General"


# gates -------------------------------------------------------------------------


def _pauli_mats():
    X = np.array([[0, 1], [1, 0]], dtype=complex)
    Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
    Z = np.diag([1, -1]).astype(complex)
    return X, Y, Z


def fourier(d):
    w = np.exp(2j * np.pi / d)
    k = np.arange(d)
    return w ** np.outer(k, k) / np.sqrt(d)


def z_rotation(theta):
    """``exp(i theta Z)``."""
    return np.diag([np.exp(1j * theta), np.exp(-1j * theta)])


def x_rotation(theta):
    """``exp(i theta X)``."""
    c, s = np.cos(theta), np.sin(theta)
    return np.array([[c, 1j * s], [1j * s, c]])


def axis_rotation(axis, angle):
    """``exp(-i angle/2 n.sigma)`` for a unit axis ``n``."""
    axis = np.asarray(axis, dtype=float)
    axis = axis / np.linalg.norm(axis)
    X, Y, Z = _pauli_mats()
    ns = axis[0] * X + axis[1] * Y + axis[2] * Z
    return np.cos(angle / 2) * np.eye(2) - 1j * np.sin(angle / 2) * ns


def cnot():
    U = np.eye(4, dtype=complex)
    U[[2, 3]] = U[[3, 2]]
    return U


def named_gate(name, d=2):
    """Standard single-qudit gates; ``H`` is the Fourier gate for any ``d``."""
    key = name.strip()
    if key == "I":
        return np.eye(d, dtype=complex)
    if key == "H":
        return fourier(d)
    if d != 2:
        raise ValidationError(f"gate {name!r} is only defined for qubits")
    table = {
        "X": _pauli_mats()[0],
        "Y": _pauli_mats()[1],
        "Z": _pauli_mats()[2],
        "P": np.diag([1, 1j]),
        "S": np.diag([1, 1j]),
        "T": np.diag([1, np.exp(1j * np.pi / 4)]),
        "Tdag": np.diag([1, np.exp(-1j * np.pi / 4)]),
        "CNOT": cnot(),
    }
    if key not in table:
        raise ValidationError(f"unknown gate {name!r}")
    return table[key].astype(complex)


def check_unitary(U, tol=TOL_UNITARY):
    U = np.asarray(U, dtype=complex)
    if U.ndim != 2 or U.shape[0] != U.shape[1]:
        raise ValidationError("gate matrix must be square")
    err = float(np.abs(U.conj().T @ U - np.eye(U.shape[0])).max())
    if err > tol:
        raise ValidationError(f"matrix is not unitary (deviation {err:.3g})")
    return U


# Weyl basis and transfer matrices ------------------------------------------------


@lru_cache(maxsize=None)
def weyl_labels(d, r):
    """Nonidentity ``(a, b)`` label pairs for ``r`` qudits, ordered by the digits of ``(a|b)``."""
    rows = digit_table(d, 2 * r)[1:]
    return tuple((tuple(int(x) for x in row[:r]), tuple(int(x) for x in row[r:])) for row in rows)


@lru_cache(maxsize=None)
def weyl_basis(d, r):
    """Stack of basis matrices for :func:`weyl_labels` (Hermitian when ``d = 2``)."""
    return np.array([PauliElement.weyl(d, a, b).to_matrix() for a, b in weyl_labels(d, r)])


def label_index(d, r):
    return {lab: i for i, lab in enumerate(weyl_labels(d, r))}


def weyl_label_string(label, d):
    a, b = label
    if d == 2:
        return "".join("IXZY"[x + 2 * y] for x, y in zip(a, b))
    return ",".join(f"x{x}z{y}" for x, y in zip(a, b))


@dataclass
class PauliTransferMatrix:
    """``alpha[t, s]``: coefficient of basis element ``t`` in ``U B_s U^dagger``."""

    d: int
    r: int
    matrix: np.ndarray
    tol: float = TOL_UNITARY

    @property
    def labels(self):
        return weyl_labels(self.d, self.r)

    @property
    def size(self):
        return self.matrix.shape[0]

    def orthonormality_error(self):
        M = self.matrix
        eye = np.eye(M.shape[0])
        return float(max(np.abs(M.conj().T @ M - eye).max(), np.abs(M @ M.conj().T - eye).max()))

    def column_is_monomial(self, s, tol=None):
        tol = self.tol if tol is None else tol
        col = np.abs(self.matrix[:, s])
        big = col > tol
        return int(big.sum()) == 1 and abs(col[big][0] - 1) < tol

    def is_monomial(self, tol=None):
        return all(self.column_is_monomial(s, tol) for s in range(self.size))

    def image_support(self, s, tol=None):
        tol = self.tol if tol is None else tol
        return tuple(int(t) for t in np.nonzero(np.abs(self.matrix[:, s]) > tol)[0])

    def image(self, label, tol=TOL_CONSTRUCT):
        """Expansion of the conjugated basis element ``label`` as ``[(coef, label)]``."""
        s = label_index(self.d, self.r)[label]
        col = self.matrix[:, s]
        return [(complex(col[t]), self.labels[t]) for t in np.nonzero(np.abs(col) > tol)[0]]


def transfer_matrix(U, d, r=None):
    """Transfer matrix of a unitary on ``r`` qudits of dimension ``d``."""
    U = check_unitary(U)
    D = U.shape[0]
    if r is None:
        r = int(round(np.log(D) / np.log(d)))
    if d**r != D:
        raise ValidationError(f"matrix of size {D} is not an operator on {r} qudits of dimension {d}")
    if d ** (2 * r) > TRANSFER_BOUND:
        raise ResourceError(f"transfer matrix side {d ** (2 * r) - 1} exceeds bound")
    B = weyl_basis(d, r)
    conj = U[None] @ B @ U.conj().T[None]
    alpha = np.einsum("tij,sij->ts", B.conj(), conj) / D
    ptm = PauliTransferMatrix(d, r, alpha)
    err = ptm.orthonormality_error()
    if err > 1e-9:
        raise ValidationError(f"transfer matrix not unitary (deviation {err:.3g})")
    return ptm


def conjugates_to_paulis(U, d, r=None, tol=TOL_UNITARY):
    """Independent Clifford test: each ``U B U^dagger`` is a phase times one basis element."""
    U = check_unitary(U)
    D = U.shape[0]
    r = r if r is not None else int(round(np.log(D) / np.log(d)))
    B = weyl_basis(d, r)
    for Bs in B:
        C = U @ Bs @ U.conj().T
        hit = False
        for Bt in B:
            ov = np.trace(Bt.conj().T @ C) / D
            if abs(abs(ov) - 1) < tol and np.allclose(C, ov * Bt, atol=1e-8):
                hit = True
                break
        if not hit:
            return False
    return True


# candidate subgroups ---------------------------------------------------------------


@lru_cache(maxsize=None)
def candidate_subgroups(d, r):
    """Label-index tuples of the subgroups used by the (generalised) semi-Clifford tests.

    Qubits: maximal abelian subgroups of the ``r``-qubit Pauli group (mod
    phases), listed for ``r <= 2``.  ``d > 2``: all nontrivial proper
    subgroups of ``Z_d^2`` for ``r = 1``.
    """
    idx = label_index(d, r)
    vecs = [np.array(a + b) for a, b in weyl_labels(d, r)]
    out = []
    if d == 2:
        if r > 2:
            raise ResourceError("maximal abelian subgroup search is limited to r <= 2 for qubits")
        seen = set()
        for combo in combinations(range(len(vecs)), r):
            span = _span_indices([vecs[i] for i in combo], d, r, idx)
            if span is None or len(span) != 2**r - 1 or span in seen:
                continue
            if all(_symp(vecs[x], vecs[y], r, d) == 0 for x in span for y in span):
                seen.add(span)
                out.append(span)
        return tuple(out)
    if r != 1:
        raise ResourceError("subgroup search for d > 2 is limited to r = 1")
    seen = set()
    for k in (1, 2):
        for combo in combinations(range(len(vecs)), k):
            span = _span_indices([vecs[i] for i in combo], d, r, idx)
            if span is None or len(span) >= d * d - 1 or span in seen:
                continue
            seen.add(span)
            out.append(span)
    return tuple(sorted(out, key=lambda s: (len(s), s)))


def _symp(u, v, r, d):
    return int(u[r:] @ v[:r] - u[:r] @ v[r:]) % d


def _span_indices(gens, d, r, idx):
    span = {tuple([0] * (2 * r))}
    for g in gens:
        new = set(span)
        frontier = set(span)
        while frontier:
            nxt = {tuple((np.array(s) + g) % d) for s in frontier} - new
            new |= nxt
            frontier = nxt
        span = new
    span.discard(tuple([0] * (2 * r)))
    return tuple(sorted(idx[(tuple(int(x) for x in v[:r]), tuple(int(x) for x in v[r:]))] for v in span))


@dataclass
class UnitaryClass:
    cls: str
    witness: tuple
    image: tuple
    transfer: PauliTransferMatrix
    witness_labels: list = field(default_factory=list)

    def as_dict(self):
        return {"class": self.cls, "witness": self.witness_labels,
                "image": [weyl_label_string(self.transfer.labels[t], self.transfer.d) for t in self.image]}


def classify_unitary(U, d, r=None, tol=TOL_BLOCK):
    """Clifford / SemiClifford / GeneralizedSemiClifford / General.

    Clifford iff the transfer matrix is monomial.  SemiClifford iff the
    columns of some candidate subgroup are monomial (the subgroup is mapped
    onto another subgroup of Paulis).  GeneralizedSemiClifford iff the rows
    hit by some candidate subgroup's columns form a candidate subgroup of
    the same size (its span is mapped onto another span).
    """
    ptm = transfer_matrix(U, d, r)
    d, r = ptm.d, ptm.r
    labels = ptm.labels
    if ptm.is_monomial(tol):
        return UnitaryClass(CLIFFORD, (), (), ptm, [])
    cands = candidate_subgroups(d, r)
    cand_set = set(cands)
    for L in cands:
        if all(ptm.column_is_monomial(s, tol) for s in L):
            img = tuple(sorted(ptm.image_support(s, tol)[0] for s in L))
            return UnitaryClass(SEMI_CLIFFORD, L, img, ptm, [weyl_label_string(labels[s], d) for s in L])
    for L in cands:
        rows = set()
        for s in L:
            rows |= set(ptm.image_support(s, tol))
        rows = tuple(sorted(rows))
        if len(rows) == len(L) and rows in cand_set:
            return UnitaryClass(GENERALIZED_SEMI_CLIFFORD, L, rows, ptm,
                                [weyl_label_string(labels[s], d) for s in L])
    return UnitaryClass(GENERAL, (), (), ptm, [])


def block_structure_error(ptm, subgroup):
    """Off-block weight of the transfer matrix for an index set mapped to itself.

    Returns ``(off_block, monomial)``: the largest modulus coupling the
    subgroup's indices to the rest, and whether the subgroup block is monomial.
    """
    L = list(subgroup)
    rest = [i for i in range(ptm.size) if i not in L]
    M = ptm.matrix
    off = 0.0
    if rest:
        off = float(max(np.abs(M[np.ix_(L, rest)]).max(), np.abs(M[np.ix_(rest, L)]).max()))
    block = M[np.ix_(L, L)]
    mono = all(
        int((np.abs(block[:, c]) > TOL_BLOCK).sum()) == 1
        and abs(np.abs(block[:, c]).max() - 1) < TOL_BLOCK
        for c in range(len(L))
    )
    return off, mono


def subgroup_indices(local_pairs, d, r=1):
    """Transfer-matrix indices of a single-qudit subgroup given as ``(a, b)`` pairs (``r = 1``)."""
    idx = label_index(d, r)
    return tuple(sorted(idx[((a,), (b,))] for a, b in local_pairs if (a, b) != (0, 0)))


# transversal gates ------------------------------------------------------------------


@dataclass
class TransversalGate:
    """``U = U_1 ⊗ ... ⊗ U_n``; ``U_j`` acts on qudit ``j`` of all ``r`` blocks."""

    d: int
    r: int
    factors: list

    def __post_init__(self):
        D = self.d**self.r
        self.factors = [check_unitary(U) for U in self.factors]
        for j, U in enumerate(self.factors, 1):
            if U.shape != (D, D):
                raise ValidationError(f"factor {j} has shape {U.shape}, expected {(D, D)}")

    @property
    def n(self):
        return len(self.factors)

    @classmethod
    def bitwise(cls, U, n, d=2, r=1):
        return cls(d, r, [np.asarray(U, dtype=complex)] * n)

    @classmethod
    def local(cls, n, assignments, d=2, r=1):
        """Identity except at the listed 1-based coordinates."""
        factors = [np.eye(d**r, dtype=complex) for _ in range(n)]
        for j, U in assignments.items():
            factors[j - 1] = np.asarray(U, dtype=complex)
        return cls(d, r, factors)

    def restrict(self, omega):
        return TransversalGate(self.d, self.r, [self.factors[j - 1] for j in omega])

    def is_local_clifford(self):
        return all(classify_unitary(U, self.d, self.r).cls == CLIFFORD for U in self.factors)


def apply_transversal(gate, psi):
    """``U psi`` for state vectors (columns of ``psi``) on ``n*r`` qudits."""
    d, r, n = gate.d, gate.r, gate.n
    N = n * r
    psi = np.asarray(psi, dtype=complex)
    single = psi.ndim == 1
    mat = psi.reshape(d**N, -1)
    k = mat.shape[1]
    T = mat.reshape((d,) * N + (k,))
    for j, U in enumerate(gate.factors):
        if np.allclose(U, np.eye(U.shape[0]), atol=TOL_CONSTRUCT):
            continue
        axes = [b * n + j for b in range(r)]
        Ut = U.reshape((d,) * (2 * r))
        T = np.tensordot(Ut, T, axes=(list(range(r, 2 * r)), axes))
        T = np.moveaxis(T, list(range(r)), axes)
    out = T.reshape(d**N, k)
    return out[:, 0] if single else out


def apply_permutation(perm, psi, d):
    """``P_pi psi``: the content of qudit ``i`` moves to position ``perm[i-1]``."""
    N = len(perm)
    p = [x - 1 for x in perm]
    if sorted(p) != list(range(N)):
        raise ValidationError(f"{list(perm)} is not a permutation of 1..{N}")
    psi = np.asarray(psi, dtype=complex)
    single = psi.ndim == 1
    mat = psi.reshape(d**N, -1)
    k = mat.shape[1]
    T = mat.reshape((d,) * N + (k,))
    T = np.transpose(T, list(np.argsort(p)) + [N])
    out = T.reshape(d**N, k)
    return out[:, 0] if single else out


def dense_transversal(gate):
    """Dense matrix of a transversal gate (bounded)."""
    D = gate.d ** (gate.n * gate.r)
    if D > 4096:
        raise ResourceError(f"dense gate of size {D} exceeds bound")
    return apply_transversal(gate, np.eye(D, dtype=complex))


def block_codewords(base, r):
    """Codewords of ``r`` copies of a code (Kronecker products, block-major)."""
    out = base
    for _ in range(r - 1):
        out = np.einsum("ia,jb->ijab", out, base).reshape(out.shape[0] * base.shape[0], -1)
    return out


def _basis_for(code):
    if isinstance(code, CodeSpec):
        return code_basis(code), code.stabilizer
    return codewords(code), code


@dataclass
class PreservationResult:
    preserved: bool
    residual: float
    tol: float = TOL_PRESERVE
    omega: tuple = None

    def __bool__(self):
        return self.preserved

    def as_dict(self):
        out = {"preserved": self.preserved, "residual": self.residual, "tol": self.tol}
        if self.omega is not None:
            out["omega"] = list(self.omega)
        return out


def preservation_residual(apply, C):
    """``||U P U^dagger - P||_F`` for ``P = C C^dagger`` given ``apply(C) = U C``."""
    W = apply(C)
    leak = W - C @ (C.conj().T @ W)
    return float(np.sqrt(2) * np.linalg.norm(leak))


def preserves_code(gate, code, omega=None, tol=TOL_PRESERVE):
    """Does the transversal gate preserve ``P^{⊗r}`` (or ``rho_omega^{⊗r}``)?

    The full-code check works on an orthonormal codeword basis, so it only
    needs state vectors.  With ``omega`` the subcode projector on
    ``omega`` is used (dense, ``d^{|omega| r}`` bounded).
    """
    S = code.stabilizer if isinstance(code, CodeSpec) else code
    d, n, r = gate.d, gate.n, gate.r
    if (S.d, S.n) != (d, n):
        raise ValidationError("gate and code disagree on d or n")
    if omega is not None:
        omega = tuple(sorted(omega))
        rho = subcode_projector(S, omega)
        C = _range_basis(rho)
        C = block_codewords(C, r)
        sub = gate.restrict(omega)
        res = preservation_residual(lambda M: apply_transversal(sub, M), C)
        return PreservationResult(res < tol, res, tol, omega)
    if d ** (n * r) > STATE_BOUND:
        raise ResourceError(f"state vectors of size {d ** (n * r)} exceed bound")
    base, _ = _basis_for(code)
    C = block_codewords(base, r)
    res = preservation_residual(lambda M: apply_transversal(gate, M), C)
    return PreservationResult(res < tol, res, tol)


def _range_basis(P, tol=1e-9):
    vals, vecs = np.linalg.eigh((P + P.conj().T) / 2)
    return vecs[:, vals > 0.5]


def reduced_state_residual(gate, code, omega):
    """``max |tr_{complement}(U P^{⊗r} U^dagger) - rho_omega^{⊗r}|``.

    The left side is traced down from the conjugated codeword basis
    ``W = U C`` (``U P U^dagger = W W^dagger``); the right side comes from
    the stabilizer elements supported in ``omega``.
    """
    from .stabilizer import reduced_projector

    S = code.stabilizer if isinstance(code, CodeSpec) else code
    d, n, r = gate.d, gate.n, gate.r
    omega = tuple(sorted(omega))
    if d ** (n * r) > STATE_BOUND:
        raise ResourceError(f"state vectors of size {d ** (n * r)} exceed bound")
    base, _ = _basis_for(code)
    W = apply_transversal(gate, block_codewords(base, r))
    N = n * r
    keep = [b * n + j - 1 for b in range(r) for j in omega]
    rest = [x for x in range(N) if x not in keep]
    T = W.reshape((d,) * N + (W.shape[1],))
    M = np.transpose(T, keep + rest + [N]).reshape(d ** len(keep), -1)
    lhs = M @ M.conj().T
    rho = reduced_projector(S, omega)
    rhs = rho
    for _ in range(r - 1):
        rhs = np.kron(rhs, rho)
    return float(np.abs(lhs - rhs).max())


# logical action --------------------------------------------------------------------


def logical_action(gate, spec, check=True, tol=TOL_PRESERVE):
    """Induced unitary on the logical basis (``r`` copies), up to global phase.

    The phase is fixed so that the largest-modulus entry of the first
    nonzero column is real and positive.
    """
    if check:
        res = preserves_code(gate, spec, tol=tol)
        if not res.preserved:
            raise ValidationError(f"gate does not preserve the code (residual {res.residual:.3g})")
    L = block_codewords(logical_basis(spec), gate.r)
    M = L.conj().T @ apply_transversal(gate, L)
    err = float(np.abs(M.conj().T @ M - np.eye(M.shape[0])).max())
    if err > tol:
        raise ValidationError(f"induced logical map is not unitary (deviation {err:.3g})")
    return fix_phase(M)


def fix_phase(M):
    flat = M.ravel()
    i = int(np.argmax(np.abs(flat) > 1e-6))
    return M * (abs(flat[i]) / flat[i])


def phase_distance(A, B):
    """``min_phi max|A - e^{i phi} B|`` evaluated at the phase aligning the largest entry."""
    A, B = np.asarray(A), np.asarray(B)
    i = np.unravel_index(np.argmax(np.abs(B)), B.shape)
    if abs(A[i]) < 1e-12:
        return float(np.abs(A - B).max())
    ph = A[i] / B[i]
    ph /= abs(ph)
    return float(np.abs(A - ph * B).max())


# automorphisms ----------------------------------------------------------------------


def check_code_automorphism(gate, perm, code, tol=TOL_PRESERVE):
    """Does ``U P_pi`` preserve ``P^{⊗r}``?  ``perm`` is a permutation of ``1..n*r``."""
    S = code.stabilizer if isinstance(code, CodeSpec) else code
    d, n, r = gate.d, gate.n, gate.r
    if len(perm) != n * r:
        raise ValidationError(f"permutation must have length {n * r}")
    if d ** (n * r) > STATE_BOUND:
        raise ResourceError(f"state vectors of size {d ** (n * r)} exceed bound")
    base, _ = _basis_for(code)
    C = block_codewords(base, r)
    res = preservation_residual(lambda M: apply_transversal(gate, apply_permutation(perm, M, d)), C)
    return PreservationResult(res < tol, res, tol)


@dataclass
class Automorphism:
    perm: tuple
    maps: tuple
    correction: PauliElement

    def gate(self):
        d = self.correction.d
        factors = []
        for j, cmap in enumerate(self.maps, 1):
            pa, pb = self.correction.local(j)
            corr = PauliElement(d, 1, 0, (pa,), (pb,)).to_matrix()
            factors.append(corr @ cmap.unitary)
        return TransversalGate(d, 1, factors)

    def as_dict(self):
        return {"perm": list(self.perm), "local_maps": [list(m.exponents) for m in self.maps],
                "pauli_correction": self.correction.label()}


def search_automorphisms(S, limit=None, max_n=6):
    """All ``(pi, local Clifford)`` pairs mapping ``S`` onto itself (mod phases, then fixed).

    Backtracking over target positions: at each step a source coordinate and
    an ``SL(2, Z_d)`` element are chosen and the partial image of every
    element of ``S`` must agree with a restriction of ``S`` to the
    positions assigned so far.  A Pauli correction repairs the phases.
    """
    d, n = S.d, S.n
    if n > max_n:
        raise ResourceError(f"exhaustive automorphism search is limited to n <= {max_n}")
    if d ** (2 * n) > SEARCH_BOUND:
        raise ResourceError("Pauli correction scan too large")
    maps = symplectic_group(d)
    mats = [m.matrix for m in maps]
    A, B = S.A, S.B
    keyset = set(map(tuple, np.hstack([A, B]).tolist()))
    # prefix projections of S onto target positions 0..k-1
    prefix = []
    for k in range(1, n + 1):
        prefix.append(set(map(tuple, np.hstack([A[:, :k], B[:, :k]]).tolist())))
    found = []

    def rec(k, used, chosen, imgA, imgB):
        if limit is not None and len(found) >= limit:
            return
        if k == n:
            src = [c for c, _ in chosen]
            perm = [0] * n
            for t, s in enumerate(src):
                perm[s] = t + 1
            aut = _finish(S, perm, [maps[m] for _, m in chosen], keyset)
            if aut is not None:
                found.append(aut)
            return
        for s in range(n):
            if s in used:
                continue
            for mi, L in enumerate(mats):
                a2 = (L[0, 0] * A[:, s] + L[0, 1] * B[:, s]) % d
                b2 = (L[1, 0] * A[:, s] + L[1, 1] * B[:, s]) % d
                nA = np.hstack([imgA, a2[:, None]])
                nB = np.hstack([imgB, b2[:, None]])
                rows = map(tuple, np.hstack([nA, nB]).tolist())
                if all(r_ in prefix[k] for r_ in rows):
                    rec(k + 1, used | {s}, chosen + [(s, mi)], nA, nB)

    empty = np.zeros((S.order, 0), dtype=np.int64)
    rec(0, frozenset(), [], empty, empty)
    return found


def _finish(S, perm, cmaps, keyset):
    """Apply the candidate and look for a Pauli correction making phases match."""
    d, n = S.d, S.n
    # conjugate each generator: coordinate i's content moves to perm[i] then is mapped
    imgs = []
    for g in S.generators:
        a, b = [0] * n, [0] * n
        phase = g.phase
        for i in range(n):
            t = perm[i] - 1
            loc = cmaps[t].image(g.a[i], g.b[i])
            a[t], b[t] = loc.a[0], loc.b[0]
            phase += loc.phase
        imgs.append(PauliElement(d, n, phase, tuple(a), tuple(b)))
    need = []
    for h in imgs:
        if h.key not in keyset:
            return None
        i = S.index_of(h)
        diff = (int(S.phases[i]) - h.phase) % (2 * d)
        if diff % 2:
            return None
        need.append(diff // 2)
    cand = digit_table(d, 2 * n)
    # Q h Q^dagger = q^{c(Q, h)} h with c(Q, h) = b_Q.a_h - a_Q.b_h
    vals = (cand[:, n:] @ np.array([h.a for h in imgs]).T - cand[:, :n] @ np.array([h.b for h in imgs]).T) % d
    ok = np.nonzero((vals == np.array(need)[None, :]).all(axis=1))[0]
    if len(ok) == 0:
        return None
    v = cand[ok[0]]
    return Automorphism(tuple(perm), tuple(cmaps), PauliElement(d, n, 0, tuple(v[:n]), tuple(v[n:])))


# minimum-weight logicals -------------------------------------------------------------


@dataclass
class LogicalWitness:
    p: int
    alpha: PauliElement
    weight: int
    omega: tuple
    order: int
    m: int
    beta: PauliElement = None
    gamma: PauliElement = None
    local_clifford_form: bool = None
    searched: int = 0

    def as_dict(self):
        out = {"p": self.p, "alpha": self.alpha.label(), "weight": self.weight,
               "omega": list(self.omega), "order": self.order, "m": self.m}
        if self.beta is not None:
            out["beta"] = self.beta.label()
        if self.gamma is not None:
            out["gamma"] = self.gamma.label()
        if self.local_clifford_form is not None:
            out["local_clifford_form"] = self.local_clifford_form
        return out


def _weight_candidates(d, n, w):
    """All Paulis of weight exactly ``w`` as an ``(N, 2n)`` exponent array."""
    count = comb(n, w) * (d * d - 1) ** w
    if count > SEARCH_BOUND:
        raise ResourceError(f"{count} weight-{w} candidates exceed the search bound")
    if w == 0:
        return np.zeros((1, 2 * n), dtype=np.int64)
    locs = digit_table(d, 2)[1:]  # nonidentity (a, b)
    choice = digit_table(len(locs), w)
    out = []
    for supp in combinations(range(n), w):
        block = np.zeros((len(choice), 2 * n), dtype=np.int64)
        for k, c in enumerate(supp):
            block[:, c] = locs[choice[:, k], 0]
            block[:, n + c] = locs[choice[:, k], 1]
        out.append(block)
    return np.vstack(out)


def _comm(rows, ops, n, d):
    """Commutation exponents of candidate rows with a list of Paulis, shape ``(N, len(ops))``."""
    if not ops:
        return np.zeros((len(rows), 0), dtype=np.int64)
    oa = np.array([o.a for o in ops]).T
    ob = np.array([o.b for o in ops]).T
    return (rows[:, n:] @ oa - rows[:, :n] @ ob) % d


def min_weight_logical(spec, p=1, max_weight=None):
    """Minimum-weight representative acting nontrivially on protected qudit ``p``.

    Candidates are scanned by increasing weight; a candidate qualifies when
    it commutes with ``S``, commutes with the bare logicals of every other
    protected qudit and fails to commute with ``Xbar_p`` or ``Zbar_p``.
    Gauge action is unrestricted.  For qubits the other two logical classes
    on the same support are reported as ``beta`` and ``gamma``.
    """
    S = spec.stabilizer
    d, n = S.d, S.n
    if not linalg.is_prime(d):
        raise ValidationError("min_weight_logical needs prime d")
    protected, _ = logical_operators(spec)
    if not protected:
        raise ValidationError(f"code {spec.name!r} has no protected logical qudits (k = 0)")
    if not 1 <= p <= len(protected):
        raise ValidationError(f"protected index {p} outside 1..{len(protected)}")
    others = [op for i, pair in enumerate(protected, 1) if i != p for op in pair]
    mine = list(protected[p - 1])
    searched = 0
    for w in range(1, (max_weight or n) + 1):
        rows = _weight_candidates(d, n, w)
        searched += len(rows)
        good = (_comm(rows, list(S.generators), n, d) == 0).all(axis=1)
        good &= (_comm(rows, others, n, d) == 0).all(axis=1)
        act = _comm(rows, mine, n, d)
        good &= act.any(axis=1)
        hits = np.nonzero(good)[0]
        if len(hits) == 0:
            continue
        v = rows[hits[0]]
        alpha = PauliElement.weyl(d, tuple(v[:n]), tuple(v[n:]))
        omega = alpha.support()
        q = alpha.projective_order()
        wit = LogicalWitness(p, alpha, w, omega, q, d // q, searched=searched)
        if d == 2:
            cls = tuple(act[hits[0]])
            same = [h for h in hits if set(np.nonzero(rows[h, :n] | rows[h, n:])[0] + 1) == set(omega)]
            others_cls = {}
            for h in same:
                c = tuple(act[h])
                if c != cls and c not in others_cls:
                    others_cls[c] = rows[h]
            picks = [others_cls[c] for c in sorted(others_cls)]
            if len(picks) >= 1:
                wit.beta = PauliElement.weyl(d, tuple(picks[0][:n]), tuple(picks[0][n:]))
            if len(picks) >= 2:
                wit.gamma = PauliElement.weyl(d, tuple(picks[1][:n]), tuple(picks[1][n:]))
            if wit.beta is not None and wit.gamma is not None:
                wit.local_clifford_form = _three_distinct(alpha, wit.beta, wit.gamma, omega)
            else:
                wit.local_clifford_form = False
        return wit
    raise ValidationError("no logical representative found within the weight bound")


def _three_distinct(a, b, c, omega):
    """Pairwise different nonidentity Paulis on every coordinate of ``omega`` (qubits)."""
    for j in omega:
        loc = {a.local(j), b.local(j), c.local(j)}
        if len(loc) != 3 or (0, 0) in loc:
            return False
    return True


def min_weight_logical_scan(spec, p=1):
    """Oracle: scan every Pauli (``d^{2n}`` candidates) and return the minimum weight."""
    S = spec.stabilizer
    d, n = S.d, S.n
    if d ** (2 * n) > SEARCH_BOUND:
        raise ResourceError("full Pauli scan too large")
    protected, _ = logical_operators(spec)
    others = [op for i, pair in enumerate(protected, 1) if i != p for op in pair]
    rows = digit_table(d, 2 * n)
    good = (_comm(rows, list(S.generators), n, d) == 0).all(axis=1)
    good &= (_comm(rows, others, n, d) == 0).all(axis=1)
    good &= _comm(rows, list(protected[p - 1]), n, d).any(axis=1)
    weights = ((rows[:, :n] != 0) | (rows[:, n:] != 0)).sum(axis=1)
    return int(weights[good].min())


# conjugated expansions ----------------------------------------------------------------


@dataclass
class Expansion:
    centralizer_terms: list
    other_terms: list
    support_union: tuple

    def as_dict(self):
        fmt = lambda ts: [[c.real, c.imag, P.label()] for c, P in ts]
        return {"centralizer_terms": fmt(self.centralizer_terms), "other_terms": fmt(self.other_terms),
                "support_union": list(self.support_union)}


def project_conjugated(gate, P, code, tol=TOL_CONSTRUCT):
    """Expand ``U P U^dagger`` in Pauli terms and split by membership in ``C(S)^{⊗r}``.

    ``P`` lives on ``n*r`` qudits (block-major).  Each coordinate's
    ``r``-qudit factor is expanded through the transfer matrix of ``U_j``
    and the products are multiplied out term by term.
    """
    S = code.stabilizer if isinstance(code, CodeSpec) else code
    d, n, r = gate.d, gate.n, gate.r
    if P.n != n * r or P.d != d:
        raise ValidationError("Pauli must act on n*r qudits of dimension d")
    # each term: (coef, a[n*r], b[n*r], phase)
    terms = [(complex(root_of_unity(P.phase, d)), np.zeros(n * r, np.int64), np.zeros(n * r, np.int64), 0)]
    for j in range(n):
        axes = [b * n + j for b in range(r)]
        la = tuple(P.a[x] for x in axes)
        lb = tuple(P.b[x] for x in axes)
        if not any(la) and not any(lb):
            continue
        # local factor X^la Z^lb = tau^{-weyl} * basis element
        ph = -sum(weyl_phase(x, y, d) for x, y in zip(la, lb))
        U = gate.factors[j]
        ptm = transfer_matrix(U, d, r)
        img = ptm.image((la, lb), tol)
        scale = complex(root_of_unity(ph, d))
        new = []
        for coef, A, B, tp in terms:
            for c, (ta, tb) in img:
                A2, B2 = A.copy(), B.copy()
                A2[axes], B2[axes] = ta, tb
                wp = sum(weyl_phase(x, y, d) for x, y in zip(ta, tb))
                new.append((coef * c * scale, A2, B2, tp + wp))
        if len(new) > TERM_BOUND:
            raise ResourceError(f"expansion exceeds {TERM_BOUND} terms")
        terms = new
    gens = list(S.generators)
    cen, other = [], []
    supp = set()
    for coef, A, B, tp in terms:
        if abs(coef) < tol:
            continue
        el = PauliElement(d, n * r, tp, tuple(A), tuple(B))
        supp |= set(el.support())
        inside = True
        for b in range(r):
            blk = PauliElement(d, n, 0, tuple(A[b * n:(b + 1) * n]), tuple(B[b * n:(b + 1) * n]))
            if not all(blk.commutes_with(g) for g in gens):
                inside = False
                break
        (cen if inside else other).append((coef, el))
    return Expansion(cen, other, tuple(sorted(supp)))


def support_claim(expansion, spec, omega):
    """Nontrivial centralizer terms never have support strictly inside ``omega``.

    A term is logically trivial when it commutes with every bare logical
    (then it lies in the stabilizer times gauge group).  Checked on the
    first block.
    """
    S = spec.stabilizer
    n = S.n
    protected, _ = logical_operators(spec)
    bare = [op for pair in protected for op in pair]
    omega = set(omega)
    for _, el in expansion.centralizer_terms:
        blk = el.restrict(range(1, n + 1), keep_phase=False)
        s = set(blk.support())
        if s < omega and not all(blk.commutes_with(o) for o in bare):
            return False
    return True
