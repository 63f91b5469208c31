"""Exact arithmetic in the generalized n-qudit Pauli group.

Every element is kept in the canonical form

    tau**phase * (X**a[0] Z**b[0]) ⊗ ... ⊗ (X**a[n-1] Z**b[n-1])

with ``tau = exp(i*pi/d)``.  Working in powers of ``tau`` rather than of
``q = tau**2`` keeps the eigenvalue-fixing prefactors integral for even ``d``.
``X|k> = |k+1>`` and ``Z|k> = q**k |k>``, hence ``Z X = q X Z``.

Coordinates reported by :meth:`PauliElement.support` are 1-based; the
exponent tuples themselves are ordinary 0-based sequences.
"""

from dataclasses import dataclass
from functools import cached_property
from itertools import product
from math import gcd

import numpy as np

from .errors import ResourceError, ValidationError

DENSE_BOUND = 4096


def _lcm(x, y):
    return x * y // gcd(x, y)


def weyl_phase(a, b, d):
    """tau-exponent that makes ``X^a Z^b`` have the eigenvalues of ``X``.

    For ``d = 2`` this is the Hermitian choice (``Y = tau * X Z``).
    """
    return (3 - d) * int(np.dot(a, b)) % (2 * d)


@dataclass(frozen=True)
class PauliElement:
    d: int
    n: int
    phase: int
    a: tuple
    b: tuple

    def __post_init__(self):
        if self.d < 2 or self.n < 1:
            raise ValidationError(f"need d >= 2 and n >= 1, got d={self.d} n={self.n}")
        a = tuple(int(x) % self.d for x in self.a)
        b = tuple(int(x) % self.d for x in self.b)
        if len(a) != self.n or len(b) != self.n:
            raise ValidationError("exponent vectors must have length n")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "phase", int(self.phase) % (2 * self.d))

    # construction -------------------------------------------------------

    @classmethod
    def identity(cls, d, n):
        return cls(d, n, 0, (0,) * n, (0,) * n)

    @classmethod
    def single(cls, d, n, coordinate, a=0, b=0, phase=0):
        """``X^a Z^b`` on the given 1-based coordinate."""
        av, bv = [0] * n, [0] * n
        av[coordinate - 1], bv[coordinate - 1] = a, b
        return cls(d, n, phase, tuple(av), tuple(bv))

    @classmethod
    def weyl(cls, d, a, b):
        """Phase-normalised basis element (``B**d == I``; Hermitian for qubits)."""
        return cls(d, len(a), weyl_phase(a, b, d), tuple(a), tuple(b))

    @classmethod
    def from_label(cls, label):
        """Qubit element from a string like ``"XZZXI"`` or ``"-iYY"``."""
        sign = 0
        for prefix, k in (("+i", 1), ("-i", 3), ("i", 1), ("+", 0), ("-", 2)):
            if label.startswith(prefix):
                sign, label = k, label[len(prefix):]
                break
        table = {"I": (0, 0), "X": (1, 0), "Z": (0, 1), "Y": (1, 1)}
        try:
            pairs = [table[c] for c in label.upper()]
        except KeyError as exc:
            raise ValidationError(f"bad Pauli letter {exc.args[0]!r}") from None
        a = tuple(p[0] for p in pairs)
        b = tuple(p[1] for p in pairs)
        return cls(2, len(pairs), sign + sum(x * y for x, y in pairs), a, b)

    # algebra ------------------------------------------------------------

    def _check(self, other):
        if not isinstance(other, PauliElement):
            raise ValidationError(f"expected PauliElement, got {type(other).__name__}")
        if (self.d, self.n) != (other.d, other.n):
            raise ValidationError(
                f"dimension mismatch: (d={self.d}, n={self.n}) vs (d={other.d}, n={other.n})"
            )

    def compose(self, other):
        self._check(other)
        cross = 2 * sum(x * y for x, y in zip(self.b, other.a))
        return PauliElement(
            self.d,
            self.n,
            self.phase + other.phase + cross,
            tuple(x + y for x, y in zip(self.a, other.a)),
            tuple(x + y for x, y in zip(self.b, other.b)),
        )

    __matmul__ = compose
    __mul__ = compose

    def __pow__(self, m):
        m = int(m)
        if m < 0:
            return self.inverse() ** (-m)
        ab = sum(x * y for x, y in zip(self.a, self.b))
        return PauliElement(
            self.d,
            self.n,
            m * self.phase + ab * m * (m - 1),
            tuple(m * x for x in self.a),
            tuple(m * x for x in self.b),
        )

    def inverse(self):
        # (X^a Z^b)^-1 = Z^-b X^-a = tau^{2ab} X^-a Z^-b
        ab = sum(x * y for x, y in zip(self.a, self.b))
        return PauliElement(
            self.d, self.n, -self.phase + 2 * ab,
            tuple(-x for x in self.a), tuple(-x for x in self.b),
        )

    def commutation_exponent(self, other):
        """``c`` with ``self * other == q**c * other * self``."""
        self._check(other)
        c = sum(b1 * a2 - a1 * b2 for a1, b1, a2, b2 in zip(self.a, self.b, other.a, other.b))
        return c % self.d

    def commutes_with(self, other):
        return self.commutation_exponent(other) == 0

    def projective_order(self):
        """Order of the image in the Pauli group modulo phases."""
        g = gcd(self.d, *self.a, *self.b)
        return self.d // g

    def order(self):
        """Smallest ``m >= 1`` with ``self**m == I`` including the phase."""
        o = self.projective_order()
        c = (self ** o).phase
        return o * (2 * self.d // gcd(2 * self.d, c))

    # structure -----------------------------------------------------------

    @property
    def is_identity(self):
        return self.phase == 0 and not any(self.a) and not any(self.b)

    @property
    def is_phased_identity(self):
        return not any(self.a) and not any(self.b)

    def support(self):
        return tuple(i + 1 for i in range(self.n) if self.a[i] or self.b[i])

    @property
    def weight(self):
        return sum(1 for x, y in zip(self.a, self.b) if x or y)

    @property
    def key(self):
        """Phase-free identity of the element (hashable)."""
        return self.a + self.b

    def local(self, coordinate):
        """``(a_j, b_j)`` at a 1-based coordinate."""
        return self.a[coordinate - 1], self.b[coordinate - 1]

    def restrict(self, coordinates, keep_phase=True):
        """Element on the listed 1-based coordinates only (in that order)."""
        idx = [c - 1 for c in coordinates]
        return PauliElement(
            self.d, len(idx), self.phase if keep_phase else 0,
            tuple(self.a[i] for i in idx), tuple(self.b[i] for i in idx),
        )

    def tensor(self, other):
        if self.d != other.d:
            raise ValidationError("dimension mismatch in tensor product")
        return PauliElement(
            self.d, self.n + other.n, self.phase + other.phase,
            self.a + other.a, self.b + other.b,
        )

    def with_phase(self, phase):
        return PauliElement(self.d, self.n, phase, self.a, self.b)

    # matrices --------------------------------------------------------------

    def monomial(self):
        """``(perm, tau_exponents)`` with ``P|x> = tau**e[x] |perm[x]>``."""
        return monomial_action(self.d, np.array([self.a]), np.array([self.b]), np.array([self.phase]))

    def to_matrix(self, bound=DENSE_BOUND):
        dim = self.d ** self.n
        if dim > bound:
            raise ResourceError(f"dense matrix of size {dim} exceeds bound {bound}")
        perm, ph = self.monomial()
        out = np.zeros((dim, dim), dtype=complex)
        out[perm[0], np.arange(dim)] = root_of_unity(ph[0], self.d)
        return out

    def label(self):
        """Readable form: a signed Pauli string for qubits, tokens otherwise."""
        if self.d == 2:
            base = "".join("IXZY"[x + 2 * y] for x, y in zip(self.a, self.b))
            k = (self.phase - sum(x * y for x, y in zip(self.a, self.b))) % 4
            return ("", "i", "-", "-i")[k] + base
        body = ",".join(f"x{x}z{y}" for x, y in zip(self.a, self.b))
        return (f"w{self.phase}," if self.phase else "") + body

    def __repr__(self):
        return f"PauliElement({self.label()!r}, d={self.d})"


def root_of_unity(k, d):
    """``tau**k`` for integer arrays ``k`` (exact at multiples of quarter turns)."""
    k = np.asarray(k) % (2 * d)
    out = np.exp(1j * np.pi * k / d)
    # snap the common exact values so products stay clean
    for num, val in ((0, 1), (d, -1)):
        out = np.where(k == num, val, out)
    if d % 2 == 0:
        out = np.where(k == d // 2, 1j, out)
        out = np.where(k == 3 * d // 2, -1j, out)
    return out


def digit_table(d, n):
    """Rows are the base-``d`` digits of 0..d**n-1, most significant first."""
    dim = d**n
    idx = np.arange(dim)
    powers = d ** np.arange(n - 1, -1, -1)
    return (idx[:, None] // powers[None, :]) % d


def monomial_action(d, A, B, phases):
    """Vectorised monomial form of many elements at once.

    ``A``, ``B`` have shape ``(m, n)``.  Returns ``(perm, tau_exp)`` of shape
    ``(m, d**n)``.
    """
    A = np.asarray(A, dtype=np.int64)
    B = np.asarray(B, dtype=np.int64)
    n = A.shape[1]
    K = digit_table(d, n)
    powers = d ** np.arange(n - 1, -1, -1)
    perm = (((K[None, :, :] + A[:, None, :]) % d) * powers).sum(-1)
    ph = (np.asarray(phases)[:, None] + 2 * (K[None, :, :] * B[:, None, :]).sum(-1)) % (2 * d)
    return perm, ph


def compose_arrays(d, A1, B1, P1, A2, B2, P2):
    """Row-wise products of two stacks of elements (broadcasting allowed)."""
    cross = 2 * (B1 * A2).sum(-1)
    return (A1 + A2) % d, (B1 + B2) % d, (P1 + P2 + cross) % (2 * d)


def all_elements(d, n):
    """Every phase-free element ``X^a Z^b`` on ``n`` qudits (phase 0)."""
    for ab in product(range(d), repeat=2 * n):
        yield PauliElement(d, n, 0, ab[:n], ab[n:])


# single-qudit Clifford re-basing ---------------------------------------------


@dataclass(frozen=True)
class LocalCliffordMap:
    """Single-qudit Clifford given by ``X -> Xbar``, ``Z -> Zbar``.

    ``Xbar = tau**(-(d-1) m1 n1) Z**m1 X**n1`` and likewise for ``Zbar`` with
    ``(m2, n2)``.  The pair is accepted when ``gcd(m1, n1, d) = gcd(m2, n2, d)
    = 1`` and ``m2*n1 - m1*n2 = 1 (mod d)``, which is exactly the condition
    for ``Zbar Xbar = q Xbar Zbar``.
    """

    d: int
    m1: int
    n1: int
    m2: int
    n2: int

    def __post_init__(self):
        d = self.d
        for name in ("m1", "n1", "m2", "n2"):
            object.__setattr__(self, name, int(getattr(self, name)) % d)
        if gcd(self.m1, self.n1, d) != 1 or gcd(self.m2, self.n2, d) != 1:
            raise ValidationError("exponent pairs must be coprime to d", witness=self.exponents)
        if (self.m2 * self.n1 - self.m1 * self.n2) % d != 1:
            raise ValidationError(
                "symplectic condition m2*n1 - m1*n2 = 1 (mod d) violated",
                witness=self.exponents,
            )

    @property
    def exponents(self):
        return (self.m1, self.n1, self.m2, self.n2)

    @classmethod
    def from_pairs(cls, m1, n1, m2, n2, d):
        return cls(d, m1, n1, m2, n2)

    @classmethod
    def from_matrix(cls, L, d):
        """From the 2x2 action on ``(a, b)`` column vectors.

        Column 0 is the image of ``X`` = (1, 0), column 1 the image of ``Z``.
        """
        L = np.asarray(L) % d
        return cls(d, L[1, 0], L[0, 0], L[1, 1], L[0, 1])

    @staticmethod
    def _image(d, m, n_):
        # tau^{-(d-1)mn} Z^m X^n written as tau^{(3-d)mn} X^n Z^m
        return PauliElement(d, 1, (3 - d) * m * n_, (n_,), (m,))

    @cached_property
    def x_image(self):
        return self._image(self.d, self.m1, self.n1)

    @cached_property
    def z_image(self):
        return self._image(self.d, self.m2, self.n2)

    @cached_property
    def matrix(self):
        """2x2 integer action on ``(a, b)`` exponent columns (mod phases)."""
        return np.array([[self.n1, self.n2], [self.m1, self.m2]], dtype=np.int64)

    def image(self, a, b):
        """Image of the single-qudit ``X^a Z^b`` with exact phase."""
        return (self.x_image ** a) * (self.z_image ** b)

    def conjugate(self, p, coordinate):
        """``U p U^dagger`` where ``U`` acts on one 1-based coordinate of ``p``."""
        j = coordinate - 1
        img = self.image(p.a[j], p.b[j])
        a, b = list(p.a), list(p.b)
        a[j], b[j] = img.a[0], img.b[0]
        return PauliElement(p.d, p.n, p.phase + img.phase, tuple(a), tuple(b))

    @cached_property
    def unitary(self):
        """A ``d x d`` unitary realising the map (fixed up to global phase)."""
        d = self.d
        Xb = self.x_image.to_matrix()
        Zb = self.z_image.to_matrix()
        proj = sum(np.linalg.matrix_power(Zb, k) for k in range(d)) / d
        col = proj[:, int(np.argmax(np.linalg.norm(proj, axis=0)))]
        psi = col / np.linalg.norm(col)
        cols = [psi]
        for _ in range(d - 1):
            cols.append(Xb @ cols[-1])
        return np.array(cols).T


def symplectic_group(d):
    """All ``LocalCliffordMap`` for dimension ``d`` (the group SL(2, Z_d))."""
    out = []
    for m1, n1, m2, n2 in product(range(d), repeat=4):
        if (m2 * n1 - m1 * n2) % d == 1 and gcd(m1, n1, d) == 1 and gcd(m2, n2, d) == 1:
            out.append(LocalCliffordMap(d, m1, n1, m2, n2))
    return out
