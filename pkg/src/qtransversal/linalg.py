"""Integer and modular linear algebra.

``Z_d`` is not a field for composite ``d``, so anything that must work for
every dimension goes through the Smith normal form over the integers.  The
prime-modulus helpers (row reduction, nullspace) are used where a genuine
vector-space structure is needed, e.g. symplectic Gram-Schmidt.
"""

from math import gcd

import numpy as np


def is_prime(d):
    if d < 2:
        return False
    k = 2
    while k * k <= d:
        if d % k == 0:
            return False
        k += 1
    return True


def smith_normal_form(M):
    """Return ``(D, U, V)`` with ``U @ M @ V == D`` over the integers.

    ``U`` and ``V`` are unimodular and ``D`` is diagonal with nonnegative
    entries ``D[0,0] | D[1,1] | ...``.  Entries are Python ints (object
    arrays) so no overflow is possible.
    """
    A = [[int(x) for x in row] for row in np.asarray(M, dtype=object).reshape(len(M), -1)]
    m = len(A)
    k = len(A[0]) if m else 0
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(k)] for i in range(k)]

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, c):
        A[dst] = [x + c * y for x, y in zip(A[dst], A[src])]
        U[dst] = [x + c * y for x, y in zip(U[dst], U[src])]

    def add_col(dst, src, c):
        for row in A:
            row[dst] += c * row[src]
        for row in V:
            row[dst] += c * row[src]

    for t in range(min(m, k)):
        while True:
            best = None
            for i in range(t, m):
                for j in range(t, k):
                    if A[i][j] and (best is None or abs(A[i][j]) < abs(A[best[0]][best[1]])):
                        best = (i, j)
            if best is None:
                break
            swap_rows(t, best[0])
            swap_cols(t, best[1])
            p = A[t][t]
            clean = True
            for i in range(t + 1, m):
                if A[i][t]:
                    add_row(i, t, -(A[i][t] // p))
                    clean = clean and A[i][t] == 0
            for j in range(t + 1, k):
                if A[t][j]:
                    add_col(j, t, -(A[t][j] // p))
                    clean = clean and A[t][j] == 0
            if not clean:
                continue
            bad = next(
                (i for i in range(t + 1, m) for j in range(t + 1, k) if A[i][j] % p),
                None,
            )
            if bad is None:
                break
            add_row(t, bad, 1)
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            U[t] = [-x for x in U[t]]

    def obj(rows, shape):
        out = np.empty(shape, dtype=object)
        for i, row in enumerate(rows):
            for j, x in enumerate(row):
                out[i, j] = x
        return out

    return obj(A, (m, k)), obj(U, (m, m)), obj(V, (k, k))


def kernel_mod(M, d):
    """Generators and size of ``{v in Z_d^k : M v = 0 mod d}``.

    Returns ``(generators, size)``; generators are int arrays with entries in
    ``[0, d)`` and the zero vector is never included.
    """
    M = np.asarray(M, dtype=object)
    m, k = M.shape
    if m == 0:
        return [np.eye(k, dtype=np.int64)[i] for i in range(k)], d**k
    D, _, V = smith_normal_form(M)
    gens, size = [], 1
    for i in range(k):
        diag = int(D[i, i]) if i < m else 0
        g = gcd(diag, d)  # gcd(0, d) == d
        size *= g
        if g == 1:
            continue
        col = np.array([int(x) * (d // g) % d for x in V[:, i]], dtype=np.int64)
        if col.any():
            gens.append(col)
    return gens, size


def rref_mod_p(M, p):
    """Reduced row echelon form over GF(p); returns ``(R, pivots)``."""
    R = np.array(M, dtype=np.int64) % p
    if R.ndim == 1:
        R = R.reshape(1, -1)
    rows, cols = R.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(R[r:, c])[0]
        if nz.size == 0:
            continue
        i = r + nz[0]
        R[[r, i]] = R[[i, r]]
        R[r] = R[r] * pow(int(R[r, c]), -1, p) % p
        for i in range(rows):
            if i != r and R[i, c]:
                R[i] = (R[i] - R[i, c] * R[r]) % p
        pivots.append(c)
        r += 1
    return R[:r], pivots


def rank_mod_p(M, p):
    M = np.asarray(M)
    if M.size == 0:
        return 0
    return len(rref_mod_p(M, p)[1])


def nullspace_mod_p(M, p):
    """Basis (rows) of ``{v : M v = 0}`` over GF(p)."""
    M = np.asarray(M, dtype=np.int64)
    k = M.shape[1]
    R, pivots = rref_mod_p(M, p) if M.shape[0] else (np.zeros((0, k), dtype=np.int64), [])
    free = [c for c in range(k) if c not in pivots]
    basis = []
    for f in free:
        v = np.zeros(k, dtype=np.int64)
        v[f] = 1
        for row, c in zip(R, pivots):
            v[c] = -row[f] % p
        basis.append(v)
    return np.array(basis, dtype=np.int64).reshape(len(basis), k)


def in_span_mod_p(v, rows, p):
    if len(rows) == 0:
        return not np.any(np.asarray(v) % p)
    return rank_mod_p(np.vstack([rows, v]), p) == rank_mod_p(rows, p)
