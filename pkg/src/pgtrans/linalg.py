"""Exact linear algebra over Q.

Matrices are ``flint.fmpq_mat``; a subspace of Q^n is stored as an n x d
matrix whose columns are a basis (d may be 0).
"""

from fractions import Fraction

import flint

fmpq = flint.fmpq
fmpq_mat = flint.fmpq_mat


def q(x):
    """Coerce int / Fraction / str / fmpq to fmpq."""
    if isinstance(x, flint.fmpq):
        return x
    if isinstance(x, int):
        return fmpq(x)
    x = Fraction(x)
    return fmpq(x.numerator, x.denominator)


def frac(x):
    x = q(x)
    return Fraction(int(x.p), int(x.q))


def zeros(m, n):
    return fmpq_mat(m, n)


def eye(n):
    M = fmpq_mat(n, n)
    for i in range(n):
        M[i, i] = 1
    return M


def matrix(rows):
    rows = [list(r) for r in rows]
    m = len(rows)
    n = len(rows[0]) if m else 0
    return fmpq_mat(m, n, [q(x) for r in rows for x in r])


def from_columns(cols, n):
    """Matrix with the given length-n columns."""
    M = fmpq_mat(n, len(cols))
    for j, c in enumerate(cols):
        for i, x in enumerate(c):
            if x:
                M[i, j] = q(x)
    return M


def columns(M):
    return [[M[i, j] for i in range(M.nrows())] for j in range(M.ncols())]


def column(M, j):
    return fmpq_mat(M.nrows(), 1, [M[i, j] for i in range(M.nrows())])


def hstack(*mats):
    mats = [M for M in mats if M is not None]
    n = mats[0].nrows()
    cols = [c for M in mats for c in columns(M)]
    return from_columns(cols, n)


def vstack(*mats):
    mats = list(mats)
    ncols = mats[0].ncols()
    rows = []
    for M in mats:
        assert M.ncols() == ncols
        rows.extend([M[i, j] for j in range(ncols)] for i in range(M.nrows()))
    return fmpq_mat(len(rows), ncols, [x for r in rows for x in r])


def submatrix(M, rows, cols):
    rows, cols = list(rows), list(cols)
    return fmpq_mat(len(rows), len(cols), [M[i, j] for i in rows for j in cols])


def is_zero(M):
    return all(M[i, j] == 0 for i in range(M.nrows()) for j in range(M.ncols()))


def rank(M):
    if M.nrows() == 0 or M.ncols() == 0:
        return 0
    return M.rref()[1]


def _pivots(R, r):
    piv = []
    j = 0
    for i in range(r):
        while R[i, j] == 0:
            j += 1
        piv.append(j)
    return piv


def kernel(M):
    """Basis (as columns) of {x : M x = 0}."""
    n = M.ncols()
    if M.nrows() == 0:
        return eye(n)
    R, r = M.rref()
    piv = _pivots(R, r)
    free = [j for j in range(n) if j not in set(piv)]
    K = fmpq_mat(n, len(free))
    for c, f in enumerate(free):
        K[f, c] = 1
        for i, pj in enumerate(piv):
            K[pj, c] = -R[i, f]
    return K


def span(M):
    """Column basis of the column space of M (an independent subset of columns)."""
    if M.ncols() == 0 or M.nrows() == 0:
        return fmpq_mat(M.nrows(), 0)
    R, r = M.rref()
    return submatrix(M, range(M.nrows()), _pivots(R, r))


def solve(A, b):
    """One solution of A x = b, or None when inconsistent."""
    n = A.ncols()
    aug = hstack(A, b) if A.ncols() else b
    R, r = aug.rref()
    piv = _pivots(R, r)
    if piv and piv[-1] >= n:
        return None
    x = fmpq_mat(n, b.ncols())
    for i, pj in enumerate(piv):
        for c in range(b.ncols()):
            x[pj, c] = R[i, n + c]
    return x


def contains(B, v):
    """Is every column of v in the span of the columns of B?"""
    if v.ncols() == 0:
        return True
    if B.ncols() == 0:
        return is_zero(v)
    return rank(hstack(B, v)) == rank(B)


def same_span(A, B):
    return contains(A, B) and contains(B, A)


def sum_spaces(A, B):
    return span(hstack(A, B))


def intersect(A, B):
    """Basis of span(A) ∩ span(B)."""
    if A.ncols() == 0 or B.ncols() == 0:
        return fmpq_mat(A.nrows(), 0)
    K = kernel(hstack(A, -B))
    return span(A * submatrix(K, range(A.ncols()), range(K.ncols())))


def image(M, B):
    """Basis of M(span B)."""
    if B.ncols() == 0:
        return fmpq_mat(M.nrows(), 0)
    return span(M * B)


def coordinates(B, v):
    """Coordinates of the columns of v in the (independent) basis B."""
    x = solve(B, v)
    if x is None:
        raise ValueError("vector not in span")
    return x


def power(M, m):
    R = eye(M.nrows())
    for _ in range(m):
        R = R * M
    return R


def first_nonzero(M):
    for i in range(M.nrows()):
        for j in range(M.ncols()):
            if M[i, j] != 0:
                return (i, j), M[i, j]
    return None


def kron(A, B):
    """Kronecker product; index (i, j) of A x (k, l) of B lands at (i*m + k, j*n + l)."""
    m, n = B.nrows(), B.ncols()
    out = fmpq_mat(A.nrows() * m, A.ncols() * n)
    for i in range(A.nrows()):
        for j in range(A.ncols()):
            a = A[i, j]
            if a == 0:
                continue
            for k in range(m):
                for l in range(n):
                    b = B[k, l]
                    if b != 0:
                        out[i * m + k, j * n + l] = a * b
    return out


def diag(entries):
    entries = list(entries)
    M = fmpq_mat(len(entries), len(entries))
    for i, x in enumerate(entries):
        M[i, i] = q(x)
    return M


def top_rows(M, n):
    return submatrix(M, range(n), range(M.ncols()))
