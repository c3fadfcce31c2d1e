"""phi, psi and the ball restrictions Res_{i + p^n Z_p} at torsion level.

Everything here lives in the X-coordinate, with Y = 1 + X.  Over Q the
operator psi has no X-adic continuity, so vectors are read as exact
polynomials in X: psi of a polynomial of degree < p*M is obtained from the
unique decomposition f = sum_{i<p} Y^i phi(f_i), deg f_i < M, and is again
an exact polynomial.  Declared precisions follow the floor(N/p^n) law.

The phi-matrix must be constant ("etale-normalized") so that phi and its
inverse keep polynomials polynomial.  Negative powers of Y are handled by
ψ^n(Y^(-i) v) = Y^(-s/p^n) ψ^n(Y^(s-i) v) for s a multiple of p^n with s >= i.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial

from . import linalg
from .pgmod import constant_part, series_matrix_is_constant
from .series import TruncSeries


# -- exact polynomials in X (coefficient lists) ---------------------------------------

def trim(f):
    f = list(f)
    while f and f[-1] == 0:
        f.pop()
    return f


def padd(f, g):
    n = max(len(f), len(g))
    return [(f[i] if i < len(f) else 0) + (g[i] if i < len(g) else 0) for i in range(n)]


def pscale(f, c):
    return [c * a for a in f]


def pmul(f, g, n=None):
    if not f or not g:
        return []
    size = len(f) + len(g) - 1 if n is None else min(n, len(f) + len(g) - 1)
    out = [Fraction(0)] * size
    for i, a in enumerate(f):
        if not a or i >= size:
            continue
        for j, b in enumerate(g):
            if i + j >= size:
                break
            if b:
                out[i + j] += a * b
    return out


def y_power(e, n):
    """(1 + X)^e mod X^n for any integer e (exact polynomial when e >= 0)."""
    if e >= 0:
        return [Fraction(comb(e, j)) for j in range(min(e + 1, n))]
    out, c = [], Fraction(1)
    for j in range(n):
        out.append(c)
        c = c * (e - j) / (j + 1)
    return out


def frobenius_of_X(p):
    """(1+X)^p - 1 as a coefficient list."""
    return [Fraction(0)] + [Fraction(comb(p, j)) for j in range(1, p + 1)]


def phi_poly(f, p, base=None):
    """f((1+X)^p - 1), exact; ``base`` overrides the image of X."""
    base = frobenius_of_X(p) if base is None else base
    out = []
    for a in reversed(list(f)):
        out = padd(pmul(out, base), [a])
    return out


def psi_poly(f, p):
    """psi of an exact polynomial (a coefficient list), as an exact polynomial."""
    f = trim(f)
    if not f:
        return []
    M = -(-len(f) // p)
    s = TruncSeries(f, p * M, "X").psi_coeff(p)
    return trim(s.coeffs)


def psi_oracle(f, p):
    """Independent psi: expand in powers of Y = 1 + X and keep exponents divisible by p."""
    f = trim(f)
    d = len(f)
    # f(X) = sum_m b_m Y^m with b_m = sum_j f_j C(j, m) (-1)^(j-m)
    b = [sum(f[j] * comb(j, m) * (-1) ** (j - m) for j in range(m, d)) for m in range(d)]
    out = []
    for m in range(0, d, p):
        if b[m]:
            out = padd(out, pscale(y_power(m // p, m // p + 1), b[m]))
    return trim(out)


# -- module-level operators ------------------------------------------------------------------

class SheafModule:
    """A torsion module with constant invertible phi-matrix, viewed in the X-coordinate.

    Vectors are lists of r coefficient lists (exact polynomials in X).
    """

    def __init__(self, D):
        if not D.has_phi():
            raise ValueError("psi needs a phi-matrix")
        if not series_matrix_is_constant(D.phi_mat):
            raise ValueError("sheaf operations need a constant (etale-normalized) phi-matrix")
        P = constant_part(D.phi_mat)
        if P.det() == 0:
            raise ValueError("phi-matrix is not invertible")
        self.D = D
        self.p = D.prime
        self.r = D.rank
        self.trunc = D.trunc
        self.P = [[linalg.frac(P[i, j]) for j in range(self.r)] for i in range(self.r)]
        Pi = P.inv()
        self.Pinv = [[linalg.frac(Pi[i, j]) for j in range(self.r)] for i in range(self.r)]

    def _apply_const(self, A, v):
        out = [[] for _ in range(self.r)]
        for b in range(self.r):
            for a in range(self.r):
                if A[b][a]:
                    out[b] = padd(out[b], pscale(v[a], A[b][a]))
        return out

    def from_series(self, fs):
        return [list(f.to_X().coeffs) if isinstance(f, TruncSeries) else list(f) for f in fs]

    def phi(self, v, base=None):
        return self._apply_const(self.P, [phi_poly(f, self.p, base) for f in v])

    def psi(self, v):
        w = self._apply_const(self.Pinv, v)
        return [psi_poly(f, self.p) for f in w]

    def y_mul(self, v, e, n=None):
        """Y^e v; for e < 0 the result is a series mod X^n."""
        if e >= 0:
            y = y_power(e, e + 1)
            return [pmul(f, y) for f in v]
        y = y_power(e, n)
        return [pmul(f, y, n) for f in v]

    def res_exact(self, rep, i, n):
        """Res_{i + p^n Z_p} on an exact element Y^(-a) g, rep = (a, g); returns such a pair.

        With s the least multiple of p^n that is >= i + a,
        Res(Y^-a g) = Y^(i-s) phi^n psi^n (Y^(s-i-a) g).
        """
        q = self.p ** n
        if not 0 <= i < q:
            raise ValueError("center must lie in 0..p^n - 1")
        a, g = rep
        if n == 0:
            return rep
        s = -(-(i + a) // q) * q
        u = self.y_mul(g, s - i - a)
        for _ in range(n):
            u = self.psi(u)
        for _ in range(n):
            u = self.phi(u)
        return (s - i, [trim(f) for f in u])

    def expand(self, rep, prec):
        a, g = rep
        return truncate_vec(self.y_mul(g, -a, prec) if a else g, prec)

    def res_ball(self, v, i, n):
        """Res_{i + p^n Z_p}(v) = Y^i phi^n psi^n (Y^-i v), reported mod X^floor(N/p^n)."""
        q = self.p ** n
        prec = self.trunc // q
        if prec < 1:
            raise ValueError("precision exhausted: N=%d, p^n=%d" % (self.trunc, q))
        return self.expand(self.res_exact((0, v), i, n), prec), prec


def truncate_vec(v, n):
    return [list(f[:n]) + [Fraction(0)] * max(0, n - len(f)) for f in v]


def psi_module(D, v):
    """psi on D (vector of X-series); precision divided by p."""
    S = SheafModule(D)
    n = min(f.trunc for f in v)
    out = S.psi(S.from_series([f.to_X().truncate(n) for f in v]))
    m = n // S.p
    return [TruncSeries(f[:m], m, "X") for f in truncate_vec(out, m)]


def res_ball(D, v, i, n):
    S = SheafModule(D)
    vec, prec = S.res_ball(S.from_series(v), i, n)
    return [TruncSeries(f, prec, "X") for f in truncate_vec(vec, prec)]


@dataclass
class BallRestriction:
    center: int
    level: int
    matrix: object  # E-matrix on polynomials of degree < N (X-basis, degree-major)
    precision: int


def ball_restriction(D, i, n):
    """Res_{i + p^n Z_p} as a matrix from degree < N to degree < floor(N/p^n), degree-major."""
    S = SheafModule(D)
    r, N = S.r, S.trunc
    prec = N // S.p**n
    R = None
    for c, v in enumerate(_spanning(D, N)):
        out, prec = S.res_ball(v, i, n)
        if R is None:
            R = linalg.zeros(r * prec, r * N)
        for d in range(prec):
            for b in range(r):
                if out[b][d]:
                    R[d * r + b, c] = linalg.q(out[b][d])
    return BallRestriction(i, n, R, prec)


def partition_check(D, n, prec=None):
    """Ball-partition laws on the basis X^j v_a (j < N), compared mod X^prec.

    Returns (sum of all Res = id, [Res_i o Res_i = Res_i], Res_i o Res_j = 0 for i != j).
    Default prec = floor(N/p^n) - n.
    """
    S = SheafModule(D)
    q = S.p ** n
    prec = (S.trunc // q - n) if prec is None else prec
    if prec < 1:
        raise ValueError("no precision left at level %d" % n)
    sum_ok, idem, orth = True, [True] * q, True
    for v in _spanning(D, S.trunc):
        reps = [S.res_exact((0, v), i, n) for i in range(q)]
        total = [[] for _ in range(S.r)]
        for rep in reps:
            total = [padd(x, y) for x, y in zip(total, S.expand(rep, prec))]
        if truncate_vec(total, prec) != truncate_vec(v, prec):
            sum_ok = False
        for i, rep in enumerate(reps):
            if S.expand(S.res_exact(rep, i, n), prec) != S.expand(rep, prec):
                idem[i] = False
            for j in range(q):
                if j != i and any(any(f) for f in S.expand(S.res_exact(rep, j, n), prec)):
                    orth = False
    return sum_ok, idem, orth


# -- the tensor product with V_k --------------------------------------------------------------

class TensorSheaf:
    """D (x) V_k in E-tensor coordinates: x = sum_m V_m (x) e_m, V_m polynomial vectors.

    Y acts diagonally as Y_D (x) exp(u+); phi as phi_D (x) diag(phi_V).
    Negative controls: ``phi_v`` overrides the diagonal of phi on V_k, and
    ``frob`` overrides the image of X under the coefficient Frobenius.
    """

    def __init__(self, D, k, phi_v=None, frob=None):
        self.frob = frob
        self.S = SheafModule(D)
        self.k = k
        self.r = D.rank
        self.p = D.prime
        self.phi_v = [Fraction(self.p) ** m for m in range(k + 1)] if phi_v is None else [Fraction(x) for x in phi_v]
        self._cache = {}

    def zero(self):
        return [[[] for _ in range(self.r)] for _ in range(self.k + 1)]

    def pure(self, v, m):
        x = self.zero()
        x[m] = [list(f) for f in v]
        return x

    def y_mul(self, x, e, n=None):
        out = self.zero()
        for m in range(self.k + 1):
            Vm = self.S.y_mul(x[m], e, n)
            for m2 in range(m, self.k + 1):
                c = Fraction(e) ** (m2 - m) / factorial(m2 - m)
                if c:
                    out[m2] = [padd(out[m2][a], pscale(Vm[a], c)) for a in range(self.r)]
        return out

    def phi(self, x):
        return [[pscale(f, self.phi_v[m]) for f in self.S.phi(x[m], self.frob)] for m in range(self.k + 1)]

    def _system(self, M):
        if M in self._cache:
            return self._cache[M]
        p, r, k1 = self.p, self.r, self.k + 1
        size = p * M * r * k1
        cols = []
        for i in range(p):
            for m in range(k1):
                for a in range(r):
                    for j in range(M):
                        v = [[] for _ in range(r)]
                        v[a] = [0] * j + [Fraction(1)]
                        img = self.y_mul(self.phi(self.pure(v, m)), i)
                        cols.append(self._flatten(img, p * M))
        A = linalg.from_columns(cols, size)
        self._cache[M] = A
        return A

    def _flatten(self, x, n):
        out = []
        for m in range(self.k + 1):
            for a in range(self.r):
                f = x[m][a]
                if len(trim(f)) > n:
                    raise ValueError("polynomial exceeds system degree")
                out.extend(list(f[:n]) + [Fraction(0)] * (n - len(f[:n])))
        return out

    def psi(self, x):
        d = max([len(trim(f)) for Vm in x for f in Vm] + [1])
        M = -(-d // self.p)
        A = self._system(M)
        b = linalg.from_columns([self._flatten(x, self.p * M)], A.nrows())
        sol = linalg.solve(A, b)
        if sol is None:
            raise ArithmeticError("singular psi system")
        out = self.zero()
        # unknown order: i, m, a, j ; x_0 is i = 0
        idx = 0
        for m in range(self.k + 1):
            for a in range(self.r):
                out[m][a] = trim([linalg.frac(sol[idx + j, 0]) for j in range(M)])
                idx += M
        return out

    def res_ball(self, x, i, n):
        """Res on the tensor, by the same exact shift as :meth:`SheafModule.res_exact`."""
        q = self.p ** n
        prec = self.S.trunc // q
        if n == 0:
            return [truncate_vec(Vm, self.S.trunc) for Vm in x], self.S.trunc
        s = -(-i // q) * q
        u = self.y_mul(x, s - i)
        for _ in range(n):
            u = self.psi(u)
        for _ in range(n):
            u = self.phi(u)
        u = self.y_mul(u, i - s, prec) if s != i else u
        return [truncate_vec(Vm, prec) for Vm in u], prec


def _same(x, y, n):
    return all(truncate_vec(a, n) == truncate_vec(b, n) for a, b in zip(x, y))


def _spanning(D, deg):
    r = D.rank
    for j in range(deg):
        for a in range(r):
            v = [[] for _ in range(r)]
            v[a] = [0] * j + [Fraction(1)]
            yield v


def verify_psi_tensor(D, k, phi_v=None):
    """psi(v (x) w) = psi(v) (x) phi^-1(w) on v = X^j v_a (j < p*M), w = e_m; modulo X^M.

    ``phi_v`` corrupts phi on V_k inside the tensor only (the right-hand side
    keeps the true phi^-1), which must make the check fail.
    """
    T = TensorSheaf(D, k, phi_v)
    S = T.S
    p, N = S.p, S.trunc
    M = N // p
    for v in _spanning(D, p * M):
        pv = S.psi(v)
        for m in range(k + 1):
            lhs = T.psi(T.pure(v, m))
            rhs = T.pure([pscale(f, Fraction(1, p**m)) for f in pv], m)
            if not _same(lhs, rhs, M):
                return False
    return True


def corrupted_frobenius(p):
    """(1+X)^p - 1 + X^p: same degree, so the psi system stays square, but a different image of phi."""
    f = frobenius_of_X(p)
    f[p] += 1
    return f


def verify_res_tensor(D, k, i, n, phi_v=None, frob=None):
    """Res(x (x) w) = Res(x) (x) w for x = X^j v_a (j < N), w = e_m, modulo X^floor(N/p^n).

    Res depends on phi only through the subspaces Y^i phi(M), so no constant
    change of phi on V_k can break this identity; the negative control
    corrupts the coefficient Frobenius on the tensor side (``frob``).
    """
    T = TensorSheaf(D, k, phi_v, frob)
    S = T.S
    for v in _spanning(D, S.trunc):
        rv, prec = S.res_ball(v, i, n)
        for m in range(k + 1):
            lhs, _ = T.res_ball(T.pure(v, m), i, n)
            if not _same(lhs, T.pure(rv, m), prec):
                return False
    return True
