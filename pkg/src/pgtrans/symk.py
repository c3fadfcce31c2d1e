"""V_k = Sym^k of the standard representation, in the basis e_i = t^i e.

With eps1, eps2 the standard basis of E^2 (g acts on columns), the lowest
weight vector is e = eps2^k and e_i = k!/(k-i)! eps1^i eps2^(k-i), so that
u+ e_i = e_{i+1}.  Bracket consistency then forces u- e_i = i(k-i+1) e_{i-1}.
"""

from fractions import Fraction
from math import comb, factorial

from . import linalg
from .series import TruncSeries
from .ugl2 import CASIMIR, GL2Elem, evaluate


class SymPower:
    """The gl2 / P+ / R+ structure on V_k."""

    def __init__(self, k):
        if k < 0:
            raise ValueError("k must be non-negative")
        self.k = k
        n = self.dim = k + 1
        self.h = linalg.zeros(n, n)
        self.u_plus = linalg.zeros(n, n)
        self.u_minus = linalg.zeros(n, n)
        for i in range(n):
            self.h[i, i] = 2 * i - k
            if i + 1 < n:
                self.u_plus[i + 1, i] = 1
            if i >= 1:
                self.u_minus[i - 1, i] = i * (k - i + 1)
        self.z = linalg.eye(n) * k
        self.nabla = linalg.zeros(n, n)
        for i in range(n):
            self.nabla[i, i] = i
        # t acts as u+, and X = e^t - 1 is a finite sum since u+ is nilpotent
        self.t = self.u_plus
        self.X = self.series_action(TruncSeries.exp_minus_one(n))

    def gl2_matrices(self):
        return {"u+": self.u_plus, "u-": self.u_minus, "h": self.h, "z": self.z}

    def casimir(self):
        return evaluate(CASIMIR, self.gl2_matrices())

    def series_action(self, f):
        """Matrix of multiplication by f (any coordinate) on V_k = R+/t^(k+1)."""
        f = f.to_t() if f.coord == "X" else f
        if f.trunc < self.dim:
            raise ValueError("series known only mod t^%d, need t^%d" % (f.trunc, self.dim))
        out = linalg.zeros(self.dim, self.dim)
        for j in range(self.dim):
            for i in range(self.dim - j):
                if f[i]:
                    out[j + i, j] = linalg.q(f[i])
        return out

    def element(self, f):
        """The vector f·e, for f in R+/X^(k+1) given in either coordinate."""
        f = f.to_t() if f.coord == "X" else f
        return linalg.from_columns([[f[i] for i in range(self.dim)]], self.dim)

    def phi(self, p):
        """phi = diag(p, 1), acting on e_i by p^i."""
        return self.gamma(p)

    def gamma(self, a):
        a = Fraction(a)
        if a == 0:
            raise ValueError("gamma_a needs a != 0")
        out = linalg.zeros(self.dim, self.dim)
        for i in range(self.dim):
            out[i, i] = linalg.q(a**i)
        return out

    def phi_inverse(self, v, p):
        return self.gamma(Fraction(1, p)) * v

    def group_matrix(self, g):
        """Sym^k(g) in the basis e_0..e_k."""
        k = self.k
        a, b, c, d = g.a, g.b, g.c, g.d
        # image of eps1^i eps2^(k-i) expanded in monomials eps1^j eps2^(k-j)
        out = linalg.zeros(self.dim, self.dim)
        for i in range(self.dim):
            scale_in = Fraction(factorial(k), factorial(k - i))
            # (a eps1 + c eps2)^i (b eps1 + d eps2)^(k-i)
            for r in range(i + 1):
                cr = comb(i, r) * a**r * c ** (i - r)
                if not cr:
                    continue
                for s in range(k - i + 1):
                    cs = comb(k - i, s) * b**s * d ** (k - i - s)
                    if not cs:
                        continue
                    j = r + s
                    scale_out = Fraction(factorial(k - j), factorial(k))
                    out[j, i] += linalg.q(scale_in * cr * cs * scale_out)
        return out

    def group_action(self, g, v):
        if g.c != 0:
            raise ValueError("only upper-triangular (P+ / diagonal) elements act here")
        return self.group_matrix(g) * v

    def one_plus_X(self):
        return self.group_matrix(GL2Elem(1, 1, 0, 1))


def make_symk(k):
    return SymPower(k)
