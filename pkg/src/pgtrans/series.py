"""Truncated power series with exact rational coefficients.

A :class:`TruncSeries` is a power series known modulo ``coord^trunc`` in one
of two coordinates: ``t`` (the canonical one) or ``X``, related by
``t = log(1+X)``.  Every operation reports only the precision its inputs
justify; :meth:`TruncSeries.divide_by_t`, :meth:`TruncSeries.derivative` and
:meth:`TruncSeries.psi_coeff` are the operations that lose precision.
"""

import re
from fractions import Fraction
from math import comb, factorial

from . import linalg

COORDS = ("t", "X")


def _frac(x):
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    return linalg.frac(x)


class TruncSeries:
    """Power series ``a_0 + a_1 c + ... + a_{N-1} c^{N-1} + O(c^N)``."""

    __slots__ = ("coeffs", "trunc", "coord")

    def __init__(self, coeffs=(), trunc=None, coord="t"):
        if coord not in COORDS:
            raise ValueError("coordinate must be 't' or 'X', got %r" % (coord,))
        coeffs = [_frac(a) for a in coeffs]
        if trunc is None:
            trunc = len(coeffs)
        if trunc < 1:
            raise ValueError("truncation order must be positive")
        coeffs = coeffs[:trunc] + [Fraction(0)] * (trunc - len(coeffs))
        object.__setattr__(self, "coeffs", tuple(coeffs))
        object.__setattr__(self, "trunc", trunc)
        object.__setattr__(self, "coord", coord)

    def __setattr__(self, name, value):
        raise AttributeError("TruncSeries is immutable")

    # -- constructors ---------------------------------------------------
    @classmethod
    def constant(cls, a, trunc, coord="t"):
        return cls([a], trunc, coord)

    @classmethod
    def zero(cls, trunc, coord="t"):
        return cls([], trunc, coord)

    @classmethod
    def one(cls, trunc, coord="t"):
        return cls([1], trunc, coord)

    @classmethod
    def gen(cls, trunc, coord="t", power=1):
        """The coordinate itself (or a power of it)."""
        c = [0] * trunc
        if power < trunc:
            c[power] = 1
        return cls(c, trunc, coord)

    @classmethod
    def exp_minus_one(cls, trunc, coord="t"):
        """e^c - 1."""
        return cls([0] + [Fraction(1, factorial(n)) for n in range(1, trunc)], trunc, coord)

    @classmethod
    def log_one_plus(cls, trunc, coord="X"):
        """log(1 + c)."""
        return cls([0] + [Fraction((-1) ** (n + 1), n) for n in range(1, trunc)], trunc, coord)

    @classmethod
    def parse(cls, text, trunc, coord="t"):
        return parse_series(text, trunc, coord)

    # -- basic protocol -------------------------------------------------
    def __getitem__(self, n):
        return self.coeffs[n]

    def __len__(self):
        return self.trunc

    def __repr__(self):
        return "TruncSeries(%s + O(%s^%d))" % (self.to_string(), self.coord, self.trunc)

    def to_string(self):
        terms = []
        for n, a in enumerate(self.coeffs):
            if a == 0:
                continue
            mono = "" if n == 0 else (self.coord if n == 1 else "%s^%d" % (self.coord, n))
            if mono and abs(a) == 1:
                body = mono
            elif mono:
                body = "%s*%s" % (abs(a), mono)
            else:
                body = str(abs(a))
            terms.append(("-" if a < 0 else "+", body))
        if not terms:
            return "0"
        out = ("-" if terms[0][0] == "-" else "") + terms[0][1]
        for sign, body in terms[1:]:
            out += " %s %s" % (sign, body)
        return out

    def agrees(self, other, prec=None):
        """Equality of coefficients below ``prec`` (default: common precision)."""
        other = self._promote(other)
        if self.coord != other.coord:
            return False
        n = min(self.trunc, other.trunc) if prec is None else prec
        if n > min(self.trunc, other.trunc):
            raise ValueError("comparison beyond recorded precision")
        return self.coeffs[:n] == other.coeffs[:n]

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, TruncSeries)):
            return self.agrees(other)
        return NotImplemented

    __hash__ = None

    def is_zero(self):
        return not any(self.coeffs)

    def valuation(self):
        for n, a in enumerate(self.coeffs):
            if a:
                return n
        return self.trunc

    def truncate(self, n):
        if n > self.trunc:
            raise ValueError("cannot raise precision from %d to %d" % (self.trunc, n))
        return TruncSeries(self.coeffs[:n], n, self.coord)

    def padded(self, n):
        """Read the coefficients as an exact polynomial and record precision ``n``.

        Only legitimate when the series is known to be a polynomial of degree
        below ``trunc`` (e.g. constant matrix entries, Amice polynomials).
        """
        if n < self.trunc:
            return self.truncate(n)
        return TruncSeries(self.coeffs, n, self.coord)

    # -- ring structure -------------------------------------------------
    def _promote(self, other):
        if isinstance(other, TruncSeries):
            return other
        return TruncSeries([other], self.trunc, self.coord)

    def _check(self, other):
        if self.coord != other.coord:
            raise ValueError("coordinate mismatch: %s vs %s" % (self.coord, other.coord))

    def __add__(self, other):
        other = self._promote(other)
        self._check(other)
        n = min(self.trunc, other.trunc)
        return TruncSeries([a + b for a, b in zip(self.coeffs[:n], other.coeffs[:n])], n, self.coord)

    __radd__ = __add__

    def __neg__(self):
        return TruncSeries([-a for a in self.coeffs], self.trunc, self.coord)

    def __sub__(self, other):
        return self + (-self._promote(other))

    def __rsub__(self, other):
        return self._promote(other) - self

    def scalar_mul(self, c):
        c = _frac(c)
        return TruncSeries([c * a for a in self.coeffs], self.trunc, self.coord)

    def __mul__(self, other):
        if not isinstance(other, TruncSeries):
            try:
                return self.scalar_mul(other)
            except (TypeError, ValueError):
                return NotImplemented
        self._check(other)
        n = min(self.trunc, other.trunc)
        a, b = self.coeffs, other.coeffs
        out = [Fraction(0)] * n
        for i in range(n):
            if a[i]:
                ai = a[i]
                for j in range(n - i):
                    if b[j]:
                        out[i + j] += ai * b[j]
        return TruncSeries(out, n, self.coord)

    def __rmul__(self, other):
        return self.__mul__(other)

    def __pow__(self, e):
        if e < 0:
            return self.invert() ** (-e)
        out = TruncSeries.one(self.trunc, self.coord)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def invert(self):
        a = self.coeffs
        if a[0] == 0:
            raise ZeroDivisionError("series with zero constant term is not a unit")
        n = self.trunc
        inv = [Fraction(0)] * n
        inv[0] = 1 / a[0]
        for m in range(1, n):
            s = sum(a[j] * inv[m - j] for j in range(1, m + 1))
            inv[m] = -s * inv[0]
        return TruncSeries(inv, n, self.coord)

    def __truediv__(self, other):
        if isinstance(other, TruncSeries):
            return self * other.invert()
        return self.scalar_mul(1 / _frac(other))

    def shift(self, m):
        """Multiply by coord^m (precision unchanged)."""
        return TruncSeries([0] * m + list(self.coeffs[: self.trunc - m]), self.trunc, self.coord)

    def divide_by_t(self):
        """Divide by the coordinate; precision drops by exactly one."""
        if self.coeffs[0] != 0:
            raise ValueError("series with nonzero constant term is not divisible by %s" % self.coord)
        if self.trunc == 1:
            raise ValueError("no precision left after division")
        return TruncSeries(self.coeffs[1:], self.trunc - 1, self.coord)

    def derivative(self):
        """d/dcoord; precision drops by one (a constant stays exact)."""
        n = max(self.trunc - 1, 1)
        return TruncSeries([k * self.coeffs[k] for k in range(1, self.trunc)], n, self.coord)

    def compose(self, g):
        """self(g) for g with zero constant term, at precision min(trunc)."""
        if g.coeffs[0] != 0:
            raise ValueError("inner series must have zero constant term")
        n = min(self.trunc, g.trunc)
        out = TruncSeries.zero(n, g.coord)
        for a in reversed(self.coeffs[:n]):
            out = out * g.truncate(n) + a
        return out

    # -- coordinate change ----------------------------------------------
    def to_X(self):
        if self.coord == "X":
            return self
        return TruncSeries(self.coeffs, self.trunc, "t").compose(TruncSeries.log_one_plus(self.trunc, "t"))._as("X")

    def to_t(self):
        if self.coord == "t":
            return self
        return TruncSeries(self.coeffs, self.trunc, "X").compose(TruncSeries.exp_minus_one(self.trunc, "X"))._as("t")

    def _as(self, coord):
        return TruncSeries(self.coeffs, self.trunc, coord)

    def in_coord(self, coord):
        return self.to_t() if coord == "t" else self.to_X()

    # -- phi, gamma, nabla, psi -----------------------------------------
    def phi_coeff(self, p):
        """Frobenius on coefficients: t -> p t, equivalently X -> (1+X)^p - 1."""
        if self.coord == "t":
            return TruncSeries([a * p**n for n, a in enumerate(self.coeffs)], self.trunc, "t")
        phiX = TruncSeries([0] + [comb(p, n) for n in range(1, p + 1)], self.trunc, "X")
        return self.compose(phiX)

    def gamma_coeff(self, a):
        """t -> a t for a nonzero rational a (X -> (1+X)^a - 1)."""
        a = _frac(a)
        if a == 0:
            raise ValueError("gamma_a needs a != 0")
        if self.coord == "t":
            return TruncSeries([c * a**n for n, c in enumerate(self.coeffs)], self.trunc, "t")
        return self.to_t().gamma_coeff(a).to_X()

    def nabla_coeff(self):
        """t d/dt on coefficients: sum a_n t^n -> sum n a_n t^n."""
        if self.coord == "t":
            return TruncSeries([n * a for n, a in enumerate(self.coeffs)], self.trunc, "t")
        # t d/dt = log(1+X) (1+X) d/dX; the log factor restores the lost degree
        n = self.trunc
        if n == 1:
            return TruncSeries.zero(1, "X")
        d = [k * self.coeffs[k] for k in range(1, n)]
        g = [d[m] + (d[m - 1] if m else 0) for m in range(n - 1)]
        L = TruncSeries.log_one_plus(n, "X").divide_by_t()
        return TruncSeries([0] + list((TruncSeries(g, n - 1, "X") * L).coeffs), n, "X")

    def psi_coeff(self, p):
        """Left inverse of phi in the X-coordinate.

        With M = trunc // p, the coefficients below p*M are read as a
        polynomial f and the unique decomposition
        f = sum_{i<p} (1+X)^i phi(f_i), deg f_i < M, is found by an exact
        p*M x p*M linear solve; returns f_0 at precision M.
        """
        if self.coord != "X":
            raise ValueError("psi is computed in the X-coordinate")
        if self.trunc < p:
            raise ValueError("truncation %d too small for psi with p=%d" % (self.trunc, p))
        M = self.trunc // p
        n = p * M
        A = psi_system(p, M)
        b = linalg.from_columns([self.coeffs[:n]], n)
        x = linalg.solve(A, b)
        assert x is not None, "singular psi system"
        return TruncSeries([linalg.frac(x[j, 0]) for j in range(M)], M, "X")


_PSI_CACHE = {}


def psi_system(p, M):
    """Columns (1+X)^i phi(X^j) mod X^{pM}, ordered (i, j) -> i*M + j."""
    key = (p, M)
    if key not in _PSI_CACHE:
        n = p * M
        phiX = TruncSeries([0] + [comb(p, m) for m in range(1, p + 1)], n, "X")
        cols = []
        for i in range(p):
            Yi = TruncSeries([comb(i, m) for m in range(i + 1)], n, "X")
            pw = TruncSeries.one(n, "X")
            for _ in range(M):
                cols.append((Yi * pw).coeffs)
                pw = pw * phiX
        _PSI_CACHE[key] = linalg.from_columns(cols, n)
    return _PSI_CACHE[key]


_TERM = re.compile(r"\s*([+-]?)\s*([^+-]+)")


def parse_series(text, trunc, coord="t"):
    """Parse ``"1 - 1/2*t + 3*t^2"`` into a TruncSeries."""
    s = text.strip()
    if not s:
        raise ValueError("empty series literal")
    coeffs = {}
    pos = 0
    while pos < len(s):
        m = _TERM.match(s, pos)
        if not m or m.end() == pos:
            raise ValueError("cannot parse %r at position %d" % (text, pos))
        sign, body = m.group(1), m.group(2).strip()
        c, deg = Fraction(-1 if sign == "-" else 1), 0
        for factor in body.split("*"):
            factor = factor.strip()
            if not factor:
                raise ValueError("empty factor in %r at position %d" % (text, m.start(2)))
            base, caret, exp = factor.partition("^")
            base, exp = base.strip(), exp.strip()
            if caret and not exp.isdigit():
                raise ValueError("bad exponent in %r at position %d" % (text, m.start(2)))
            if base == coord:
                deg += int(exp) if exp else 1
            elif base in COORDS:
                raise ValueError("coordinate %r in a %s-series: %r" % (base, coord, text))
            else:
                try:
                    val = Fraction(base)
                except ValueError:
                    raise ValueError("bad token %r in %r at position %d" % (factor, text, m.start(2))) from None
                c *= val ** int(exp) if exp else val
        coeffs[deg] = coeffs.get(deg, 0) + c
        pos = m.end()
    out = [Fraction(0)] * trunc
    for d, c in coeffs.items():
        if d < trunc:
            out[d] += c
    return TruncSeries(out, trunc, coord)


def to_X(f):
    return f.to_X()


def to_t(f):
    return f.to_t()
