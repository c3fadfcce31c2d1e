"""The enveloping algebra U(gl2) in PBW normal form.

Basis monomials are ``(u-)^i h^j z^m (u+)^l``, stored as tuples
``(i, j, m, l)``.  Conventions for the 2x2 matrices:

    h = diag(1, -1)   a+ = E11   a- = E22   z = a+ + a- = 1
    u+ = E12          u- = E21

so that [u+, u-] = h, [h, u+] = 2u+, [h, u-] = -2u-.  The lowering operator
is the elementary matrix E21; its bracket with E12 is what makes the two
Casimir expressions h^2 - 2h + 4u+u- and h^2 + 2h + 4u-u+ coincide.
"""

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from . import linalg

# letters in PBW order
F, H, Z, E = 0, 1, 2, 3
_LETTER = {F: "u-", H: "h", Z: "z", E: "u+"}


@lru_cache(maxsize=None)
def _normal_word(word):
    """Normal form of a word in the letters F < H < Z < E, as a tuple of (monomial, coeff)."""
    for k in range(len(word) - 1):
        a, b = word[k], word[k + 1]
        if a > b:
            break
    else:
        mono = (word.count(F), word.count(H), word.count(Z), word.count(E))
        return ((mono, Fraction(1)),)
    pre, post = word[:k], word[k + 2 :]
    out = {}

    def acc(w, c):
        for mono, coeff in _normal_word(w):
            out[mono] = out.get(mono, 0) + c * coeff

    acc(pre + (b, a) + post, 1)
    if a == Z or b == Z:
        pass
    elif (a, b) == (H, F):  # hf = fh - 2f
        acc(pre + (F,) + post, -2)
    elif (a, b) == (E, F):  # ef = fe + h
        acc(pre + (H,) + post, 1)
    elif (a, b) == (E, H):  # eh = he - 2e
        acc(pre + (E,) + post, -2)
    return tuple((m, c) for m, c in out.items() if c)


def _word(mono):
    i, j, m, l = mono
    return (F,) * i + (H,) * j + (Z,) * m + (E,) * l


@lru_cache(maxsize=None)
def _mono_mul(m1, m2):
    # z is central: pull it out before rewriting
    a = (m1[0], m1[1], 0, m1[3])
    b = (m2[0], m2[1], 0, m2[3])
    zs = m1[2] + m2[2]
    return tuple(((i, j, m + zs, l), c) for (i, j, m, l), c in _normal_word(_word(a) + _word(b)))


class UEAElement:
    """An element of U(gl2), always kept in PBW normal form."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        clean = {}
        for mono, c in (terms or {}).items():
            c = Fraction(c)
            if c:
                clean[tuple(mono)] = c
        self.terms = clean

    @classmethod
    def scalar(cls, c):
        return cls({(0, 0, 0, 0): c})

    @classmethod
    def from_word(cls, word):
        return cls(dict(_normal_word(tuple(word))))

    def _promote(self, other):
        if isinstance(other, UEAElement):
            return other
        return UEAElement.scalar(other)

    def __add__(self, other):
        other = self._promote(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return UEAElement(out)

    __radd__ = __add__

    def __neg__(self):
        return UEAElement({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._promote(other))

    def __rsub__(self, other):
        return self._promote(other) - self

    def __mul__(self, other):
        if not isinstance(other, UEAElement):
            other = Fraction(other)
            return UEAElement({m: c * other for m, c in self.terms.items()})
        out = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                for m, c in _mono_mul(m1, m2):
                    out[m] = out.get(m, 0) + c1 * c2 * c
        return UEAElement(out)

    def __rmul__(self, other):
        return self * other

    def __truediv__(self, c):
        return self * (1 / Fraction(c))

    def __pow__(self, n):
        out = UEAElement.scalar(1)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = UEAElement.scalar(other)
        if not isinstance(other, UEAElement):
            return NotImplemented
        return self.terms == other.terms

    __hash__ = None

    def is_zero(self):
        return not self.terms

    def degree(self):
        return max((sum(m) for m in self.terms), default=-1)

    def scalar_value(self):
        """The constant, if this element is a scalar; else None."""
        if not self.terms:
            return Fraction(0)
        if set(self.terms) == {(0, 0, 0, 0)}:
            return self.terms[(0, 0, 0, 0)]
        return None

    def __repr__(self):
        return "UEAElement(%s)" % format_element(self)

    def __str__(self):
        return format_element(self)


def normal_form(x):
    """PBW representative; elements are normalised on construction, so this is a copy."""
    return UEAElement(dict(x.terms))


U_PLUS = UEAElement({(0, 0, 0, 1): 1})
U_MINUS = UEAElement({(1, 0, 0, 0): 1})
H_ = UEAElement({(0, 1, 0, 0): 1})
Z_ = UEAElement({(0, 0, 1, 0): 1})
A_PLUS = (Z_ + H_) / 2
A_MINUS = (Z_ - H_) / 2
CASIMIR = H_ * H_ - 2 * H_ + 4 * U_PLUS * U_MINUS

GENERATORS = {"u+": U_PLUS, "u-": U_MINUS, "h": H_, "z": Z_, "a+": A_PLUS, "a-": A_MINUS}


def format_element(x):
    if not x.terms:
        return "0"

    def key(item):
        m = item[0]
        return (-sum(m), tuple(-v for v in m))

    parts = []
    for mono, c in sorted(x.terms.items(), key=key):
        factors = []
        for letter, e in zip((F, H, Z, E), mono):
            if e:
                factors.append(_LETTER[letter] + ("^%d" % e if e > 1 else ""))
        body = "*".join(factors)
        mag = abs(c)
        if not body:
            text = str(mag)
        elif mag == 1:
            text = body
        else:
            text = "%s*%s" % (mag, body)
        parts.append(("-" if c < 0 else "+", text))
    out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, text in parts[1:]:
        out += " %s %s" % (sign, text)
    return out


# -- parsing ------------------------------------------------------------

class ParseError(ValueError):
    def __init__(self, msg, pos, text):
        super().__init__("%s at position %d in %r" % (msg, pos, text))
        self.pos = pos


_TOKEN = re.compile(r"\s*(?:(?P<num>\d+(?:/\d+)?)|(?P<id>[ua][+-]|[hz])|(?P<op>[-+*^()]))")


def _tokenize(text):
    pos, toks = 0, []
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            bad = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise ParseError("unexpected character %r" % text[bad], bad, text)
        kind = m.lastgroup
        toks.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    toks.append(("end", None, len(text)))
    return toks


def parse(text):
    """Parse an expression such as ``"h^2-2*h+4*u+*u-"`` into normal form."""
    toks = _tokenize(text)
    k = 0

    def peek():
        return toks[k]

    def take(kind=None, value=None):
        nonlocal k
        tok = toks[k]
        if (kind and tok[0] != kind) or (value and tok[1] != value):
            raise ParseError("expected %s" % (value or kind), tok[2], text)
        k += 1
        return tok

    def expr():
        x = term()
        while peek()[0] == "op" and peek()[1] in "+-":
            op = take()[1]
            y = term()
            x = x + y if op == "+" else x - y
        return x

    def term():
        x = factor()
        while peek()[0] == "op" and peek()[1] == "*":
            take()
            x = x * factor()
        return x

    def factor():
        x = unary()
        if peek()[0] == "op" and peek()[1] == "^":
            take()
            e = take("num")
            if "/" in e[1]:
                raise ParseError("exponent must be a non-negative integer", e[2], text)
            x = x ** int(e[1])
        return x

    def unary():
        if peek()[0] == "op" and peek()[1] == "-":
            take()
            return -unary()
        return atom()

    def atom():
        kind, val, pos = peek()
        if kind == "num":
            take()
            return UEAElement.scalar(Fraction(val))
        if kind == "id":
            take()
            return GENERATORS[val]
        if kind == "op" and val == "(":
            take()
            x = expr()
            take("op", ")")
            return x
        raise ParseError("unexpected %s" % ("end of input" if kind == "end" else repr(val)), pos, text)

    out = expr()
    if peek()[0] != "end":
        raise ParseError("trailing input %r" % peek()[1], peek()[2], text)
    return out


# -- GL2 and the adjoint action -----------------------------------------

@dataclass(frozen=True)
class GL2Elem:
    a: Fraction
    b: Fraction
    c: Fraction
    d: Fraction

    def __post_init__(self):
        for name in "abcd":
            object.__setattr__(self, name, Fraction(getattr(self, name)))
        if self.det == 0:
            raise ValueError("singular matrix")

    @property
    def det(self):
        return self.a * self.d - self.b * self.c

    @classmethod
    def identity(cls):
        return cls(1, 0, 0, 1)

    def rows(self):
        return ((self.a, self.b), (self.c, self.d))

    def inverse(self):
        D = self.det
        return GL2Elem(self.d / D, -self.b / D, -self.c / D, self.a / D)

    def __matmul__(self, other):
        return GL2Elem(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )


_GEN_MATRIX = {
    "u+": ((0, 1), (0, 0)),
    "u-": ((0, 0), (1, 0)),
    "h": ((1, 0), (0, -1)),
    "z": ((1, 0), (0, 1)),
}


def _mat_mul(A, B):
    return tuple(tuple(sum(A[i][k] * B[k][j] for k in range(2)) for j in range(2)) for i in range(2))


def lie_element(M):
    """The element of gl2 ⊂ U(gl2) represented by a 2x2 matrix."""
    (m11, m12), (m21, m22) = M
    return m12 * U_PLUS + m21 * U_MINUS + Fraction(m11 - m22, 2) * H_ + Fraction(m11 + m22, 2) * Z_


def adjoint_generator(g, name):
    """Ad_g of a generator: g X g^{-1} read back as an element of gl2."""
    X = _GEN_MATRIX[name]
    M = _mat_mul(_mat_mul(g.rows(), X), g.inverse().rows())
    return lie_element(M)


def adjoint(g, x):
    """Ad_g(x), extended multiplicatively from the generators."""
    images = [adjoint_generator(g, n) for n in ("u-", "h", "z", "u+")]
    out = UEAElement()
    for mono, c in x.terms.items():
        term = UEAElement.scalar(c)
        for img, e in zip(images, mono):
            for _ in range(e):
                term = term * img
        out = out + term
    return out


# -- central quotients --------------------------------------------------

def reduce_central(x, zeta, mu):
    """Image of x in U(gl2)/(z - zeta, c - mu).

    z is replaced by zeta and every monomial containing both u- and u+ is
    rewritten with u- u+ = (mu - h^2 - 2h)/4 until none is left; the
    result is the canonical representative spanned by u-^i h^j and h^j u+^l.
    """
    zeta, mu = Fraction(zeta), Fraction(mu)
    pending = {}
    for (i, j, m, l), c in x.terms.items():
        key = (i, j, 0, l)
        pending[key] = pending.get(key, 0) + c * zeta**m
    core = (Fraction(mu, 4) - H_ * H_ / 4 - H_ / 2)
    done = {}
    while pending:
        mono, c = pending.popitem()
        if not c:
            continue
        i, j, _, l = mono
        if i == 0 or l == 0:
            done[mono] = done.get(mono, 0) + c
            continue
        # u-^i h^j u+^l = u-^{i-1} (h+2)^j (u- u+) u+^{l-1}
        piece = UEAElement({(i - 1, 0, 0, 0): c}) * ((H_ + 2) ** j) * core * UEAElement({(0, 0, 0, l - 1): 1})
        for m2, c2 in piece.terms.items():
            pending[m2] = pending.get(m2, 0) + c2
    return UEAElement(done)


# -- evaluation ----------------------------------------------------------

def evaluate(x, mats):
    """Evaluate x on a module given by matrices for u+, u-, h, z."""
    names = ("u-", "h", "z", "u+")
    try:
        gens = [mats[n] for n in names]
    except KeyError as exc:
        raise ValueError("module must provide matrices for u+, u-, h, z") from exc
    n = gens[0].nrows()
    for G in gens:
        if G.nrows() != n or G.ncols() != n:
            raise ValueError("dimension mismatch among generator matrices")
    powers = [[linalg.eye(n)] for _ in gens]

    def pw(g, e):
        while len(powers[g]) <= e:
            powers[g].append(powers[g][-1] * gens[g])
        return powers[g][e]

    out = linalg.zeros(n, n)
    for mono, c in x.terms.items():
        term = linalg.eye(n)
        for g, e in enumerate(mono):
            if e:
                term = term * pw(g, e)
        out = out + term * linalg.q(c)
    return out


# -- identity checks -----------------------------------------------------

@dataclass(frozen=True)
class ScalarLaw:
    """Outcome of comparing two sides of an identity in a central quotient.

    ``scalar`` is the s with lhs = s * rhs (None when no such s exists);
    ``exponents`` lists the e in [-4, 4] with s = det(g)^e.
    """

    holds: bool
    scalar: Fraction
    det: Fraction
    exponents: tuple

    @property
    def as_printed(self):
        return self.holds and self.scalar == 1


def proportionality(lhs, rhs):
    """The unique s with lhs = s * rhs, or None."""
    if rhs.is_zero():
        return Fraction(1) if lhs.is_zero() else None
    mono = next(iter(rhs.terms))
    s = lhs.terms.get(mono, Fraction(0)) / rhs.terms[mono]
    return s if lhs == rhs * s else None


def _law(lhs, rhs, g):
    s = proportionality(lhs, rhs)
    if s is None:
        return ScalarLaw(False, None, g.det, ())
    exps = tuple(e for e in range(-4, 5) if g.det**e == s)
    return ScalarLaw(True, s, g.det, exps)


def lie_lemma_sides(g, alpha):
    alpha = Fraction(alpha)
    zeta, mu = alpha - 1, alpha * alpha - 1
    lhs = U_PLUS * adjoint(g, U_PLUS)
    rhs = (-g.c * A_PLUS + g.a * U_PLUS) * (-g.c * (A_PLUS - alpha) + g.a * U_PLUS)
    return reduce_central(lhs, zeta, mu), reduce_central(rhs, zeta, mu)


def verify_lie_lemma(g, alpha):
    """u+ Ad_g(u+) against (-c a+ + a u+)(-c(a+ - alpha) + a u+) where z = alpha-1, c = alpha^2-1."""
    return _law(*lie_lemma_sides(g, alpha), g)


def adg_formula_sides(g, alpha):
    alpha = Fraction(alpha)
    zeta, mu = alpha - 1, alpha * alpha - 1
    lhs = adjoint(g, g.c * A_PLUS + g.d * U_PLUS)
    rhs = g.det * (-g.c * (A_PLUS - alpha + 1) + g.a * U_PLUS)
    return reduce_central(lhs, zeta, mu), reduce_central(rhs, zeta, mu)


def verify_adg_formula(g, alpha):
    """Ad_g(c a+ + d u+) against det(g) (-c(a+ - alpha + 1) + a u+)."""
    return _law(*adg_formula_sides(g, alpha), g)


def consistent_exponent(laws):
    """The det-exponents shared by every law (empty tuple if none)."""
    common = None
    for law in laws:
        if not law.holds:
            return ()
        if law.det in (1, -1) and law.scalar in (1, -1):
            # det = ±1 cannot discriminate exponents of matching parity
            exps = set(e for e in range(-4, 5) if law.det**e == law.scalar)
        else:
            exps = set(law.exponents)
        common = exps if common is None else common & exps
    return tuple(sorted(common or ()))
