"""Torsion-level (phi, Gamma)-modules: free modules over E[t]/t^N with nabla and phi.

A module of rank r is described by its basis v_0..v_{r-1}: column a of the
nabla-matrix A(t) is nabla(v_a), column a of the phi-matrix P(t) is
phi(v_a).  The underlying E-space has dimension r*N with the basis
t^j v_a at index j*r + a (degree-major), so "rows of degree < d" are the
first r*d rows of every operator.
"""

import random
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

import flint

from . import linalg
from .series import TruncSeries


def _series(x, trunc):
    if isinstance(x, TruncSeries):
        if x.coord != "t":
            x = x.to_t()
        if x.trunc < trunc:
            raise ValueError("entry known only mod t^%d, module needs t^%d" % (x.trunc, trunc))
        return x.truncate(trunc)
    if isinstance(x, str):
        return TruncSeries.parse(x, trunc, "t")
    return TruncSeries.constant(x, trunc)


def _smat(rows, trunc):
    return [[_series(x, trunc) for x in row] for row in rows]


def constant_part(S):
    return linalg.matrix([[x[0] for x in row] for row in S])


def series_matrix_is_constant(S):
    return all(all(c == 0 for c in x.coeffs[1:]) for row in S for x in row)


def format_poly(P, var="T"):
    """Monic polynomial (fmpq_poly) as text, highest degree first."""
    coeffs = [linalg.frac(c) for c in P.coeffs()]
    terms = []
    for n in range(len(coeffs) - 1, -1, -1):
        a = coeffs[n]
        if a == 0:
            continue
        mono = "" if n == 0 else (var if n == 1 else "%s^%d" % (var, n))
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
    for s, b in terms[1:]:
        out += " %s %s" % (s, b)
    return out


def poly_from_roots(roots):
    P = flint.fmpq_poly([1])
    for w in roots:
        P = P * flint.fmpq_poly([-linalg.q(w), 1])
    return P


def eval_poly_matrix(P, M):
    """P(M) for an fmpq_poly P, by Horner."""
    n = M.nrows()
    out = linalg.zeros(n, n)
    for c in reversed(P.coeffs()):
        out = out * M + linalg.eye(n) * c
    return out


class TorsionModule:
    """A rank-r free E[t]/t^N-module with a nabla-matrix and an optional phi-matrix.

    ``alpha`` is the gl2 parameter; it need not equal a Sen weight.
    """

    def __init__(self, nabla, trunc, prime=2, phi=None, alpha=0, label="", check=True):
        if trunc < 1:
            raise ValueError("truncation must be positive")
        self.trunc = trunc
        self.prime = prime
        self.alpha = Fraction(alpha)
        self.label = label
        self.nabla_mat = _smat(nabla, trunc)
        self.rank = len(self.nabla_mat)
        if any(len(row) != self.rank for row in self.nabla_mat):
            raise ValueError("nabla matrix must be square")
        self.phi_mat = None if phi is None else _smat(phi, trunc)
        if self.phi_mat is not None and (
            len(self.phi_mat) != self.rank or any(len(row) != self.rank for row in self.phi_mat)
        ):
            raise ValueError("phi matrix must have the same size as the nabla matrix")
        if check and self.phi_mat is not None:
            self.check_commutation()

    @property
    def dim(self):
        return self.rank * self.trunc

    def __repr__(self):
        return "TorsionModule(rank=%d, trunc=%d, p=%d, alpha=%s, label=%r)" % (
            self.rank, self.trunc, self.prime, self.alpha, self.label)

    def _replace(self, **kw):
        args = dict(nabla=self.nabla_mat, trunc=self.trunc, prime=self.prime, phi=self.phi_mat,
                    alpha=self.alpha, label=self.label, check=False)
        args.update(kw)
        return TorsionModule(**args)

    # -- E-linear operators ------------------------------------------------
    def _series_op(self, S, scale=None):
        """E-matrix of v_a -> sum_b S[b][a] v_b, extended by t^j v_a -> scale(j) t^j S v_a."""
        r, N = self.rank, self.trunc
        M = linalg.zeros(r * N, r * N)
        for a in range(r):
            for b in range(r):
                coeffs = S[b][a].coeffs
                for d, c in enumerate(coeffs):
                    if not c:
                        continue
                    for j in range(N - d):
                        s = c if scale is None else c * scale(j)
                        M[(j + d) * r + b, j * r + a] += linalg.q(s)
        return M

    @cached_property
    def t_matrix(self):
        r, N = self.rank, self.trunc
        M = linalg.zeros(r * N, r * N)
        for i in range(r * (N - 1)):
            M[i + r, i] = 1
        return M

    @cached_property
    def nabla_matrix(self):
        M = self._series_op(self.nabla_mat)
        r = self.rank
        for i in range(self.dim):
            M[i, i] += i // r
        return M

    @cached_property
    def phi_matrix(self):
        if self.phi_mat is None:
            raise ValueError("module has no phi-matrix")
        p = self.prime
        return self._series_op(self.phi_mat, scale=lambda j: Fraction(p) ** j)

    def has_phi(self):
        return self.phi_mat is not None

    def check_commutation(self):
        """nabla o phi = phi o nabla; raises with the first failing entry."""
        D = self.nabla_matrix * self.phi_matrix - self.phi_matrix * self.nabla_matrix
        bad = linalg.first_nonzero(D)
        if bad is not None:
            (i, j), v = bad
            r = self.rank
            raise ValueError(
                "nabla and phi do not commute: entry (t^%d v_%d <- t^%d v_%d) of [nabla, phi] is %s"
                % (i // r, i % r, j // r, j % r, v))

    # -- vectors -------------------------------------------------------------
    def vector(self, entries):
        """E-column of sum_a f_a v_a for series / polynomial strings f_a."""
        fs = [_series(f, self.trunc) for f in entries]
        if len(fs) != self.rank:
            raise ValueError("expected %d components" % self.rank)
        col = [0] * self.dim
        for a, f in enumerate(fs):
            for j, c in enumerate(f.coeffs):
                col[j * self.rank + a] = c
        return linalg.from_columns([col], self.dim)

    def series_vector(self, col):
        r, N = self.rank, self.trunc
        return [TruncSeries([linalg.frac(col[j * r + a, 0]) for j in range(N)], N, "t") for a in range(r)]

    def basis_vector(self, a, degree=0):
        col = [0] * self.dim
        col[degree * self.rank + a] = 1
        return linalg.from_columns([col], self.dim)

    def rows_below(self, d):
        """Number of E-coordinates of degree < d."""
        return self.rank * min(d, self.trunc)

    # -- invariants ------------------------------------------------------------
    def sen_polynomial(self):
        """Characteristic polynomial of nabla on D/tD (monic, variable T)."""
        return constant_part(self.nabla_mat).charpoly()

    def sen_weights_poly(self):
        return format_poly(self.sen_polynomial())

    def sen_containment(self):
        """Does P(nabla) D lie in tD for P the Sen polynomial?"""
        Y = eval_poly_matrix(self.sen_polynomial(), self.nabla_matrix)
        return linalg.is_zero(linalg.submatrix(Y, range(self.rank), range(self.dim)))

    # -- constructions -----------------------------------------------------------
    def twist_by_t(self, i):
        """Model of t^i D: nabla shifted by i, phi scaled by p^i."""
        if i < 0:
            raise ValueError("twist exponent must be non-negative")
        r = self.rank
        nab = [[self.nabla_mat[b][a] + (i if a == b else 0) for a in range(r)] for b in range(r)]
        phi = None
        if self.phi_mat is not None:
            phi = [[x.scalar_mul(Fraction(self.prime) ** i) for x in row] for row in self.phi_mat]
        label = "t^%d(%s)" % (i, self.label) if i else self.label
        return self._replace(nabla=nab, phi=phi, label=label)

    def truncate(self, n):
        if n > self.trunc:
            raise ValueError("cannot raise precision")
        return self._replace(trunc=n)

    def with_alpha(self, alpha):
        return self._replace(alpha=alpha)

    def without_phi(self):
        return self._replace(phi=None)

    def attach_gl2(self, alpha=None):
        return attach_gl2(self, self.alpha if alpha is None else alpha)


# -- model constructors ---------------------------------------------------------

def make_rank_one(w, phi_scalar=1, N=8, p=2, alpha=None, label=None):
    w = Fraction(w)
    return TorsionModule([[w]], N, p, [[phi_scalar]], alpha=w if alpha is None else alpha,
                         label=label or "rank1(w=%s)" % w)


def make_sen_model(shape, N=8, p=2, alpha=None, phi=None):
    """Rank-2 model with constant nabla-matrix.

    ``diagonal``: diag(0, alpha); ``nilpotent``: [[0,1],[0,0]] (weights (0,0),
    not de Rham); ``zero``: 0 (de Rham at weights (0,0)).  The default phi is
    the identity, except that ``phi`` may give the two diagonal entries.
    """
    if N < 2:
        raise ValueError("models need N >= 2")
    phi_diag = (1, 1) if phi is None else tuple(phi)
    P = [[phi_diag[0], 0], [0, phi_diag[1]]]
    if shape == "diagonal":
        if alpha is None:
            raise ValueError("diagonal model needs alpha")
        A = [[0, 0], [0, Fraction(alpha)]]
        label = "diag(0,%s)" % Fraction(alpha)
    elif shape == "nilpotent":
        A = [[0, 1], [0, 0]]
        if phi_diag[0] != phi_diag[1]:
            raise ValueError("phi must be scalar on the nilpotent model")
        label = "nilpotent"
    elif shape == "zero":
        A = [[0, 0], [0, 0]]
        label = "zero"
    else:
        raise ValueError("unknown shape %r" % (shape,))
    return TorsionModule(A, N, p, P, alpha=0 if alpha is None else alpha, label=label)


def make_extension(D1, D2, cocycle, phi_cocycle=None, alpha=None, label=None):
    """Block upper-triangular module with sub D1 and quotient D2.

    ``cocycle`` is the r1 x r2 block of the nabla-matrix (a flat list is read
    as a single row); ``phi_cocycle`` the matching phi block (default 0).
    """
    if (D1.trunc, D1.prime) != (D2.trunc, D2.prime):
        raise ValueError("extension needs equal truncation and prime")
    r1, r2, N = D1.rank, D2.rank, D1.trunc

    def block(x):
        if x is None:
            return [[0] * r2 for _ in range(r1)]
        if not isinstance(x, (list, tuple)):
            x = [x]
        if not isinstance(x[0], (list, tuple)):
            x = [list(x)]
        if len(x) != r1 or any(len(row) != r2 for row in x):
            raise ValueError("cocycle must be %d x %d" % (r1, r2))
        return x

    C = block(cocycle)
    A = [list(D1.nabla_mat[b]) + list(C[b]) for b in range(r1)]
    A += [[0] * r1 + list(D2.nabla_mat[b]) for b in range(r2)]
    P = None
    if D1.has_phi() and D2.has_phi():
        Cp = block(phi_cocycle)
        P = [list(D1.phi_mat[b]) + list(Cp[b]) for b in range(r1)]
        P += [[0] * r1 + list(D2.phi_mat[b]) for b in range(r2)]
    return TorsionModule(A, N, D1.prime, P, alpha=D1.alpha if alpha is None else alpha,
                         label=label or "ext(%s,%s)" % (D1.label, D2.label))


def weight_submodule(D, n1, n2):
    """Model of the submodule spanned by t^n1 v_0 and t^n2 v_1 (rank 2, constant upper-triangular data).

    For the diagonal model this is D_(n1, alpha+n2); for the nilpotent model
    the off-diagonal entry becomes t^(n2-n1), which needs n2 >= n1.
    """
    if D.rank != 2 or not series_matrix_is_constant(D.nabla_mat):
        raise ValueError("weight submodules are modelled for rank-2 constant models only")
    A = constant_part(D.nabla_mat)
    if A[1, 0] != 0:
        raise ValueError("nabla-matrix must be upper triangular")
    b = linalg.frac(A[0, 1])
    if b and n2 < n1:
        raise ValueError("span of t^%d v0, t^%d v1 is not nabla-stable" % (n1, n2))
    N = D.trunc
    off = TruncSeries.gen(N, "t", n2 - n1).scalar_mul(b) if b else 0
    nab = [[linalg.frac(A[0, 0]) + n1, off], [0, linalg.frac(A[1, 1]) + n2]]
    phi = None
    if D.has_phi():
        if not series_matrix_is_constant(D.phi_mat):
            raise ValueError("phi-matrix must be constant")
        P = constant_part(D.phi_mat)
        p = Fraction(D.prime)
        poff = TruncSeries.gen(N, "t", max(n2 - n1, 0)).scalar_mul(linalg.frac(P[0, 1]) * p**n2) if P[0, 1] else 0
        phi = [[linalg.frac(P[0, 0]) * p**n1, poff], [0, linalg.frac(P[1, 1]) * p**n2]]
    return TorsionModule(nab, N, D.prime, phi, alpha=D.alpha, label="%s_(%d,%d)" % (D.label, n1, n2))


def direct_sum(*mods):
    N, p = mods[0].trunc, mods[0].prime
    ranks = [M.rank for M in mods]
    r = sum(ranks)
    A = [[0] * r for _ in range(r)]
    P = [[0] * r for _ in range(r)] if all(M.has_phi() for M in mods) else None
    off = 0
    for M in mods:
        if (M.trunc, M.prime) != (N, p):
            raise ValueError("direct sum needs equal truncation and prime")
        for b in range(M.rank):
            for a in range(M.rank):
                A[off + b][off + a] = M.nabla_mat[b][a]
                if P is not None:
                    P[off + b][off + a] = M.phi_mat[b][a]
        off += M.rank
    return TorsionModule(A, N, p, P, alpha=mods[0].alpha, label=" + ".join(M.label for M in mods), check=False)


# -- gl2 structure -------------------------------------------------------------------

@dataclass
class Gl2Structure:
    """E-matrices of u+, u-, h, z on D; u- (hence everything built from it) is valid below degree ``prec``."""

    module: TorsionModule
    alpha: Fraction
    u_plus: object
    u_minus: object
    h: object
    z: object
    prec: int

    def matrices(self):
        return {"u+": self.u_plus, "u-": self.u_minus, "h": self.h, "z": self.z}

    def casimir(self):
        from .ugl2 import CASIMIR, evaluate

        return evaluate(CASIMIR, self.matrices())

    def agree_below(self, A, B, d):
        n = self.module.rows_below(d)
        return linalg.submatrix(A, range(n), range(A.ncols())) == linalg.submatrix(B, range(n), range(B.ncols()))

    def check_brackets(self, d=None):
        """The gl2 relations, compared on rows of degree < d (default prec - 1)."""
        d = self.prec - 1 if d is None else d
        E, F, H, Z = self.u_plus, self.u_minus, self.h, self.z
        checks = {
            "[u+,u-]=h": (E * F - F * E, H),
            "[h,u+]=2u+": (H * E - E * H, E * 2),
            "[h,u-]=-2u-": (H * F - F * H, F * -2),
            "[z,u+]=0": (Z * E - E * Z, E * 0),
            "[z,u-]=0": (Z * F - F * Z, F * 0),
        }
        return {name: self.agree_below(a, b, d) for name, (a, b) in checks.items()}

    def casimir_is_scalar(self):
        n = self.module.dim
        target = linalg.eye(n) * linalg.q(self.alpha**2 - 1)
        return self.agree_below(self.casimir(), target, self.prec - 1)


def divide_rows_by_t(M, Y):
    """E-matrix of Y/t on M, given that Y lands in tM; the top degree becomes unknown (zero)."""
    r, n = M.rank, M.dim
    if not linalg.is_zero(linalg.submatrix(Y, range(r), range(Y.ncols()))):
        return None
    out = linalg.zeros(n, Y.ncols())
    for i in range(r, n):
        for j in range(Y.ncols()):
            if Y[i, j] != 0:
                out[i - r, j] = Y[i, j]
    return out


def attach_gl2(D, alpha):
    """u+ = t, h = 2 nabla - alpha + 1, z = alpha - 1, u- = -nabla(nabla - alpha)/t."""
    alpha = Fraction(alpha)
    n = D.dim
    I = linalg.eye(n)
    Nb = D.nabla_matrix
    Y = Nb * (Nb - I * linalg.q(alpha))
    Um = divide_rows_by_t(D, Y)
    if Um is None:
        raise ValueError("nabla(nabla - %s) does not map D into tD: alpha incompatible with the Sen polynomial %s"
                         % (alpha, D.sen_weights_poly()))
    return Gl2Structure(D, alpha, D.t_matrix, -Um, Nb * 2 - I * linalg.q(alpha - 1), I * linalg.q(alpha - 1),
                        D.trunc - 1)


# -- submodules -------------------------------------------------------------------------

def is_submodule(M, S, use_phi=None):
    use_phi = M.has_phi() if use_phi is None else use_phi
    ops = [M.t_matrix, M.nabla_matrix] + ([M.phi_matrix] if use_phi else [])
    return all(linalg.contains(S, T * S) for T in ops)


def submodule_span(M, generators, use_phi=None):
    """Smallest t-, nabla- (and phi-) stable subspace containing the generator columns."""
    use_phi = M.has_phi() if use_phi is None else use_phi
    ops = [M.t_matrix, M.nabla_matrix] + ([M.phi_matrix] if use_phi else [])
    S = linalg.span(generators)
    while True:
        S2 = linalg.span(linalg.hstack(S, *[T * S for T in ops]))
        if S2.ncols() == S.ncols():
            return S
        S = S2


def saturation_check(M, S):
    """t x in S implies x in S, modulo t^(N-1) M (where t kills everything)."""
    n = M.dim
    L = annihilator(S)
    pre = linalg.kernel(L * M.t_matrix) if L.nrows() else linalg.eye(n)
    top = linalg.from_columns([[1 if i == j else 0 for i in range(n)] for j in range(M.rows_below(M.trunc - 1), n)], n)
    return linalg.contains(linalg.hstack(S, top), pre)


def annihilator(S):
    """Rows spanning the linear forms vanishing on span(S)."""
    n = S.nrows()
    if S.ncols() == 0:
        return linalg.eye(n)
    K = linalg.kernel(S.transpose())
    return K.transpose()


def free_generators(M, S):
    """Lift a basis of S/tS; raises if S is not free over E[t]/t^N."""
    tS = linalg.image(M.t_matrix, S)
    gens = []
    cur = tS
    for j in range(S.ncols()):
        v = linalg.column(S, j)
        if not linalg.contains(cur, v):
            gens.append(v)
            cur = linalg.hstack(cur, v)
    if len(gens) * M.trunc != S.ncols():
        raise ValueError("subspace of dimension %d is not free over E[t]/t^%d" % (S.ncols(), M.trunc))
    return gens


def _frame(M, gens):
    """E-matrix with columns t^j g_b at index j*s + b."""
    cols = []
    powers = list(gens)
    for j in range(M.trunc):
        cols.extend(linalg.columns(linalg.hstack(*powers)))
        powers = [M.t_matrix * g for g in powers]
    return linalg.from_columns(cols, M.dim)


def _series_coords(y, s, N):
    """Coordinates y (index j*s + b) to a list of s series."""
    return [TruncSeries([linalg.frac(y[j * s + b, 0]) for j in range(N)], N, "t") for b in range(s)]


def _matrix_in_frame(M, gens, op, extra=None):
    s, N = len(gens), M.trunc
    F = _frame(M, gens)
    if extra is not None and extra.ncols():
        F = linalg.hstack(F, extra)
    cols = []
    for g in gens:
        y = linalg.solve(F, op * g)
        if y is None:
            raise ValueError("subspace is not stable")
        cols.append(_series_coords(y, s, N))
    return [[cols[a][b] for a in range(s)] for b in range(s)]


def restrict(M, S, label=None):
    """The submodule S as a TorsionModule, together with its generators."""
    gens = free_generators(M, S)
    A = _matrix_in_frame(M, gens, M.nabla_matrix)
    P = _matrix_in_frame(M, gens, M.phi_matrix) if M.has_phi() else None
    sub = TorsionModule(A, M.trunc, M.prime, P, alpha=M.alpha, label=label or "sub(%s)" % M.label, check=False)
    return sub, gens


def quotient(M, S, label=None):
    """M/S as a TorsionModule (S must be a saturated free submodule)."""
    full = linalg.eye(M.dim)
    gens = []
    cur = linalg.hstack(S, linalg.image(M.t_matrix, full)) if S.ncols() else linalg.image(M.t_matrix, full)
    for a in range(M.rank):
        v = M.basis_vector(a)
        if not linalg.contains(cur, v):
            gens.append(v)
            cur = linalg.hstack(cur, v)
    s = len(gens)
    if s * M.trunc + S.ncols() != M.dim:
        raise ValueError("quotient is not free")
    A = _quotient_matrix(M, gens, S, M.nabla_matrix)
    P = _quotient_matrix(M, gens, S, M.phi_matrix) if M.has_phi() else None
    return TorsionModule(A, M.trunc, M.prime, P, alpha=M.alpha, label=label or "quot(%s)" % M.label, check=False)


def _quotient_matrix(M, gens, S, op):
    s, N = len(gens), M.trunc
    F = linalg.hstack(_frame(M, gens), S) if S.ncols() else _frame(M, gens)
    cols = []
    for g in gens:
        y = linalg.solve(F, op * g)
        cols.append(_series_coords(linalg.submatrix(y, range(s * N), [0]), s, N))
    return [[cols[a][b] for a in range(s)] for b in range(s)]


def frame_matrix(M, gens):
    return _frame(M, gens)


# -- homomorphisms -------------------------------------------------------------------------

def _coeff(S, d):
    """Constant matrix of degree-d coefficients of a series matrix."""
    return [[x[d] for x in row] for row in S]


def hom_equations(M1, M2, use_phi=False):
    """Rows of the linear system for X (r2 x r1, mod t^N) with t X' + A2 X - X A1 = 0 (and X P1 = P2 phi(X))."""
    r1, r2, N = M1.rank, M2.rank, M1.trunc
    if M2.trunc != N:
        raise ValueError("modules must have the same truncation")
    nvar = N * r2 * r1

    def idx(j, b, a):
        return j * r2 * r1 + b * r1 + a

    rows = []
    A1 = [_coeff(M1.nabla_mat, d) for d in range(N)]
    A2 = [_coeff(M2.nabla_mat, d) for d in range(N)]
    for j in range(N):
        for b in range(r2):
            for a in range(r1):
                row = {idx(j, b, a): Fraction(j)}
                for d in range(j + 1):
                    for c in range(r2):  # (A2_d X_{j-d})[b,a]
                        if A2[d][b][c]:
                            key = idx(j - d, c, a)
                            row[key] = row.get(key, 0) + A2[d][b][c]
                    for c in range(r1):  # (X_{j-d} A1_d)[b,a]
                        if A1[d][c][a]:
                            key = idx(j - d, b, c)
                            row[key] = row.get(key, 0) - A1[d][c][a]
                rows.append(row)
    if use_phi:
        if not (M1.has_phi() and M2.has_phi()):
            raise ValueError("phi-equivariance requested but a module has no phi")
        p = Fraction(M1.prime)
        P1 = [_coeff(M1.phi_mat, d) for d in range(N)]
        P2 = [_coeff(M2.phi_mat, d) for d in range(N)]
        for j in range(N):
            for b in range(r2):
                for a in range(r1):
                    row = {}
                    for d in range(j + 1):
                        for c in range(r1):  # (X_{j-d} P1_d)[b,a]
                            if P1[d][c][a]:
                                key = idx(j - d, b, c)
                                row[key] = row.get(key, 0) + P1[d][c][a]
                        for c in range(r2):  # (P2_d p^{j-d} X_{j-d})[b,a]
                            if P2[d][b][c]:
                                key = idx(j - d, c, a)
                                row[key] = row.get(key, 0) - P2[d][b][c] * p ** (j - d)
                    rows.append(row)
    return rows, nvar, idx


def _dense(rows, nvar):
    M = linalg.zeros(len(rows), nvar)
    for i, row in enumerate(rows):
        for j, v in row.items():
            if v:
                M[i, j] = linalg.q(v)
    return M


def hom_space(M1, M2, use_phi=False):
    """Basis of Hom(M1, M2) (equivariant, mod t^N) as a list of series matrices."""
    rows, nvar, idx = hom_equations(M1, M2, use_phi)
    K = linalg.kernel(_dense(rows, nvar)) if rows else linalg.eye(nvar)
    out = []
    N, r1, r2 = M1.trunc, M1.rank, M2.rank
    for c in range(K.ncols()):
        X = [[TruncSeries([linalg.frac(K[idx(j, b, a), c]) for j in range(N)], N, "t") for a in range(r1)]
             for b in range(r2)]
        out.append(X)
    return out


def find_isomorphism(M1, M2, use_phi=False, tries=12, seed=0):
    """An equivariant isomorphism M1 -> M2 (series matrix), or None."""
    if M1.rank != M2.rank or M1.trunc != M2.trunc:
        return None
    if M1.sen_polynomial() != M2.sen_polynomial():
        return None
    basis = hom_space(M1, M2, use_phi)
    if not basis:
        return None
    rng = random.Random(seed)
    for attempt in range(tries):
        coeffs = [1] * len(basis) if attempt == 0 else [rng.randint(-5, 5) for _ in basis]
        X = [[sum((B[b][a].scalar_mul(c) for B, c in zip(basis, coeffs)), TruncSeries.zero(M1.trunc))
              for a in range(M1.rank)] for b in range(M1.rank)]
        if constant_part(X).det() != 0:
            return X
    return None


def are_isomorphic(M1, M2, use_phi=False):
    return find_isomorphism(M1, M2, use_phi) is not None


@dataclass
class SplitVerdict:
    split: bool
    projector: object = None
    trunc: int = 0
    use_phi: bool = False
    note: str = ""

    def __bool__(self):
        return self.split


def is_module_split(M, S, use_phi=None):
    """Search for an equivariant projector of M onto the submodule S.

    Solves for an R-linear X commuting with nabla (and phi) such that
    X(M) lies in S and X is the identity on S.  The verdict holds "mod t^N".
    """
    use_phi = M.has_phi() if use_phi is None else use_phi
    if not is_submodule(M, S, use_phi):
        raise ValueError("S is not a submodule")
    rows, nvar, idx = hom_equations(M, M, use_phi)
    r, N = M.rank, M.trunc
    L = annihilator(S)
    # image in S: L * (X v_a) = 0 for each basis vector v_a
    for a in range(r):
        for li in range(L.nrows()):
            row = {}
            for j in range(N):
                for b in range(r):
                    c = L[li, j * r + b]
                    if c != 0:
                        row[idx(j, b, a)] = linalg.frac(c)
            if row:
                rows.append(row)
    # identity on S
    for col in range(S.ncols()):
        s = [linalg.frac(S[i, col]) for i in range(M.dim)]
        for jj in range(N):
            for b in range(r):
                row = {}
                for j in range(jj + 1):
                    for a in range(r):
                        if s[j * r + a]:
                            key = idx(jj - j, b, a)
                            row[key] = row.get(key, 0) + s[j * r + a]
                row["rhs"] = s[jj * r + b]
                rows.append(row)
    A = linalg.zeros(len(rows), nvar)
    rhs = linalg.zeros(len(rows), 1)
    for i, row in enumerate(rows):
        for key, v in row.items():
            if key == "rhs":
                rhs[i, 0] = linalg.q(v)
            elif v:
                A[i, key] = linalg.q(v)
    x = linalg.solve(A, rhs)
    if x is None:
        return SplitVerdict(False, None, N, use_phi, "no equivariant projector mod t^%d" % N)
    X = [[TruncSeries([linalg.frac(x[idx(j, b, a), 0]) for j in range(N)], N, "t") for a in range(r)]
         for b in range(r)]
    return SplitVerdict(True, X, N, use_phi, "projector found mod t^%d" % N)


def line_submodule(M, a):
    """Submodule generated by the basis vector v_a (t- and nabla-closure)."""
    return submodule_span(M, M.basis_vector(a))


def truncate_subspace(M, S, n):
    """Image of the subspace S of M in M/t^n."""
    return linalg.span(linalg.top_rows(S, M.rows_below(n)))


def is_free(M, S):
    try:
        free_generators(M, S)
        return True
    except ValueError:
        return False


def free_truncation(M, S, max_loss):
    """Smallest e <= max_loss with S mod t^(N-e) free; returns (e, M mod t^(N-e), S mod t^(N-e)).

    Kernels of R-linear maps at truncation pick up t^(N-1)-torsion that is
    not there over the full ring; dropping the top degrees removes it.
    """
    for e in range(max_loss + 1):
        n = M.trunc - e
        if n < 1:
            break
        Mn = M.truncate(n) if e else M
        Sn = truncate_subspace(M, S, n) if e else S
        if is_free(Mn, Sn):
            return e, Mn, Sn
    raise ValueError("subspace is not free within %d degrees of the boundary" % max_loss)
