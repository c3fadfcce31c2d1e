"""The translation D (x) V_k, its Casimir, and the generalized-eigenspace decomposition.

Two coordinate systems are used.

E-coordinates: x = sum_m V_m (x) e_m with V_m in D/t^N.  The gl2 action is
diagonal here and the Casimir is the explicit componentwise formula

    c(x)_m = (alpha^2 - 1 + k(k+2)) V_m + 4 u- V_{m-1}
             + 4 (m+1)(k-m) t V_{m+1} + 2 (2m - k) h V_m.

R-coordinates: t acts on D (x) V_k through both factors, and the elements
v_a (x) e_i form a basis over R, with f.(v (x) e_i) = sum_j (d^j f/dt^j / j!) v (x) e_{i+j}.
Converting E- to R-coordinates costs one degree per step of i, and u- costs
one more, so everything is exact modulo t^(N - k - 1): the "usable precision".
The quotient Q = (D (x) V_k) / t^(N-k-1) is an honest TorsionModule of rank
r(k+1), on which c is an R-linear matrix; all spectral work happens there.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

from . import linalg
from . import pgmod
from .pgmod import TorsionModule, attach_gl2, format_poly
from .series import TruncSeries
from .symk import make_symk


# -- coefficient-list helpers (a series vector is a list of r coefficient lists) --

def _vec(n, r):
    return [[Fraction(0)] * n for _ in range(r)]


def _col_series(S, a, n):
    """Column a of a series matrix as a series vector truncated at n."""
    return [list(S[b][a].coeffs[:n]) for b in range(len(S))]


def _smat_vec(S, v, n):
    """S(t) v for a series matrix S and series vector v, mod t^n."""
    r = len(S)
    out = _vec(n, r)
    for b in range(r):
        for a in range(r):
            s = S[b][a].coeffs
            va = v[a]
            for i in range(min(n, len(s))):
                if s[i]:
                    for j in range(min(n - i, len(va))):
                        if va[j]:
                            out[b][i + j] += s[i] * va[j]
    return out


def _taylor(f, j):
    """(d/dt)^j f / j! as a coefficient list (length drops by j)."""
    return [comb(n + j, j) * f[n + j] for n in range(len(f) - j)]


def e_to_r(Vs, n_out):
    """E-coordinates (k+1 series vectors) to R-coordinates, each truncated at n_out.

    F_m = V_m - sum_{i<m} (d/dt)^(m-i) F_i / (m-i)!, so F_m is known one degree
    less than F_(m-1).
    """
    F = []
    for m, V in enumerate(Vs):
        cur = [list(c) for c in V]
        for i in range(m):
            for a in range(len(cur)):
                d = _taylor(F[i][a], m - i)
                L = min(len(cur[a]), len(d))
                cur[a] = [cur[a][j] - d[j] for j in range(L)]
        F.append(cur)
    short = min(len(c) for Fm in F for c in Fm)
    if short < n_out:
        raise ValueError("R-coordinates known to t^%d only, need t^%d" % (short, n_out))
    return [[c[:n_out] for c in Fm] for Fm in F]


def r_to_e(F, n):
    """R-coordinates to E-coordinates mod t^n (F_i given at least to t^n)."""
    k1 = len(F)
    r = len(F[0])
    V = [[[Fraction(0)] * n for _ in range(r)] for _ in range(k1)]
    for i, Fi in enumerate(F):
        for m in range(i, k1):
            for a in range(r):
                d = _taylor(list(Fi[a]) + [Fraction(0)] * (n + m - i), m - i)
                for j in range(n):
                    V[m][a][j] += d[j]
    return V


class TranslatedModule:
    """D (x) V_k with its diagonal gl2 structure.

    Attributes
    ----------
    Q : TorsionModule
        The quotient mod t^usable in R-coordinates (basis v_a (x) e_i at index i*r + a).
    casimir_series : list of lists of TruncSeries
        The R-linear Casimir on Q.
    """

    def __init__(self, D, k, alpha=None):
        if k < 0:
            raise ValueError("k must be non-negative")
        if D.trunc < k + 3:
            raise ValueError("precision t^%d too small for k=%d (need N >= k+3)" % (D.trunc, k))
        self.base = D
        self.k = k
        self.alpha = D.alpha if alpha is None else Fraction(alpha)
        self.rank = D.rank * (k + 1)
        self.usable = D.trunc - k - 1
        self.V = make_symk(k)
        self._build()

    # -- construction ----------------------------------------------------------
    def _images(self, op):
        """R-matrix (series) whose column (i, a) is op(v_a (x) e_i) in R-coordinates."""
        r, k, n = self.base.rank, self.k, self.usable
        R = self.rank
        cols = []
        for i in range(k + 1):
            for a in range(r):
                cols.append(e_to_r(op(i, a), n))
        S = [[None] * R for _ in range(R)]
        for col, F in enumerate(cols):
            for m in range(k + 1):
                for b in range(r):
                    S[m * r + b][col] = TruncSeries(F[m][b], n, "t")
        return S

    def _embed(self, i, vec, n):
        Vs = [_vec(n, self.base.rank) for _ in range(self.k + 1)]
        Vs[i] = [c[:n] for c in vec]
        return Vs

    def _build(self):
        D, k, N, p = self.base, self.k, self.base.trunc, self.base.prime
        r, alpha = D.rank, self.alpha
        A = D.nabla_mat

        def nabla_op(i, a):
            v = _col_series(A, a, N)
            v[a][0] += i
            return self._embed(i, v, N)

        self.nabla_series = self._images(nabla_op)
        self.phi_series = None
        if D.has_phi():
            P = D.phi_mat

            def phi_op(i, a):
                v = [[c * Fraction(p) ** i for c in row] for row in _col_series(P, a, N)]
                return self._embed(i, v, N)

            self.phi_series = self._images(phi_op)

        # u- v_a = -(nabla(nabla - alpha) v_a)/t, known mod t^(N-1)
        self.u_minus_cols = []
        for a in range(r):
            Aa = _col_series(A, a, N)
            y = _smat_vec(A, Aa, N)
            for b in range(r):
                for j in range(N):
                    y[b][j] += j * Aa[b][j] - alpha * Aa[b][j]
            if any(y[b][0] for b in range(r)):
                raise ValueError("nabla(nabla - %s) does not map D into tD; alpha incompatible with Sen polynomial %s"
                                 % (alpha, D.sen_weights_poly()))
            self.u_minus_cols.append([[-c for c in y[b][1:]] for b in range(r)])

        n1 = N - 1
        const = alpha * alpha - 1 + k * (k + 2)

        def casimir_op(i, a):
            Vs = [_vec(n1, r) for _ in range(k + 1)]
            Aa = _col_series(A, a, n1)
            for b in range(r):
                for j in range(n1):
                    hv = 2 * Aa[b][j] + ((1 - alpha) if (b == a and j == 0) else 0)
                    Vs[i][b][j] += 2 * (2 * i - k) * hv
                Vs[i][b][0] += const if b == a else 0
            if i + 1 <= k:
                um = self.u_minus_cols[a]
                for b in range(r):
                    for j in range(n1):
                        Vs[i + 1][b][j] += 4 * um[b][j]
            if i >= 1:
                Vs[i - 1][a][1] += 4 * i * (k - i + 1)
            return Vs

        self.casimir_series = self._images(casimir_op)
        self.Q = TorsionModule(self.nabla_series, self.usable, p, self.phi_series, alpha=alpha + k,
                               label="%s (x) V_%d" % (D.label, k), check=False)

    # -- Casimir ---------------------------------------------------------------------
    @property
    def casimir_matrix(self):
        """E-matrix of the Casimir on Q."""
        if not hasattr(self, "_cq"):
            self._cq = self.Q._series_op(self.casimir_series)
        return self._cq

    def tensor_matrices(self):
        """E-matrices on D/t^N (x) V_k (component-major index m*rN + j*r + a)."""
        D, V = self.base, self.V
        g = attach_gl2(D, self.alpha)
        n = D.dim
        I_D, I_V = linalg.eye(n), linalg.eye(self.k + 1)
        out = {
            "u+": linalg.kron(I_V, g.u_plus) + linalg.kron(V.u_plus, I_D),
            "u-": linalg.kron(I_V, g.u_minus) + linalg.kron(V.u_minus, I_D),
            "h": linalg.kron(I_V, g.h) + linalg.kron(V.h, I_D),
            "z": linalg.kron(I_V, g.z) + linalg.kron(V.z, I_D),
            "t": linalg.kron(I_V, D.t_matrix) + linalg.kron(V.t, I_D),
            "nabla": linalg.kron(I_V, D.nabla_matrix) + linalg.kron(V.nabla, I_D),
        }
        if D.has_phi():
            out["phi"] = linalg.kron(V.phi(D.prime), D.phi_matrix)
        return out, g

    def casimir_structural(self):
        """c = h^2 - 2h + 4 u+ u- evaluated on the diagonal action (E-coordinates)."""
        from .ugl2 import CASIMIR, evaluate

        mats, _ = self.tensor_matrices()
        return evaluate(CASIMIR, {key: mats[key] for key in ("u+", "u-", "h", "z")})

    def casimir_formula(self):
        """The componentwise formula, E-coordinates."""
        D, k = self.base, self.k
        g = attach_gl2(D, self.alpha)
        n = D.dim
        I = linalg.eye(n)
        blocks = [[linalg.zeros(n, n) for _ in range(k + 1)] for _ in range(k + 1)]
        for m in range(k + 1):
            blocks[m][m] = I * linalg.q(self.alpha**2 - 1 + k * (k + 2)) + g.h * (2 * (2 * m - k))
            if m >= 1:
                blocks[m][m - 1] = g.u_minus * 4
            if m + 1 <= k:
                blocks[m][m + 1] = D.t_matrix * (4 * (m + 1) * (k - m))
        return linalg.vstack(*[linalg.hstack(*row) for row in blocks])

    def _rows_below(self, d):
        n, rb = self.base.dim, self.base.rows_below(d)
        return [m * n + j for m in range(self.k + 1) for j in range(rb)]

    def compare_below(self, A, B, d):
        """First differing entry of A, B among rows of degree < d, or None."""
        rows = self._rows_below(d)
        for i in rows:
            for j in range(A.ncols()):
                if A[i, j] != B[i, j]:
                    return (i, j, A[i, j], B[i, j])
        return None

    def check_casimir(self):
        """Structural vs formula, and commutation with t and nabla, below degree N-2."""
        d = self.base.trunc - 2
        Cs, Cf = self.casimir_structural(), self.casimir_formula()
        mats, _ = self.tensor_matrices()
        out = {
            "structural=formula": self.compare_below(Cs, Cf, d),
            "[c,t]=0": self.compare_below(Cs * mats["t"], mats["t"] * Cs, d),
            "[c,nabla]=0": self.compare_below(Cs * mats["nabla"], mats["nabla"] * Cs, d),
        }
        if "phi" in mats:
            out["[c,phi]=0"] = self.compare_below(Cs * mats["phi"], mats["phi"] * Cs, d)
        CQ = self.casimir_matrix
        ops = {"t": self.Q.t_matrix, "nabla": self.Q.nabla_matrix}
        if self.Q.has_phi():
            ops["phi"] = self.Q.phi_matrix
        for name, op in ops.items():
            diff = CQ * op - op * CQ
            bad = linalg.first_nonzero(diff)
            out["Q: [c,%s]=0" % name] = None if bad is None else bad
        return out

    def casimir_ok(self):
        return all(v is None for v in self.check_casimir().values())

    def z_scalar(self):
        """z on the tensor is (alpha - 1) + k."""
        return self.alpha - 1 + self.k

    # -- filtration, projection, injection ------------------------------------------------
    def filtration_step(self, i):
        """R-span of v_a (x) e_j for j >= i, as an E-subspace of Q."""
        r, R, n = self.base.rank, self.rank, self.usable
        cols = []
        for j in range(n):
            for m in range(i, self.k + 1):
                for a in range(r):
                    cols.append(j * R + m * r + a)
        return linalg.from_columns([[1 if x == c else 0 for x in range(self.Q.dim)] for c in cols], self.Q.dim)

    def graded_piece(self, i):
        """Filtration step i modulo step i+1, as a TorsionModule."""
        Fi = self.filtration_step(i)
        sub, _ = pgmod.restrict(self.Q, Fi)
        if i == self.k:
            return sub
        rel = pgmod.frame_matrix(self.Q, pgmod.free_generators(self.Q, Fi))
        Fi1 = self.filtration_step(i + 1)
        coords = linalg.solve(rel, Fi1)
        return pgmod.quotient(sub, coords)

    def proj_0(self):
        """E-matrix Q -> D/t^usable taking sum F_i (v (x) e_i) to F_0 (E-component 0)."""
        r, R, n = self.base.rank, self.rank, self.usable
        M = linalg.zeros(r * n, self.Q.dim)
        for j in range(n):
            for a in range(r):
                M[j * r + a, j * R + a] = 1
        return M

    def inj_k(self):
        """E-matrix t^k D (truncated) -> Q, v -> v (x) t^k e."""
        r, R, n, k = self.base.rank, self.rank, self.usable, self.k
        M = linalg.zeros(self.Q.dim, r * n)
        for j in range(n):
            for a in range(r):
                M[j * R + k * r + a, j * r + a] = 1
        return M

    def base_truncated(self):
        return self.base.truncate(self.usable)

    # -- spectra ----------------------------------------------------------------------------
    def candidates(self):
        """Distinct mu = (alpha + k - 2i)^2 - 1, each with the indices i producing it (i ascending)."""
        out = {}
        for i in range(self.k + 1):
            mu = (self.alpha + self.k - 2 * i) ** 2 - 1
            out.setdefault(mu, []).append(i)
        return out

    def generalized_eigenspace(self, mu, m=1):
        C = self.casimir_matrix - linalg.eye(self.Q.dim) * linalg.q(mu)
        return linalg.kernel(linalg.power(C, m))

    def eigen_dims(self, mu):
        """dim ker (c - mu)^m for m = 1, 2, ... until stable."""
        C = self.casimir_matrix - linalg.eye(self.Q.dim) * linalg.q(mu)
        dims, P = [], linalg.eye(self.Q.dim)
        while True:
            P = P * C
            d = linalg.kernel(P).ncols()
            if dims and d == dims[-1]:
                return dims[:-1] if len(dims) > 1 and dims[-2] == d else dims
            dims.append(d)
            if d == self.Q.dim or len(dims) > self.k + 2:
                return dims

    def stable_eigenspace(self, mu):
        dims = self.eigen_dims(mu)
        return self.generalized_eigenspace(mu, len(dims)), dims


def tensor_vk(D, k, alpha=None):
    return TranslatedModule(D, k, alpha)


# -- spectral report ----------------------------------------------------------------

@dataclass
class Piece:
    mu: Fraction
    indices: list
    dims: list
    dim: int
    rank: int
    sen_polynomial: str
    sen_divides: bool
    saturated: bool
    submodule: bool
    semisimple: bool
    tag: str
    kernel_tag: str = ""
    quotient_tag: str = ""
    split_nabla: object = None
    split_nabla_phi: object = None
    boundary_loss: int = 0
    structure: str = ""

    def as_record(self):
        return {
            "mu": str(self.mu),
            "indices": list(self.indices),
            "kernel_dims": list(self.dims),
            "dim": self.dim,
            "rank": self.rank,
            "sen_polynomial": self.sen_polynomial,
            "sen_divides_expected": self.sen_divides,
            "saturated": self.saturated,
            "submodule": self.submodule,
            "semisimple": self.semisimple,
            "tag": self.tag,
            "kernel_tag": self.kernel_tag,
            "quotient_tag": self.quotient_tag,
            "split_nabla": None if self.split_nabla is None else bool(self.split_nabla),
            "split_nabla_phi": None if self.split_nabla_phi is None else bool(self.split_nabla_phi),
            "boundary_loss": self.boundary_loss,
            "structure": self.structure,
        }


@dataclass
class SpectralReport:
    label: str
    k: int
    alpha: Fraction
    trunc: int
    usable: int
    total_dim: int
    residual_dim: int
    pieces: list = field(default_factory=list)

    def spectrum(self):
        return [p.mu for p in self.pieces if p.dim]

    def piece(self, mu):
        for p in self.pieces:
            if p.mu == mu:
                return p
        raise KeyError(mu)

    def complete(self):
        return self.residual_dim == 0 and sum(p.dim for p in self.pieces) == self.total_dim

    def as_record(self):
        return {
            "module": self.label,
            "k": self.k,
            "alpha": str(self.alpha),
            "trunc": self.trunc,
            "usable_precision": self.usable,
            "total_dim": self.total_dim,
            "residual_dim": self.residual_dim,
            "pieces": [p.as_record() for p in self.pieces],
        }

    def table(self):
        head = ["mu", "i", "dims", "rank", "Sen polynomial", "sat", "ss", "tag", "structure"]
        rows = []
        for p in self.pieces:
            rows.append([str(p.mu), ",".join(map(str, p.indices)), "/".join(map(str, p.dims)), str(p.rank),
                         p.sen_polynomial, "yes" if p.saturated else "no", "yes" if p.semisimple else "no", p.tag or "-", p.structure or "-"])
        widths = [max(len(h), *(len(r[c]) for r in rows)) if rows else len(h) for c, h in enumerate(head)]
        fmt = "  ".join("%%-%ds" % w for w in widths)
        lines = ["%s (x) V_%d, alpha=%s, N=%d, usable=%d" % (self.label, self.k, self.alpha, self.trunc, self.usable),
                 (fmt % tuple(head)).rstrip(), (fmt % tuple("-" * w for w in widths)).rstrip()]
        lines += [(fmt % tuple(r)).rstrip() for r in rows]
        lines.append("residual dimension: %d" % self.residual_dim)
        return "\n".join(lines)


def expected_models(TM, indices, rank, n=None):
    """Candidate (name, module) pairs for a piece, cheapest first."""
    D, k = TM.base, TM.k
    n = TM.usable if n is None else n
    Dn = D.truncate(n)
    out = []
    if rank == D.rank:
        for j in range(k + 1):
            out.append(("t^%d D" % j if j else "D", Dn.twist_by_t(j)))
        if D.rank == 2 and pgmod.series_matrix_is_constant(D.nabla_mat):
            for i in indices:
                for n1, n2 in ((i, k - i), (k - i, i)):
                    try:
                        out.append(("D_(%d,alpha+%d)" % (n1, n2), pgmod.weight_submodule(Dn, n1, n2)))
                    except ValueError:
                        pass
    elif rank == 2 * D.rank:
        for a in range(k + 1):
            for b in range(a, k + 1):
                name = " + ".join("t^%d D" % j if j else "D" for j in (a, b))
                out.append((name, pgmod.direct_sum(Dn.twist_by_t(a), Dn.twist_by_t(b))))
    return out


def tag_module(W, candidates, use_phi):
    target = W.sen_polynomial()
    for name, model in candidates:
        if model.rank != W.rank or model.sen_polynomial() != target:
            continue
        phi = use_phi and W.has_phi() and model.has_phi()
        if pgmod.find_isomorphism(model, W, use_phi=phi) is not None:
            return name
    return ""


def _analyse_extension(TM, piece, W, K, indices, phi):
    """Kernel / quotient / splitting analysis of a non-semisimple piece.

    The kernel is read modulo t^(n-e) for the least e making it free
    (``piece.boundary_loss``), which strips torsion created by truncation.
    """
    Q = TM.Q
    e, Qe, Ke = pgmod.free_truncation(Q, K, TM.k + 1)
    We = pgmod.truncate_subspace(Q, W, Qe.trunc) if e else W
    piece.boundary_loss = e
    sub, gens = pgmod.restrict(Qe, We)
    Kc = linalg.solve(pgmod.frame_matrix(Qe, gens), Ke)
    ker_mod, _ = pgmod.restrict(sub, Kc)
    piece.kernel_tag = tag_module(ker_mod, expected_models(TM, indices, ker_mod.rank, Qe.trunc), phi)
    quo = pgmod.quotient(sub, Kc)
    piece.quotient_tag = tag_module(quo, expected_models(TM, indices, quo.rank, Qe.trunc), phi)
    piece.split_nabla = pgmod.is_module_split(sub, Kc, use_phi=False)
    if sub.has_phi():
        piece.split_nabla_phi = pgmod.is_module_split(sub, Kc, use_phi=True)
    verdict = piece.split_nabla_phi if piece.split_nabla_phi is not None else piece.split_nabla
    ker, quot = piece.kernel_tag or "?", piece.quotient_tag or "?"
    if verdict:
        piece.structure = "%s + %s (split)" % (ker, quot)
    elif ker == quot:
        piece.structure = "non-split self-extension of %s" % ker
    else:
        piece.structure = "non-split extension of %s by %s" % (quot, ker)


def spectral_decomposition(TM, use_phi=True):
    """Decompose D (x) V_k along the candidate Casimir eigenvalues."""
    Q = TM.Q
    n = TM.usable
    report = SpectralReport(TM.base.label, TM.k, TM.alpha, TM.base.trunc, n, Q.dim, 0)
    spaces = []
    for mu, indices in sorted(TM.candidates().items(), key=lambda kv: kv[1][0]):
        W, dims = TM.stable_eigenspace(mu)
        spaces.append(W)
        if W.ncols() == 0:
            report.pieces.append(Piece(mu, indices, dims, 0, 0, "1", True, True, True, True, "0"))
            continue
        sub, _ = pgmod.restrict(Q, W, label="piece mu=%s" % mu)
        sen = sub.sen_polynomial()
        expected = pgmod.poly_from_roots([w for i in indices for w in (i, TM.alpha + TM.k - i)])
        divides = (expected % sen) == 0
        K = TM.generalized_eigenspace(mu, 1)
        semisimple = K.ncols() == W.ncols()
        phi = use_phi and Q.has_phi()
        cands = expected_models(TM, indices, sub.rank)
        piece = Piece(mu, indices, dims, W.ncols(), sub.rank, format_poly(sen), divides,
                      pgmod.saturation_check(Q, W), pgmod.is_submodule(Q, W), semisimple,
                      tag_module(sub, cands, phi))
        if not semisimple:
            _analyse_extension(TM, piece, W, K, indices, phi)
        report.pieces.append(piece)
    total = linalg.span(linalg.hstack(*spaces)) if spaces else linalg.zeros(Q.dim, 0)
    report.residual_dim = Q.dim - total.ncols()
    return report


# -- nabla_i conditions and the partial operator ---------------------------------------------

def nabla_k_matrix(D, k):
    """E-matrix of nabla_k = (nabla - k + 1) ... (nabla - 1) nabla."""
    n = D.dim
    out = linalg.eye(n)
    for i in range(k):
        out = (D.nabla_matrix - linalg.eye(n) * i) * out
    return out


def nabla_condition_submodule(D, k):
    """{x in D : nabla_i(x) in t^i D for i = 1..k} (computed in D itself)."""
    rows = []
    for i in range(1, k + 1):
        Y = nabla_k_matrix(D, i)
        rows.append(linalg.top_rows(Y, D.rows_below(i)))
    if not rows:
        return linalg.eye(D.dim)
    return linalg.kernel(linalg.vstack(*rows))


def rem221_check(TM):
    """Compare the nabla-condition space with proj_0 of ker(c - (alpha+k)^2 + 1), in D/t^usable."""
    Dn = TM.base_truncated().with_alpha(TM.alpha)
    lhs = nabla_condition_submodule(Dn, TM.k)
    K = TM.generalized_eigenspace((TM.alpha + TM.k) ** 2 - 1, 1)
    rhs = linalg.image(TM.proj_0(), K)
    return linalg.same_span(lhs, rhs), lhs, rhs


def shift_down(D, Y):
    """Y/t (rows shifted down one degree); None if Y does not land in tD."""
    return pgmod.divide_rows_by_t(D, Y)


class PartialOperator:
    """The partially defined operator x -> nabla(x)/t on a module D."""

    def __init__(self, D):
        self.D = D

    def domain(self, k=1):
        return nabla_condition_submodule(self.D, k)

    def matrix(self, D=None):
        """E-matrix D/t^n -> D/t^(n-1) on the one-step domain's ambient space."""
        D = D or self.D
        r, n = D.rank, D.dim
        Nb = D.nabla_matrix
        out = linalg.zeros(n - r, n)
        for i in range(r, n):
            for j in range(n):
                if Nb[i, j] != 0:
                    out[i - r, j] = Nb[i, j]
        return out

    def apply(self, x):
        if not linalg.contains(self.domain(1), x):
            raise ValueError("vector outside the domain of the partial operator")
        return self.matrix() * x

    def iterate(self, k):
        """Matrix of the k-fold iterate on the full space D/t^n -> D/t^(n-k); meaningful on domain(k)."""
        D = self.D
        out = linalg.eye(D.dim)
        for s in range(k):
            Ds = D.truncate(D.trunc - s)
            out = self.matrix(Ds) * out
        return out

    def closed_form(self, k):
        """nabla_k / t^k as a matrix D/t^n -> D/t^(n-k), on domain(k)."""
        D, r = self.D, self.D.rank
        Y = nabla_k_matrix(D, k)
        n = D.dim
        return linalg.submatrix(Y, range(k * r, n), range(n))

    def check_power(self, k):
        """partial^k == nabla_k / t^k on domain(k), exactly."""
        dom = self.domain(k)
        if self.D.trunc <= k:
            raise ValueError("no precision left")
        return self.iterate(k) * dom == self.closed_form(k) * dom


def partial_operator(D):
    return PartialOperator(D)


# -- the j chain ----------------------------------------------------------------------------

@dataclass
class JmathStep:
    module: TorsionModule
    map: object  # E-matrix from module's space to the previous module (same truncation)
    kernel_dim: int


def jmath_chain(D, k, alpha=None):
    """Iterate X -> (X (x) V_1)[c = (alpha_X + 1)^2 - 1] and compose the proj_0 maps.

    Returns (steps, composite, source) where composite is the E-matrix of the
    composite from the final eigen-module (source) to D truncated at the
    source's precision.
    """
    alpha = D.alpha if alpha is None else Fraction(alpha)
    cur = D.with_alpha(alpha)
    steps = []
    for _ in range(k):
        TM = TranslatedModule(cur, 1, alpha)
        mu = (alpha + 1) ** 2 - 1
        K = TM.generalized_eigenspace(mu, 1)
        if K.ncols() == 0:
            raise ValueError("eigenspace for %s is empty" % mu)
        e, Qe, Ke = pgmod.free_truncation(TM.Q, K, 2)
        sub, gens = pgmod.restrict(Qe, Ke, label="j-step")
        sub = sub.with_alpha(alpha + 1)
        P0 = linalg.submatrix(TM.proj_0(), range(cur.rank * Qe.trunc), range(Qe.dim))
        J = P0 * pgmod.frame_matrix(Qe, gens)
        steps.append(JmathStep(sub, J, linalg.kernel(J).ncols()))
        cur, alpha = sub, alpha + 1
    if not steps:
        return steps, linalg.eye(D.dim), D
    n = steps[-1].module.trunc
    comp = None
    for st in reversed(steps):
        prev_rank = st.map.nrows() // st.module.trunc
        Jn = linalg.submatrix(st.map, range(prev_rank * n), range(st.module.rank * n))
        comp = Jn if comp is None else Jn * comp
    return steps, comp, steps[-1].module


def jmath_kernel_confined(D, k, alpha=None):
    """Kernel of the composite lies in t^(n-k) (source) where n is the source's truncation."""
    steps, comp, src = jmath_chain(D, k, alpha)
    if not steps:
        return True, 0
    K = linalg.kernel(comp)
    low = src.rows_below(src.trunc - k)
    ok = linalg.is_zero(linalg.top_rows(K, low)) if K.ncols() else True
    return ok, K.ncols()


def jmath_image_matches(D, k, alpha=None):
    """Image of the composite j-chain equals proj_0 of ker(c - (alpha+k)^2 + 1) on D (x) V_k.

    Both sides are compared in D modulo t^n, n the chain's final precision.
    """
    alpha = D.alpha if alpha is None else Fraction(alpha)
    steps, comp, src = jmath_chain(D, k, alpha)
    n = src.trunc
    chain_img = linalg.image(comp, linalg.eye(comp.ncols()))
    TM = TranslatedModule(D.with_alpha(alpha), k, alpha)
    K = TM.generalized_eigenspace((alpha + k) ** 2 - 1, 1)
    direct = linalg.image(TM.proj_0(), K)
    return linalg.same_span(pgmod.truncate_subspace(D, chain_img, n), pgmod.truncate_subspace(D, direct, n))
