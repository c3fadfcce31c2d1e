"""Named verification suites.  Each suite returns a list of Check records in a fixed order."""

import random
from dataclasses import dataclass
from fractions import Fraction

from . import linalg, pgmod, scenario
from .pgmod import format_poly, make_rank_one, poly_from_roots
from .series import TruncSeries
from .sheaf import (corrupted_frobenius, partition_check, phi_poly, pmul, psi_oracle, psi_poly, trim,
                    verify_psi_tensor, verify_res_tensor, y_power)
from .symk import make_symk
from .translate import (TranslatedModule, jmath_image_matches, jmath_kernel_confined, partial_operator,
                        rem221_check, spectral_decomposition)
from .ugl2 import (CASIMIR, GENERATORS, GL2Elem, adjoint, consistent_exponent, parse,
                   reduce_central, verify_adg_formula, verify_lie_lemma)


@dataclass
class Check:
    suite: str
    name: str
    statement: str
    passed: bool
    detail: str = ""

    def as_record(self):
        return {"suite": self.suite, "name": self.name, "statement": self.statement,
                "passed": bool(self.passed), "detail": self.detail}

    def line(self):
        tail = "  [%s]" % self.detail if self.detail else ""
        return "%s %s.%s: %s%s" % ("PASS" if self.passed else "FAIL", self.suite, self.name, self.statement, tail)


class _Collector:
    def __init__(self, suite):
        self.suite = suite
        self.checks = []

    def add(self, name, statement, passed, detail=""):
        self.checks.append(Check(self.suite, name, statement, bool(passed), detail))


def _tag(i):
    return "t^%d D" % i if i else "D"


def random_gl2(rng, bound=5, den=3):
    while True:
        entries = [Fraction(rng.randint(-bound, bound), rng.randint(1, den)) for _ in range(4)]
        if entries[0] * entries[3] - entries[1] * entries[2] != 0:
            return GL2Elem(*entries)


# -- notation ------------------------------------------------------------------

def suite_notation():
    out = _Collector("notation")
    diff = parse("h^2-2*h+4*u+*u-") - parse("h^2+2*h+4*u-*u+")
    out.add("casimir-forms", "h^2 - 2h + 4 u+u- = h^2 + 2h + 4 u-u+ in PBW normal form", diff.is_zero())
    out.add("commutator", "u+u- = u-u+ + h", parse("u+*u-") == parse("u-*u+ + h"))
    out.add("a-basis", "a+ - a- = h and a+ + a- = z", parse("a+ - a-") == parse("h") and parse("a+ + a-") == parse("z"))
    central = all((CASIMIR * GENERATORS[g] - GENERATORS[g] * CASIMIR).is_zero() for g in ("u+", "u-", "h", "z"))
    out.add("central", "[c, x] = 0 for x in {u+, u-, h, z}", central)
    rng = random.Random(1)
    gs = [random_gl2(rng) for _ in range(5)]
    out.add("ad-invariant", "Ad_g(c) = c for random g in GL2(Q)", all(adjoint(g, CASIMIR) == CASIMIR for g in gs),
            "%d elements" % len(gs))
    alpha = Fraction(2)
    red = reduce_central(CASIMIR, alpha - 1, alpha**2 - 1)
    out.add("central-quotient", "c = alpha^2 - 1 modulo (z - alpha + 1, c - alpha^2 + 1), alpha = 2",
            red.scalar_value() == alpha**2 - 1, "reduced to %s" % red.scalar_value())
    return out.checks


# -- series --------------------------------------------------------------------

def suite_series():
    out = _Collector("series")
    N = 10
    f = TruncSeries.parse("1 - 1/2*t + 3*t^2 + 5/7*t^5", N)
    g = TruncSeries.parse("2 + X - X^3", N, "X")
    out.add("coordinates", "t = log(1+X) and X = exp(t) - 1 are mutually inverse", f.to_X().to_t() == f and g.to_t().to_X() == g)
    for p in (2, 3, 5):
        out.add("phi-t-p%d" % p, "phi(t) = p t in both coordinates (p=%d)" % p,
                TruncSeries.log_one_plus(N, "X").phi_coeff(p) == TruncSeries.log_one_plus(N, "X").scalar_mul(p))
        big = g.padded(4 * p)
        out.add("psi-phi-p%d" % p, "psi(phi(f)) = f for a polynomial f (p=%d)" % p,
                big.phi_coeff(p).psi_coeff(p).agrees(g, 4) and psi_poly(phi_poly(g.coeffs, p), p) == trim(g.coeffs))
        out.add("psi-shift-p%d" % p, "psi((1+X)^i phi(f)) = 0 for 0 < i < p (p=%d)" % p,
                all(not any(psi_poly(pmul(y_power(i, i + 1), phi_poly(g.coeffs, p)), p)) for i in range(1, p)))
        low = all(all(c.denominator == 1 and c.numerator % p == 0 for c in psi_poly([0] * n + [1], p)[:2])
                  for n in range(2 * p, 4 * p))
        out.add("psi-precision-p%d" % p, "psi(X^n) = 0 mod (p, X^m) for n >= pm, m = 2 (p=%d)" % p, low)
    fg, ff = f * g.to_t(), f.nabla_coeff()
    out.add("leibniz", "nabla(fg) = nabla(f) g + f nabla(g)",
            fg.nabla_coeff() == ff * g.to_t() + f * g.to_t().nabla_coeff())
    out.add("nabla-X", "nabla computed in X agrees with t d/dt", g.nabla_coeff().to_t().agrees(g.to_t().nabla_coeff(), N))
    out.add("gamma", "gamma_a gamma_b = gamma_ab", f.gamma_coeff(3).gamma_coeff(Fraction(1, 2)) == f.gamma_coeff(Fraction(3, 2)))
    ok = psi_poly([Fraction(0), Fraction(1)], 2) == [Fraction(-1)]
    out.add("psi-X", "psi(X) = -1 for p = 2 (decomposition X = -1 + (1+X) phi(1))", ok)
    rng = random.Random(2)
    agree = True
    for p in (2, 3, 5):
        for _ in range(5):
            h = [Fraction(rng.randint(-4, 4), rng.randint(1, 3)) for _ in range(3 * p)]
            agree &= psi_poly(h, p) == psi_oracle(h, p)
    out.add("psi-oracle", "psi by linear solve = psi by Y-expansion (p in {2,3,5})", agree, "15 random polynomials")
    return out.checks


# -- symk ---------------------------------------------------------------------

def example_trivial_split(N=8):
    """In Delta (x) V_1 with Delta trivial: 1 (x) e is nabla-killed and phi-fixed and spans a direct summand."""
    D = make_rank_one(0, 1, N, 2, alpha=0, label="Delta")
    TM = TranslatedModule(D, 1)
    Q = TM.Q
    x = Q.basis_vector(0)
    killed = linalg.is_zero(Q.nabla_matrix * x)
    fixed = Q.phi_matrix * x == x
    S = pgmod.line_submodule(Q, 0)
    verdict = pgmod.is_module_split(Q, S, use_phi=True)
    sub, _ = pgmod.restrict(Q, S)
    quo = pgmod.quotient(Q, S)
    tR = D.truncate(TM.usable).twist_by_t(1)
    return killed, fixed, verdict, pgmod.are_isomorphic(quo, tR, use_phi=True), sub.rank


def suite_symk():
    out = _Collector("symk")
    for k in range(7):
        V = make_symk(k)
        mats = V.gl2_matrices()
        c_ok = V.casimir() == linalg.eye(k + 1) * (k * (k + 2))
        z_ok = V.z == linalg.eye(k + 1) * k
        br = (mats["u+"] * mats["u-"] - mats["u-"] * mats["u+"] == mats["h"]
              and mats["h"] * mats["u+"] - mats["u+"] * mats["h"] == mats["u+"] * 2)
        out.add("scalars-k%d" % k, "c = k(k+2) and z = k on V_%d" % k, c_ok and z_ok and br)
    for k in (1, 2, 3):
        V = make_symk(k)
        n = k + 1
        f = TruncSeries.parse("2 - X + 3/4*X^2 + X^3", n, "X")
        Xf = f * TruncSeries.gen(n, "X")
        x_ok = V.X * V.element(f) == V.element(Xf)
        phi_ok = all(V.phi(p) * V.element(f) == V.element(f.phi_coeff(p)) for p in (2, 3, 5))
        gam_ok = all(V.gamma(a) * V.element(f) == V.element(f.gamma_coeff(a)) for a in (3, Fraction(1, 2), -1))
        exp_ok = V.one_plus_X() == linalg.eye(n) + V.X
        out.add("intertwine-k%d" % k, "f -> f e intertwines X, phi, gamma on R+/X^%d" % n, x_ok and phi_ok and gam_ok)
        out.add("exp-k%d" % k, "(1+X) acts as exp(u+) = [[1,1],[0,1]] on V_%d" % k, exp_ok)
    killed, fixed, verdict, quo_ok, rank = example_trivial_split()
    out.add("trivial-killed", "nabla(1 (x) e) = 0 and phi(1 (x) e) = 1 (x) e in Delta (x) V_1", killed and fixed)
    out.add("trivial-split", "Delta (x) V_1 = R (1 (x) e) + tR as (nabla, phi)-modules",
            bool(verdict) and quo_ok and rank == 1, verdict.note)
    return out.checks


# -- keylm and transProp -----------------------------------------------------------

def _expected_sen(i, alpha, k):
    return format_poly(poly_from_roots([i, alpha + k - i]))


def check_diagonal(out, name, D, k):
    """Spectrum, Sen polynomials and completeness for a diagonal model."""
    alpha = D.alpha
    TM = TranslatedModule(D, k)
    rep = spectral_decomposition(TM)
    want = [(alpha + k - 2 * i) ** 2 - 1 for i in range(k + 1)]
    got = rep.spectrum()
    out.add("%s-spectrum" % name, "spectrum of c on D (x) V_%d = {(alpha+k-2i)^2 - 1}, alpha = %s, N = %d"
            % (k, alpha, D.trunc), got == want, ", ".join(map(str, got)))
    sen_ok, ss_ok = True, True
    for i, p in enumerate(rep.pieces):
        sen_ok &= p.sen_polynomial == _expected_sen(i, alpha, k)
        ss_ok &= p.semisimple and p.saturated
    out.add("%s-sen" % name, "piece i has Sen polynomial (T - i)(T - (alpha+k-i))", sen_ok,
            "; ".join(p.sen_polynomial for p in rep.pieces))
    out.add("%s-sum" % name, "the pieces are saturated, c is semisimple, residual space is 0",
            ss_ok and rep.complete(), "residual %d" % rep.residual_dim)
    return rep


def suite_keylm():
    out = _Collector("keylm")
    for sc in scenario.bundled_all():
        if "keylm" not in sc.suites:
            continue
        for N in sc.truncations or [sc.trunc]:
            D = sc.build(trunc=N)
            tag = "%s-N%d" % (sc.name, N)
            if sc.name.startswith("diag"):
                rep = check_diagonal(out, tag, D, 1)
                out.add("%s-tags" % tag, "pieces are D_(0,alpha+1) and D_(1,alpha)",
                        [p.tag for p in rep.pieces] == ["D_(0,alpha+1)", "D_(1,alpha+0)"])
            elif sc.name == "nilpotent":
                rep = spectral_decomposition(TranslatedModule(D, 1))
                p = rep.pieces[0]
                ok = (rep.spectrum() == [0] and len(p.dims) == 2 and 2 * p.dims[0] == p.dims[1]
                      and not p.semisimple and p.split_nabla_phi is not None and not p.split_nabla_phi)
                out.add("%s-nonsplit" % tag, "nilpotent, k = 1: only eigenvalue 0, dim ker c = dim ker c^2 / 2, "
                        "no (nabla, phi)-equivariant splitting", ok, "dims %s, %s" % (p.dims, p.structure))
            elif sc.name == "zero":
                rep = spectral_decomposition(TranslatedModule(D, 1))
                p = rep.pieces[0]
                ok = (rep.spectrum() == [0] and p.dims[-1] == rep.total_dim and not p.semisimple
                      and p.kernel_tag == "D" and p.quotient_tag == "t^1 D" and bool(p.split_nabla_phi))
                out.add("%s-split" % tag, "zero connection, k = 1: ker c^2 is everything, ker c = D, quotient tD, "
                        "splits as D + tD", ok, "dims %s, %s" % (p.dims, p.structure))
    return out.checks


def suite_transprop():
    out = _Collector("transProp")
    for name in ("diag_0_3half", "diag_0_5"):
        sc = scenario.bundled(name)
        for k in (2, 3):
            check_diagonal(out, "%s-k%d" % (name, k), sc.build(), k)
    for name in ("nilpotent", "zero"):
        D = scenario.bundled(name).build()
        rep = spectral_decomposition(TranslatedModule(D, 2))
        p = rep.piece(Fraction(3))
        if name == "nilpotent":
            ok = (not p.semisimple and p.structure.startswith("non-split self-extension")
                  and p.split_nabla_phi is not None and not p.split_nabla_phi)
            stmt = "nilpotent, k = 2: the piece at c = k^2 - 1 is a non-semisimple self-extension"
        else:
            ok = bool(p.split_nabla_phi) and p.structure == "D + t^2 D (split)"
            stmt = "zero connection, k = 2: the piece at c = k^2 - 1 is D + t^2 D with a projector"
        out.add("%s-k2" % name, stmt, ok, p.structure)
    return out.checks


def suite_decork1():
    out = _Collector("decork1")
    for name in ("trivial_3half", "trivial_0"):
        sc = scenario.bundled(name)
        D = sc.build()
        for k in (1, 2, 3):
            rep = spectral_decomposition(TranslatedModule(D, k))
            tags_ok = all(p.tag == " + ".join(_tag(i) for i in p.indices) for p in rep.pieces)
            out.add("%s-k%d-tags" % (name, k), "Delta (x) V_%d, alpha = %s: piece i is t^i Delta" % (k, sc.alpha),
                    tags_ok and rep.complete(), "; ".join(p.tag for p in rep.pieces))
            if sc.alpha == 0:
                p = rep.piece(Fraction(k * k - 1))
                ok = bool(p.split_nabla_phi) and p.structure == "D + %s (split)" % _tag(k)
                out.add("%s-k%d-top" % (name, k), "alpha = 0: the piece at c = k^2 - 1 is Delta + t^k Delta", ok, p.structure)
    return out.checks


def suite_rem221():
    out = _Collector("rem221")
    for sc in scenario.bundled_all():
        D = sc.build()
        for k in sc.k:
            ok, lhs, rhs = rem221_check(TranslatedModule(D, k))
            out.add("%s-k%d" % (sc.name, k), "{x : nabla_i(x) in t^i D, i <= k} = proj_0 ker(c - (alpha+k)^2 + 1)",
                    ok, "dims %d/%d" % (lhs.ncols(), rhs.ncols()))
    return out.checks


def suite_partial():
    out = _Collector("partial")
    for name in ("diag_0_3half", "nilpotent", "zero", "trivial_0"):
        D = scenario.bundled(name).build(trunc=12)
        P = partial_operator(D)
        for k in (1, 2, 3):
            out.add("%s-power-k%d" % (name, k), "partial^k = nabla_k / t^k on the domain of partial^k", P.check_power(k))
            ok, dim = jmath_kernel_confined(D, k)
            out.add("%s-chain-k%d" % (name, k), "kernel of the composite j-chain lies in degrees >= n - k", ok,
                    "kernel dim %d" % dim)
            out.add("%s-image-k%d" % (name, k), "image of the j-chain = proj_0 ker(c - (alpha+k)^2 + 1)",
                    jmath_image_matches(D, k))
    return out.checks


# -- sheaf --------------------------------------------------------------------

SHEAF_MODELS = ("trivial_0", "diag_0_3half", "diag_0_2")


def suite_sheaf():
    out = _Collector("sheaf")
    for name in SHEAF_MODELS:
        D = scenario.bundled(name).build()
        p = D.prime
        for k in (1, 2):
            out.add("%s-psi-k%d" % (name, k), "psi(x (x) w) = psi(x) (x) phi^-1(w) on D (x) V_%d, p = %d" % (k, p),
                    verify_psi_tensor(D, k))
            res = all(verify_res_tensor(D, k, i, n) for n in (0, 1) for i in range(p**n))
            out.add("%s-res-k%d" % (name, k), "Res_(i+p^n Zp)(x (x) w) = Res(x) (x) w, n in {0,1}", res)
            bad_psi = verify_psi_tensor(D, k, phi_v=[1] + [p + 2] * k)
            bad_res = any(verify_res_tensor(D, k, i, 1, frob=corrupted_frobenius(p)) for i in range(p))
            out.add("%s-control-k%d" % (name, k), "corrupted phi breaks both identities", not bad_psi and not bad_res)
        s, idem, orth = partition_check(D, 1)
        out.add("%s-partition" % name, "sum_i Res_(i+pZp) = 1, Res_i^2 = Res_i, Res_i Res_j = 0", s and all(idem) and orth)
    return out.checks


# -- lie -----------------------------------------------------------------------

def lie_laws(count=50, alphas=(0, Fraction(3, 2), 5), seed=0):
    rng = random.Random(seed)
    gs = [random_gl2(rng) for _ in range(count)]
    laws = []
    for alpha in alphas:
        for g in gs:
            laws.append(("lie", g, Fraction(alpha), verify_lie_lemma(g, alpha)))
            laws.append(("adg", g, Fraction(alpha), verify_adg_formula(g, alpha)))
    return laws


def suite_lie():
    out = _Collector("lie")
    laws = lie_laws()
    for kind, stmt in (("lie", "u+ Ad_g(u+) = s (-c a+ + a u+)(-c(a+ - alpha) + a u+) mod (z - alpha + 1, c - alpha^2 + 1)"),
                       ("adg", "Ad_g(c a+ + d u+) = s det(g) (-c(a+ - alpha + 1) + a u+) mod the same ideal")):
        sel = [law for k_, _, _, law in laws if k_ == kind]
        printed = sum(1 for law in sel if law.as_printed)
        out.add("%s-proportional" % kind, stmt + ", for one scalar s per g", all(law.holds for law in sel),
                "%d instances, %d with s = 1" % (len(sel), printed))
    exps = consistent_exponent([law for _, _, _, law in laws])
    out.add("normalization", "one det-law for every instance: s = det(g)^e with a single e", exps == (-1,),
            "e = %s" % (", ".join(map(str, exps)) or "none"))
    return out.checks


SUITES = {
    "notation": suite_notation,
    "series": suite_series,
    "symk": suite_symk,
    "keylm": suite_keylm,
    "transProp": suite_transprop,
    "decork1": suite_decork1,
    "rem221": suite_rem221,
    "partial": suite_partial,
    "sheaf": suite_sheaf,
    "lie": suite_lie,
}


def run_suite(name):
    if name not in SUITES:
        raise KeyError("unknown suite %r (choose from %s)" % (name, ", ".join(SUITES)))
    return SUITES[name]()
