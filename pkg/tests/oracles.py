"""Independent sympy oracles for derived values.

Nothing here imports pgtrans.  Running this file prints the values that are
frozen in FROZEN; test_oracles.py checks both the recomputation and the
library against them.
"""

from fractions import Fraction

import sympy as sp

X = sp.Symbol("X")


def _coeffs(expr, n):
    poly = sp.Poly(sp.expand(expr) + 0 * X, X)
    return [poly.coeff_monomial(X**j) for j in range(n)]


def psi_bruteforce(f_coeffs, p, N):
    """f_0 mod X^M from f = sum_i (1+X)^i f_i((1+X)^p - 1), solved as a dense N x N system."""
    M = N // p
    unknowns = sp.symbols("a0:%d" % (p * M))
    phiX = (1 + X) ** p - 1
    total = 0
    for i in range(p):
        fi = sum(unknowns[i * M + j] * phiX**j for j in range(M))
        total += (1 + X) ** i * fi
    target = sum(sp.Rational(c) * X**j for j, c in enumerate(f_coeffs))
    eqs = [a - b for a, b in zip(_coeffs(total, p * M), _coeffs(target, p * M))]
    sol = sp.solve(eqs, unknowns, dict=True)[0]
    return [sol[unknowns[j]] for j in range(M)]


def _sym_matrices(k):
    """u+, u-, h on V_k in the basis e_i (u+ e_i = e_{i+1})."""
    n = k + 1
    up, um, h = sp.zeros(n), sp.zeros(n), sp.zeros(n)
    for i in range(n):
        h[i, i] = 2 * i - k
        if i + 1 < n:
            up[i + 1, i] = 1
        if i >= 1:
            um[i - 1, i] = i * (k - i + 1)
    return up, um, h


def graded_casimir_eigenvalues(weights, alpha, k, d):
    """Eigenvalues of c on the total-degree-d part of D (x) V_k, D diagonal with the given Sen weights.

    t^j v_a (x) e_m has total degree j + m; h, z preserve it, u+ raises and u- lowers it by one.
    """
    r = len(weights)
    alpha = sp.Rational(alpha)
    basis = [(j, a, m) for m in range(k + 1) for j in [d - m] if j >= 0 for a in range(r)]
    index = {b: n for n, b in enumerate(basis)}
    Vup, Vum, Vh = _sym_matrices(k)
    size = len(basis)

    def op(fn):
        out = sp.zeros(size, size)
        for col, (j, a, m) in enumerate(basis):
            for (j2, a2, m2), c in fn(j, a, m):
                if (j2, a2, m2) in index:
                    out[index[(j2, a2, m2)], col] += c
        return out

    w = [sp.Rational(x) for x in weights]

    def h_op(j, a, m):  # h = 2 nabla - alpha + 1 on D, plus h on V_k
        return [((j, a, m), 2 * (j + w[a]) - alpha + 1 + Vh[m, m])]

    def up_op(j, a, m):  # u+ = t on D, plus u+ on V_k
        out = [((j + 1, a, m), 1)]
        if m + 1 <= k:
            out.append(((j, a, m + 1), 1))
        return out

    def um_op(j, a, m):  # u- = -nabla(nabla - alpha)/t on D, plus u- on V_k
        out = []
        lam = j + w[a]
        c = -lam * (lam - alpha)
        if c != 0:
            out.append(((j - 1, a, m), c))
        if m >= 1:
            out.append(((j, a, m - 1), Vum[m - 1, m]))
        return out

    # u- sends degree d to degree d-1; evaluate u+u- through an auxiliary degree-(d-1) block
    H = op(h_op)
    low = [(j, a, m) for m in range(k + 1) for j in [d - 1 - m] if j >= 0 for a in range(r)]
    li = {b: n for n, b in enumerate(low)}
    UM = sp.zeros(len(low), size)
    for col, b in enumerate(basis):
        for b2, c in um_op(*b):
            if b2 in li:
                UM[li[b2], col] += c
    UP = sp.zeros(size, len(low))
    for col, b in enumerate(low):
        for b2, c in up_op(*b):
            if b2 in index:
                UP[index[b2], col] += c
    C = H * H - 2 * H + 4 * UP * UM
    return sorted(C.eigenvals(multiple=True))


def sym_group(k, g):
    """Sym^k(g) on e_i = k!/(k-i)! eps1^i eps2^(k-i)."""
    a, b, c, d = [sp.Rational(x) for x in g]
    e1, e2 = sp.symbols("e1 e2")
    n = k + 1
    scale = [sp.factorial(k) / sp.factorial(k - i) for i in range(n)]
    M = sp.zeros(n, n)
    for i in range(n):
        img = sp.expand(scale[i] * (a * e1 + c * e2) ** i * (b * e1 + d * e2) ** (k - i))
        P = sp.Poly(img, e1, e2)
        for j in range(n):
            M[j, i] = P.coeff_monomial(e1**j * e2 ** (k - j)) / scale[j]
    return M


def lie_scalar(g, k):
    """s with u+ Ad_g(u+) = s * (-c a+ + a u+)(-c(a+ - alpha) + a u+) on V_k, alpha = k+1."""
    up, um, h = _sym_matrices(k)
    n = k + 1
    z = sp.eye(n) * k
    alpha = k + 1
    ap = (z + h) / 2
    G = sym_group(k, g)
    a, b, c, d = [sp.Rational(x) for x in g]
    lhs = up * (G * up * G.inv())
    rhs = (-c * ap + a * up) * (-c * (ap - alpha * sp.eye(n)) + a * up)
    for i in range(n):
        for j in range(n):
            if rhs[i, j] != 0:
                s = lhs[i, j] / rhs[i, j]
                assert sp.simplify(lhs - s * rhs) == sp.zeros(n, n)
                return s
    raise AssertionError("rhs vanishes")


FROZEN = {
    # psi(X), p = 2, N = 8: f_0 mod X^4
    "psi_X_p2_N8": [Fraction(-1), Fraction(0), Fraction(0), Fraction(0)],
    # psi(1 + X^2), psi(2X + X^3) for p = 3, N = 9 (components of the diag(0,2) test vector before 1/phi)
    "psi_1pX2_p3_N9": [Fraction(2), Fraction(0), Fraction(0)],
    "psi_2XpX3_p3_N9": [Fraction(-2), Fraction(1), Fraction(0)],
    # graded Casimir eigenvalues, total degree d = 4
    "graded_diag_3half_k1": [Fraction(-3, 4), Fraction(-3, 4), Fraction(21, 4), Fraction(21, 4)],
    "graded_diag_5_k1": [Fraction(15), Fraction(15), Fraction(35), Fraction(35)],
    "graded_diag_3half_k2": [Fraction(-3, 4), Fraction(-3, 4), Fraction(5, 4), Fraction(5, 4),
                             Fraction(45, 4), Fraction(45, 4)],
    "graded_diag_5_k3": [Fraction(3), Fraction(3), Fraction(15), Fraction(15), Fraction(35), Fraction(35),
                         Fraction(63), Fraction(63)],
    # lie scalar s on V_2 (alpha = 3) for g = [[2,1],[1,3]] and [[1,-1],[2,1/2]]
    "lie_scalar_g1": Fraction(1, 5),
    "lie_scalar_g2": Fraction(2, 5),
}


def recompute():
    return {
        "psi_X_p2_N8": psi_bruteforce([0, 1], 2, 8),
        "psi_1pX2_p3_N9": psi_bruteforce([1, 0, 1], 3, 9),
        "psi_2XpX3_p3_N9": psi_bruteforce([0, 2, 0, 1], 3, 9),
        "graded_diag_3half_k1": graded_casimir_eigenvalues([0, Fraction(3, 2)], Fraction(3, 2), 1, 4),
        "graded_diag_5_k1": graded_casimir_eigenvalues([0, 5], 5, 1, 4),
        "graded_diag_3half_k2": graded_casimir_eigenvalues([0, Fraction(3, 2)], Fraction(3, 2), 2, 4),
        "graded_diag_5_k3": graded_casimir_eigenvalues([0, 5], 5, 3, 4),
        "lie_scalar_g1": lie_scalar((2, 1, 1, 3), 2),
        "lie_scalar_g2": lie_scalar((1, -1, 2, Fraction(1, 2)), 2),
    }


def _as_fraction(v):
    if isinstance(v, list):
        return [_as_fraction(x) for x in v]
    return Fraction(int(sp.numer(v)), int(sp.denom(v)))


if __name__ == "__main__":
    for key, val in recompute().items():
        print(key, _as_fraction(val))
