from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from pgtrans import linalg
from pgtrans.series import TruncSeries
from pgtrans.symk import make_symk
from pgtrans.ugl2 import GL2Elem, evaluate, lie_element


@pytest.mark.parametrize("k", range(7))
def test_casimir_and_z_scalars(k):
    V = make_symk(k)
    assert V.casimir() == linalg.eye(k + 1) * (k * (k + 2))
    assert V.z == linalg.eye(k + 1) * k


@pytest.mark.parametrize("k", range(1, 6))
def test_brackets(k):
    V = make_symk(k)
    up, um, h = V.u_plus, V.u_minus, V.h
    assert up * um - um * up == h
    assert h * up - up * h == up * 2
    assert h * um - um * h == um * -2


def test_basis_conventions():
    V = make_symk(2)
    assert [V.u_minus[i - 1, i] for i in (1, 2)] == [2, 2]
    assert V.phi(3) == linalg.diag([1, 3, 9])
    with pytest.raises(ValueError):
        V.gamma(0)
    with pytest.raises(ValueError):
        make_symk(-1)


rationals = st.fractions(-3, 3, max_denominator=3)


@settings(max_examples=30, deadline=None)
@given(st.lists(rationals, min_size=4, max_size=4), st.integers(1, 3))
def test_element_map_intertwines(cs, k):
    n = k + 1
    f = TruncSeries(cs[:n], n, "X")
    V = make_symk(k)
    assert V.X * V.element(f) == V.element(f * TruncSeries.gen(n, "X"))
    for p in (2, 3, 5):
        assert V.phi(p) * V.element(f) == V.element(f.phi_coeff(p))
    for a in (3, Fraction(1, 2), -1):
        assert V.gamma(a) * V.element(f) == V.element(f.gamma_coeff(a))


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_one_plus_X_is_exp_u_plus(k):
    V = make_symk(k)
    exp_u, term = linalg.zeros(k + 1, k + 1), linalg.eye(k + 1)
    for m in range(k + 1):
        exp_u = exp_u + term
        term = term * V.u_plus * linalg.q(Fraction(1, m + 1))
    assert V.one_plus_X() == exp_u
    assert V.one_plus_X() == linalg.eye(k + 1) + V.X


gl2 = st.tuples(*[st.fractions(-3, 3, max_denominator=2)] * 4).filter(lambda e: e[0] * e[3] != e[1] * e[2]).map(
    lambda e: GL2Elem(*e))


@settings(max_examples=25, deadline=None)
@given(gl2, gl2, st.integers(1, 3))
def test_group_matrix_is_a_representation(g, h, k):
    V = make_symk(k)
    assert V.group_matrix(g @ h) == V.group_matrix(g) * V.group_matrix(h)


@settings(max_examples=25, deadline=None)
@given(gl2, st.integers(1, 3))
def test_group_matrix_conjugates_lie_action(g, k):
    V = make_symk(k)
    G = V.group_matrix(g)
    Ginv = V.group_matrix(g.inverse())
    mats = V.gl2_matrices()
    for name, M in (("u+", ((0, 1), (0, 0))), ("u-", ((0, 0), (1, 0)))):
        conj = tuple(tuple(x) for x in _conj(g, M))
        assert G * mats[name] * Ginv == evaluate(lie_element(conj), mats)


def _conj(g, M):
    A, B = g.rows(), g.inverse().rows()
    mul = lambda P, Q: [[sum(P[i][t] * Q[t][j] for t in range(2)) for j in range(2)] for i in range(2)]
    return mul(mul(A, M), B)


def test_group_action_rejects_lower_triangular():
    with pytest.raises(ValueError):
        make_symk(1).group_action(GL2Elem(1, 0, 1, 1), linalg.eye(2))
