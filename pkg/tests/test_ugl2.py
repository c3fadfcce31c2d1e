import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from pgtrans import linalg
from pgtrans.symk import make_symk
from pgtrans.ugl2 import (A_MINUS, A_PLUS, CASIMIR, GENERATORS, H_, U_MINUS, U_PLUS, Z_, GL2Elem, ParseError,
                          UEAElement, adjoint, consistent_exponent, evaluate, format_element, normal_form, parse,
                          reduce_central, verify_adg_formula, verify_lie_lemma)

import oracles


@pytest.mark.parametrize("expr, expected", [
    ("u+*u-", "u-*u+ + h"),
    ("a+ - a-", "h"),
    ("a+ + a-", "z"),
    ("h*u-", "u-*h - 2*u-"),
    ("u+*h", "h*u+ - 2*u+"),
    ("(h+1)^2", "h^2 + 2*h + 1"),
    ("z*u+ - u+*z", "0"),
])
def test_normal_forms(expr, expected):
    assert format_element(parse(expr)) == expected


def test_casimir_forms_agree():
    assert (parse("h^2-2*h+4*u+*u-") - parse("h^2+2*h+4*u-*u+")).is_zero()
    assert parse("h^2-2*h+4*u+*u-") == CASIMIR


@pytest.mark.parametrize("bad, pos", [("h+*", 2), ("u+ )", 3), ("2 $ h", 2), ("(h", 2), ("h^x", 2)])
def test_parse_error_positions(bad, pos):
    with pytest.raises(ParseError) as info:
        parse(bad)
    assert info.value.pos == pos


def test_central_quotient_examples():
    assert format_element(reduce_central(CASIMIR, 1, 3)) == "3"
    x = reduce_central(parse("u-*u+"), 0, 8)
    assert x == Fraction(8, 4) - H_ * H_ / 4 - H_ / 2
    assert reduce_central(parse("z^2*u+"), 2, 0) == 4 * U_PLUS


letters = st.sampled_from(["u+", "u-", "h", "z"])
monomials = st.lists(letters, min_size=0, max_size=4)
elements = st.lists(st.tuples(st.integers(-3, 3), monomials), min_size=1, max_size=3).map(
    lambda terms: sum((UEAElement.scalar(c) * _word(w) for c, w in terms), UEAElement()))


def _word(w):
    out = UEAElement.scalar(1)
    for letter in w:
        out = out * GENERATORS[letter]
    return out


@settings(max_examples=60, deadline=None)
@given(elements, elements, elements)
def test_associativity_and_distributivity(x, y, z):
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z


@settings(max_examples=40, deadline=None)
@given(elements)
def test_casimir_is_central(x):
    assert CASIMIR * x == x * CASIMIR


@settings(max_examples=40, deadline=None)
@given(elements, st.integers(0, 3))
def test_normal_form_agrees_with_matrices(x, k):
    # PBW rewriting is faithful on every V_k
    mats = make_symk(k).gl2_matrices()
    assert evaluate(normal_form(x), mats) == evaluate(x, mats)


@settings(max_examples=30, deadline=None)
@given(elements, st.integers(1, 3))
def test_reduce_central_matches_vk(x, k):
    # V_k has z = k and c = k(k+2), so the central reduction must act identically there
    V = make_symk(k)
    mats = V.gl2_matrices()
    assert evaluate(reduce_central(x, k, k * (k + 2)), mats) == evaluate(x, mats)


gl2 = st.tuples(*[st.fractions(-4, 4, max_denominator=3)] * 4).filter(lambda e: e[0] * e[3] - e[1] * e[2] != 0).map(
    lambda e: GL2Elem(*e))


@settings(max_examples=30, deadline=None)
@given(gl2, gl2, elements)
def test_adjoint_is_an_action(g, h, x):
    assert adjoint(g @ h, x) == adjoint(g, adjoint(h, x))
    assert adjoint(g, CASIMIR) == CASIMIR


@settings(max_examples=30, deadline=None)
@given(gl2, elements, elements)
def test_adjoint_is_multiplicative(g, x, y):
    assert adjoint(g, x * y) == adjoint(g, x) * adjoint(g, y)


def test_a_plus_minus():
    assert A_PLUS + A_MINUS == Z_
    assert A_PLUS - A_MINUS == H_
    assert U_PLUS * U_MINUS - U_MINUS * U_PLUS == H_


def test_lie_scalar_matches_sympy_oracle():
    for key, g in (("lie_scalar_g1", (2, 1, 1, 3)), ("lie_scalar_g2", (1, -1, 2, Fraction(1, 2)))):
        law = verify_lie_lemma(GL2Elem(*g), 3)
        assert law.holds and law.scalar == oracles.FROZEN[key]
        assert law.scalar == GL2Elem(*g).det ** -1


def test_scalar_law_is_det_inverse():
    rng = random.Random(7)
    laws = []
    while len(laws) < 60:
        e = [Fraction(rng.randint(-5, 5), rng.randint(1, 3)) for _ in range(4)]
        if e[0] * e[3] == e[1] * e[2]:
            continue
        g = GL2Elem(*e)
        for alpha in (0, Fraction(3, 2), 5):
            laws += [verify_lie_lemma(g, alpha), verify_adg_formula(g, alpha)]
    assert consistent_exponent(laws) == (-1,)


def test_singular_matrix_rejected():
    with pytest.raises(ValueError):
        GL2Elem(1, 2, 2, 4)


def test_evaluate_requires_all_generators():
    with pytest.raises(ValueError):
        evaluate(CASIMIR, {"u+": linalg.eye(2)})
