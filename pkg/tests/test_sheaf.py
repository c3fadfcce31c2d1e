import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from pgtrans.pgmod import make_rank_one, make_sen_model
from pgtrans.series import TruncSeries
from pgtrans.sheaf import (SheafModule, ball_restriction, corrupted_frobenius, partition_check, phi_poly, psi_module,
                           psi_oracle, psi_poly, res_ball, trim, verify_psi_tensor, verify_res_tensor)

import oracles

TRIVIAL = make_rank_one(0, N=8, p=2, alpha=0)
DIAG2_P3 = make_sen_model("diagonal", 9, 3, alpha=2, phi=(1, Fraction(1, 3)))
DIAG_P2 = make_sen_model("diagonal", 8, 2, alpha=Fraction(3, 2), phi=(1, Fraction(1, 2)))
MODELS = [TRIVIAL, DIAG2_P3, DIAG_P2]


def test_psi_module_matches_frozen_oracle():
    # diag(0,2), phi = diag(1, 1/3), p = 3, v = (1 + X^2) v_0 + (2X + X^3) v_1
    v = [TruncSeries.parse("1 + X^2", 9, "X"), TruncSeries.parse("2*X + X^3", 9, "X")]
    out = psi_module(DIAG2_P3, v)
    assert [list(f.coeffs) for f in out] == [oracles.FROZEN["psi_1pX2_p3_N9"],
                                             [3 * c for c in oracles.FROZEN["psi_2XpX3_p3_N9"]]]
    assert all(f.trunc == 3 for f in out)


def test_psi_X_frozen():
    assert psi_module(TRIVIAL, [TruncSeries.gen(8, "X")])[0].coeffs == tuple(oracles.FROZEN["psi_X_p2_N8"])


@pytest.mark.parametrize("p", [2, 3, 5])
def test_psi_solver_matches_expansion_oracle(p):
    rng = random.Random(p)
    for _ in range(10):
        f = [Fraction(rng.randint(-5, 5), rng.randint(1, 4)) for _ in range(3 * p + 1)]
        assert psi_poly(f, p) == psi_oracle(f, p)


@settings(max_examples=20, deadline=None)
@given(st.lists(st.fractions(-3, 3, max_denominator=3), min_size=2, max_size=2))
def test_module_psi_left_inverse(cs):
    S = SheafModule(TRIVIAL.truncate(6).with_alpha(0)._replace(prime=3))
    v = [[Fraction(c) for c in cs]]
    assert S.psi(S.phi(v)) == [trim(v[0])]


def test_res_examples():
    X = TruncSeries.gen(8, "X")
    assert res_ball(TRIVIAL, [X], 1, 1)[0].coeffs == (1, 1, 0, 0)
    assert res_ball(TRIVIAL, [X], 0, 1)[0].coeffs == (-1, 0, 0, 0)
    assert res_ball(TRIVIAL, [X], 0, 0)[0].coeffs == tuple(X.coeffs)


@pytest.mark.parametrize("D", MODELS, ids=["trivial", "diag2-p3", "diag-p2"])
def test_partition_of_unity(D):
    total, idem, orth = partition_check(D, 1)
    assert total and all(idem) and orth


def test_partition_level_two_needs_precision():
    with pytest.raises(ValueError, match="no precision"):
        partition_check(TRIVIAL, 2)
    D = make_rank_one(0, N=12, p=2, alpha=0)
    total, idem, orth = partition_check(D, 2)
    assert total and all(idem) and orth


def test_ball_restriction_matrices_sum_to_truncation():
    B = [ball_restriction(TRIVIAL, i, 1) for i in range(2)]
    S = B[0].matrix + B[1].matrix
    assert B[0].precision == 4
    for i in range(4):
        for j in range(8):
            assert S[i, j] == (1 if i == j else 0)


@pytest.mark.parametrize("D", MODELS, ids=["trivial", "diag2-p3", "diag-p2"])
@pytest.mark.parametrize("k", [1, 2])
def test_tensor_identities_and_controls(D, k):
    p = D.prime
    assert verify_psi_tensor(D, k)
    assert all(verify_res_tensor(D, k, i, n) for n in (0, 1) for i in range(p**n))
    assert not verify_psi_tensor(D, k, phi_v=[1] + [p + 2] * k)
    assert not any(verify_res_tensor(D, k, i, 1, frob=corrupted_frobenius(p)) for i in range(p))


def test_res_insensitive_to_constant_phi_on_vk():
    # documented limitation: Res only sees the images Y^i phi(M)
    assert verify_res_tensor(TRIVIAL, 1, 0, 1, phi_v=[1, 5])


def test_sheaf_requires_constant_phi():
    with pytest.raises(ValueError):
        SheafModule(make_rank_one(0, N=6).without_phi())
    D = make_sen_model("zero", 6)._replace(phi=[["1 + t", 0], [0, 1]])
    with pytest.raises(ValueError, match="constant"):
        SheafModule(D)


def test_phi_poly_known_value():
    assert phi_poly([0, 1], 2) == [0, 2, 1]
