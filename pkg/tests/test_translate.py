from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from pgtrans import linalg, pgmod
from pgtrans.pgmod import make_rank_one, make_sen_model
from pgtrans.translate import (TranslatedModule, e_to_r, jmath_image_matches, jmath_kernel_confined,
                               nabla_condition_submodule, partial_operator, r_to_e, rem221_check,
                               spectral_decomposition)

import oracles

MODELS = {
    "diag32": lambda N=8: make_sen_model("diagonal", N, alpha=Fraction(3, 2)),
    "diag5": lambda N=8: make_sen_model("diagonal", N, alpha=5),
    "nilpotent": lambda N=8: make_sen_model("nilpotent", N),
    "zero": lambda N=8: make_sen_model("zero", N),
    "trivial": lambda N=8: make_rank_one(0, N=N, alpha=Fraction(3, 2)),
}


@pytest.mark.parametrize("name", sorted(MODELS))
@pytest.mark.parametrize("k", [1, 2, 3])
def test_casimir_structural_equals_formula(name, k):
    TM = TranslatedModule(MODELS[name](), k)
    assert TM.check_casimir() == {key: None for key in TM.check_casimir()}
    assert TM.z_scalar() == TM.alpha - 1 + k


def test_precision_requirements():
    with pytest.raises(ValueError, match="too small"):
        TranslatedModule(MODELS["diag32"](N=4), 2)
    assert TranslatedModule(MODELS["diag32"](N=8), 3).usable == 4


@settings(max_examples=25, deadline=None)
@given(st.lists(st.fractions(-3, 3, max_denominator=2), min_size=3 * 2 * 8, max_size=3 * 2 * 8))
def test_coordinate_round_trip(cs):
    k, r, N = 2, 2, 8
    F = [[cs[(m * r + a) * N:(m * r + a + 1) * N] for a in range(r)] for m in range(k + 1)]
    V = r_to_e(F, N)
    back = e_to_r(V, N - k)
    assert back == [[list(c[: N - k]) for c in Fm] for Fm in F]


def test_filtration_and_maps():
    D = MODELS["diag32"]()
    TM = TranslatedModule(D, 2)
    Dn = TM.base_truncated()
    for i in range(3):
        gr = TM.graded_piece(i)
        assert pgmod.are_isomorphic(gr, Dn.twist_by_t(i), use_phi=True)
    P, J, Q = TM.proj_0(), TM.inj_k(), TM.Q
    assert linalg.is_zero(P * J)
    for op_Q, op_D in ((Q.t_matrix, Dn.t_matrix), (Q.nabla_matrix, Dn.nabla_matrix), (Q.phi_matrix, Dn.phi_matrix)):
        assert P * op_Q == op_D * P
    tk = Dn.twist_by_t(2)
    for op_Q, op_D in ((Q.t_matrix, tk.t_matrix), (Q.nabla_matrix, tk.nabla_matrix), (Q.phi_matrix, tk.phi_matrix)):
        assert op_Q * J == J * op_D


@pytest.mark.parametrize("key, alpha, k", [("graded_diag_3half_k1", Fraction(3, 2), 1), ("graded_diag_5_k1", 5, 1),
                                           ("graded_diag_3half_k2", Fraction(3, 2), 2), ("graded_diag_5_k3", 5, 3)])
def test_spectrum_matches_graded_oracle(key, alpha, k):
    D = make_sen_model("diagonal", 8, alpha=alpha)
    spectrum = spectral_decomposition(TranslatedModule(D, k)).spectrum()
    assert sorted(spectrum) == sorted(set(oracles.FROZEN[key]))


def test_k0_single_piece():
    D = MODELS["diag5"]()
    rep = spectral_decomposition(TranslatedModule(D, 0))
    assert rep.spectrum() == [Fraction(24)] and rep.complete()


def test_report_rendering_is_stable():
    D = MODELS["diag5"]()
    a = spectral_decomposition(TranslatedModule(D, 1))
    b = spectral_decomposition(TranslatedModule(D, 1))
    assert a.table() == b.table() and a.as_record() == b.as_record()
    assert [p["mu"] for p in a.as_record()["pieces"]] == ["35", "15"]


@pytest.mark.parametrize("name", sorted(MODELS))
@pytest.mark.parametrize("k", [1, 2, 3])
def test_nabla_condition_matches_top_eigenspace(name, k):
    ok, _, _ = rem221_check(TranslatedModule(MODELS[name](), k))
    assert ok


def test_nabla_condition_by_hand():
    # trivial module, k = 1: nabla(x) in tD holds for every x
    D = make_rank_one(0, N=5)
    assert nabla_condition_submodule(D, 1).ncols() == D.dim
    # weight 1/2: nabla(f v) = (t f' + f/2) v, so the constant term must vanish
    E = make_rank_one(Fraction(1, 2), N=5)
    assert nabla_condition_submodule(E, 1).ncols() == E.dim - 1


@pytest.mark.parametrize("name", ["diag32", "nilpotent", "zero", "trivial"])
@pytest.mark.parametrize("k", [1, 2, 3])
def test_partial_powers(name, k):
    assert partial_operator(MODELS[name]()).check_power(k)


def test_partial_apply_outside_domain():
    D = make_rank_one(Fraction(1, 2), N=5)
    with pytest.raises(ValueError):
        partial_operator(D).apply(D.basis_vector(0))


@pytest.mark.parametrize("name", ["diag32", "nilpotent", "zero", "trivial"])
@pytest.mark.parametrize("k", [1, 2, 3])
def test_jmath_chain(name, k):
    D = MODELS[name](N=12)
    ok, _ = jmath_kernel_confined(D, k)
    assert ok
    assert jmath_image_matches(D, k)
