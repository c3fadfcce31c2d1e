"""Exact computations with torsion (phi, Gamma)-modules translated by symmetric powers."""

from .series import TruncSeries, parse_series
from .ugl2 import (CASIMIR, GL2Elem, ParseError, UEAElement, adjoint, evaluate, format_element,
                   normal_form, parse, reduce_central, verify_adg_formula, verify_lie_lemma)
from .symk import SymPower, make_symk
from .pgmod import (TorsionModule, attach_gl2, direct_sum, find_isomorphism, is_module_split,
                    make_extension, make_rank_one, make_sen_model, weight_submodule)
from .translate import (TranslatedModule, jmath_chain, nabla_condition_submodule, partial_operator,
                        rem221_check, spectral_decomposition, tensor_vk)
from .sheaf import (SheafModule, TensorSheaf, ball_restriction, partition_check, psi_module, res_ball,
                    verify_psi_tensor, verify_res_tensor)
from .scenario import Scenario, ScenarioError

__version__ = "0.1.0"

__all__ = [
    "TruncSeries", "parse_series",
    "CASIMIR", "GL2Elem", "ParseError", "UEAElement", "adjoint", "evaluate", "format_element",
    "normal_form", "parse", "reduce_central", "verify_adg_formula", "verify_lie_lemma",
    "SymPower", "make_symk",
    "TorsionModule", "attach_gl2", "direct_sum", "find_isomorphism", "is_module_split",
    "make_extension", "make_rank_one", "make_sen_model", "weight_submodule",
    "TranslatedModule", "jmath_chain", "nabla_condition_submodule", "partial_operator",
    "rem221_check", "spectral_decomposition", "tensor_vk",
    "SheafModule", "TensorSheaf", "ball_restriction", "partition_check", "psi_module", "res_ball",
    "verify_psi_tensor", "verify_res_tensor",
    "Scenario", "ScenarioError",
]
