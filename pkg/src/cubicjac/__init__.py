"""Exact computations with cubic homogeneous polynomial maps whose Jacobian
has rank at most two: rank certificates, algebraic dependence, linear normal
forms, classification, Keller normal forms, inversion, tame decompositions and
characteristic-p anomalies of monomial maps."""

from .errors import (
    CubicJacError,
    FieldTooSmall,
    HypothesisViolation,
    NonPolynomialInverse,
    ParseError,
    ResourceLimitError,
    StructuralError,
    TheoremViolation,
)
from .fields import QQ, ExtensionField, PrimeField, field_from_spec
from .polynomial import Polynomial
from .polymap import PolyMap, compose_maps, conjugate, transform
from .matrices import LinearMap, PolyMatrix
from .textio import format_map, parse_map, parse_polynomial
from .jacobian import find_dependence, is_nilpotent, jacobian, jacobian_rank, rank_over_function_field
from .normalizer import essential_variables, normalize_rkform
from .classifier import CASE1, CASE2, CASE3, classify_rank_le2
from .keller import FORM_I, FORM_II, TRIANGULARIZABLE, invert_keller, is_keller, keller_normal_form
from .derivations import Derivation, exp_derivation
from .tame import ElementaryStep, tame_decompose

__all__ = [
    "CubicJacError",
    "FieldTooSmall",
    "HypothesisViolation",
    "NonPolynomialInverse",
    "ParseError",
    "ResourceLimitError",
    "StructuralError",
    "TheoremViolation",
    "QQ",
    "ExtensionField",
    "PrimeField",
    "field_from_spec",
    "Polynomial",
    "PolyMap",
    "compose_maps",
    "conjugate",
    "transform",
    "LinearMap",
    "PolyMatrix",
    "format_map",
    "parse_map",
    "parse_polynomial",
    "find_dependence",
    "is_nilpotent",
    "jacobian",
    "jacobian_rank",
    "rank_over_function_field",
    "essential_variables",
    "normalize_rkform",
    "CASE1",
    "CASE2",
    "CASE3",
    "classify_rank_le2",
    "FORM_I",
    "FORM_II",
    "TRIANGULARIZABLE",
    "invert_keller",
    "is_keller",
    "keller_normal_form",
    "Derivation",
    "exp_derivation",
    "ElementaryStep",
    "tame_decompose",
]

__version__ = "0.1.0"
