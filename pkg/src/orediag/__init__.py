"""Exact diagonal, Smith and Jacobson forms of matrices over univariate Ore algebras."""

__version__ = "0.1.0"

from .coeff import FactorSet, RatFunc, UniPoly, factor_partial, poly_gcd, poly_lcm
from .diag import (
    DiagError,
    DiagResult,
    PassLimitError,
    ZeroRowError,
    diagonalize,
    select_boxed,
    smith_normalize,
    verify,
)
from .jacobson import CyclicAttempt, JacobsonResult, cyclic_annihilator, jacobson_form, random_candidate
from .locan import (
    DecouplingReport,
    OreSetDescription,
    UnimodularityCertificate,
    decoupling_report,
    is_two_sided,
    ore_closure_describe,
    skew_divrem,
    totally_divides,
    unimodularity_certificate,
)
from .modgb import GBResult, ModuleVector, buchberger, kernel_rows, left_reduce, syzygies
from .ore import AlgebraSpec, Involution, OreMatrix, OrePoly, default_involution, theta_transpose
from .parse import ParseError, parse_expression, parse_matrix
from .problem import ProblemError, ProblemFile

__all__ = [
    "AlgebraSpec",
    "CyclicAttempt",
    "DecouplingReport",
    "DiagError",
    "DiagResult",
    "FactorSet",
    "GBResult",
    "Involution",
    "JacobsonResult",
    "ModuleVector",
    "OreMatrix",
    "OrePoly",
    "OreSetDescription",
    "ParseError",
    "PassLimitError",
    "ProblemError",
    "ProblemFile",
    "RatFunc",
    "UniPoly",
    "UnimodularityCertificate",
    "ZeroRowError",
    "buchberger",
    "cyclic_annihilator",
    "decoupling_report",
    "default_involution",
    "diagonalize",
    "factor_partial",
    "is_two_sided",
    "jacobson_form",
    "kernel_rows",
    "left_reduce",
    "ore_closure_describe",
    "parse_expression",
    "parse_matrix",
    "poly_gcd",
    "poly_lcm",
    "random_candidate",
    "select_boxed",
    "skew_divrem",
    "smith_normalize",
    "syzygies",
    "theta_transpose",
    "totally_divides",
    "unimodularity_certificate",
    "verify",
]
