"""
acgb - finite Groebner bases for almost commutative algebras.

This package computes two-sided Groebner bases in enveloping algebras of
finite-dimensional Lie algebras, passes to the commutative associated graded
ring, lifts the commutative basis back to the free associative algebra and
certifies the result with the diamond lemma.
"""

__version__ = "0.1.0"

from .compoly import CPoly, MonomialIdeal, USet, c_buchberger, c_normal_form, u_set
from .config import Settings
from .envalg import LieStructure, PbwPoly, free_to_pbw, pbw_mul, sigma, two_sided_groebner
from .exceptions import AcgbError, InfiniteUSetError, MathDomainError, ProblemParseError, ResourceError
from .freealg import NcPoly, nc_complete_bounded, nc_is_groebner, nc_normal_form
from .kernel import GF, QQ, Field, MonomialOrderKind, OrderSpec, WordOrderKind
from .liftkit import PipelineTrace, pipeline
from .logging_config import get_logger, setup_logging

__all__ = [
    "__version__",
    "AcgbError",
    "CPoly",
    "Field",
    "GF",
    "InfiniteUSetError",
    "LieStructure",
    "MathDomainError",
    "MonomialIdeal",
    "MonomialOrderKind",
    "NcPoly",
    "OrderSpec",
    "PbwPoly",
    "PipelineTrace",
    "ProblemParseError",
    "QQ",
    "ResourceError",
    "Settings",
    "USet",
    "WordOrderKind",
    "c_buchberger",
    "c_normal_form",
    "free_to_pbw",
    "get_logger",
    "nc_complete_bounded",
    "nc_is_groebner",
    "nc_normal_form",
    "pbw_mul",
    "pipeline",
    "setup_logging",
    "sigma",
    "two_sided_groebner",
    "u_set",
]
