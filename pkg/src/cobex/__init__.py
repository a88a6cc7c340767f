"""Exact Z2 coboundary expansion of finite cell complexes."""

from .cochain import Cochain, coboundary, cohomology_dim, quotient_norm
from .complex import (
    Complex,
    build_cross_polytope,
    build_cube,
    build_multipartite,
    build_simplex_skeleton,
    delete_cells,
    join,
    load,
)
from .errors import (
    BudgetExceeded,
    CobexError,
    InvalidParameter,
    NotACycle,
    NumericFailure,
    UndefinedValue,
    UnsupportedOperation,
    WouldBreakClosure,
)
from .expansion import coboundary_expansion, filling_norm, predicted_bounds
from .filling import cube_fill

__all__ = [
    "BudgetExceeded", "CobexError", "Cochain", "Complex", "InvalidParameter", "NotACycle",
    "NumericFailure", "UndefinedValue", "UnsupportedOperation", "WouldBreakClosure",
    "build_cross_polytope", "build_cube", "build_multipartite", "build_simplex_skeleton",
    "coboundary", "coboundary_expansion", "cohomology_dim", "cube_fill", "delete_cells",
    "filling_norm", "join", "load", "predicted_bounds", "quotient_norm",
]
__version__ = "0.1.0"
