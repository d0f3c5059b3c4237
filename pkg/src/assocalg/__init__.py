"""Exact derivations and automorphisms of finite-dimensional associative algebras."""

from .algebra import AlgebraTable, center, centralizer, check_associativity, multiply, square
from .automorphisms import (FamilyVerdict, ParametricMatrixFamily, Status, closure_spot_check,
                            hom_residual, is_automorphism, jacobian_at_identity, tangent_dim,
                            verify_family)
from .census import CensusResult, census, predicted_count
from .derivations import (build_leibniz_system, central_derivations, commutator,
                          derivation_basis, is_derivation)
from .errors import (AlgebraError, BadPrimeError, DegenerateParameterError,
                     DimensionMismatchError, InfeasibleError, MalformedFamilyError, ParseError,
                     RingMismatchError)
from .linalg import Subspace, exact_nullspace
from .scalars import FpScalar, MultiPoly, RationalFunction, Ring, parse_scalar, reduce_mod_p

__all__ = [
    "AlgebraError", "AlgebraTable", "BadPrimeError", "CensusResult", "DegenerateParameterError",
    "DimensionMismatchError", "FamilyVerdict", "FpScalar", "InfeasibleError",
    "MalformedFamilyError", "MultiPoly", "ParametricMatrixFamily", "ParseError",
    "RationalFunction", "Ring", "RingMismatchError", "Status", "Subspace",
    "build_leibniz_system", "census", "center", "central_derivations", "centralizer",
    "check_associativity", "closure_spot_check", "commutator", "derivation_basis",
    "exact_nullspace", "hom_residual", "is_automorphism", "is_derivation",
    "jacobian_at_identity", "multiply", "parse_scalar", "predicted_count", "reduce_mod_p",
    "square", "tangent_dim", "verify_family",
]

__version__ = "0.1.0"
