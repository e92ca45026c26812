"""Full-orbit pseudorandom sequences on F_p^n via fractional jumps of
transitive projective automorphisms, with certification and
distribution analysis."""

from .errors import (FracjumpError, InternalInconsistencyError,
                     ModulusMismatchError, NonPrimitiveError,
                     ParameterRangeError, ResourceLimitError,
                     SearchExhaustedError)
from .fields import FieldElement, Modulus, is_prime
from .jumps import (FractionalJump, GeneratorState, RationalAffineMap,
                    build_jump, from_params, make_icg)
from .poly import (Factorization, Polynomial, char_poly, companion_matrix,
                   factor_integer, find_projectively_primitive,
                   is_irreducible, is_primitive, is_projectively_primitive)
from .projective import (AffineMap, AffineSubspace, CensusReport,
                         ProjectivePoint, SquareMatrix,
                         affine_orbit_length, affine_transitivity_census,
                         apply, enumerate_projective_space,
                         fractional_jump_pointwise, in_hyperplane_H,
                         is_transitive_bruteforce, projective_space_size)

__version__ = "0.1.0"

__all__ = [
    "AffineMap", "AffineSubspace", "CensusReport", "Factorization",
    "FieldElement", "FracjumpError", "FractionalJump", "GeneratorState",
    "InternalInconsistencyError", "Modulus", "ModulusMismatchError",
    "NonPrimitiveError", "ParameterRangeError", "Polynomial",
    "ProjectivePoint", "RationalAffineMap", "ResourceLimitError",
    "SearchExhaustedError", "SquareMatrix", "affine_orbit_length",
    "affine_transitivity_census", "apply", "build_jump", "char_poly",
    "companion_matrix", "enumerate_projective_space", "factor_integer",
    "find_projectively_primitive", "fractional_jump_pointwise",
    "from_params", "in_hyperplane_H", "is_irreducible", "is_primitive",
    "is_prime", "is_projectively_primitive", "is_transitive_bruteforce",
    "make_icg", "projective_space_size",
]
