"""Second-order differential uniformity of polynomials over F_(2^n)."""

from .errors import (
    ConstructionError,
    DegreeDrop,
    DiffUniError,
    DivisionByZero,
    FieldMismatch,
    InsufficientDegree,
    InternalInvariantViolation,
    InvalidArgument,
    UnsupportedResidue,
)
from .experiments import (
    ChebotarevInput,
    DensityStats,
    chebotarev_lower_bound,
    curve_point_counts,
    density_experiment,
    find_splitting_beta,
    inversion_delta2_table,
    reduced_equation_check,
)
from .field import FieldElement, FieldSpec, field_new, solve_artin_schreier
from .lmap import b1_over_b0_formula, compute_L, d_of_m, delta0_of_m, kernel_witness, rank_check_L
from .morse import MorseVerdict, critical_value_poly, is_morse, nonmorse_fraction
from .poly import DerivativePair, Poly, derivative, resultant, second_derivative
from .regularity import (
    PairFamily,
    build_covering_family,
    in_image_T,
    regular_hypothesis_holds,
    representation_check,
    solve_T,
    theta,
)
from .rng import random_pair, random_poly
from .secdiff import UniformityReport, delta, delta2, delta2_monomial

__version__ = "0.1.0"
