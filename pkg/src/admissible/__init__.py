"""Numerical verification of (p, r)-admissible weights on finitely generated groups."""

__version__ = "0.1.0"

from .admissibility import (
    AdmissibilityReport,
    ExponentSet,
    NormBound,
    TheoremConfig,
    a_norm,
    alpha_exponent,
    b_norm,
    dyadic_tail_bound,
    estimate_D1,
    theta_exponent,
    truncated_norm_w22,
    verify_theorem,
    verify_w2,
)
from .groups import (
    BallIndex,
    CyclicGroup,
    FreeGroup,
    GroupModel,
    Heisenberg,
    IntegerLattice,
    enumerate_ball,
    group_from_name,
    metric,
    word_length,
)
from .growth import GrowthEstimate, estimate_growth_exponent, growth_table
from .weights import WeightSpec, verify_weight_axioms, weight_value
