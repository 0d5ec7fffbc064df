"""Weak-value model of Schwinger pair production in 1+1, 2+1 and 3+1 dimensions."""

__version__ = "0.1.0"

from .quadrature import QuadratureResult, beta, integrate, ln_gamma
from .rates import (
    DecreaseResult,
    RateResult,
    avg_rate_coefficient_1p1_massless,
    decrease_rate,
    rate_coefficient_2p1,
    rate_coefficient_3p1,
    rate_difference_1p1,
    rate_region_oracle,
    schwinger_exact_coefficient,
    upper_bound_u,
)
from .spinors import build_chirality, operator, selection_residual, weak_value
from .transition import FieldParam, ScaledMomentum, kinematics, transition_probability
