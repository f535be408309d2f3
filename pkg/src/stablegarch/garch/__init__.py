"""GARCH(p, q) recursion, simulation and strict-stationarity tooling."""

from .params import GarchOrder, GarchParams, VolatilityPath
from .recursion import one_step_variance, simulate, volatility_path
from .stability import (
    FrontierPoint,
    LyapunovEstimate,
    companion_matrix,
    lyapunov_exponent,
    matrix_norm_l1,
    stationarity_frontier,
)

__all__ = [
    "GarchOrder", "GarchParams", "VolatilityPath",
    "volatility_path", "one_step_variance", "simulate",
    "companion_matrix", "lyapunov_exponent", "stationarity_frontier",
    "LyapunovEstimate", "FrontierPoint", "matrix_norm_l1",
]
