"""Stable (pseudo-)MLE, Gaussian QMLE and information-matrix estimation."""

from .fit import fit_gaussian_qmle, fit_stable_mle
from .information import compute_Jn, outer_product_information, std_errors_from_information
from .likelihood import (
    neg_log_likelihood,
    per_obs_nll,
    score_full,
    score_full_obs,
    score_psi_obs,
    score_theta,
    score_theta_obs,
)
from .params import BoundsConfig, FitResult, ModelParams, param_names

__all__ = [
    "ModelParams", "BoundsConfig", "FitResult", "param_names",
    "neg_log_likelihood", "per_obs_nll", "score_theta", "score_theta_obs",
    "score_psi_obs", "score_full", "score_full_obs",
    "fit_stable_mle", "fit_gaussian_qmle",
    "compute_Jn", "outer_product_information", "std_errors_from_information",
]
