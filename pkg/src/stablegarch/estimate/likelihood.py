"""Stable likelihood, analytic volatility score, and per-observation pieces."""

from __future__ import annotations

import numpy as np
from scipy import signal

from ..data import ReturnSeries
from ..garch.params import GarchParams
from ..garch.recursion import _presample_value, volatility_path
from ..stable import FIT_ACCURACY, DensityAccuracy, StableParams, get_engine
from .params import ModelParams

_FD_PSI = 3e-4


def neg_log_likelihood(eps: ReturnSeries, tau: ModelParams,
                       acc: DensityAccuracy = FIT_ACCURACY,
                       init_rule: str = "mean-squared") -> float:
    """Average negative log-likelihood of the stable GARCH model.

    Per observation: 0.5 * log(sigma2_t) - log f(eps_t / sigma_t, psi), with
    the volatilities from the truncated recursion and f the stable density
    with unit scale.
    """
    return float(np.mean(per_obs_nll(eps, tau, acc, init_rule)))


def per_obs_nll(eps: ReturnSeries, tau: ModelParams,
                acc: DensityAccuracy = FIT_ACCURACY,
                init_rule: str = "mean-squared") -> np.ndarray:
    sig2 = volatility_path(eps, tau.theta, init_rule).sigma2
    eta = eps.values / np.sqrt(sig2)
    eng = get_engine(StableParams(tau.alpha, tau.beta), acc)
    return 0.5 * np.log(sig2) - eng.logpdf(eta - tau.mu)


def variance_derivatives(eps: ReturnSeries, theta: GarchParams,
                         init_rule: str = "mean-squared"):
    """Volatility path and d(sigma2_t)/d(theta) via linear lag filters.

    Each derivative obeys the same autoregression in the b-lags as sigma2
    itself, with forcing 1 (omega), lagged squared returns (a_i) or lagged
    variances (b_j); presample values are treated as constants.
    """
    e2 = eps.values ** 2
    n = e2.size
    p, q = len(theta.b), len(theta.a)
    pre = _presample_value(e2, theta, init_rule)
    sig2 = volatility_path(eps, theta, init_rule).sigma2
    ar = np.concatenate([[1.0], -np.asarray(theta.b, dtype=float)])

    def lagged(series, lag, fill):
        out = np.full(n, fill)
        if lag < n:
            out[lag:] = series[: n - lag]
        return out

    grads = np.empty((n, p + q + 1))
    grads[:, 0] = signal.lfilter([1.0], ar, np.ones(n))
    for i in range(1, q + 1):
        grads[:, i] = signal.lfilter([1.0], ar, lagged(e2, i, pre))
    for j in range(1, p + 1):
        grads[:, q + j] = signal.lfilter([1.0], ar, lagged(sig2, j, pre))
    return sig2, grads


def score_theta(eps: ReturnSeries, tau: ModelParams,
                acc: DensityAccuracy = FIT_ACCURACY,
                init_rule: str = "mean-squared") -> np.ndarray:
    """Analytic gradient of the average likelihood in the GARCH block.

    Uses d(l_t)/d(theta) = 0.5 * phi_t * Z_t with phi_t the relative variance
    derivative and Z_t = 1 + eta_t * f'(eta_t)/f(eta_t).
    """
    return score_theta_obs(eps, tau, acc, init_rule).mean(axis=0)


def score_theta_obs(eps: ReturnSeries, tau: ModelParams,
                    acc: DensityAccuracy = FIT_ACCURACY,
                    init_rule: str = "mean-squared") -> np.ndarray:
    sig2, grads = variance_derivatives(eps, tau.theta, init_rule)
    eta = eps.values / np.sqrt(sig2)
    z = 1.0 + eta * density_log_slope(eta, tau, acc)
    phi = grads / sig2[:, None]
    return 0.5 * phi * z[:, None]


def density_log_slope(eta: np.ndarray, tau: ModelParams,
                      acc: DensityAccuracy) -> np.ndarray:
    """f'(x, psi)/f(x, psi) evaluated at the standardized residuals."""
    eng = get_engine(StableParams(tau.alpha, tau.beta), acc)
    x = eta - tau.mu
    f, _ = eng.pdf_with_err(x)
    fp, _ = eng.dpdf_with_err(x)
    return fp / np.maximum(f, 1e-300)


def score_psi_obs(eps: ReturnSeries, tau: ModelParams,
                  acc: DensityAccuracy = FIT_ACCURACY,
                  init_rule: str = "mean-squared") -> np.ndarray:
    """Per-observation derivative of l_t in (alpha, beta, mu).

    The shape derivatives use central differences of log f across engine
    pairs; the location derivative is analytic through f'/f.
    """
    sig2 = volatility_path(eps, tau.theta, init_rule).sigma2
    eta = eps.values / np.sqrt(sig2)
    x = eta - tau.mu
    out = np.empty((eta.size, 3))
    h = _FD_PSI
    for col, (da, db) in enumerate([(h, 0.0), (0.0, h)]):
        hi = get_engine(StableParams(tau.alpha + da, tau.beta + db), acc)
        lo = get_engine(StableParams(tau.alpha - da, tau.beta - db), acc)
        out[:, col] = -(hi.logpdf(x) - lo.logpdf(x)) / (2.0 * h)
    out[:, 2] = density_log_slope(eta, tau, acc)
    return out


def score_full(eps: ReturnSeries, tau: ModelParams,
               acc: DensityAccuracy = FIT_ACCURACY,
               init_rule: str = "mean-squared") -> np.ndarray:
    """Gradient of the average likelihood in all of tau."""
    th = score_theta(eps, tau, acc, init_rule)
    ps = score_psi_obs(eps, tau, acc, init_rule).mean(axis=0)
    return np.concatenate([th, ps])


def score_full_obs(eps: ReturnSeries, tau: ModelParams,
                   acc: DensityAccuracy = FIT_ACCURACY,
                   init_rule: str = "mean-squared") -> np.ndarray:
    """Per-observation gradient matrix, one row per l_t."""
    th = score_theta_obs(eps, tau, acc, init_rule)
    ps = score_psi_obs(eps, tau, acc, init_rule)
    return np.hstack([th, ps])


def likelihood_and_score(eps: ReturnSeries, tau: ModelParams,
                         acc: DensityAccuracy = FIT_ACCURACY,
                         init_rule: str = "mean-squared"):
    """Objective and full gradient in one pass (shared volatility work).

    Equivalent to (neg_log_likelihood, score_full) but computes the variance
    path, its derivatives and the density evaluations once; this is the hot
    path of the optimizer.
    """
    sig2, grads = variance_derivatives(eps, tau.theta, init_rule)
    eta = eps.values / np.sqrt(sig2)
    x = eta - tau.mu
    eng = get_engine(StableParams(tau.alpha, tau.beta), acc)
    f_vals, _ = eng.pdf_with_err(x)
    f_floor = np.maximum(f_vals, 1e-300)
    fp_vals, _ = eng.dpdf_with_err(x)
    nll = float(np.mean(0.5 * np.log(sig2) - np.log(f_floor)))

    slope = fp_vals / f_floor
    z = 1.0 + eta * slope
    g_theta = 0.5 * (grads / sig2[:, None] * z[:, None]).mean(axis=0)

    h = _FD_PSI
    g_psi = np.empty(3)
    for col, (da, db) in enumerate([(h, 0.0), (0.0, h)]):
        hi = get_engine(StableParams(tau.alpha + da, tau.beta + db), acc)
        lo = get_engine(StableParams(tau.alpha - da, tau.beta - db), acc)
        g_psi[col] = -float(np.mean(hi.logpdf(x) - lo.logpdf(x))) / (2.0 * h)
    g_psi[2] = float(np.mean(slope))
    return nll, np.concatenate([g_theta, g_psi])


def gaussian_criterion(eps: ReturnSeries, theta: GarchParams,
                       init_rule: str = "mean-squared") -> float:
    """Gaussian QML objective: mean of log(sigma2_t) + eps_t^2/sigma2_t."""
    sig2 = volatility_path(eps, theta, init_rule).sigma2
    return float(np.mean(np.log(sig2) + eps.values ** 2 / sig2))


def gaussian_criterion_grad(eps: ReturnSeries, theta: GarchParams,
                            init_rule: str = "mean-squared") -> np.ndarray:
    sig2, grads = variance_derivatives(eps, theta, init_rule)
    w = (1.0 - eps.values ** 2 / sig2) / sig2
    return (grads * w[:, None]).mean(axis=0)
