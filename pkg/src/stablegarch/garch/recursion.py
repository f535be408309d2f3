"""GARCH(p, q) volatility recursion and simulation."""

from __future__ import annotations

import numpy as np

from ..data import ReturnSeries
from ..errors import ExplosionError
from ..stable import StableParams
from ..stable import sample as stable_sample
from .params import GarchParams, VolatilityPath

EXPLOSION_FACTOR = 1e12

INIT_RULES = ("mean-squared", "unconditional")


def _presample_value(eps2: np.ndarray, theta: GarchParams, init_rule: str) -> float:
    if init_rule == "mean-squared":
        return float(np.mean(eps2))
    if init_rule == "unconditional":
        persist = sum(theta.a) + sum(theta.b)
        if persist >= 1.0:
            return float(np.mean(eps2))
        return theta.omega / (1.0 - persist)
    raise ValueError(f"unknown init_rule {init_rule!r}; use one of {INIT_RULES}")


def volatility_path(eps: ReturnSeries, theta: GarchParams,
                    init_rule: str = "mean-squared") -> VolatilityPath:
    """Conditional variances sigma2_1..sigma2_n given observed returns.

    Presample squared returns and variances are both set to the in-sample
    mean of eps**2 (or to omega/(1 - sum(a) - sum(b)) under the
    "unconditional" rule); the influence of that choice decays geometrically.
    """
    from scipy import signal

    e2 = eps.values ** 2
    n = e2.size
    p, q = len(theta.b), len(theta.a)
    pre = _presample_value(e2, theta, init_rule)
    buf_e2 = np.concatenate([np.full(q, pre), e2])
    # forcing c_t = omega + sum_i a_i eps2_{t-i}; the b-lags form a linear
    # recursion solved by a lag filter with presample variances as state
    c = np.full(n, theta.omega)
    for i, ai in enumerate(theta.a, start=1):
        if ai != 0.0:
            c += ai * buf_e2[q - i:q - i + n]
    if p == 0:
        return VolatilityPath(c, init_rule)
    ar = np.concatenate([[1.0], -np.asarray(theta.b, dtype=float)])
    zi = signal.lfiltic([1.0], ar, np.full(p, pre), np.empty(0))
    sig2, _ = signal.lfilter([1.0], ar, c, zi=zi)
    return VolatilityPath(sig2, init_rule)


def one_step_variance(eps: ReturnSeries, theta: GarchParams,
                      init_rule: str = "mean-squared") -> float:
    """Forecast variance for the next observation after the series end."""
    path = volatility_path(eps, theta, init_rule)
    e2 = eps.values ** 2
    p, q = len(theta.b), len(theta.a)
    pre = _presample_value(e2, theta, init_rule)
    acc = theta.omega
    for i, ai in enumerate(theta.a, start=1):
        acc += ai * (e2[-i] if i <= e2.size else pre)
    for j, bj in enumerate(theta.b, start=1):
        acc += bj * (path.sigma2[-j] if j <= path.sigma2.size else pre)
    return float(acc)


def simulate(theta: GarchParams, psi: StableParams, n: int, burn_in: int = 500,
             seed=0, innovations: np.ndarray | None = None
             ) -> tuple[ReturnSeries, VolatilityPath]:
    """Simulate the model eps_t = sigma_t * eta_t with the GARCH(p, q) recursion.

    Innovations are stable draws from psi unless an explicit array of length
    n + burn_in is injected (used for summed-innovation experiments).  The
    first burn_in steps are discarded.  Raises ExplosionError once a variance
    exceeds EXPLOSION_FACTOR * omega, which signals a parameterization
    outside the strict-stationarity region.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if burn_in < 0:
        raise ValueError("burn_in must be >= 0")
    total = n + burn_in
    if innovations is None:
        eta = stable_sample(psi, total, seed)
    else:
        eta = np.asarray(innovations, dtype=float)
        if eta.size < total:
            raise ValueError(f"need {total} innovations, got {eta.size}")
        eta = eta[:total]
    p, q = len(theta.b), len(theta.a)
    guard = EXPLOSION_FACTOR * theta.omega
    start = theta.omega / max(1.0 - sum(theta.a) - sum(theta.b), 0.05)
    e2 = np.full(q, start)
    s2 = np.full(p, start) if p else np.empty(0)
    eps_out = np.empty(total)
    sig2_out = np.empty(total)
    a = np.array(theta.a)
    b = np.array(theta.b)
    for t in range(total):
        var = theta.omega + float(a @ e2)
        if p:
            var += float(b @ s2)
        if not np.isfinite(var) or var > guard:
            raise ExplosionError(
                f"sigma^2 exceeded {guard:.3g} at step {t}; "
                "parameters look non-stationary", t=t, sigma2=var)
        e = np.sqrt(var) * eta[t]
        eps_out[t] = e
        sig2_out[t] = var
        if q:
            e2 = np.roll(e2, 1)
            e2[0] = e * e
        if p:
            s2 = np.roll(s2, 1)
            s2[0] = var
    return (ReturnSeries(eps_out[burn_in:]),
            VolatilityPath(sig2_out[burn_in:], "simulated"))
