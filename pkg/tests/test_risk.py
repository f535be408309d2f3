"""VaR forecasting and backtesting tests."""

import numpy as np
import pytest
from scipy import stats

from stablegarch.data import ReturnSeries
from stablegarch.estimate import FitResult, ModelParams
from stablegarch.garch import GarchParams, simulate
from stablegarch.risk import backtest, innovation_quantile, var_forecast, var_series
from stablegarch.stable import StableParams, quantile

THETA0 = GarchParams(0.01, a=(0.02,), b=(0.7,))


def make_fit(theta=THETA0, alpha=1.6, beta=0.0, mu=0.0, method="stable"):
    tau = ModelParams(theta, alpha, beta, mu)
    return FitResult(tau_hat=tau, neg_loglik=0.0, J_n=None, std_errors=None,
                     iterations=0, converged=True, constraint_active=None,
                     method=method, n_obs=0)


class TestVarForecast:
    def test_symmetric_median_var_is_zero(self):
        fit = make_fit()
        eps, _ = simulate(THETA0, StableParams(1.6, 0.0), n=300, seed=1)
        fc = var_forecast(fit, eps, p=0.5)
        assert fc.var_value == pytest.approx(0.0, abs=1e-7)
        assert fc.sigma > 0

    def test_constant_volatility_model(self):
        theta = GarchParams(0.04, a=(0.0,), b=(0.0,))
        fit = make_fit(theta=theta, alpha=1.5)
        eps = ReturnSeries(np.random.default_rng(3).standard_normal(100))
        want = 0.2 * quantile(0.05, StableParams(1.5, 0.0))
        for t in (5, 50, 101):
            fc = var_forecast(fit, eps, p=0.05, horizon_index=t)
            assert fc.var_value == pytest.approx(want, rel=1e-9)

    def test_gaussian_uses_unit_variance_quantile(self):
        fit = make_fit(method="gaussian")
        assert innovation_quantile(fit, 0.01) == pytest.approx(stats.norm.ppf(0.01))

    def test_lagged_convention_switch(self):
        fit = make_fit()
        eps, _ = simulate(THETA0, StableParams(1.6, 0.0), n=300, seed=5)
        cur = var_forecast(fit, eps, p=0.01, horizon_index=200, convention="current")
        lag = var_forecast(fit, eps, p=0.01, horizon_index=200, convention="lagged")
        assert cur.sigma != lag.sigma

    def test_bad_index_rejected(self):
        fit = make_fit()
        eps = ReturnSeries(np.ones(10) * 0.1)
        with pytest.raises(ValueError):
            var_forecast(fit, eps, p=0.01, horizon_index=12)


class TestBacktest:
    def test_hits_monotone_in_p(self):
        fit = make_fit()
        out, _ = simulate(THETA0, StableParams(1.6, 0.0), n=5000, seed=7)
        r1 = backtest(fit, out, p=0.01)
        r5 = backtest(fit, out, p=0.05)
        assert r1.hits <= r5.hits
        assert r1.total == r5.total == 5000

    def test_frequency_within_binomial_band_at_truth(self):
        fit = make_fit()
        out, _ = simulate(THETA0, StableParams(1.6, 0.0), n=20000, seed=9)
        for p in (0.01, 0.05):
            rep = backtest(fit, out, p=p)
            band = 2.9 * np.sqrt(p * (1 - p) / rep.total)
            assert abs(rep.hit_frequency - p) < band

    def test_scale_equivariance_of_hits(self):
        # scaling data and the level parameter together leaves hits unchanged
        fit = make_fit()
        out, _ = simulate(THETA0, StableParams(1.6, 0.0), n=2000, seed=11)
        s = 4.0
        theta_s = GarchParams(THETA0.omega * s ** 2, a=THETA0.a, b=THETA0.b)
        fit_s = make_fit(theta=theta_s)
        out_s = ReturnSeries(out.values * s)
        _, _, hits = var_series(fit, out, p=0.01)
        _, _, hits_s = var_series(fit_s, out_s, p=0.01)
        np.testing.assert_array_equal(hits, hits_s)

    def test_weak_inequality_convention(self):
        # a return exactly at the forecast counts as a hit
        theta = GarchParams(1.0, a=(0.0,), b=(0.0,))
        fit = make_fit(theta=theta, alpha=1.5)
        q = quantile(0.1, StableParams(1.5, 0.0))
        out = ReturnSeries(np.array([q, q - 1e-9, q + 1e-9, 0.0]))
        _, _, hits = var_series(fit, out, p=0.1)
        assert hits.tolist() == [True, True, False, False]

    def test_stable_beats_gaussian_on_heavy_tails(self):
        # fits at the truth: the stable quantile matches the innovation law,
        # the unit-variance Gaussian one underestimates the 1% tail
        fit_s = make_fit()
        fit_g = make_fit(method="gaussian")
        wins = 0
        for seed in range(6):
            out, _ = simulate(THETA0, StableParams(1.6, 0.0), n=8000, seed=40 + seed)
            rs = backtest(fit_s, out, p=0.01)
            rg = backtest(fit_g, out, p=0.01)
            wins += abs(rs.hit_frequency - 0.01) < abs(rg.hit_frequency - 0.01)
        assert wins >= 5
