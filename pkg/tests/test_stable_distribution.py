"""CDF, quantile and sampling checks for the stable family."""

import numpy as np
import pytest
from numpy.testing import assert_allclose

from conftest import ks_distance
from stablegarch.stable import StableParams, cdf, density, quantile, sample

PSI_GRID = [StableParams(a, b) for a in (0.6, 1.0, 1.3, 1.7, 2.0)
            for b in (-0.9, 0.0, 0.9)]


class TestCdf:
    def test_symmetric_median(self):
        assert cdf(0.0, StableParams(1.5, 0.0)) == pytest.approx(0.5, abs=1e-7)

    def test_cauchy_quartile(self):
        assert cdf(1.0, StableParams(1.0, 0.0)) == pytest.approx(0.75, abs=1e-7)

    def test_monotone(self):
        x = np.linspace(-20.0, 20.0, 401)
        for psi in [StableParams(0.7, 0.5), StableParams(1.8, -0.4)]:
            F = cdf(x, psi)
            assert np.all(np.diff(F) >= -1e-12)
            assert F[0] >= 0.0 and F[-1] <= 1.0

    def test_against_monte_carlo(self):
        # sampling oracle: 1e7 draws, agreement within 3 standard errors
        psi = StableParams(1.8, 0.5)
        draws = sample(psi, 10 ** 7, seed=123)
        emp = float(np.mean(draws <= -2.0))
        got = cdf(-2.0, psi)
        se = np.sqrt(emp * (1.0 - emp) / 1e7)
        assert abs(got - emp) < 3.0 * se

    def test_location_scale(self):
        psi = StableParams(1.4, 0.3, mu=1.5, gamma=2.0)
        xs = np.array([-2.0, 1.5, 4.0])
        assert_allclose(cdf(xs, psi),
                        cdf((xs - 1.5) / 2.0, psi.standardized()), atol=1e-9)


class TestQuantile:
    def test_symmetric_median(self):
        assert quantile(0.5, StableParams(1.6, 0.0)) == pytest.approx(0.0, abs=1e-7)

    def test_cauchy_quartile(self):
        assert quantile(0.75, StableParams(1.0, 0.0)) == pytest.approx(1.0, abs=1e-6)

    def test_round_trip_deep_tail(self):
        psi = StableParams(1.9, -0.2)
        q = quantile(0.01, psi)
        assert cdf(q, psi) == pytest.approx(0.01, abs=1e-6)

    def test_strictly_increasing(self):
        psi = StableParams(1.2, 0.6)
        ps = [0.01, 0.1, 0.3, 0.5, 0.7, 0.9, 0.99]
        qs = [quantile(p, psi) for p in ps]
        assert np.all(np.diff(qs) > 0)

    def test_rejects_bad_p(self):
        with pytest.raises(ValueError):
            quantile(0.0, StableParams(1.5, 0.0))
        with pytest.raises(ValueError):
            quantile(1.0, StableParams(1.5, 0.0))


class TestSample:
    def test_gaussian_variance(self):
        s = sample(StableParams(2.0, 0.0), 10 ** 6, seed=7)
        assert s.var() == pytest.approx(2.0, rel=0.01)

    def test_cauchy_quartile_frequency(self):
        s = sample(StableParams(1.0, 0.0), 10 ** 6, seed=11)
        assert np.mean(s <= 1.0) == pytest.approx(0.75, abs=0.002)

    def test_deterministic_per_seed(self):
        psi = StableParams(1.5, 0.5)
        assert_allclose(sample(psi, 100, seed=3), sample(psi, 100, seed=3))
        assert not np.allclose(sample(psi, 100, seed=3), sample(psi, 100, seed=4))

    def test_skewed_ks_against_cdf(self):
        psi = StableParams(1.5, 0.5)
        s = np.sort(sample(psi, 10 ** 6, seed=21))
        F = cdf(s, psi)
        assert ks_distance(s, F) < 0.002

    def test_rejects_nonpositive_count(self):
        with pytest.raises(ValueError):
            sample(StableParams(1.5, 0.0), 0)

    def test_location_scale_shift(self):
        base = sample(StableParams(1.3, -0.4), 1000, seed=5)
        moved = sample(StableParams(1.3, -0.4, mu=2.0, gamma=3.0), 1000, seed=5)
        assert_allclose(moved, 2.0 + 3.0 * base, atol=1e-12)


@pytest.mark.parametrize("psi", PSI_GRID, ids=lambda p: f"a{p.alpha}b{p.beta}")
def test_sampler_ks_band_across_grid(psi):
    # 1e5 draws against the numeric cdf at the 5% KS level
    n = 10 ** 5
    s = np.sort(sample(psi, n, seed=31))
    F = cdf(s, psi)
    assert ks_distance(s, F) < 1.63 / np.sqrt(n)


def test_density_integrates_to_cdf_increments():
    from scipy import integrate
    psi = StableParams(1.6, 0.4)
    lo, hi = -1.0, 2.5
    mass, _ = integrate.quad(lambda x: density(x, psi), lo, hi, limit=200)
    assert mass == pytest.approx(cdf(hi, psi) - cdf(lo, psi), abs=1e-7)
