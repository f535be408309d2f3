"""Simulation-study runner tests (desk scale)."""

import math

import numpy as np
import pytest

from stablegarch.experiment import ExperimentConfig, ExperimentResult, run_experiment
from stablegarch.garch import GarchParams


class TestConfig:
    def test_validation(self):
        with pytest.raises(ValueError):
            ExperimentConfig(reps=1)
        with pytest.raises(ValueError):
            ExperimentConfig(n=50)
        with pytest.raises(ValueError):
            ExperimentConfig(alpha=2.3)


class TestRun:
    @pytest.fixture(scope="class")
    def tiny_result(self):
        cfg = ExperimentConfig(k_list=(math.inf,), n=400, reps=3, seed=5,
                               calibration_reps=10, calibration_samples=200)
        return run_experiment(cfg)

    def test_reference_only_gives_unit_ratios(self, tiny_result):
        np.testing.assert_allclose(tiny_result.q_rmse[math.inf], 1.0)
        np.testing.assert_allclose(tiny_result.q_mse[math.inf], 1.0)

    def test_shapes_and_names(self, tiny_result):
        assert tiny_result.names == ["omega", "a1", "b1", "alpha", "beta", "mu"]
        assert tiny_result.estimates[math.inf].shape == (3, 6)

    def test_csv_outputs(self, tiny_result, tmp_path):
        table = tmp_path / "table.csv"
        details = tmp_path / "details.csv"
        tiny_result.write_csv(table)
        tiny_result.write_details_csv(details)
        lines = table.read_text().strip().splitlines()
        assert lines[0] == "parameter,inf"
        assert len(lines) == 7
        assert "q_rmse" in details.read_text().splitlines()[0]

    def test_small_k_smoke_runs_and_ratios_sensible(self):
        cfg = ExperimentConfig(k_list=(5, math.inf), n=400, reps=4, seed=11,
                               calibration_reps=10, calibration_samples=300)
        res = run_experiment(cfg)
        # mixing in far-from-stable innovations cannot make estimation exact
        assert np.isfinite(res.q_rmse[5]).all()
        assert res.jk[5] > 1.0
        assert res.failures[5] <= 1
