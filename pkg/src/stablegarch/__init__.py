"""stablegarch: alpha-stable distributions, stable (pseudo-)MLE for GARCH
models, strict-stationarity diagnostics and stable Value-at-Risk."""

from . import domain_attraction, estimate, garch, risk, stable
from .data import ReturnSeries, read_returns_csv, write_returns_csv
from .errors import (
    AccuracyNotReached,
    CalibrationError,
    ExplosionError,
    NonFiniteLikelihood,
    NotConverged,
    StableGarchError,
)

__all__ = [
    "stable", "garch", "estimate", "domain_attraction", "risk",
    "ReturnSeries", "read_returns_csv", "write_returns_csv",
    "StableGarchError", "AccuracyNotReached", "ExplosionError",
    "NonFiniteLikelihood", "NotConverged", "CalibrationError",
]

__version__ = "0.1.0"
