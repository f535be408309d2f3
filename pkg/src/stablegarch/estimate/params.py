"""Parameter containers for stable (pseudo-)maximum-likelihood estimation."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from ..garch.params import GarchOrder, GarchParams
from ..stable import StableParams


@dataclass(frozen=True)
class ModelParams:
    """Full estimand tau = (theta, psi) with the innovation scale pinned to 1.

    The scale of the stable innovation is not identified jointly with omega
    and the ARCH coefficients, so gamma = 1 throughout and psi carries only
    (alpha, beta, mu).
    """

    theta: GarchParams
    alpha: float
    beta: float
    mu: float

    def __post_init__(self):
        if not (0.0 < self.alpha <= 2.0):
            raise ValueError(f"alpha must be in (0, 2], got {self.alpha}")
        if not (-1.0 < self.beta < 1.0) and not (self.alpha == 2.0 and -1 <= self.beta <= 1):
            raise ValueError(f"beta must be in (-1, 1), got {self.beta}")
        if not np.isfinite(self.mu):
            raise ValueError("mu must be finite")

    @property
    def gamma(self) -> float:
        return 1.0

    @property
    def psi(self) -> StableParams:
        return StableParams(self.alpha, self.beta, self.mu, 1.0)

    @property
    def order(self) -> GarchOrder:
        return self.theta.order

    def as_array(self) -> np.ndarray:
        return np.concatenate([self.theta.as_array(), [self.alpha, self.beta, self.mu]])

    @classmethod
    def from_array(cls, tau: np.ndarray, order: GarchOrder) -> "ModelParams":
        tau = np.asarray(tau, dtype=float)
        d = order.p + order.q + 1
        return cls(theta=GarchParams.from_array(tau[:d], order),
                   alpha=float(tau[d]), beta=float(tau[d + 1]), mu=float(tau[d + 2]))


def param_names(order: GarchOrder) -> list[str]:
    names = ["omega"] + [f"a{i}" for i in range(1, order.q + 1)] \
        + [f"b{j}" for j in range(1, order.p + 1)]
    return names + ["alpha", "beta", "mu"]


@dataclass(frozen=True)
class BoundsConfig:
    """Componentwise box realizing the compact parameter space.

    lower == upper freezes a coordinate (used e.g. to lock the dynamics for
    i.i.d. fits); otherwise lower < upper is required.  Defaults keep alpha
    away from 2 so the asymmetry stays identified, and away from the lower
    boundary of the admissible range.
    """

    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        lo = np.asarray(self.lower, dtype=float)
        hi = np.asarray(self.upper, dtype=float)
        object.__setattr__(self, "lower", lo)
        object.__setattr__(self, "upper", hi)
        if lo.shape != hi.shape:
            raise ValueError("bound arrays must have equal shape")
        if np.any(lo > hi):
            raise ValueError("lower bounds must not exceed upper bounds")

    @classmethod
    def default(cls, order: GarchOrder) -> "BoundsConfig":
        lo = [1e-8] + [0.0] * order.q + [0.0] * order.p + [0.4, -0.99, -10.0]
        hi = [10.0] + [5.0] * order.q + [0.999] * order.p + [1.99, 0.99, 10.0]
        return cls(np.array(lo), np.array(hi))

    @property
    def free(self) -> np.ndarray:
        return self.upper > self.lower

    def theta_only(self, order: GarchOrder) -> "BoundsConfig":
        d = order.p + order.q + 1
        return BoundsConfig(self.lower[:d], self.upper[:d])

    def clip_inside(self, x: np.ndarray, margin: float = 1e-6) -> np.ndarray:
        width = self.upper - self.lower
        pad = margin * np.where(width > 0, width, 1.0)
        return np.clip(x, self.lower + pad * self.free, self.upper - pad * self.free)


@dataclass
class FitResult:
    """Estimation output: parameters, information matrix and diagnostics."""

    tau_hat: ModelParams
    neg_loglik: float
    J_n: np.ndarray | None
    std_errors: np.ndarray | None
    iterations: int
    converged: bool
    constraint_active: np.ndarray | None
    method: str = "stable"
    n_obs: int = 0
    grad_norm: float = np.nan
    message: str = ""

    def param_array(self) -> np.ndarray:
        arr = self.tau_hat.as_array()
        if self.method == "gaussian":
            return arr[: self.tau_hat.order.p + self.tau_hat.order.q + 1]
        return arr

    def names(self) -> list[str]:
        names = param_names(self.tau_hat.order)
        if self.method == "gaussian":
            return names[: self.tau_hat.order.p + self.tau_hat.order.q + 1]
        return names

    def to_dict(self) -> dict:
        order = self.tau_hat.order
        d = {
            "method": self.method,
            "order": {"p": order.p, "q": order.q},
            "names": self.names(),
            "estimates": [float(v) for v in self.param_array()],
            "std_errors": (None if self.std_errors is None
                           else [_float_or_none(v) for v in self.std_errors]),
            "neg_loglik": float(self.neg_loglik),
            "J_n": (None if self.J_n is None
                    else [float(v) for v in np.asarray(self.J_n).ravel()]),
            "iterations": int(self.iterations),
            "converged": bool(self.converged),
            "constraint_active": (None if self.constraint_active is None
                                  else [bool(v) for v in self.constraint_active]),
            "n_obs": int(self.n_obs),
            "grad_norm": _float_or_none(self.grad_norm),
            "message": self.message,
        }
        return d

    def to_json(self, path=None) -> str:
        text = json.dumps(self.to_dict(), indent=2)
        if path is not None:
            with open(path, "w", encoding="utf-8") as fh:
                fh.write(text + "\n")
        return text

    @classmethod
    def from_dict(cls, d: dict) -> "FitResult":
        order = GarchOrder(p=int(d["order"]["p"]), q=int(d["order"]["q"]))
        est = np.asarray(d["estimates"], dtype=float)
        dim_theta = order.p + order.q + 1
        theta = GarchParams.from_array(est[:dim_theta], order)
        if d["method"] == "gaussian":
            tau = ModelParams(theta, 2.0, 0.0, 0.0)
        else:
            tau = ModelParams(theta, *est[dim_theta:dim_theta + 3])
        dim = len(d["names"])
        jn = None
        if d.get("J_n") is not None:
            jn = np.asarray(d["J_n"], dtype=float).reshape(dim, dim)
        se = None
        if d.get("std_errors") is not None:
            se = np.array([np.nan if v is None else float(v) for v in d["std_errors"]])
        ca = None
        if d.get("constraint_active") is not None:
            ca = np.asarray(d["constraint_active"], dtype=bool)
        return cls(tau_hat=tau, neg_loglik=float(d["neg_loglik"]), J_n=jn,
                   std_errors=se, iterations=int(d["iterations"]),
                   converged=bool(d["converged"]), constraint_active=ca,
                   method=d["method"], n_obs=int(d.get("n_obs", 0)),
                   grad_norm=(np.nan if d.get("grad_norm") is None
                              else float(d["grad_norm"])),
                   message=d.get("message", ""))

    @classmethod
    def from_json(cls, path) -> "FitResult":
        with open(path, encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh))


def _float_or_none(v):
    v = float(v)
    return None if not np.isfinite(v) else v
