"""Characteristic function of the stable family."""

from __future__ import annotations

import numpy as np

from .params import StableParams


def char_fn(t, psi: StableParams):
    """Characteristic function phi(t) of S(alpha, beta, mu, gamma).

    Uses the continuous parameterization: for alpha != 1,

        phi(t) = exp{ -|gamma t|^alpha
                      + i beta gamma^alpha tan(alpha pi / 2) t (|t|^(alpha-1) - 1)
                      + i mu t },

    and for alpha == 1 (taken at exact equality only)

        phi(t) = exp{ -|gamma t| - i beta gamma t (2/pi) log|gamma t| + i mu t }.

    Accepts scalars or arrays; |phi(t)| = exp(-|gamma t|^alpha) in all cases.
    """
    t_arr = np.asarray(t, dtype=float)
    scalar = t_arr.ndim == 0
    t_arr = np.atleast_1d(t_arr)
    a, b, mu, g = psi.alpha, psi.beta, psi.mu, psi.gamma
    if a == 1.0:
        gt = g * t_arr
        agt = np.abs(gt)
        with np.errstate(divide="ignore", invalid="ignore"):
            lg = np.where(agt > 0.0, np.log(agt), 0.0)
        out = np.exp(-agt + 1j * (mu * t_arr - b * gt * (2.0 / np.pi) * lg))
    else:
        at = np.abs(t_arr)
        with np.errstate(divide="ignore", invalid="ignore"):
            pw = np.where(at > 0.0, at ** (a - 1.0), 0.0)
        skew = b * np.tan(np.pi * a / 2.0) * g ** a
        out = np.exp(-np.abs(g * t_arr) ** a + 1j * (skew * t_arr * (pw - 1.0) + mu * t_arr))
    return complex(out[0]) if scalar else out
