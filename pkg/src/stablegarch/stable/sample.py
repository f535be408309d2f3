"""Stable random variates via the Chambers-Mallows-Stuck transform."""

from __future__ import annotations

import numpy as np

from .params import StableParams


def sample(psi: StableParams, count: int, seed=0) -> np.ndarray:
    """Draw i.i.d. variates from S(psi).

    The classical CMS transform of a (uniform, exponential) pair produces a
    variate in the historical parameterization; for alpha != 1 it is shifted
    by -beta*tan(alpha*pi/2) to land in the continuous parameterization used
    throughout this package (for alpha = 1 the two coincide), then scaled by
    gamma and moved by mu.  Deterministic for a fixed seed; ``seed`` may also
    be an existing numpy Generator.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    a, b = psi.alpha, psi.beta
    v = rng.uniform(-np.pi / 2.0, np.pi / 2.0, size=count)
    w = rng.exponential(1.0, size=count)
    if a == 1.0:
        half = np.pi / 2.0
        z = (1.0 / half) * ((half + b * v) * np.tan(v)
                            - b * np.log((half * w * np.cos(v)) / (half + b * v)))
        return psi.mu + psi.gamma * z
    if a == 2.0:
        z = 2.0 * np.sqrt(w) * np.sin(v)
        return psi.mu + psi.gamma * z
    tb = b * np.tan(np.pi * a / 2.0)
    b0 = np.arctan(tb) / a
    scale = (1.0 + tb * tb) ** (1.0 / (2.0 * a))
    z = (scale * np.sin(a * (v + b0)) / np.cos(v) ** (1.0 / a)
         * (np.cos(v - a * (v + b0)) / w) ** ((1.0 - a) / a))
    return psi.mu + psi.gamma * (z - tb)
