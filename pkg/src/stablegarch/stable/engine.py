"""Certified evaluation engine for the standardized stable density.

A ``StandardDensity`` instance owns the series expansions, the lazily built
Fourier tables, and the CDF machinery for one (alpha, beta) pair.  Every
strategy reports a certified absolute error; evaluation dispatches each point
to the cheapest strategy that certifies the requested tolerance, falling back
to per-point adaptive quadrature for the few points no table covers.

Engines are cached per (alpha, beta, accuracy); all evaluations on them are
read-only after construction apart from lazy table attachment.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np
from scipy import optimize

from scipy import interpolate

from ..errors import AccuracyNotReached
from .fourier import FourierTable, quad_pdf_point
from .params import DensityAccuracy, StableParams
from .series import CenterSeries, TailSeriesSide, skew_shift, tail_constant

_CHUNK = 16384
_PROBE_RADII = np.geomspace(0.02, 800.0, 140)
_PDF_FLOOR = 1e-300


class StandardDensity:
    """Density of S(alpha, beta, 0, 1) with certified absolute accuracy."""

    def __init__(self, alpha: float, beta: float, acc: DensityAccuracy):
        self.alpha = float(alpha)
        self.beta = float(beta)
        self.acc = acc
        self.tol = acc.abs_tol
        self.tau = skew_shift(alpha, beta)
        kmax = acc.max_series_terms

        self.has_tail_series = not (alpha == 1.0 and beta != 0.0)
        self.right = TailSeriesSide(alpha, beta, kmax) if self.has_tail_series else None
        self.left = TailSeriesSide(alpha, -beta, kmax) if self.has_tail_series else None
        self.center = None
        if alpha > 1.0 or (alpha == 1.0 and beta == 0.0):
            self.center = CenterSeries(alpha, beta, kmax)

        self._fft = None
        self._fft_d = None
        self._cdf_state = None
        self._onsets: dict[str, float] = {}

    # -- probes -----------------------------------------------------------

    @property
    def x_keep(self) -> float:
        """Halfwidth of the Fourier window; beyond it the series certify."""
        if not self.has_tail_series:
            return 64.0
        pads = [6.0]
        for kind in ("pdf", "sf"):
            onset = self._onset(kind)
            if np.isfinite(onset):
                pads.append(onset + abs(self.tau) + 1.0)
        return float(np.clip(max(pads), 6.0, 64.0))

    def _onset(self, kind: str) -> float:
        if kind not in self._onsets:
            self._onsets[kind] = self._probe_onset(kind) if self.has_tail_series else np.inf
        return self._onsets[kind]

    def _probe_onset(self, kind: str) -> float:
        """Smallest radius from which both tail sides certify the tolerance."""
        onset = 0.0
        for side in (self.right, self.left):
            fn = getattr(side, kind)
            _, err = fn(_PROBE_RADII, self.tol)
            ok = err <= self.tol
            if not ok.any():
                return np.inf
            idx = len(ok) - 1
            while idx > 0 and ok[idx - 1]:
                idx -= 1
            onset = max(onset, _PROBE_RADII[idx])
        return onset

    def _probe_center_limit(self) -> float:
        if self.center is None:
            return 0.0
        grid = np.geomspace(1e-3, 80.0, 100)
        _, err = self.center.pdf(grid, self.tol)
        ok = err <= self.tol
        if not ok[0]:
            return 0.0
        idx = int(np.argmin(ok)) if not ok.all() else len(grid)
        return float(grid[idx - 1]) if idx > 0 else 0.0

    _STAGE1 = 40

    # -- lazy tables ------------------------------------------------------

    def _fft_table(self) -> FourierTable:
        if self._fft is None:
            sides = (self.right, self.left) if self.has_tail_series else None
            self._fft = FourierTable(self.alpha, self.beta, self.x_keep,
                                     self.acc.fft_grid_size, self.tol,
                                     self.acc.fft_domain_halfwidth,
                                     deriv=False, tail_sides=sides)
        return self._fft

    def _fft_deriv_table(self) -> FourierTable:
        if self._fft_d is None:
            sides = (self.right, self.left) if self.has_tail_series else None
            self._fft_d = FourierTable(self.alpha, self.beta, self.x_keep,
                                       self.acc.fft_grid_size, self.tol,
                                       self.acc.fft_domain_halfwidth,
                                       deriv=True, tail_sides=sides)
        return self._fft_d

    # -- pointwise evaluation ---------------------------------------------

    def _eval_strategies(self, x: np.ndarray, deriv: bool, kcap=None):
        """Best certified (value, err) per point across series strategies.

        Staged: a cheap low-term pass certifies the bulk of typical inputs,
        the full term budget is spent only on the points that remain.
        """
        val = np.zeros_like(x)
        err = np.full_like(x, np.inf)
        y = x + self.tau
        ay = np.abs(y)
        tail_gate = ay >= (0.4 if self.alpha <= 1.0 else 1.2)
        center_gate = ay <= 80.0
        if self.has_tail_series:
            pos = y > 0.0
            for side_pos, side in ((True, self.right), (False, self.left)):
                m = (pos == side_pos) & tail_gate & (err > self.tol)
                if not m.any():
                    continue
                r = ay[m]
                v, e = (side.dpdf(r, self.tol, kcap) if deriv
                        else side.pdf(r, self.tol, kcap))
                if deriv and not side_pos:
                    v = -v
                better = e < err[m]
                idx = np.flatnonzero(m)[better]
                val[idx], err[idx] = v[better], e[better]
        if self.center is not None:
            m = center_gate & (err > self.tol)
            if m.any():
                v, e = (self.center.dpdf(y[m], self.tol, kcap) if deriv
                        else self.center.pdf(y[m], self.tol, kcap))
                better = e < err[m]
                idx = np.flatnonzero(m)[better]
                val[idx], err[idx] = v[better], e[better]
        return val, err

    def _apply_fft(self, x, val, err, deriv: bool):
        table = self._fft_deriv_table() if deriv else self._fft_table()
        m = (err > self.tol) & table.covers(x) & (table.err < err)
        if m.any():
            val[m] = table(x[m])
            err[m] = table.err

    def _eval_with_err(self, x: np.ndarray, deriv: bool):
        if self.beta == 0.0:
            # evaluate on |x| so symmetry holds exactly (the Fourier grid is
            # not symmetric about zero) and flip the derivative sign
            ax = np.abs(x)
            val, err = self._eval_signless(ax, deriv)
            if deriv:
                val = val * np.sign(x)
            return val, err
        return self._eval_signless(x, deriv)

    def _eval_signless(self, x: np.ndarray, deriv: bool):
        val, err = self._eval_strategies(x, deriv, kcap=self._STAGE1)
        need = err > self.tol
        if need.any():
            # a Fourier table beats a full-length series pass once many
            # points are involved (or if one was already built)
            built = self._fft_d if deriv else self._fft
            if built is not None or int(need.sum()) > 2048:
                self._apply_fft(x, val, err, deriv)
                need = err > self.tol
        if need.any():
            m = np.flatnonzero(need)
            v, e = self._eval_strategies(x[m], deriv, kcap=None)
            better = e < err[m]
            val[m[better]], err[m[better]] = v[better], e[better]
            built = self._fft_d if deriv else self._fft
            # derivative tables are cheap; build whenever stragglers remain
            if built is not None or deriv or int((err > self.tol).sum()) > 8:
                if (err > self.tol).any():
                    self._apply_fft(x, val, err, deriv)
        need = err > self.tol
        if need.any():
            for i in np.flatnonzero(need):
                v, e = quad_pdf_point(float(x[i]), self.alpha, self.beta, deriv=deriv)
                if e < err[i]:
                    val[i], err[i] = v, e
        return val, err

    def pdf_with_err(self, x):
        """Density values and certified absolute error bounds, vectorized."""
        x = np.atleast_1d(np.asarray(x, dtype=float))
        out_v = np.empty_like(x)
        out_e = np.empty_like(x)
        for lo in range(0, x.size, _CHUNK):
            sl = slice(lo, min(lo + _CHUNK, x.size))
            out_v[sl], out_e[sl] = self._eval_with_err(x[sl], deriv=False)
        np.maximum(out_v, 0.0, out=out_v)
        return out_v, out_e

    def pdf(self, x):
        v, e = self.pdf_with_err(x)
        self._check(e)
        return v

    def dpdf_with_err(self, x):
        x = np.atleast_1d(np.asarray(x, dtype=float))
        out_v = np.empty_like(x)
        out_e = np.empty_like(x)
        for lo in range(0, x.size, _CHUNK):
            sl = slice(lo, min(lo + _CHUNK, x.size))
            out_v[sl], out_e[sl] = self._eval_with_err(x[sl], deriv=True)
        return out_v, out_e

    def dpdf(self, x):
        v, e = self.dpdf_with_err(x)
        self._check(e)
        return v

    def logpdf(self, x):
        """log f with a floor guarding underflow in extreme tails."""
        v, _ = self.pdf_with_err(x)
        return np.log(np.maximum(v, _PDF_FLOOR))

    def _check(self, err):
        worst = float(np.max(err)) if err.size else 0.0
        if worst > self.tol:
            raise AccuracyNotReached(
                f"no strategy certified abs_tol={self.tol:g} for "
                f"alpha={self.alpha}, beta={self.beta} (worst bound {worst:g})",
                worst_error=worst)

    # -- distribution function --------------------------------------------

    def _build_cdf(self):
        if self._cdf_state is not None:
            return self._cdf_state
        tau = self.tau
        if self.has_tail_series:
            onset = self._onset("sf")
            a_r = max(2.0, onset - tau + 0.25)
            a_l = min(-2.0, -(onset + tau) - 0.25)
            f_al = self._sf_left(np.array([a_l]))[0][0]
            sf_ar, sf_err = self._sf_right(np.array([a_r]))
            sf_ar, sf_err = sf_ar[0], sf_err[0]
        else:
            a_r = self.x_keep - 1.0
            a_l = -a_r
            self._tail_grids = (self._build_tail_grid(a_r, +1),
                                self._build_tail_grid(-a_l, -1))
            sf_ar = float(self._tail_grids[0](np.log(a_r)))
            f_al = float(self._tail_grids[1](np.log(-a_l)))
            sf_err = 1e-6
        table = self._fft_table()
        anti = table.antiderivative()
        mass_int = float(anti(a_r) - anti(a_l))
        mismatch = abs(f_al + mass_int + sf_ar - 1.0)
        err = mismatch + sf_err + table.err * (a_r - a_l)
        self._cdf_state = dict(a_l=a_l, a_r=a_r, f_al=f_al, anti=anti,
                               sf_ar=sf_ar, err=err)
        return self._cdf_state

    def _build_tail_grid(self, r_from: float, side: int):
        """Quadrature-backed upper-tail mass on a log grid (no-series case)."""
        r_far = 1e6
        radii = np.geomspace(r_from * 0.98, r_far, 140)
        beta = self.beta if side > 0 else -self.beta
        pdf_vals = np.array([quad_pdf_point(r, self.alpha, beta)[0] for r in radii])
        # integrate f dr = f*r dlog(r) inward from the far end
        u = np.log(radii)
        g = pdf_vals * radii
        seg = 0.5 * (g[1:] + g[:-1]) * np.diff(u)
        sf = np.concatenate([[0.0], np.cumsum(seg[::-1])])[::-1]
        sf += tail_constant(self.alpha, beta, +1) / self.alpha * r_far ** (-self.alpha)
        return interpolate.PchipInterpolator(u, sf, extrapolate=True)

    def _eval_tail_grid(self, r, side: int):
        grid = self._tail_grids[0 if side > 0 else 1]
        r = np.maximum(np.asarray(r, dtype=float), 1e-12)
        out = grid(np.log(np.minimum(r, 1e6)))
        beyond = r > 1e6
        if beyond.any():
            beta = self.beta if side > 0 else -self.beta
            out[beyond] = (tail_constant(self.alpha, beta, +1) / self.alpha
                           * r[beyond] ** (-self.alpha))
        return np.clip(out, 0.0, 1.0)

    def _sf_right(self, x):
        """P[X > x] for x on the right of the shift point, via the series."""
        return self.right.sf(x + self.tau, self.tol)

    def _sf_left(self, x):
        """P[X <= x] for x on the far left: mirror-side upper tail."""
        return self.left.sf(-x - self.tau, self.tol)

    def cdf_with_err(self, x):
        x = np.atleast_1d(np.asarray(x, dtype=float))
        st = self._build_cdf()
        val = np.empty_like(x)
        err = np.full_like(x, st["err"])
        mid = (x >= st["a_l"]) & (x <= st["a_r"])
        lo = x < st["a_l"]
        hi = x > st["a_r"]
        if mid.any():
            val[mid] = st["f_al"] + (st["anti"](x[mid]) - st["anti"](st["a_l"]))
        if lo.any():
            if self.has_tail_series:
                v, e = self._sf_left(x[lo])
                val[lo] = v
                err[lo] = e
            else:
                val[lo] = self._eval_tail_grid(-x[lo], side=-1)
                err[lo] = 1e-6
        if hi.any():
            if self.has_tail_series:
                v, e = self._sf_right(x[hi])
                val[hi] = 1.0 - v
                err[hi] = e
            else:
                val[hi] = 1.0 - self._eval_tail_grid(x[hi], side=+1)
                err[hi] = 1e-6
        return np.clip(val, 0.0, 1.0), err

    def cdf(self, x):
        v, e = self.cdf_with_err(x)
        # the certified cdf bound aggregates anchor closure, table error over
        # the central window and the mass-balance mismatch, so it is looser
        # than the pointwise density tolerance
        if float(np.max(e)) > max(256.0 * self.tol, 2e-5):
            raise AccuracyNotReached("cdf accuracy not certified",
                                     worst_error=float(np.max(e)))
        return v

    def ppf(self, p: float) -> float:
        """Quantile by bracketing plus Brent refinement on the CDF."""
        if not (0.0 < p < 1.0):
            raise ValueError("p must lie strictly between 0 and 1")
        st = self._build_cdf()

        def f(x):
            return float(self.cdf_with_err(np.array([x]))[0][0] - p)

        lo, hi = st["a_l"], st["a_r"]
        f_lo, f_hi = f(lo), f(hi)
        width = max(hi - lo, 1.0)
        while f_lo > 0.0:
            hi, f_hi = lo, f_lo
            lo -= width
            width *= 2.0
            f_lo = f(lo)
            if width > 1e12:
                return lo
        while f_hi < 0.0:
            lo, f_lo = hi, f_hi
            hi += width
            width *= 2.0
            f_hi = f(hi)
            if width > 1e12:
                return hi
        return float(optimize.brentq(f, lo, hi, xtol=1e-12, rtol=1e-15, maxiter=200))

    def tail_constant(self, side: int) -> float:
        """K with f(x) ~ K |x|^(-alpha-1) toward side * infinity."""
        return tail_constant(self.alpha, self.beta, side)


@lru_cache(maxsize=64)
def _engine(alpha: float, beta: float, acc: DensityAccuracy) -> StandardDensity:
    return StandardDensity(alpha, beta, acc)


def get_engine(psi: StableParams, acc: DensityAccuracy) -> StandardDensity:
    """Cached standardized engine for psi's shape parameters."""
    return _engine(float(psi.alpha), float(psi.beta), acc)
