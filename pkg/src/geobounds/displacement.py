"""Displacement densities of a Brownian node observed at packet epochs.

A node moving with variance rate sigma2 along one coordinate, observed after
k inter-arrival durations, has a Gaussian scale-mixture density. Depending on
the arrival family this is an exact Gaussian (deterministic), a closed-form
erf expression (uniform, k = 1) or a numerically integrated mixture.

All entropies are in bits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np
from scipy.special import erf

from ._quadrature import quad_checked
from .arrivals import ArrivalKind, ArrivalProcess

_LOG2 = math.log(2.0)
# Spatial support truncation in units of the density's standard deviation.
# The exponential mixture has Laplace (not Gaussian) tails, so it needs a
# wider window to keep the truncated entropy error below ~1e-8 bits.
_GAUSSIAN_TAIL_SDS = 10.0
_HEAVY_TAIL_SDS = 24.0
# tau-integral truncation for the exponential mixture: tail mass < e^-40.
_EXP_TAU_CUTOFF = 40.0

_INTERP_GRID_POINTS = 4001


class ClosedForm(Enum):
    GAUSSIAN = "gaussian"
    UNIFORM_MIXTURE_CLOSED_FORM = "uniform_mixture_closed_form"
    NUMERIC_MIXTURE = "numeric_mixture"


def _uniform_mixture_pdf(x, sigma2t):
    """Closed form for the uniform-arrival Gaussian mixture.

    sigma2t is sigma2 * T for the coordinate in question; vectorized in x.
    """
    x = np.asarray(x, dtype=float)
    g = np.sqrt(2.0 / (np.pi * sigma2t)) * np.exp(-x * x / (2.0 * sigma2t))
    ax = np.abs(x)
    tail = (ax / sigma2t) * (erf(ax / np.sqrt(2.0 * sigma2t)) - 1.0)
    return g + tail


@dataclass(frozen=True)
class DisplacementDensity:
    """pdf of the per-coordinate displacement at the k-th packet epoch."""

    sigma2: float
    arrival: ArrivalProcess
    k: int = 1
    closed_form: ClosedForm = field(init=False)

    def __post_init__(self):
        if not (math.isfinite(self.sigma2) and self.sigma2 > 0):
            raise ValueError(f"sigma2 must be a positive real, got {self.sigma2!r}")
        ArrivalProcess._check_k(self.k)
        if self.arrival.kind is ArrivalKind.DETERMINISTIC:
            form = ClosedForm.GAUSSIAN
        elif self.arrival.kind is ArrivalKind.UNIFORM and self.k == 1:
            form = ClosedForm.UNIFORM_MIXTURE_CLOSED_FORM
        else:
            form = ClosedForm.NUMERIC_MIXTURE
        object.__setattr__(self, "closed_form", form)

    @property
    def variance(self) -> float:
        """Second moment sigma2 * k * E[S], exact for every arrival family."""
        return self.sigma2 * self.k * self.arrival.mean()

    def _support_halfwidth(self) -> float:
        sds = (
            _HEAVY_TAIL_SDS
            if self.arrival.kind is ArrivalKind.EXPONENTIAL
            else _GAUSSIAN_TAIL_SDS
        )
        return sds * math.sqrt(self.variance)

    # -- pointwise evaluation --------------------------------------------------

    def eval(self, x: float) -> float:
        if not math.isfinite(x):
            raise ValueError(f"x must be finite, got {x!r}")
        if self.closed_form is ClosedForm.GAUSSIAN:
            v = self.variance
            return math.exp(-x * x / (2.0 * v)) / math.sqrt(2.0 * math.pi * v)
        if self.closed_form is ClosedForm.UNIFORM_MIXTURE_CLOSED_FORM:
            return float(_uniform_mixture_pdf(x, self.sigma2 * self.arrival.param))
        return self._eval_mixture(x)

    def _eval_mixture(self, x: float) -> float:
        s = self.sigma2
        if self.arrival.kind is ArrivalKind.EXPONENTIAL:
            # substitute tau = u^2: the integrand becomes smooth at u = 0
            a = self.param_rate()
            pref = 2.0 * a / math.sqrt(2.0 * math.pi * s)

            def integrand(u):
                if u == 0.0:
                    return pref if (x == 0.0 and self.k == 1) else 0.0
                return pref * u ** (2 * (self.k - 1)) * a ** (self.k - 1) / math.gamma(self.k) * math.exp(
                    -x * x / (2.0 * s * u * u) - a * u * u
                )

            umax = math.sqrt(_EXP_TAU_CUTOFF * max(self.k, 1) / a)
            return quad_checked(integrand, 0.0, umax, limit=300)
        # uniform arrival, k >= 2: integrate against the Irwin-Hall density
        def kernel(t):
            return math.exp(-x * x / (2.0 * s * t)) / math.sqrt(2.0 * math.pi * s * t)

        return self.arrival.integrate_against(kernel, self.k)

    def param_rate(self) -> float:
        assert self.arrival.kind is ArrivalKind.EXPONENTIAL
        return self.arrival.param

    def eval_many(self, xs) -> np.ndarray:
        """Vectorized eval; numeric-mixture densities go through a dense
        log-pdf interpolation table (out-of-range points fall back to exact
        quadrature)."""
        xs = np.asarray(xs, dtype=float)
        if self.closed_form is ClosedForm.GAUSSIAN:
            v = self.variance
            return np.exp(-xs * xs / (2.0 * v)) / np.sqrt(2.0 * np.pi * v)
        if self.closed_form is ClosedForm.UNIFORM_MIXTURE_CLOSED_FORM:
            return _uniform_mixture_pdf(xs, self.sigma2 * self.arrival.param)
        grid, logf = self._log_pdf_table()
        ax = np.abs(xs)
        out = np.exp(np.interp(ax, grid, logf))
        outside = ax > grid[-1]
        if np.any(outside):
            out[outside] = [self.eval(float(v)) for v in ax[outside]]
        return out

    _table_cache: dict = field(default_factory=dict, init=False, repr=False, compare=False)

    def _log_pdf_table(self):
        key = "table"
        if key not in self._table_cache:
            hw = self._support_halfwidth()
            grid = np.linspace(0.0, hw, _INTERP_GRID_POINTS)
            logf = np.array([math.log(self.eval(float(x))) for x in grid])
            self._table_cache[key] = (grid, logf)
        return self._table_cache[key]

    # -- entropy ---------------------------------------------------------------

    def differential_entropy(self) -> float:
        """-integral f log2 f over the (truncated) support, in bits."""
        if self.closed_form is ClosedForm.GAUSSIAN:
            return 0.5 * math.log2(2.0 * math.pi * math.e * self.variance)
        hw = self._support_halfwidth()

        def integrand(x):
            v = self.eval(x)
            return 0.0 if v <= 0.0 else -v * math.log(v)

        half = quad_checked(integrand, 0.0, hw, epsabs=1e-10, limit=400)
        return 2.0 * half / _LOG2


def sample_displacement(sigma2, arrival: ArrivalProcess, k, rng: np.random.Generator, size=None):
    """Draw displacements by sampling k inter-arrival times and one Gaussian."""
    ArrivalProcess._check_k(k)
    n = 1 if size is None else size
    taus = arrival.sample(rng, size=(k, n))
    total = np.asarray(taus).sum(axis=0)
    draws = rng.normal(0.0, np.sqrt(sigma2 * total))
    return float(draws[0]) if size is None else draws
