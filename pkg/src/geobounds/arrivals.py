"""Packet inter-arrival time models: deterministic, uniform on [0, T] and
exponential, together with their exact k-fold convolutions.

The deterministic process is a point mass and is handled symbolically: its
density is never evaluated pointwise, integrals against it collapse to a
single function evaluation (see :meth:`ArrivalProcess.integrate_against`).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import mpmath
import numpy as np
from scipy import stats

from ._quadrature import quad_checked

# Irwin-Hall terms alternate in sign; beyond this order double precision
# cancellation dominates, so switch to high-precision arithmetic.
_IRWIN_HALL_EXACT_MAX_K = 15


class PointMassError(TypeError):
    """Raised when a point-mass density is evaluated pointwise."""


class ArrivalKind(str, Enum):
    DETERMINISTIC = "deterministic"
    UNIFORM = "uniform"
    EXPONENTIAL = "exponential"


def _irwin_hall_pdf(u: float, k: int) -> float:
    """Density of the sum of k independent U(0, 1) variables at u."""
    if u <= 0.0 or u >= k:
        return 0.0
    if k <= _IRWIN_HALL_EXACT_MAX_K:
        terms = [
            (-1.0) ** j * math.comb(k, j) * (u - j) ** (k - 1)
            for j in range(int(math.floor(u)) + 1)
        ]
        return math.fsum(terms) / math.factorial(k - 1)
    with mpmath.workdps(40):
        acc = mpmath.mpf(0)
        for j in range(int(math.floor(u)) + 1):
            acc += (-1) ** j * mpmath.binomial(k, j) * mpmath.mpf(u - j) ** (k - 1)
        return float(acc / mpmath.factorial(k - 1))


@dataclass(frozen=True)
class ArrivalProcess:
    """One of the three inter-arrival families.

    param is T (seconds) for the deterministic and uniform kinds and the
    rate alpha (1/seconds) for the exponential kind.
    """

    kind: ArrivalKind
    param: float

    def __post_init__(self):
        kind = ArrivalKind(self.kind)
        object.__setattr__(self, "kind", kind)
        p = self.param
        if not (isinstance(p, (int, float)) and math.isfinite(p) and p > 0):
            raise ValueError(f"arrival parameter must be a finite positive real, got {p!r}")
        object.__setattr__(self, "param", float(p))

    # -- construction helpers -------------------------------------------------

    @classmethod
    def deterministic(cls, period: float) -> "ArrivalProcess":
        return cls(ArrivalKind.DETERMINISTIC, period)

    @classmethod
    def uniform(cls, upper: float) -> "ArrivalProcess":
        return cls(ArrivalKind.UNIFORM, upper)

    @classmethod
    def exponential(cls, rate: float) -> "ArrivalProcess":
        return cls(ArrivalKind.EXPONENTIAL, rate)

    @classmethod
    def from_dict(cls, d: dict) -> "ArrivalProcess":
        return cls(ArrivalKind(d["kind"]), float(d["param"]))

    def to_dict(self) -> dict:
        return {"kind": self.kind.value, "param": self.param}

    @classmethod
    def parse(cls, spec: str) -> "ArrivalProcess":
        """Parse the single-token 'kind:param' flag syntax."""
        try:
            kind, _, param = spec.partition(":")
            return cls(ArrivalKind(kind), float(param))
        except (ValueError, KeyError) as exc:
            raise ValueError(f"cannot parse arrival spec {spec!r}") from exc

    # -- distribution ---------------------------------------------------------

    def mean(self) -> float:
        if self.kind is ArrivalKind.DETERMINISTIC:
            return self.param
        if self.kind is ArrivalKind.UNIFORM:
            return self.param / 2.0
        return 1.0 / self.param

    def pdf(self, t: float) -> float:
        if self.kind is ArrivalKind.DETERMINISTIC:
            raise PointMassError(
                "deterministic inter-arrival density is a point mass; "
                "use integrate_against instead of pointwise evaluation"
            )
        if t < 0:
            return 0.0
        if self.kind is ArrivalKind.UNIFORM:
            return 1.0 / self.param if t <= self.param else 0.0
        return self.param * math.exp(-self.param * t)

    def kfold_pdf(self, k: int, t: float) -> float:
        """Density of the sum of k i.i.d. inter-arrival times at t."""
        self._check_k(k)
        if t < 0:
            raise ValueError(f"time must be nonnegative, got {t}")
        if self.kind is ArrivalKind.DETERMINISTIC:
            raise PointMassError(
                "k-fold deterministic density is a point mass at k*T; "
                "use integrate_against"
            )
        if self.kind is ArrivalKind.UNIFORM:
            T = self.param
            return _irwin_hall_pdf(t / T, k) / T
        # Erlang(k, alpha), in log space to stay stable for large k.
        a = self.param
        if t == 0.0:
            return a if k == 1 else 0.0
        logp = k * math.log(a) + (k - 1) * math.log(t) - a * t - math.lgamma(k)
        return math.exp(logp)

    def kfold_support(self, k: int) -> tuple[float, float]:
        """Interval outside of which the k-fold density is (numerically) zero."""
        self._check_k(k)
        if self.kind is ArrivalKind.DETERMINISTIC:
            return (k * self.param, k * self.param)
        if self.kind is ArrivalKind.UNIFORM:
            return (0.0, k * self.param)
        hi = stats.gamma.ppf(1.0 - 1e-14, k, scale=1.0 / self.param)
        return (0.0, float(hi))

    def integrate_against(self, g, k: int = 1, *, points=None) -> float:
        """Compute the mixture integral of g(t) against the k-fold density.

        For the deterministic kind this collapses exactly to g(k*T).
        """
        self._check_k(k)
        if self.kind is ArrivalKind.DETERMINISTIC:
            return g(k * self.param)
        lo, hi = self.kfold_support(k)
        if self.kind is ArrivalKind.EXPONENTIAL:
            # substitute t = u^2 so integrands with erf(c/sqrt(t)) factors
            # stay smooth near 0 and the Gaussian-like tail is gentle
            a = self.param
            log_pref = math.log(2.0) + k * math.log(a) - math.lgamma(k)

            def integrand(u: float) -> float:
                logw = log_pref + (2 * k - 1) * math.log(u) - a * u * u if u > 0 else -math.inf
                return g(u * u) * math.exp(logw) if u > 0 else 0.0

            upts = [math.sqrt(p) for p in (points or []) if 0.0 < p < hi]
            return quad_checked(integrand, 0.0, math.sqrt(hi), points=upts or None)
        pts = [p for p in (points or []) if lo < p < hi]
        return quad_checked(
            lambda t: g(t) * self.kfold_pdf(k, t), lo, hi,
            points=pts or None,
        )

    def sample(self, rng: np.random.Generator, size=None):
        if self.kind is ArrivalKind.DETERMINISTIC:
            return self.param if size is None else np.full(size, self.param)
        if self.kind is ArrivalKind.UNIFORM:
            return rng.uniform(0.0, self.param, size)
        return rng.exponential(1.0 / self.param, size)

    @staticmethod
    def _check_k(k: int):
        if not isinstance(k, (int, np.integer)) or k < 1:
            raise ValueError(f"k must be a positive integer, got {k!r}")
