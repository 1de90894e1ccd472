"""Lower bounds on beacon rate and overhead.

The key quantity is p(l): the probability that a node initially offset by l
is still (or newly) within communication radius r at the next forwarding
epoch, under relative Brownian motion with total variance 2*sigma2 and
forwarded-packet inter-arrival law f_tau. The worst-case initial offset l*
maximizes the binary entropy of the neighbor indicator; the bound is that
entropy minus the ternary entropy allowed by the inconsistency budget delta.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from scipy.optimize import bisect
from scipy.special import erf

from ._quadrature import quad_checked
from .arrivals import ArrivalKind, ArrivalProcess
from .entropy import binary_entropy, clamp_nonneg, ternary_entropy
from .update_bounds import Dimension

_LSTAR_REL_TOL = 1e-10
# z-window covering the relative-motion Gaussian to ~1e-30 tail mass
_Z_WINDOW = 12.0


@dataclass(frozen=True)
class BeaconBoundRequest:
    dimension: Dimension
    sigma2: float
    radius: float
    arrival_tau: ArrivalProcess
    delta: float
    beacon_bits: int

    def __post_init__(self):
        object.__setattr__(self, "dimension", Dimension(self.dimension))
        if not (math.isfinite(self.sigma2) and self.sigma2 > 0):
            raise ValueError(f"sigma2 must be a positive real, got {self.sigma2!r}")
        if not (math.isfinite(self.radius) and self.radius > 0):
            raise ValueError(f"radius must be a positive real, got {self.radius!r}")
        if not (0.0 <= self.delta <= 1.0):
            raise ValueError(f"delta must lie in [0, 1], got {self.delta!r}")
        if not (isinstance(self.beacon_bits, int) and self.beacon_bits >= 1):
            raise ValueError(f"beacon_bits must be a positive integer, got {self.beacon_bits!r}")

    @property
    def is_loose_regime(self) -> bool:
        """High-mobility regime where the bound is known to be loose."""
        return self.sigma2 * self.arrival_tau.mean() > 2.0 * self.radius


@dataclass(frozen=True)
class BeaconReport:
    rate: float  # beacons per forwarded message (mutual-information bits)
    overhead_bits_per_second: float
    l_star: float
    entropy_term: float
    ternary_term: float
    loose: bool
    equation_tag: str
    rate_unit: str = "beacons/msg"


def _erf_pair(l: float, r: float, v: float) -> float:
    """Half-sum of the two erf terms for relative displacement variance v."""
    sd = math.sqrt(2.0 * v)
    return 0.5 * (erf((r - l) / sd) + erf((r + l) / sd))


def p_neighbor_1d(req: BeaconBoundRequest, l: float) -> float:
    """P[neighbor at the next forwarding epoch | initial offset l], 1-D.

    Valid for any offset: |l| <= r is the retention branch, |l| >= r the
    acquisition branch; both are the same erf mixture.
    """
    s, r = req.sigma2, req.radius
    kind = req.arrival_tau.kind
    if kind is ArrivalKind.DETERMINISTIC:
        return _erf_pair(l, r, 2.0 * s * req.arrival_tau.param)
    if kind is ArrivalKind.UNIFORM and abs(l) <= r:
        # the closed form only covers the retention branch |l| <= r
        return _p_uniform_closed_form(abs(l), r, s, req.arrival_tau.param)
    return p_neighbor_1d_quadrature(req, l)


def p_neighbor_1d_quadrature(req: BeaconBoundRequest, l: float) -> float:
    """Direct mixture-integral evaluation (reference path for the closed forms)."""
    s, r = req.sigma2, req.radius
    return req.arrival_tau.integrate_against(
        lambda t: _erf_pair(l, r, 2.0 * s * t), points=[0.0]
    )


def _p_uniform_closed_form(l: float, r: float, s: float, T: float) -> float:
    q = 4.0 * s * T
    a, b = r - l, r + l
    ea, eb = erf(a / math.sqrt(q)), erf(b / math.sqrt(q))
    value = (
        a * a / q * ea
        + b * b / q * eb
        + a / math.sqrt(math.pi * q) * math.exp(-a * a / q)
        + b / math.sqrt(math.pi * q) * math.exp(-b * b / q)
        + 0.5 * (ea + eb)
        - (r * r + l * l) / (2.0 * s * T)
    )
    return float(value)


def _unit_step(x: float) -> float:
    return 1.0 if x >= 0.0 else 0.0


def _unit_step_strict(x: float) -> float:
    return 1.0 if x > 0.0 else 0.0


def deterministic_entropy_cases(req: BeaconBoundRequest) -> float:
    """H(p(l*)) for deterministic forwarding arrivals via explicit case logic."""
    s, r, T = req.sigma2, req.radius, req.arrival_tau.param
    p_r = 0.5 * erf(r / math.sqrt(s * T))
    p_0 = erf(r / math.sqrt(4.0 * s * T))
    if p_r >= 0.5:
        return binary_entropy(p_r)
    if p_0 <= 0.5:
        return binary_entropy(p_0)
    return 1.0


def deterministic_entropy_unit_step(req: BeaconBoundRequest) -> float:
    """H(p(l*)) via the unit-step compact form (the middle step argument is
    0.5 - p(0), which the case analysis requires)."""
    s, r, T = req.sigma2, req.radius, req.arrival_tau.param
    p_r = 0.5 * erf(r / math.sqrt(s * T))
    p_0 = erf(r / math.sqrt(4.0 * s * T))
    return (
        binary_entropy(p_r) * _unit_step(p_r - 0.5)
        + binary_entropy(p_0) * _unit_step(0.5 - p_0)
        # strict steps keep the interior term from double counting when
        # p(r) or p(0) sits exactly on 0.5
        + 1.0 * _unit_step_strict(0.5 - p_r) * _unit_step_strict(p_0 - 0.5)
    )


def p_neighbor_2d(req: BeaconBoundRequest, l: float) -> float:
    """2-D retention probability via nested quadrature.

    Per-coordinate relative variance is sigma2 (each node contributes
    sigma2/2 per coordinate). The inner integral is taken in the scaled
    variable z = (x - l) / sqrt(sigma2 * t) so it stays well-conditioned as
    t -> 0.
    """
    if l < 0:
        raise ValueError("2-D offset is a radial scalar; l must be >= 0")
    s, r = req.sigma2, req.radius

    def inner(t: float) -> float:
        if t <= 0.0:
            return 1.0 if l < r else (0.5 if l == r else 0.0)
        sd = math.sqrt(s * t)
        zlo = max((-r - l) / sd, -_Z_WINDOW)
        zhi = min((r - l) / sd, _Z_WINDOW)
        if zlo >= zhi:
            return 0.0

        def integrand(z: float) -> float:
            x = l + sd * z
            rad2 = max(r * r - x * x, 0.0)
            return (
                math.exp(-z * z / 2.0) / math.sqrt(2.0 * math.pi)
                * erf(math.sqrt(rad2) / math.sqrt(2.0 * s * t))
            )

        return quad_checked(integrand, zlo, zhi, epsabs=1e-11, limit=300)

    return req.arrival_tau.integrate_against(inner, points=[0.0])


def _p_of_l(req: BeaconBoundRequest):
    if Dimension(req.dimension) is Dimension.ONE_D:
        return lambda l: p_neighbor_1d(req, l)
    return lambda l: p_neighbor_2d(req, l)


def find_lstar(req: BeaconBoundRequest) -> tuple[float, float]:
    """Worst-case initial offset and the entropy of the neighbor indicator.

    p(l) decreases strictly on [0, r]; the interior case pins p(l*) = 0.5
    so the entropy there is exactly 1 bit.
    """
    p = _p_of_l(req)
    r = req.radius
    p_r = p(r)
    if p_r >= 0.5:
        return r, binary_entropy(p_r)
    p_0 = p(0.0)
    if p_0 <= 0.5:
        return 0.0, binary_entropy(p_0)
    root = bisect(lambda l: p(l) - 0.5, 0.0, r, xtol=_LSTAR_REL_TOL * r)
    return float(root), 1.0


def neighbor_indicator_entropy_at(req: BeaconBoundRequest, l: float) -> float:
    """H(p(l)); exposed for the dominated non-neighbor branch check."""
    return binary_entropy(_p_of_l(req)(l))


_TAG_1D = {
    ArrivalKind.DETERMINISTIC: "Eq95",
    ArrivalKind.UNIFORM: "Eq102",
    ArrivalKind.EXPONENTIAL: "Eq106",
}


def beacon_report(req: BeaconBoundRequest) -> BeaconReport:
    l_star, h = find_lstar(req)
    tern = ternary_entropy(req.delta)
    rate = clamp_nonneg(h - tern)
    overhead = req.beacon_bits / req.arrival_tau.mean() * rate
    tag = (
        _TAG_1D[req.arrival_tau.kind]
        if Dimension(req.dimension) is Dimension.ONE_D
        else "Eq110"
    )
    return BeaconReport(
        rate=rate,
        overhead_bits_per_second=overhead,
        l_star=l_star,
        entropy_term=h,
        ternary_term=tern,
        loose=req.is_loose_regime,
        equation_tag=tag,
    )


def beacon_rate(req: BeaconBoundRequest) -> float:
    """Beacons per forwarded message."""
    return beacon_report(req).rate


def beacon_overhead(req: BeaconBoundRequest) -> float:
    """Bits per second: (B / E[tau]) times the beacon rate."""
    return beacon_report(req).overhead_bits_per_second
