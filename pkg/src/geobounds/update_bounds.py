"""Lower bounds on the location-update rate and overhead.

The per-packet bound is the displacement entropy at the next packet epoch
minus the rate-distortion threshold implied by the squared-error fidelity
epsilon2, clamped at zero. The two-dimensional bound splits the fidelity
budget evenly across coordinates, each coordinate carrying half the motion
variance; the relaxed variant waits k* packet epochs until the accumulated
displacement entropy exceeds the threshold, which makes the bound strictly
positive.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import IntEnum
from typing import Optional

from .arrivals import ArrivalKind, ArrivalProcess
from .displacement import DisplacementDensity
from .entropy import clamp_nonneg

_TWO_PI_E = 2.0 * math.pi * math.e

K_STAR_SEARCH_CAP = 10**6


class KStarSearchError(RuntimeError):
    """k* exceeded the search cap (should not happen for valid inputs)."""


class Dimension(IntEnum):
    ONE_D = 1
    TWO_D = 2


@dataclass(frozen=True)
class LocationBoundRequest:
    dimension: Dimension
    sigma2: float
    arrival: ArrivalProcess
    epsilon2: float
    relaxed: bool = False

    def __post_init__(self):
        object.__setattr__(self, "dimension", Dimension(self.dimension))
        for name in ("sigma2", "epsilon2"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise ValueError(f"{name} must be a positive real, got {v!r}")


@dataclass(frozen=True)
class BoundReport:
    bits_per_packet: float
    bits_per_second: float
    equation_tag: str
    entropy_term: float
    k_star: Optional[int] = None

    def __post_init__(self):
        assert self.bits_per_packet >= 0.0 and self.bits_per_second >= 0.0


@dataclass(frozen=True)
class PerSessionReport:
    """Per-session variant: location-server term plus the piggyback term."""

    server_bits_per_second: float
    piggyback_bits_per_second: float
    bits_per_second: float
    equation_tag: str


def _coordinate_entropy(sigma2_coord, arrival, k=1) -> float:
    return DisplacementDensity(sigma2_coord, arrival, k).differential_entropy()


def _threshold(dimension: Dimension, epsilon2: float) -> float:
    if dimension is Dimension.ONE_D:
        return 0.5 * math.log2(_TWO_PI_E * epsilon2)
    return math.log2(math.pi * math.e * epsilon2)


_TAG_1D = {
    ArrivalKind.DETERMINISTIC: "Eq30",
    ArrivalKind.UNIFORM: "Eq34",
    ArrivalKind.EXPONENTIAL: "Eq37",
}
_TAG_2D = {
    ArrivalKind.DETERMINISTIC: "Eq49",
    ArrivalKind.UNIFORM: "Eq52",
    ArrivalKind.EXPONENTIAL: "Eq55",
}


def update_bound_1d(req: LocationBoundRequest) -> BoundReport:
    if Dimension(req.dimension) is not Dimension.ONE_D:
        raise ValueError("update_bound_1d requires a one-dimensional request")
    kind = req.arrival.kind
    if kind is ArrivalKind.DETERMINISTIC:
        T = req.arrival.param
        h = 0.5 * math.log2(_TWO_PI_E * req.sigma2 * T)
        rate = clamp_nonneg(0.5 * math.log2(req.sigma2 * T / req.epsilon2))
    else:
        h = _coordinate_entropy(req.sigma2, req.arrival)
        rate = clamp_nonneg(h - _threshold(Dimension.ONE_D, req.epsilon2))
    return BoundReport(rate, rate / req.arrival.mean(), _TAG_1D[kind], h)


def update_bound_2d(req: LocationBoundRequest) -> BoundReport:
    if Dimension(req.dimension) is not Dimension.TWO_D:
        raise ValueError("update_bound_2d requires a two-dimensional request")
    kind = req.arrival.kind
    if kind is ArrivalKind.DETERMINISTIC:
        T = req.arrival.param
        h_coord = 0.5 * math.log2(math.pi * math.e * req.sigma2 * T)
        rate = clamp_nonneg(math.log2(req.sigma2 * T / req.epsilon2))
    else:
        h_coord = _coordinate_entropy(req.sigma2 / 2.0, req.arrival)
        rate = clamp_nonneg(2.0 * h_coord - _threshold(Dimension.TWO_D, req.epsilon2))
    return BoundReport(rate, rate / req.arrival.mean(), _TAG_2D[kind], h_coord)


def update_bound(req: LocationBoundRequest) -> BoundReport:
    if req.relaxed:
        return relaxed_update_bound(req)
    if Dimension(req.dimension) is Dimension.ONE_D:
        return update_bound_1d(req)
    return update_bound_2d(req)


def _entropy_excess(req: LocationBoundRequest, k: int) -> tuple[float, float]:
    """(entropy term, entropy term - threshold) after k packet epochs."""
    thr = _threshold(req.dimension, req.epsilon2)
    if Dimension(req.dimension) is Dimension.ONE_D:
        if req.arrival.kind is ArrivalKind.DETERMINISTIC:
            h = 0.5 * math.log2(_TWO_PI_E * req.sigma2 * k * req.arrival.param)
        else:
            h = _coordinate_entropy(req.sigma2, req.arrival, k)
        return h, h - thr
    if req.arrival.kind is ArrivalKind.DETERMINISTIC:
        h = 2.0 * 0.5 * math.log2(math.pi * math.e * req.sigma2 * k * req.arrival.param)
    else:
        h = 2.0 * _coordinate_entropy(req.sigma2 / 2.0, req.arrival, k)
    return h, h - thr


def k_star(req: LocationBoundRequest) -> int:
    """Smallest k whose accumulated displacement entropy beats the threshold."""
    s, eps2 = req.sigma2, req.epsilon2
    if req.arrival.kind is ArrivalKind.DETERMINISTIC:
        # entropy condition reduces to sigma2 * k * T > epsilon2 (strictly)
        return int(math.floor(eps2 / (s * req.arrival.param))) + 1
    # the Gaussian max-entropy bound makes smaller k hopeless
    k = max(1, math.ceil(eps2 / (s * req.arrival.mean())))
    while k <= K_STAR_SEARCH_CAP:
        if _entropy_excess(req, k)[1] > 0.0:
            return k
        k += 1
    raise KStarSearchError(f"k* search exceeded {K_STAR_SEARCH_CAP}")


def relaxed_update_bound(req: LocationBoundRequest) -> BoundReport:
    ks = k_star(req)
    if ks == 1:
        base = update_bound_1d(req) if Dimension(req.dimension) is Dimension.ONE_D else update_bound_2d(req)
        return BoundReport(
            base.bits_per_packet, base.bits_per_second, base.equation_tag,
            base.entropy_term, k_star=1,
        )
    h, excess = _entropy_excess(req, ks)
    rate = excess / ks
    # rate is strictly positive by the definition of k*; no clamp needed.
    tag = "Eq120" if Dimension(req.dimension) is Dimension.ONE_D else "Eq123"
    return BoundReport(rate, rate / req.arrival.mean(), tag, h, k_star=ks)


def per_session_bound(
    sigma2: float,
    session_arrivals: ArrivalProcess,
    packet_arrivals: ArrivalProcess,
    epsilon2: float,
) -> PerSessionReport:
    """Overhead when the location server is queried once per session and
    locations are piggybacked on data/ACK packets within a session (1-D)."""
    if not (math.isfinite(sigma2) and sigma2 > 0 and math.isfinite(epsilon2) and epsilon2 > 0):
        raise ValueError("sigma2 and epsilon2 must be positive reals")
    thr = _threshold(Dimension.ONE_D, epsilon2)

    def _per_packet(arrival):
        if arrival.kind is ArrivalKind.DETERMINISTIC:
            return clamp_nonneg(0.5 * math.log2(sigma2 * arrival.param / epsilon2))
        return clamp_nonneg(_coordinate_entropy(sigma2, arrival) - thr)

    server = _per_packet(session_arrivals) / session_arrivals.mean()
    piggyback = 2.0 * _per_packet(packet_arrivals) / packet_arrivals.mean()
    return PerSessionReport(server, piggyback, server + piggyback, "Eq129")
