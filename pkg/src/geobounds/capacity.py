"""Transport-capacity budget: raw Protocol-Model capacity, the bit-meter
overhead of location updates and beacons, the residual capacity, and the
critical network size beyond which overhead consumes everything.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence, Union

from .update_bounds import PerSessionReport

RAW_CAPACITY_COEFF = math.sqrt(8.0) / math.pi


class ServiceKind(str, Enum):
    SINGLE_SERVER = "single_server"
    MULTI_SERVER = "multi_server"
    XYLS = "xyls"
    HIERARCHICAL = "hierarchical"


@dataclass(frozen=True)
class NetworkConfig:
    n: float
    area: float
    bandwidth: float
    delta_guard: float
    eta: float
    radius: float
    beacon_bits: float

    def __post_init__(self):
        for name in ("n", "area", "bandwidth", "delta_guard", "eta", "radius", "beacon_bits"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise ValueError(f"{name} must be a positive real, got {v!r}")
        if self.n < 1:
            raise ValueError(f"n must be at least 1, got {self.n!r}")


@dataclass(frozen=True)
class LocationServiceDescriptor:
    kind: ServiceKind
    etas: tuple
    epsilons2: Optional[tuple] = None

    def __post_init__(self):
        object.__setattr__(self, "kind", ServiceKind(self.kind))
        object.__setattr__(self, "etas", tuple(float(e) for e in self.etas))
        if not self.etas or any(e <= 0 for e in self.etas):
            raise ValueError("etas must be a non-empty list of positive distances")
        if self.kind is ServiceKind.XYLS and len(self.etas) != 1:
            raise ValueError("XYLS has a single effective update distance sqrt(A)")
        if self.kind is ServiceKind.HIERARCHICAL:
            eps = self.epsilons2
            if not eps or len(eps) != len(self.etas):
                raise ValueError("hierarchical service needs one epsilon2 per level")
            object.__setattr__(self, "epsilons2", tuple(float(e) for e in eps))

    @classmethod
    def single(cls, eta: float) -> "LocationServiceDescriptor":
        return cls(ServiceKind.SINGLE_SERVER, (eta,))

    @classmethod
    def xyls(cls, area: float) -> "LocationServiceDescriptor":
        return cls(ServiceKind.XYLS, (math.sqrt(area),))


@dataclass(frozen=True)
class CapacityReport:
    raw_capacity: float  # bit-meters/s
    overhead: float  # bit-meters/s
    residual: float  # bit-meters/s, clamped at zero
    deficit_fraction: float
    n_star: float
    saturated: bool


def raw_transport_capacity(cfg: NetworkConfig) -> float:
    """(sqrt(8)/pi) * (1/guard) * W * sqrt(n*A), in bit-meters/second."""
    return (
        RAW_CAPACITY_COEFF / cfg.delta_guard * cfg.bandwidth
        * math.sqrt(cfg.n * cfg.area)
    )


def _update_bit_meters(
    cfg: NetworkConfig,
    update_overhead: Union[float, Sequence[float]],
    svc: Optional[LocationServiceDescriptor],
) -> float:
    """Per-node eta-weighted update term in bit-meters/second."""
    if svc is None:
        svc = LocationServiceDescriptor.single(cfg.eta)
    if svc.kind is ServiceKind.HIERARCHICAL:
        # one overhead value per hierarchy level, weighted by its distance
        overheads = tuple(float(u) for u in update_overhead)
        if len(overheads) != len(svc.etas):
            raise ValueError("hierarchical service needs one overhead value per level")
        return sum(e * u for e, u in zip(svc.etas, overheads))
    u = float(update_overhead)
    if svc.kind is ServiceKind.MULTI_SERVER:
        return sum(svc.etas) * u
    # single server and XYLS: one effective distance
    return svc.etas[0] * u


def _per_node_denominator(cfg, update_overhead, beacon_overhead, svc) -> float:
    if beacon_overhead < 0:
        raise ValueError("beacon overhead must be nonnegative")
    term = _update_bit_meters(cfg, update_overhead, svc)
    if term < 0:
        raise ValueError("update overhead must be nonnegative")
    return term + cfg.radius * beacon_overhead


def residual_capacity(
    cfg: NetworkConfig,
    update_overhead: Union[float, Sequence[float]],
    beacon_overhead: float,
    svc: Optional[LocationServiceDescriptor] = None,
) -> CapacityReport:
    raw = raw_transport_capacity(cfg)
    per_node = _per_node_denominator(cfg, update_overhead, beacon_overhead, svc)
    overhead = cfg.n * per_node
    residual = raw - overhead
    saturated = residual < 0.0
    deficit = min(overhead / raw, 1.0)
    return CapacityReport(
        raw_capacity=raw,
        overhead=overhead,
        residual=max(residual, 0.0),
        deficit_fraction=deficit,
        n_star=critical_n(cfg, update_overhead, beacon_overhead, svc),
        saturated=saturated,
    )


def critical_n(
    cfg: NetworkConfig,
    update_overhead: Union[float, Sequence[float]],
    beacon_overhead: float,
    svc: Optional[LocationServiceDescriptor] = None,
) -> float:
    """Node count above which overhead exceeds the raw capacity.

    Returns math.inf when the overheads are zero (no critical size).
    """
    per_node = _per_node_denominator(cfg, update_overhead, beacon_overhead, svc)
    if per_node == 0.0:
        return math.inf
    numer = RAW_CAPACITY_COEFF / cfg.delta_guard * cfg.bandwidth * math.sqrt(cfg.area)
    return (numer / per_node) ** 2


def per_session_deficit(
    cfg: NetworkConfig,
    report: PerSessionReport,
    eta_prime: float,
    beacon_overhead: float,
) -> float:
    """Total bit-meter/s deficit for per-session location discovery.

    eta_prime is the average distance traveled by a piggybacked location
    bit; it is not pinned down by the bound derivation and must be supplied
    explicitly by the caller.
    """
    if not (math.isfinite(eta_prime) and eta_prime > 0):
        raise ValueError(f"eta_prime must be a positive real, got {eta_prime!r}")
    return cfg.n * (
        cfg.eta * report.server_bits_per_second
        + eta_prime * report.piggyback_bits_per_second
        + cfg.radius * beacon_overhead
    )
