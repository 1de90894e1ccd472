"""HTTP surface over the bound computations, for long-running or
multi-client deployments. Run with:

    uvicorn geobounds.service:app
"""

from __future__ import annotations

import math
from typing import List, Literal, Optional, Union

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field

from ._quadrature import QuadratureError
from .arrivals import ArrivalProcess
from .beacon import BeaconBoundRequest, beacon_report
from .capacity import (
    LocationServiceDescriptor,
    NetworkConfig,
    ServiceKind,
    residual_capacity,
)
from .update_bounds import Dimension, LocationBoundRequest, update_bound

app = FastAPI(title="geobounds", version="0.1.0")


class ArrivalSpec(BaseModel):
    kind: Literal["deterministic", "uniform", "exponential"]
    param: float = Field(gt=0)

    def to_process(self) -> ArrivalProcess:
        return ArrivalProcess.from_dict(self.model_dump())


class UpdateBoundIn(BaseModel):
    dimension: Literal[1, 2] = 1
    sigma2: float = Field(gt=0)
    arrival: ArrivalSpec
    epsilon2: float = Field(gt=0)
    relaxed: bool = False


class UpdateBoundOut(BaseModel):
    bits_per_packet: float
    bits_per_second: float
    entropy_term_bits: float
    equation_tag: str
    k_star: Optional[int] = None


class BeaconBoundIn(BaseModel):
    dimension: Literal[1, 2] = 1
    sigma2: float = Field(gt=0)
    radius: float = Field(gt=0)
    arrival_tau: ArrivalSpec
    delta: float = Field(ge=0, le=1)
    beacon_bits: int = Field(ge=1)


class BeaconBoundOut(BaseModel):
    rate_beacons_per_msg: float
    overhead_bits_per_second: float
    l_star: float
    entropy_term_bits: float
    loose: bool
    equation_tag: str


class ServiceSpec(BaseModel):
    kind: Literal["single_server", "multi_server", "xyls", "hierarchical"] = "single_server"
    etas: Optional[List[float]] = None
    epsilons2: Optional[List[float]] = None


class CapacityIn(BaseModel):
    n: float = Field(ge=1)
    area: float = Field(gt=0)
    bandwidth: float = Field(gt=0)
    delta_guard: float = Field(gt=0, default=1.0)
    eta: float = Field(gt=0)
    radius: float = Field(gt=0)
    beacon_bits: int = Field(ge=1)
    update_overhead_bits_per_second: Union[float, List[float]]
    beacon_overhead_bits_per_second: float = Field(ge=0)
    service: ServiceSpec = ServiceSpec()


class CapacityOut(BaseModel):
    raw_capacity_bit_meters_per_s: float
    overhead_bit_meters_per_s: float
    residual_bit_meters_per_s: float
    deficit_fraction: float
    saturated: bool
    n_star: Optional[float]  # null when unbounded


def _wrap(fn):
    try:
        return fn()
    except (ValueError, QuadratureError) as exc:
        raise HTTPException(status_code=422, detail=str(exc))


@app.get("/healthz")
def healthz():
    return {"status": "ok"}


@app.post("/update-bound", response_model=UpdateBoundOut)
def post_update_bound(body: UpdateBoundIn):
    def run():
        rep = update_bound(LocationBoundRequest(
            Dimension(body.dimension), body.sigma2,
            body.arrival.to_process(), body.epsilon2, body.relaxed,
        ))
        return UpdateBoundOut(
            bits_per_packet=rep.bits_per_packet,
            bits_per_second=rep.bits_per_second,
            entropy_term_bits=rep.entropy_term,
            equation_tag=rep.equation_tag,
            k_star=rep.k_star,
        )
    return _wrap(run)


@app.post("/beacon-bound", response_model=BeaconBoundOut)
def post_beacon_bound(body: BeaconBoundIn):
    def run():
        rep = beacon_report(BeaconBoundRequest(
            Dimension(body.dimension), body.sigma2, body.radius,
            body.arrival_tau.to_process(), body.delta, body.beacon_bits,
        ))
        return BeaconBoundOut(
            rate_beacons_per_msg=rep.rate,
            overhead_bits_per_second=rep.overhead_bits_per_second,
            l_star=rep.l_star,
            entropy_term_bits=rep.entropy_term,
            loose=rep.loose,
            equation_tag=rep.equation_tag,
        )
    return _wrap(run)


def _descriptor(body: CapacityIn) -> LocationServiceDescriptor:
    kind = ServiceKind(body.service.kind)
    if kind is ServiceKind.XYLS:
        return LocationServiceDescriptor.xyls(body.area)
    if kind is ServiceKind.SINGLE_SERVER:
        return LocationServiceDescriptor.single(body.service.etas[0] if body.service.etas else body.eta)
    return LocationServiceDescriptor(
        kind,
        tuple(body.service.etas or ()),
        tuple(body.service.epsilons2) if body.service.epsilons2 else None,
    )


@app.post("/capacity", response_model=CapacityOut)
def post_capacity(body: CapacityIn):
    def run():
        cfg = NetworkConfig(
            n=body.n, area=body.area, bandwidth=body.bandwidth,
            delta_guard=body.delta_guard, eta=body.eta, radius=body.radius,
            beacon_bits=body.beacon_bits,
        )
        rep = residual_capacity(
            cfg, body.update_overhead_bits_per_second,
            body.beacon_overhead_bits_per_second, _descriptor(body),
        )
        return CapacityOut(
            raw_capacity_bit_meters_per_s=rep.raw_capacity,
            overhead_bit_meters_per_s=rep.overhead,
            residual_bit_meters_per_s=rep.residual,
            deficit_fraction=rep.deficit_fraction,
            saturated=rep.saturated,
            n_star=None if math.isinf(rep.n_star) else rep.n_star,
        )
    return _wrap(run)
