"""Monte Carlo oracles for every numerically computed quantity.

Each estimator owns a private substream derived from the master seed and a
task counter (default_rng seeded with [master_seed, counter]), so a run is
reproducible regardless of execution order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .arrivals import ArrivalProcess
from .beacon import BeaconBoundRequest, p_neighbor_1d, p_neighbor_2d
from .displacement import DisplacementDensity, sample_displacement
from .update_bounds import Dimension

DEFAULT_MASTER_SEED = 20260823
ACCEPTANCE_MIN_SAMPLES = 10**4


@dataclass(frozen=True)
class McConfig:
    samples: int = 10**6
    master_seed: int = DEFAULT_MASTER_SEED
    bins: int = 50

    def __post_init__(self):
        if not (isinstance(self.samples, int) and self.samples >= 1):
            raise ValueError(f"samples must be a positive integer, got {self.samples!r}")
        if not (isinstance(self.bins, int) and self.bins >= 10):
            raise ValueError(f"bins must be an integer >= 10, got {self.bins!r}")


class Estimate(NamedTuple):
    value: float
    stderr: float


def substream(master_seed: int, counter: int) -> np.random.Generator:
    """Independent, reproducible stream number `counter` under a master seed."""
    return np.random.default_rng([master_seed, counter])


def estimate_p_l(
    req: BeaconBoundRequest, l: float, mc: McConfig, counter: int = 0
) -> Estimate:
    """Empirical neighbor-retention probability at initial offset l."""
    rng = substream(mc.master_seed, counter)
    n = mc.samples
    taus = req.arrival_tau.sample(rng, n)
    if Dimension(req.dimension) is Dimension.ONE_D:
        # relative motion carries twice the per-node variance
        x = l + rng.normal(0.0, np.sqrt(2.0 * req.sigma2 * taus))
        hits = np.abs(x) <= req.radius
    else:
        sd = np.sqrt(req.sigma2 * taus)
        x = l + rng.normal(0.0, sd)
        y = rng.normal(0.0, sd)
        hits = x * x + y * y <= req.radius**2
    p = float(np.mean(hits))
    return Estimate(p, math.sqrt(p * (1.0 - p) / n))


def estimate_entropy(d: DisplacementDensity, mc: McConfig, counter: int = 0) -> Estimate:
    """Resubstitution entropy estimate -mean(log2 f(x_i)), in bits."""
    rng = substream(mc.master_seed, counter)
    xs = sample_displacement(d.sigma2, d.arrival, d.k, rng, size=mc.samples)
    logs = -np.log2(d.eval_many(xs))
    return Estimate(float(np.mean(logs)), float(np.std(logs) / math.sqrt(mc.samples)))


def estimate_variance(
    sigma2: float, arrival: ArrivalProcess, k: int, mc: McConfig, counter: int = 0
) -> Estimate:
    rng = substream(mc.master_seed, counter)
    xs = sample_displacement(sigma2, arrival, k, rng, size=mc.samples)
    var = float(np.var(xs))
    m4 = float(np.mean((xs - xs.mean()) ** 4))
    stderr = math.sqrt(max(m4 - var * var, 0.0) / mc.samples)
    return Estimate(var, stderr)


@dataclass(frozen=True)
class OracleCheck:
    name: str
    analytic: float
    estimate: float
    stderr: float
    sigma_distance: float
    passed: bool


def _check(name, analytic, est: Estimate, n_sigmas=3.0) -> OracleCheck:
    dist = abs(est.value - analytic) / est.stderr if est.stderr > 0 else (
        0.0 if est.value == analytic else math.inf
    )
    return OracleCheck(name, analytic, est.value, est.stderr, dist, dist <= n_sigmas)


# the standard validation grid; one line per quadrature quantity
_P_L_GRID = [
    # (dim, sigma2, radius, arrival_spec, l)
    (1, 1.0, 2.0, "deterministic:1", 0.0),
    (1, 1.0, 2.0, "deterministic:1", 2.0),
    (1, 1.0, 2.0, "uniform:2", 1.0),
    (1, 0.5, 1.5, "uniform:1", 1.2),
    (1, 2.0, 2.0, "exponential:1", 0.5),
    (1, 1.0, 1.0, "exponential:2", 1.5),
    (2, 1.0, 2.0, "deterministic:1", 0.0),
    (2, 2.0, 2.0, "deterministic:1", 1.0),
    (2, 1.0, 2.0, "uniform:2", 1.0),
    (2, 1.0, 2.0, "exponential:1", 1.5),
]

_DENSITY_GRID = [
    # (sigma2, arrival_spec, k)
    (1.0, "deterministic:1", 1),
    (4.0, "deterministic:1", 1),
    (1.0, "uniform:1", 1),
    (2.0, "uniform:2", 1),
    (2.0, "exponential:1", 1),
    (1.0, "exponential:2", 1),
]


def run_validation_grid(mc: McConfig) -> list[OracleCheck]:
    """Compare every quadrature-backed quantity against its MC oracle."""
    if mc.samples < ACCEPTANCE_MIN_SAMPLES:
        raise ValueError(
            f"validation grid needs at least {ACCEPTANCE_MIN_SAMPLES} samples"
        )
    checks: list[OracleCheck] = []
    counter = 0
    for dim, s, r, spec, l in _P_L_GRID:
        req = BeaconBoundRequest(
            dimension=Dimension(dim), sigma2=s, radius=r,
            arrival_tau=ArrivalProcess.parse(spec), delta=0.1, beacon_bits=64,
        )
        analytic = p_neighbor_1d(req, l) if dim == 1 else p_neighbor_2d(req, l)
        est = estimate_p_l(req, l, mc, counter)
        checks.append(_check(f"p_l[{dim}d,{spec},s2={s},r={r},l={l}]", analytic, est))
        counter += 1
    for s, spec, k in _DENSITY_GRID:
        arrival = ArrivalProcess.parse(spec)
        d = DisplacementDensity(s, arrival, k)
        est = estimate_entropy(d, mc, counter)
        checks.append(_check(f"entropy[{spec},s2={s},k={k}]", d.differential_entropy(), est))
        counter += 1
    for s, spec, k in _DENSITY_GRID:
        arrival = ArrivalProcess.parse(spec)
        est = estimate_variance(s, arrival, k, mc, counter)
        analytic = s * k * arrival.mean()
        checks.append(_check(f"variance[{spec},s2={s},k={k}]", analytic, est))
        counter += 1
    return checks
