"""Command-line surface: single bounds, capacity scenarios, figure-grade
parameter sweeps emitting CSV, and the Monte Carlo validation suite.

Exit codes: 0 success, 1 computation failure, 2 usage error.
"""

from __future__ import annotations

import json
import math
import sys

import click

from ._quadrature import QuadratureError
from .arrivals import ArrivalProcess
from .beacon import BeaconBoundRequest, beacon_report
from .capacity import (
    LocationServiceDescriptor,
    NetworkConfig,
    ServiceKind,
    critical_n,
    residual_capacity,
)
from .montecarlo import DEFAULT_MASTER_SEED, McConfig, run_validation_grid
from .update_bounds import Dimension, LocationBoundRequest, update_bound

SEED_ENVVAR = "GEOBOUNDS_SEED"


def _fmt(x: float) -> str:
    return format(x, ".9g")


def _parse_arrival(_ctx, _param, value):
    if value is None:
        return None
    try:
        return ArrivalProcess.parse(value)
    except ValueError as exc:
        raise click.BadParameter(str(exc))


def _parse_grid(_ctx, _param, value):
    try:
        grid = [float(v) for v in value.split(",") if v.strip()]
    except ValueError:
        raise click.BadParameter(f"cannot parse grid {value!r}")
    if not grid or any(g <= 0 for g in grid):
        raise click.BadParameter("grid must be a non-empty list of positive reals")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise click.BadParameter("grid must be strictly increasing")
    return grid


@click.group()
def cli():
    """Rate-distortion lower bounds on geographic-routing overhead."""


@cli.command("update-bound")
@click.option("--dim", type=click.Choice(["1", "2"]), default="1", show_default=True)
@click.option("--sigma2", type=float, required=True, help="Brownian variance rate (m^2/s).")
@click.option("--arrival", callback=_parse_arrival, required=True,
              help="Inter-arrival law, kind:param (e.g. exponential:0.5).")
@click.option("--eps2", type=float, required=True, help="Location fidelity epsilon^2 (m^2).")
@click.option("--relaxed", is_flag=True, help="Use the k*-relaxed bound.")
def cmd_update_bound(dim, sigma2, arrival, eps2, relaxed):
    """Lower bound on the location-update rate and overhead."""
    try:
        req = LocationBoundRequest(Dimension(int(dim)), sigma2, arrival, eps2, relaxed)
        rep = update_bound(req)
    except (ValueError, QuadratureError) as exc:
        raise click.ClickException(str(exc))
    click.echo(f"bits_per_packet = {_fmt(rep.bits_per_packet)}")
    click.echo(f"bits_per_second = {_fmt(rep.bits_per_second)}")
    click.echo(f"entropy_term_bits = {_fmt(rep.entropy_term)}")
    click.echo(f"equation_tag = {rep.equation_tag}")
    if rep.k_star is not None:
        click.echo(f"k_star = {rep.k_star}")


@cli.command("beacon-bound")
@click.option("--dim", type=click.Choice(["1", "2"]), default="1", show_default=True)
@click.option("--sigma2", type=float, required=True)
@click.option("--r", "radius", type=float, required=True, help="Communication radius (m).")
@click.option("--arrival", callback=_parse_arrival, required=True,
              help="Forwarded-packet inter-arrival law, kind:param.")
@click.option("--delta", type=float, required=True, help="Neighbor inconsistency budget.")
@click.option("--B", "beacon_bits", type=int, required=True, help="Beacon size (bits).")
def cmd_beacon_bound(dim, sigma2, radius, arrival, delta, beacon_bits):
    """Lower bound on the beacon rate and overhead."""
    try:
        req = BeaconBoundRequest(Dimension(int(dim)), sigma2, radius, arrival,
                                 delta, beacon_bits)
        rep = beacon_report(req)
    except (ValueError, QuadratureError) as exc:
        raise click.ClickException(str(exc))
    if rep.loose:
        click.echo("warning: high-mobility regime (sigma2*E[tau] > 2r); "
                   "bound may be loose", err=True)
    click.echo(f"rate_beacons_per_msg = {_fmt(rep.rate)}")
    click.echo(f"overhead_bits_per_second = {_fmt(rep.overhead_bits_per_second)}")
    click.echo(f"l_star = {_fmt(rep.l_star)}")
    click.echo(f"entropy_term_bits = {_fmt(rep.entropy_term)}")
    click.echo(f"equation_tag = {rep.equation_tag}")


def _load_scenario(config, overrides):
    params = {}
    if config is not None:
        with open(config) as fh:
            params.update(json.load(fh))
    params.update({k: v for k, v in overrides.items() if v is not None})
    return params


def _scenario_reports(params):
    """Compute (NetworkConfig, service, U bits/s, beacon bits/s) for a scenario."""
    dim = Dimension(int(params.get("dim", 2)))
    arrival = params["arrival"]
    if isinstance(arrival, str):
        arrival = ArrivalProcess.parse(arrival)
    elif isinstance(arrival, dict):
        arrival = ArrivalProcess.from_dict(arrival)
    arrival_tau = params.get("arrival_tau", arrival)
    if isinstance(arrival_tau, str):
        arrival_tau = ArrivalProcess.parse(arrival_tau)
    elif isinstance(arrival_tau, dict):
        arrival_tau = ArrivalProcess.from_dict(arrival_tau)
    cfg = NetworkConfig(
        n=float(params["n"]), area=float(params["area"]),
        bandwidth=float(params["bandwidth"]),
        delta_guard=float(params.get("delta_guard", 1.0)),
        eta=float(params["eta"]), radius=float(params["radius"]),
        beacon_bits=float(params["beacon_bits"]),
    )
    svc_kind = ServiceKind(params.get("service", "single_server"))
    if svc_kind is ServiceKind.XYLS:
        svc = LocationServiceDescriptor.xyls(cfg.area)
    elif svc_kind is ServiceKind.SINGLE_SERVER:
        svc = LocationServiceDescriptor.single(cfg.eta)
    else:
        svc = LocationServiceDescriptor(
            svc_kind,
            tuple(params["etas"]),
            tuple(params["epsilons2"]) if "epsilons2" in params else None,
        )
    sigma2 = float(params["sigma2"])
    relaxed = bool(params.get("relaxed", False))
    if svc.kind is ServiceKind.HIERARCHICAL:
        u = [
            update_bound(LocationBoundRequest(dim, sigma2, arrival, e2, relaxed)).bits_per_second
            for e2 in svc.epsilons2
        ]
    else:
        u = update_bound(
            LocationBoundRequest(dim, sigma2, arrival, float(params["eps2"]), relaxed)
        ).bits_per_second
    b = beacon_report(BeaconBoundRequest(
        dim, sigma2, cfg.radius, arrival_tau,
        float(params["delta"]), int(params["beacon_bits"]),
    )).overhead_bits_per_second
    return cfg, svc, u, b


_SCENARIO_OVERRIDES = [
    ("--n", "n", float), ("--eta", "eta", float), ("--eps2", "eps2", float),
    ("--sigma2", "sigma2", float), ("--delta", "delta", float),
    ("--arrival", "arrival", str),
]


def _scenario_options(f):
    for flag, name, typ in reversed(_SCENARIO_OVERRIDES):
        f = click.option(flag, name, type=typ, default=None)(f)
    return click.option("--config", type=click.Path(exists=True), default=None,
                        help="JSON scenario file; flags override file values.")(f)


@cli.command("capacity")
@_scenario_options
def cmd_capacity(config, **overrides):
    """Residual transport capacity for a network scenario."""
    try:
        params = _load_scenario(config, overrides)
        cfg, svc, u, b = _scenario_reports(params)
        rep = residual_capacity(cfg, u, b, svc)
    except (KeyError, ValueError, QuadratureError) as exc:
        raise click.ClickException(f"scenario error: {exc}")
    click.echo(f"raw_capacity_bit_meters_per_s = {_fmt(rep.raw_capacity)}")
    click.echo(f"overhead_bit_meters_per_s = {_fmt(rep.overhead)}")
    click.echo(f"residual_bit_meters_per_s = {_fmt(rep.residual)}")
    click.echo(f"deficit_fraction = {_fmt(rep.deficit_fraction)}")
    click.echo(f"saturated = {str(rep.saturated).lower()}")
    click.echo(f"n_star = {_fmt(rep.n_star)}")
    click.echo(f"n_star_floor = {math.floor(rep.n_star) if math.isfinite(rep.n_star) else 'unbounded'}")


@cli.command("critical-n")
@_scenario_options
def cmd_critical_n(config, **overrides):
    """Critical node count n* for a network scenario."""
    try:
        params = _load_scenario(config, overrides)
        cfg, svc, u, b = _scenario_reports(params)
        n_star = critical_n(cfg, u, b, svc)
    except (KeyError, ValueError, QuadratureError) as exc:
        raise click.ClickException(f"scenario error: {exc}")
    if math.isinf(n_star):
        click.echo("n_star = unbounded")
    else:
        click.echo(f"n_star = {_fmt(n_star)}")
        click.echo(f"n_star_floor = {math.floor(n_star)}")


_AXES = ["sigma2", "mean-interarrival", "node-count"]
_QUANTITIES = [
    "update-rate", "update-overhead", "beacon-rate", "beacon-overhead",
    "raw-capacity", "residual", "deficit-fraction",
]


def _sweep_point(params, quantities):
    """One grid point: [(quantity, value, tag, warning)]; failures become NaN."""
    rows = []
    for q in quantities:
        try:
            if q in ("update-rate", "update-overhead"):
                rep = update_bound(LocationBoundRequest(
                    Dimension(int(params["dim"])), params["sigma2"],
                    params["arrival"], params["eps2"], params.get("relaxed", False),
                ))
                val = rep.bits_per_packet if q == "update-rate" else rep.bits_per_second
                rows.append((q, val, rep.equation_tag, ""))
            elif q in ("beacon-rate", "beacon-overhead"):
                rep = beacon_report(BeaconBoundRequest(
                    Dimension(int(params["dim"])), params["sigma2"],
                    params["radius"], params["arrival_tau"], params["delta"],
                    int(params["beacon_bits"]),
                ))
                val = rep.rate if q == "beacon-rate" else rep.overhead_bits_per_second
                rows.append((q, val, rep.equation_tag, "loose-regime" if rep.loose else ""))
            else:
                cfg = NetworkConfig(
                    n=params["n"], area=params["area"], bandwidth=params["bandwidth"],
                    delta_guard=params["delta_guard"], eta=params["eta"],
                    radius=params["radius"], beacon_bits=params["beacon_bits"],
                )
                u = update_bound(LocationBoundRequest(
                    Dimension(int(params["dim"])), params["sigma2"],
                    params["arrival"], params["eps2"],
                )).bits_per_second
                b = beacon_report(BeaconBoundRequest(
                    Dimension(int(params["dim"])), params["sigma2"],
                    params["radius"], params["arrival_tau"], params["delta"],
                    int(params["beacon_bits"]),
                )).overhead_bits_per_second
                rep = residual_capacity(cfg, u, b)
                val = {
                    "raw-capacity": rep.raw_capacity,
                    "residual": rep.residual,
                    "deficit-fraction": rep.deficit_fraction,
                }[q]
                warn = "saturated" if (q != "raw-capacity" and rep.saturated) else ""
                rows.append((q, val, "Eq113", warn))
        except (ValueError, QuadratureError, KeyError) as exc:
            rows.append((q, math.nan, "", str(exc).replace(",", ";")))
    return rows


def _rescale_arrival(arrival: ArrivalProcess, mean: float) -> ArrivalProcess:
    kind = arrival.kind.value
    if kind == "deterministic":
        return ArrivalProcess.deterministic(mean)
    if kind == "uniform":
        return ArrivalProcess.uniform(2.0 * mean)
    return ArrivalProcess.exponential(1.0 / mean)


@cli.command("sweep")
@click.option("--axis", type=click.Choice(_AXES), required=True)
@click.option("--grid", callback=_parse_grid, required=True,
              help="Comma-separated, strictly increasing positive values.")
@click.option("--quantity", "quantities", type=click.Choice(_QUANTITIES),
              multiple=True, required=True)
@click.option("--out", type=click.Path(writable=True), required=True)
@click.option("--dim", type=click.Choice(["1", "2"]), default="1", show_default=True)
@click.option("--sigma2", type=float, default=1.0, show_default=True)
@click.option("--arrival", callback=_parse_arrival, default="deterministic:1",
              show_default=True)
@click.option("--arrival-tau", callback=_parse_arrival, default=None,
              help="Forwarded-packet law; defaults to --arrival.")
@click.option("--eps2", type=float, default=1.0, show_default=True)
@click.option("--r", "radius", type=float, default=2.0, show_default=True)
@click.option("--delta", type=float, default=0.1, show_default=True)
@click.option("--B", "beacon_bits", type=int, default=64, show_default=True)
@click.option("--n", type=float, default=100.0, show_default=True)
@click.option("--area", type=float, default=1e6, show_default=True)
@click.option("--bandwidth", type=float, default=1e6, show_default=True)
@click.option("--delta-guard", type=float, default=1.0, show_default=True)
@click.option("--eta", type=float, default=500.0, show_default=True)
def cmd_sweep(axis, grid, quantities, out, dim, sigma2, arrival, arrival_tau,
              eps2, radius, delta, beacon_bits, n, area, bandwidth, delta_guard, eta):
    """Sweep one axis and emit CSV rows for the requested quantities."""
    base = {
        "dim": dim, "sigma2": sigma2, "arrival": arrival,
        "arrival_tau": arrival_tau or arrival, "eps2": eps2, "radius": radius,
        "delta": delta, "beacon_bits": beacon_bits, "n": n, "area": area,
        "bandwidth": bandwidth, "delta_guard": delta_guard, "eta": eta,
    }
    lines = ["axis_value,quantity,value,equation_tag,warnings"]
    for value in grid:
        params = dict(base)
        if axis == "sigma2":
            params["sigma2"] = value
        elif axis == "mean-interarrival":
            params["arrival"] = _rescale_arrival(params["arrival"], value)
            params["arrival_tau"] = _rescale_arrival(params["arrival_tau"], value)
        else:
            params["n"] = value
        for q, v, tag, warn in _sweep_point(params, quantities):
            lines.append(f"{_fmt(value)},{q},{_fmt(v)},{tag},{warn}")
    try:
        with open(out, "w") as fh:
            fh.write("\n".join(lines) + "\n")
    except OSError as exc:
        raise click.ClickException(f"cannot write {out}: {exc}")
    click.echo(f"wrote {len(lines) - 1} rows to {out}")


@cli.command("validate")
@click.option("--samples", type=int, default=10**6, show_default=True)
@click.option("--seed", type=int, envvar=SEED_ENVVAR, default=DEFAULT_MASTER_SEED,
              show_default=True)
@click.option("--bins", type=int, default=50, show_default=True)
@click.option("--tolerance-sigmas", type=float, default=3.0, hidden=True)
def cmd_validate(samples, seed, bins, tolerance_sigmas):
    """Run every Monte Carlo oracle against its analytic counterpart."""
    try:
        mc = McConfig(samples=samples, master_seed=seed, bins=bins)
        checks = run_validation_grid(mc)
    except (ValueError, QuadratureError) as exc:
        raise click.ClickException(str(exc))
    width = max(len(c.name) for c in checks)
    failed = 0
    for c in checks:
        ok = c.sigma_distance <= tolerance_sigmas
        failed += not ok
        click.echo(
            f"{c.name:<{width}}  analytic={_fmt(c.analytic):>15} "
            f"mc={_fmt(c.estimate):>15} sigma={_fmt(c.sigma_distance):>12} "
            f"{'PASS' if ok else 'FAIL'}"
        )
    click.echo(f"{len(checks) - failed}/{len(checks)} oracle checks passed")
    if failed:
        sys.exit(1)


def main():
    cli(prog_name="geobounds")


if __name__ == "__main__":
    main()
