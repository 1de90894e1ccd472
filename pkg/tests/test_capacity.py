"""Raw transport capacity, overhead budget, residual and critical size."""

import math

import pytest

from geobounds import (
    ArrivalProcess,
    CapacityReport,
    LocationServiceDescriptor,
    NetworkConfig,
    ServiceKind,
    critical_n,
    per_session_bound,
    per_session_deficit,
    raw_transport_capacity,
    residual_capacity,
)

COEFF = math.sqrt(8.0) / math.pi


def _cfg(n=100.0, area=1e6, bandwidth=1e6, guard=1.0, eta=500.0, radius=10.0, bits=64.0):
    return NetworkConfig(n, area, bandwidth, guard, eta, radius, bits)


def test_raw_capacity_hand_arithmetic():
    raw = raw_transport_capacity(_cfg())
    assert raw == pytest.approx(COEFF * 1e6 * 1e4, rel=1e-12)
    assert raw == pytest.approx(9.0032e9, rel=1e-4)


def test_raw_capacity_scalings():
    base = raw_transport_capacity(_cfg())
    assert raw_transport_capacity(_cfg(n=400.0)) == pytest.approx(2.0 * base, rel=1e-12)
    assert raw_transport_capacity(_cfg(guard=2.0)) == pytest.approx(base / 2.0, rel=1e-12)


def test_residual_hand_arithmetic():
    rep = residual_capacity(_cfg(), update_overhead=10.0, beacon_overhead=30.0)
    assert rep.overhead == pytest.approx(100.0 * (500.0 * 10.0 + 10.0 * 30.0), rel=1e-12)
    assert rep.overhead == 5.3e5
    assert rep.residual == pytest.approx(rep.raw_capacity - 5.3e5, rel=1e-12)
    assert rep.residual == pytest.approx(9.0027e9, rel=1e-4)
    assert not rep.saturated
    assert rep.deficit_fraction == pytest.approx(5.3e5 / rep.raw_capacity, rel=1e-12)


def test_zero_overhead():
    rep = residual_capacity(_cfg(), 0.0, 0.0)
    assert rep.residual == rep.raw_capacity
    assert rep.deficit_fraction == 0.0
    assert math.isinf(rep.n_star)
    assert math.isinf(critical_n(_cfg(), 0.0, 0.0))


def test_saturation_clamp():
    cfg = _cfg(bandwidth=1.0)  # tiny raw capacity
    rep = residual_capacity(cfg, 10.0, 30.0)
    assert rep.saturated
    assert rep.residual == 0.0
    assert rep.deficit_fraction == 1.0


def test_critical_n_hand_arithmetic():
    n_star = critical_n(_cfg(), 10.0, 30.0)  # per-node term 5300
    assert n_star == pytest.approx((COEFF * 1e6 * 1e3 / 5300.0) ** 2, rel=1e-12)
    assert n_star == pytest.approx(2.886e10, rel=1e-3)


def test_residual_vanishes_at_critical_n():
    cfg = _cfg()
    n_star = critical_n(cfg, 10.0, 30.0)
    at_star = residual_capacity(_cfg(n=n_star), 10.0, 30.0)
    assert at_star.residual <= 1e-6 * at_star.raw_capacity
    assert at_star.deficit_fraction == pytest.approx(1.0, abs=1e-9)


def test_deficit_monotone_in_n():
    fracs = [
        residual_capacity(_cfg(n=n), 10.0, 30.0).deficit_fraction
        for n in (10.0, 100.0, 1e4, 1e8, 1e12)
    ]
    assert all(b >= a for a, b in zip(fracs, fracs[1:]))
    assert fracs[-1] == 1.0


def test_multi_server_descriptor():
    svc = LocationServiceDescriptor(ServiceKind.MULTI_SERVER, (100.0, 200.0, 300.0))
    rep = residual_capacity(_cfg(), 10.0, 0.0, svc)
    assert rep.overhead == pytest.approx(100.0 * 600.0 * 10.0, rel=1e-12)


def test_xyls_descriptor():
    svc = LocationServiceDescriptor.xyls(1e6)
    assert svc.etas == (1000.0,)
    rep = residual_capacity(_cfg(), 10.0, 0.0, svc)
    assert rep.overhead == pytest.approx(100.0 * 1000.0 * 10.0, rel=1e-12)


def test_hierarchical_descriptor():
    svc = LocationServiceDescriptor(
        ServiceKind.HIERARCHICAL, (100.0, 1000.0), epsilons2=(0.5, 8.0)
    )
    rep = residual_capacity(_cfg(), [4.0, 1.0], 0.0, svc)
    assert rep.overhead == pytest.approx(100.0 * (100.0 * 4.0 + 1000.0 * 1.0), rel=1e-12)
    with pytest.raises(ValueError):
        residual_capacity(_cfg(), [4.0], 0.0, svc)  # one overhead per level


def test_descriptor_validation():
    with pytest.raises(ValueError):
        LocationServiceDescriptor(ServiceKind.SINGLE_SERVER, ())
    with pytest.raises(ValueError):
        LocationServiceDescriptor(ServiceKind.XYLS, (10.0, 20.0))
    with pytest.raises(ValueError):
        LocationServiceDescriptor(ServiceKind.HIERARCHICAL, (10.0, 20.0), epsilons2=(1.0,))


def test_network_config_validation():
    with pytest.raises(ValueError):
        _cfg(n=0.5)
    with pytest.raises(ValueError):
        _cfg(bandwidth=-1.0)
    with pytest.raises(ValueError):
        residual_capacity(_cfg(), -1.0, 0.0)
    with pytest.raises(ValueError):
        residual_capacity(_cfg(), 0.0, -1.0)


def test_per_session_deficit():
    rep = per_session_bound(
        1.0, ArrivalProcess.deterministic(10.0), ArrivalProcess.deterministic(1.0), 0.5
    )
    cfg = _cfg()
    total = per_session_deficit(cfg, rep, eta_prime=250.0, beacon_overhead=30.0)
    expected = 100.0 * (
        500.0 * rep.server_bits_per_second
        + 250.0 * rep.piggyback_bits_per_second
        + 10.0 * 30.0
    )
    assert total == pytest.approx(expected, rel=1e-12)
    with pytest.raises(ValueError):
        per_session_deficit(cfg, rep, eta_prime=0.0, beacon_overhead=30.0)


def test_report_is_frozen_dataclass():
    rep = residual_capacity(_cfg(), 10.0, 30.0)
    assert isinstance(rep, CapacityReport)
    with pytest.raises(Exception):
        rep.residual = 0.0
