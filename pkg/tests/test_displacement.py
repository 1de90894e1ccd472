"""Displacement densities: closed forms, quadrature mixtures, entropies."""

import math

import numpy as np
import pytest
from scipy.integrate import quad, trapezoid

from geobounds import ArrivalProcess, ClosedForm, DisplacementDensity, sample_displacement

DET1 = ArrivalProcess.deterministic(1.0)
UNIF1 = ArrivalProcess.uniform(1.0)
EXP1 = ArrivalProcess.exponential(1.0)


def _brute_force_mixture(d, x):
    """Direct tau-integral of the Gaussian scale mixture, no substitutions."""
    lo, hi = d.arrival.kfold_support(d.k)

    def integrand(t):
        if t <= 0.0:
            return 0.0
        return (
            math.exp(-x * x / (2.0 * d.sigma2 * t))
            / math.sqrt(2.0 * math.pi * d.sigma2 * t)
            * d.arrival.kfold_pdf(d.k, t)
        )

    val, _ = quad(integrand, lo, min(hi, 200.0), limit=400, points=[0.0] if lo == 0 else None)
    return val


def test_closed_form_selection():
    assert DisplacementDensity(1.0, DET1).closed_form is ClosedForm.GAUSSIAN
    assert DisplacementDensity(1.0, UNIF1).closed_form is ClosedForm.UNIFORM_MIXTURE_CLOSED_FORM
    assert DisplacementDensity(1.0, UNIF1, 2).closed_form is ClosedForm.NUMERIC_MIXTURE
    assert DisplacementDensity(1.0, EXP1).closed_form is ClosedForm.NUMERIC_MIXTURE


def test_gaussian_spot_value():
    assert DisplacementDensity(1.0, DET1).eval(0.0) == pytest.approx(
        1.0 / math.sqrt(2.0 * math.pi), abs=1e-15
    )


def test_laplace_oracle_pdf_at_zero():
    # exponential-mean Gaussian variance mixture is Laplace(0, b), b = sigma/sqrt(2 alpha)
    d = DisplacementDensity(2.0, EXP1)
    assert d.eval(0.0) == pytest.approx(0.5, abs=1e-10)
    # and the identity holds pointwise, not just at the origin
    for x in (0.3, 1.0, 2.5):
        assert d.eval(x) == pytest.approx(0.5 * math.exp(-abs(x)), abs=1e-9)


def test_uniform_closed_form_at_zero():
    assert DisplacementDensity(1.0, UNIF1).eval(0.0) == pytest.approx(
        math.sqrt(2.0 / math.pi), abs=1e-12
    )


@pytest.mark.parametrize("d", [
    DisplacementDensity(1.0, UNIF1),
    DisplacementDensity(2.0, ArrivalProcess.uniform(2.0)),
    DisplacementDensity(2.0, EXP1),
    DisplacementDensity(1.0, ArrivalProcess.exponential(2.0)),
    DisplacementDensity(1.0, UNIF1, 3),
    DisplacementDensity(1.0, EXP1, 3),
])
def test_eval_matches_brute_force_mixture(d):
    for x in (0.0, 0.2, 1.0, 2.0, 4.0):
        assert d.eval(x) == pytest.approx(_brute_force_mixture(d, x), abs=1e-9)


@pytest.mark.parametrize("d", [
    DisplacementDensity(1.0, DET1),
    DisplacementDensity(1.0, UNIF1),
    DisplacementDensity(2.0, EXP1),
    DisplacementDensity(1.5, ArrivalProcess.uniform(0.7), 2),
])
def test_symmetry(d):
    rng = np.random.default_rng(7)
    for x in rng.uniform(0.0, 4.0, 20):
        assert abs(d.eval(x) - d.eval(-x)) < 1e-12


@pytest.mark.parametrize("d", [
    DisplacementDensity(1.0, UNIF1),
    DisplacementDensity(2.0, EXP1),
    DisplacementDensity(0.5, ArrivalProcess.exponential(2.0), 2),
    DisplacementDensity(1.0, ArrivalProcess.uniform(2.0), 2),
])
def test_normalization_and_variance(d):
    hw = 40.0 * math.sqrt(d.variance)
    mass, _ = quad(lambda x: d.eval(x), 0.0, hw, limit=400)
    second, _ = quad(lambda x: x * x * d.eval(x), 0.0, hw, limit=400)
    assert 2.0 * mass == pytest.approx(1.0, abs=1e-6)
    assert 2.0 * second == pytest.approx(d.variance, rel=1e-4)


def test_variance_property():
    assert DisplacementDensity(2.0, ArrivalProcess.uniform(3.0), 4).variance == pytest.approx(12.0)
    assert DisplacementDensity(2.0, EXP1).variance == pytest.approx(2.0)


def test_entropy_closed_forms():
    h = DisplacementDensity(1.0, DET1).differential_entropy()
    assert h == pytest.approx(0.5 * math.log2(2.0 * math.pi * math.e), abs=1e-12)
    h4 = DisplacementDensity(1.0, ArrivalProcess.deterministic(4.0)).differential_entropy()
    assert h4 == pytest.approx(h + 1.0, abs=1e-12)


def test_laplace_entropy():
    h = DisplacementDensity(2.0, EXP1).differential_entropy()
    assert h == pytest.approx(math.log2(2.0 * math.e), abs=1e-3)
    # the quadrature is in fact far tighter than the contracted 1e-3
    assert h == pytest.approx(math.log2(2.0 * math.e), abs=1e-8)


def test_entropy_ordering_across_families():
    # at matched mean, deterministic (Gaussian) has maximal entropy for the
    # shared variance, and the heavier-tailed exponential mixture undercuts
    # the uniform mixture
    for s2 in (0.5, 2.0):
        for m in (0.5, 2.0):
            h_det = DisplacementDensity(s2, ArrivalProcess.deterministic(m)).differential_entropy()
            h_unif = DisplacementDensity(s2, ArrivalProcess.uniform(2.0 * m)).differential_entropy()
            h_exp = DisplacementDensity(s2, ArrivalProcess.exponential(1.0 / m)).differential_entropy()
            assert h_det > h_unif > h_exp


def test_eval_many_matches_eval():
    for d in (
        DisplacementDensity(1.0, DET1),
        DisplacementDensity(1.0, UNIF1),
        DisplacementDensity(2.0, EXP1),
        DisplacementDensity(1.0, UNIF1, 2),
    ):
        xs = np.linspace(-5.0, 5.0, 101)
        many = d.eval_many(xs)
        single = np.array([d.eval(float(x)) for x in xs])
        np.testing.assert_allclose(many, single, rtol=1e-6, atol=1e-12)


def test_eval_many_far_tail_fallback():
    d = DisplacementDensity(2.0, EXP1)
    x_out = 24.0 * math.sqrt(d.variance) + 5.0  # beyond the interp table
    val = float(d.eval_many(np.array([x_out]))[0])
    assert val == pytest.approx(d.eval(x_out), rel=1e-6)


def test_sampling_matches_density_histogram():
    # 50-bin histogram of 10^6 draws within 3-sigma multinomial bands
    n = 10**6
    for counter, d in [
        (101, DisplacementDensity(1.0, DET1)),
        (102, DisplacementDensity(2.0, EXP1)),
    ]:
        rng = np.random.default_rng([20260823, counter])
        xs = sample_displacement(d.sigma2, d.arrival, d.k, rng, size=n)
        hw = 4.0 * math.sqrt(d.variance)
        edges = np.linspace(-hw, hw, 51)
        counts, _ = np.histogram(xs, edges)
        fine = np.linspace(-hw, hw, 50 * 40 + 1)
        dens = d.eval_many(fine)
        probs = np.array([
            trapezoid(dens[i * 40:(i + 1) * 40 + 1], fine[i * 40:(i + 1) * 40 + 1])
            for i in range(50)
        ])
        band = 3.0 * np.sqrt(n * probs * (1.0 - probs))
        assert np.all(np.abs(counts - n * probs) <= band)


def test_sampling_variance_examples():
    rng = np.random.default_rng([20260823, 103])
    xs = sample_displacement(1.0, DET1, 1, rng, size=10**6)
    assert abs(np.var(xs) - 1.0) < 0.01
    assert abs(np.mean(xs)) < 4.0 * math.sqrt(1.0 / 10**6)
    rng = np.random.default_rng([20260823, 104])
    xs = sample_displacement(2.0, EXP1, 1, rng, size=10**6)
    assert abs(np.var(xs) - 2.0) < 0.05
    rng = np.random.default_rng([20260823, 105])
    xs = sample_displacement(2.0, EXP1, 3, rng, size=10**5)
    assert np.var(xs) == pytest.approx(6.0, rel=0.05)


def test_invalid_inputs_rejected():
    with pytest.raises(ValueError):
        DisplacementDensity(-1.0, DET1)
    with pytest.raises(ValueError):
        DisplacementDensity(1.0, DET1, 0)
    with pytest.raises(ValueError):
        DisplacementDensity(1.0, DET1).eval(math.inf)
