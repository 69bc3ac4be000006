import math
import warnings

import numpy as np
import pytest
from scipy import integrate

from levydyn.errors import DomainError
from levydyn.generators import LevyMeasure, levy_measure_density
from levydyn.kernels import (
    KernelFamily,
    cauchy_kernel,
    heat_kernel,
    kernel_mass,
    mehler_kernel,
    mehler_kernel_hyperbolic,
    ou_correlation,
    ou_correlation_quadrature,
    ou_stationary,
    ou_transition,
    relativistic_kernel,
    semigroup_kernel,
    stable_kernel,
)


def test_cauchy_values():
    assert cauchy_kernel(0.0, 1.0) == pytest.approx(1 / math.pi)
    assert cauchy_kernel(1.0, 1.0) == pytest.approx(1 / (2 * math.pi))
    assert cauchy_kernel(0.0, 1.0, dim=3) == pytest.approx(1 / math.pi**2)


def test_stable_reduces_to_closed_forms():
    x = np.array([0.0, 0.4, 2.0, 7.0])
    assert np.allclose(stable_kernel(x, 1.3, 1.0), cauchy_kernel(x, 1.3), rtol=1e-10)
    # mu near 2 approaches the heat kernel with D = 1
    assert np.allclose(stable_kernel(x[:3], 1.0, 1.999), heat_kernel(x[:3], 1.0), rtol=5e-3)
    assert np.allclose(stable_kernel(x, 0.8, 1.0, dim=3), cauchy_kernel(x, 0.8, dim=3), rtol=1e-9)


def test_stable_far_tail_matches_power_law():
    mu, t, x = 1.5, 1.0, 40.0
    nu = float(levy_measure_density(LevyMeasure.stable(mu), x))
    series = sum(
        (-1) ** (j + 1) * math.gamma(1 + j * mu) * math.sin(j * math.pi * mu / 2) * t**j / math.factorial(j) * x ** (-1 - j * mu)
        for j in range(1, 6)
    ) / math.pi
    assert series / (t * nu) == pytest.approx(1.0, rel=0.02)
    assert stable_kernel(x, t, mu) == pytest.approx(series, rel=1e-7)


def test_relativistic_massless_limit_is_cauchy():
    x = np.linspace(-5, 5, 11)
    assert np.array_equal(relativistic_kernel(x, 1.0, 0.0), cauchy_kernel(x, 1.0))
    assert np.max(np.abs(relativistic_kernel(x, 1.0, 1e-6) - cauchy_kernel(x, 1.0))) < 1e-5


def test_relativistic_large_time_is_finite():
    v = relativistic_kernel(np.array([0.0, 300.0]), 400.0, 3.0)
    assert np.all(np.isfinite(v)) and np.all(v >= 0)


def test_relativistic_3d_matches_fourier_route():
    m, t, r = 1.0, 0.7, 1.3
    F = KernelFamily.relativistic(m, dim=3).exponent
    val = integrate.quad(lambda p: p * math.exp(-t * float(F(p))), 0, 80, weight="sin", wvar=r, limit=400)[0] / (2 * math.pi**2 * r)
    assert relativistic_kernel(r, t, m, dim=3) == pytest.approx(val, rel=1e-8)


@pytest.mark.parametrize("family", [KernelFamily.heat(), KernelFamily.cauchy(dim=3), KernelFamily.stable(0.7), KernelFamily.relativistic(2.0, dim=3)])
def test_mass_is_one(family):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        assert kernel_mass(family, 0.5) == pytest.approx(1.0, abs=1e-8)


def test_semigroup_dispatch():
    assert semigroup_kernel(KernelFamily.heat(D=2.0), 0.0, 1.0) == pytest.approx(1 / math.sqrt(8 * math.pi))


@pytest.mark.parametrize("bad", [dict(tag="stable", mu=2.0), dict(tag="stable", mu=0.0), dict(tag="nope"), dict(tag="heat", dim=2)])
def test_family_validation(bad):
    with pytest.raises(DomainError):
        KernelFamily(**bad)


def test_time_must_be_positive():
    with pytest.raises(DomainError):
        cauchy_kernel(0.0, 0.0)


def test_mehler_forms_agree_and_are_symmetric():
    x, y = np.meshgrid(np.linspace(-3, 3, 13), np.linspace(-2, 2, 9))
    for t in (0.2, math.log(2), 3.0):
        a = mehler_kernel(y, x, t)
        assert np.allclose(a, mehler_kernel_hyperbolic(y, x, t), rtol=1e-12)
        assert np.allclose(a, mehler_kernel(x, y, t), rtol=1e-12)
    assert mehler_kernel(0.0, 0.0, math.log(2)) == pytest.approx(2 / math.sqrt(3 * math.pi))


def test_ou_transition_normalized_and_stationary():
    v = np.linspace(-12, 12, 4001)
    p = ou_transition(0.8, 0.0, v, 0.6)
    assert np.trapezoid(p, v) == pytest.approx(1.0, abs=1e-12)
    # stationary density is invariant
    u = np.linspace(-10, 10, 2001)
    pushed = np.trapezoid(ou_stationary(u)[:, None] * ou_transition(u[:, None], 0.0, v[None, ::40], 1.1), u, axis=0)
    assert np.allclose(pushed, ou_stationary(v[::40]), atol=1e-12)


def test_ou_dimensional_variance():
    v = np.linspace(-30, 30, 6001)
    p = ou_transition(0.0, 0.0, v, 50.0, beta=2.0, D=3.0)
    assert np.trapezoid(v * v * p, v) == pytest.approx(6.0, rel=1e-10)


@pytest.mark.parametrize("tp,t", [(0.0, 0.0), (0.0, 0.5), (1.0, 3.0)])
def test_ou_correlation(tp, t):
    assert ou_correlation_quadrature(tp, t) == pytest.approx(ou_correlation(tp, t), abs=1e-12)


def test_ou_errors():
    with pytest.raises(DomainError):
        ou_transition(0.0, 1.0, 0.0, 1.0)
    with pytest.raises(DomainError):
        ou_correlation(2.0, 1.0)
