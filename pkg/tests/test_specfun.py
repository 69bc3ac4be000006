import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate, special

from levydyn import specfun
from levydyn.errors import DomainError


def k_integral(nu, z):
    """Independent route: K_nu(z) = int_0^inf exp(-z cosh u) cosh(nu u) du."""
    top = math.acosh(max(745.0 / z, 2.0))
    return integrate.quad(lambda u: math.exp(-z * math.cosh(u)) * math.cosh(nu * u), 0, top, epsabs=0, epsrel=1e-13, limit=200)[0]


@pytest.mark.parametrize("nu", specfun.SUPPORTED_ORDERS)
@pytest.mark.parametrize("z", [0.01, 0.3, 1.0, 4.0, 25.0])
def test_bessel_k_matches_integral(nu, z):
    assert specfun.bessel_k(nu, z) == pytest.approx(k_integral(nu, z), rel=1e-10)


def test_half_integer_closed_forms():
    z = np.array([0.1, 1.0, 10.0])
    assert np.allclose(specfun.bessel_k(0.5, z), np.sqrt(np.pi / (2 * z)) * np.exp(-z), rtol=1e-14)
    assert np.allclose(specfun.bessel_k(1.5, z), np.sqrt(np.pi / (2 * z)) * np.exp(-z) * (1 + 1 / z), rtol=1e-14)


def test_recurrence_links_orders():
    # K_{nu+1} = K_{nu-1} + (2 nu / z) K_nu
    z = np.linspace(0.2, 30, 50)
    assert np.allclose(specfun.bessel_k(2, z), special.k0(z) + 2 / z * specfun.bessel_k(1, z), rtol=1e-12)
    rhs15 = np.sqrt(np.pi / (2 * z)) * np.exp(-z) + 1 / z * specfun.bessel_k(0.5, z)
    assert np.allclose(specfun.bessel_k(1.5, z), rhs15, rtol=1e-13)


def test_small_argument_laws():
    z = 1e-6
    assert specfun.bessel_k(1, z) * z == pytest.approx(1.0, rel=1e-6)
    assert specfun.bessel_k(2, z) * z * z == pytest.approx(2.0, rel=1e-6)


def test_underflow_flag_and_scaled_values():
    vals, flag = specfun.bessel_k(1, np.array([1.0, 800.0]), return_flag=True)
    assert not flag[0] and flag[1] and vals[1] == 0.0
    assert specfun.bessel_k_scaled(1, 800.0) > 0


@pytest.mark.parametrize("bad", [0.0, -1.0])
def test_bessel_domain(bad):
    with pytest.raises(DomainError):
        specfun.bessel_k(1, bad)


def test_unsupported_order():
    with pytest.raises(DomainError):
        specfun.bessel_k(3.5, 1.0)


def test_dawson_series_and_values():
    # Maclaurin series D(x) = sum (-1)^n 2^n x^(2n+1)/(2n+1)!!
    x = 0.3
    series, term = 0.0, x
    for n in range(30):
        series += term
        term *= -2 * x * x / (2 * n + 3)
    assert specfun.dawson(x) == pytest.approx(series, rel=1e-14)
    assert specfun.dawson(0.9241388730) == pytest.approx(0.5410442246, rel=1e-9)  # maximum of D


@given(st.floats(-6, 6))
@settings(max_examples=50, deadline=None)
def test_erfi_dawson_relation(x):
    assert specfun.erfi(x) * math.sqrt(math.pi) / 2 * math.exp(-x * x) == pytest.approx(specfun.dawson(x), rel=1e-12, abs=1e-300)


def test_erfi_scaled_avoids_overflow():
    v = specfun.erfi_scaled(30.0, 30.0)
    assert np.isfinite(v) and v == pytest.approx(float(specfun.dawson(30.0)) * 2 / math.sqrt(math.pi), rel=1e-12)


def test_gamma_poles_and_values():
    assert specfun.gamma(0.5) == pytest.approx(math.sqrt(math.pi), rel=1e-15)
    for pole in (0.0, -1.0, -2.0):
        with pytest.raises(DomainError):
            specfun.gamma(pole)


@given(st.floats(0.05, 1.95).filter(lambda m: abs(m - 1) > 1e-6))
@settings(max_examples=60, deadline=None)
def test_reflection_constant_is_minus_one(mu):
    assert specfun.reflection_constant(mu) == pytest.approx(-1.0, abs=1e-12)
