import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from levydyn.errors import DomainError, GridWarning, UnsupportedRegimeError
from levydyn.generators import (
    LevyMeasure,
    MultiplierSymbol,
    apply_levy_generator,
    apply_symbol,
    drift_to_potential,
    fokker_planck_rhs,
    fractional_power,
    grad_inv_fractional,
    ground_state_potential,
    inverse_gradient,
    levy_measure_density,
    levy_symbol_quadrature,
    mean_energy_normalize,
    mean_energy_restore,
)
from levydyn.grids import Grid1D, WaveField


def test_symbol_values_and_parse():
    p = np.array([0.0, 0.5, -2.0])
    assert np.allclose(MultiplierSymbol.parse("stable:1")(p), np.abs(p))
    assert np.allclose(MultiplierSymbol.parse("cauchy:2")(p), 2 * np.abs(p))
    assert np.allclose(MultiplierSymbol.parse("gaussian:0.5")(p), 0.5 * p * p)
    sal = MultiplierSymbol.parse("salpeter:1:2")
    assert np.allclose(sal(p), 2 * (np.sqrt(p * p + 4) - 2), rtol=1e-14)
    assert sal(0.0) == 0.0


def test_salpeter_symbol_without_cancellation():
    # sqrt(p^2 + a^2) - a at tiny p loses every digit when written naively
    assert MultiplierSymbol.salpeter(1e3)(1e-6) == pytest.approx(5e-16, rel=1e-12)


@pytest.mark.parametrize("text", ["stable", "stable:3", "salpeter", "bogus:1", "stable:x"])
def test_symbol_parse_errors(text):
    with pytest.raises(DomainError):
        MultiplierSymbol.parse(text)


def test_positive_part():
    p = np.array([0.0, 3.0])
    assert np.allclose(MultiplierSymbol.salpeter(2.0).positive_part(p), [2.0, math.sqrt(13)])
    with pytest.raises(DomainError):
        MultiplierSymbol.stable(1.5).positive_part(p)


def test_measure_density_values():
    # stable mu=1 in 1D: 1/(pi y^2)
    assert levy_measure_density(LevyMeasure.stable(1.0), 2.0) == pytest.approx(1 / (4 * math.pi), rel=1e-14)
    # relativistic m -> 0 matches the Cauchy density, 1D and 3D
    for n in (1, 3):
        a = levy_measure_density(LevyMeasure.relativistic(1e-8, n=n), 0.7)
        b = levy_measure_density(LevyMeasure.stable(1.0, n=n), 0.7)
        assert a == pytest.approx(b, rel=1e-7)
    with pytest.raises(DomainError):
        levy_measure_density(LevyMeasure.stable(1.0), 0.0)


@pytest.mark.parametrize("mu", [0.5, 1.0, 1.5])
@pytest.mark.parametrize("p", [0.5, 2.0])
def test_symbol_from_measure_quadrature(mu, p):
    assert levy_symbol_quadrature(LevyMeasure.stable(mu), p) == pytest.approx(abs(p) ** mu, rel=1e-9)


@pytest.mark.parametrize("m", [0.0, 0.3, 1.0])
def test_relativistic_symbol_quadrature(m):
    for p in (0.5, 2.0):
        assert levy_symbol_quadrature(LevyMeasure.relativistic(m), p) == pytest.approx(float(MultiplierSymbol.salpeter(m)(p)), rel=1e-8)


def test_jump_integral_of_plane_wave_uses_symbol():
    g = Grid1D(2048, 50.0)
    k = 8 * g.dp
    f = WaveField(g, np.cos(k * g.x))
    out = apply_levy_generator(f, LevyMeasure.stable(1.2)).values
    assert np.max(np.abs(out + k**1.2 * np.cos(k * g.x))) < 1e-6


def test_cutoff_bounds():
    g = Grid1D(256, 10.0)
    with pytest.raises(DomainError):
        apply_levy_generator(WaveField(g, np.exp(-g.x**2)), LevyMeasure.stable(1.0, cutoff=50 * g.dx))


def test_apply_symbol_warns_on_unresolved_spectrum():
    g = Grid1D(64, 10.0)
    with pytest.warns(GridWarning):
        apply_symbol(WaveField(g, np.sign(g.x)), MultiplierSymbol.stable(1.0))


def test_inverse_gradient_and_zero_mode_guard():
    g = Grid1D(512, 20.0)
    f = np.exp(-g.x**2)
    back = inverse_gradient(WaveField(g, g.derivative(f))).values
    assert np.max(np.abs(back - (f - f.mean()))) < 1e-12
    with pytest.raises(DomainError):
        inverse_gradient(WaveField(g, f))


def test_fractional_power_laplacian():
    g = Grid1D(512, 20.0)
    f = np.exp(-g.x**2)
    assert np.max(np.abs(fractional_power(WaveField(g, f), 1.0).values + g.derivative(f, 2))) < 1e-11


@given(st.floats(1.0, 1.95))
@settings(max_examples=15, deadline=None)
def test_fractional_flux_divergence(mu):
    g = Grid1D(512, 20.0)
    rho = WaveField(g, np.exp(-g.x**2 / 2))
    j = grad_inv_fractional(rho, mu).values
    assert np.max(np.abs(-g.derivative(j) + fractional_power(rho, mu / 2).values)) < 1e-9


def test_fractional_flux_refuses_small_index():
    g = Grid1D(64, 10.0)
    with pytest.raises(UnsupportedRegimeError):
        grad_inv_fractional(WaveField(g, np.exp(-g.x**2)), 0.5)


def test_ground_state_potential_of_oscillator():
    g = Grid1D(512, 12.0)
    phi = WaveField(g, np.exp(-g.x**2 / 2))
    V = ground_state_potential(phi, MultiplierSymbol.gaussian(), two_m_d2=1.0)
    assert np.max(np.abs(V - (g.x**2 - 1))[np.abs(g.x) < 4]) < 1e-8


def test_cauchy_ground_state_potential_is_bounded():
    # periodic images of the x^-2 tail shift the result by O(L^-2)
    g = Grid1D(16384, 800.0)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", GridWarning)
        V = ground_state_potential(WaveField(g, 1 / (1 + g.x**2)), MultiplierSymbol.stable(1.0))
    # |Delta|^{1/2} of 1/(1+x^2) is (1 - x^2)/(1 + x^2)^2
    assert np.max(np.abs(V + (1 - g.x**2) / (1 + g.x**2))[np.abs(g.x) < 5]) < 1e-4


def test_drift_potential_and_fokker_planck_stationarity():
    g = Grid1D(512, 12.0)
    D = 0.5
    b = -g.x
    V = drift_to_potential(b, g, mass=1.0, D=D, grad_b=-np.ones(g.n))
    assert np.allclose(V, 2 * D**2 * (g.x**2 / (2 * D) - 1), atol=1e-10)
    rho = np.exp(-g.x**2) / math.sqrt(math.pi)
    assert np.max(np.abs(fokker_planck_rhs(rho, b, g, D))) < 1e-10


def test_mean_energy_round_trip_and_cauchy_zero_mode():
    g = Grid1D(2048, 100.0)
    F = MultiplierSymbol.salpeter(1.0)
    phi = WaveField(g, np.exp(-g.x**2 / 8) * np.exp(1j * g.x)).normalized()
    Phi, E = mean_energy_normalize(phi, F)
    assert Phi.norm_sq == pytest.approx(1.0, abs=1e-12)
    assert np.max(np.abs(mean_energy_restore(Phi, F, E).values - phi.values)) < 1e-12
    with pytest.raises(DomainError):
        mean_energy_normalize(WaveField(g, np.exp(-g.x**2)), MultiplierSymbol.stable(1.0))
