"""Fast invariant checks for installed builds; each prints one PASS/FAIL line."""
from __future__ import annotations

import math
import warnings

import numpy as np


def _checks():
    from . import specfun
    from .currents import continuity_residual, density_rate, divergence, quantum_current
    from .evolution import evolve_unitary, quad_lorentz_density, quad_lorentz_wave
    from .generators import LevyMeasure, MultiplierSymbol, apply_levy_generator, apply_symbol
    from .grids import Grid1D, WaveField
    from .kernels import KernelFamily, cauchy_kernel, kernel_mass

    g = Grid1D(4096, 200.0)
    F = MultiplierSymbol.stable(1.0)
    psi0 = WaveField(g, quad_lorentz_wave(g.x, 0.0))

    def unitarity():
        psi = evolve_unitary(psi0, F, 2.0)
        return abs(psi.norm_sq - psi0.norm_sq)

    def lorentz_peak():
        psi = WaveField(Grid1D(32768, 1600.0), quad_lorentz_wave(Grid1D(32768, 1600.0).x, 0.0))
        psi = evolve_unitary(psi, F, 1.0)
        return float(np.max(np.abs(psi.density - quad_lorentz_density(psi.grid.x, 1.0))))

    def reflection():
        return max(abs(specfun.reflection_constant(mu) + 1) for mu in (0.3, 0.5, 1.5, 1.9))

    def chapman_kolmogorov():
        z, w = np.polynomial.legendre.leggauss(400)
        y = np.tan(z * math.pi / 2)
        wy = w * (math.pi / 2) / np.cos(z * math.pi / 2) ** 2
        return abs(float(np.sum(wy * cauchy_kernel(0.7 - y, 0.4) * cauchy_kernel(y, 0.9))) - float(cauchy_kernel(0.7, 1.3)))

    def kernel_norm():
        return abs(kernel_mass(KernelFamily.relativistic(1.0), 1.0) - 1)

    def route_agreement():
        field = WaveField(g, np.exp(-g.x**2 / 2))
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            a = apply_symbol(field, MultiplierSymbol.stable(1.5)).values
            b = apply_levy_generator(field, LevyMeasure.stable(1.5)).values
        return float(np.max(np.abs(a + b)) / np.max(np.abs(a)))

    def continuity():
        psi = evolve_unitary(WaveField(g, np.exp(-g.x**2 / 4) * np.exp(0.5j * g.x)), MultiplierSymbol.salpeter(1.0), 1.0)
        j = quantum_current(psi, MultiplierSymbol.salpeter(1.0)).j
        return float(np.max(np.abs(density_rate(psi, MultiplierSymbol.salpeter(1.0)) + divergence(j, g))))

    def nonexistence():
        psi = WaveField(g, np.exp(3j * g.x - g.x**2 / 2)).normalized()
        base = continuity_residual(psi, 1.0, "sgn_spectral").linf
        cand = continuity_residual(psi, 1.5, "laskin_candidate").linf
        return 0.0 if cand >= 10 * max(base, 1e-300) else 1.0

    return [
        ("unitarity", unitarity, 1e-12),
        ("lorentz oracle", lorentz_peak, 1e-6),
        ("reflection constant", reflection, 1e-12),
        ("cauchy chapman-kolmogorov", chapman_kolmogorov, 1e-8),
        ("relativistic kernel mass", kernel_norm, 1e-8),
        ("operator routes", route_agreement, 1e-4),
        ("salpeter continuity", continuity, 1e-5),
        ("candidate current fails", nonexistence, 0.5),
    ]


def run_selftest(stream) -> bool:
    ok = True
    for name, fn, tol in _checks():
        try:
            err = fn()
            passed = err <= tol
            detail = f"{err:.3e} (tol {tol:.0e})"
        except Exception as exc:  # report and keep going
            passed, detail = False, f"raised {exc!r}"
        ok &= passed
        print(f"{'PASS' if passed else 'FAIL'} {name}: {detail}", file=stream)
    return ok
