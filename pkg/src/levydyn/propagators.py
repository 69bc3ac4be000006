"""Regularized quantum propagators, kernels of exp(-i t F(p^)), and
convolution-based propagation.

Pole families (cauchy, salpeter) are evaluated at complex time t - i eps,
which moves the light-cone singularity |x| = c t off the real axis.
"""
from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import integrate
from scipy import special as _sp

from .errors import DomainError, GridWarning
from .grids import Grid1D, RadialGrid3D, WaveField

POLE_FAMILIES = ("cauchy_1d", "cauchy_3d", "salpeter_1d", "salpeter_3d")
FAMILIES = ("gaussian_free_1d", "oscillator_1d") + POLE_FAMILIES


@dataclass(frozen=True)
class PropagatorFamily:
    tag: str
    m: float = 0.0
    c: float = 1.0

    def __post_init__(self):
        if self.tag not in FAMILIES:
            raise DomainError(f"unknown propagator family {self.tag!r}")
        if self.m < 0 or self.c <= 0:
            raise DomainError("need m >= 0 and c > 0")

    @property
    def dim(self) -> int:
        return 3 if self.tag.endswith("3d") else 1

    def symbol(self, p):
        """Dispersion whose unitary group this family propagates."""
        p = np.abs(np.asarray(p, dtype=float))
        if self.tag == "gaussian_free_1d":
            return p * p
        if self.tag.startswith("cauchy") or self.m == 0:
            return self.c * p
        if self.tag.startswith("salpeter"):
            mc = self.m * self.c
            return self.c * p * p / (np.sqrt(p * p + mc * mc) + mc)
        raise DomainError("the oscillator propagator has no translation-invariant symbol")


def default_epsilon(dx: float, c: float = 1.0) -> float:
    return max(10 * dx / c, 1e-3 / c)


def _check_eps(family: PropagatorFamily, eps: float):
    if eps < 0:
        raise DomainError("regularization eps must be non-negative")
    if family.tag in POLE_FAMILIES and eps == 0:
        raise DomainError(f"{family.tag} needs eps > 0: the kernel is singular on the light cone |x| = c t")


def quantum_propagator(family: PropagatorFamily, x, t: float, eps: float = 0.0, y=0.0, simplified: bool = False):
    """K_t^eps(x) (radial x for 3D; ``y`` is the source point for the oscillator).

    Pole families are the semigroup kernels continued to complex time
    tau = eps + i t, which is exactly the transform of exp(-i F(p)(t - i eps)).
    ``simplified`` drops eps from the prefactor (numerator) and keeps it only
    in the singular denominator.
    """
    _check_eps(family, eps)
    x = np.asarray(x, dtype=float)
    tag, c, m = family.tag, family.c, family.m
    if tag == "gaussian_free_1d":
        tau = t - 1j * eps
        return (4j * math.pi * tau) ** -0.5 * np.exp(1j * x * x / (4 * tau))
    if tag == "oscillator_1d":
        tau = t - 1j * eps
        s = cmath.sin(tau)
        if abs(s) < 1e-12:
            raise DomainError("oscillator propagator is singular where sin t = 0")
        y = np.asarray(y, dtype=float)
        return cmath.exp(1j * tau / 2) / np.sqrt(2j * math.pi * s) * np.exp(1j * ((x * x + y * y) * cmath.cos(tau) - 2 * x * y) / (2 * s))
    tau = complex(eps, t)
    pre = complex(0, t) if simplified else tau
    w = x * x + (c * tau) ** 2
    if tag == "cauchy_1d" or (tag == "salpeter_1d" and m == 0):
        return c * pre / (math.pi * w)
    if tag == "cauchy_3d" or (tag == "salpeter_3d" and m == 0):
        return c * pre / (math.pi**2 * w * w)
    # principal root: Re > 0 along the continuation from real tau
    rad = np.sqrt(w + 0j)
    z = m * c * rad
    growth = m * c * c * (pre if simplified else tau)
    bess = _sp.kve(1 if tag == "salpeter_1d" else 2, z) * np.exp(growth - z)
    if tag == "salpeter_1d":
        return (m * c * c * pre / math.pi) * bess / rad
    return pre * m * m * c**3 / (2 * math.pi**2) * bess / (rad * rad)


def propagator_fourier(family: PropagatorFamily, x: float, t: float, eps: float) -> complex:
    """K_t^eps(x) from its Fourier integral exp(-i F(p)(t - i eps)) by quadrature."""
    _check_eps(family, eps)
    tau = t - 1j * eps
    F = lambda p: float(family.symbol(p))
    pmax = 40.0 / (eps * family.c) if eps > 0 else None
    if pmax is None:
        raise DomainError("Fourier route needs eps > 0")
    if family.dim == 1:
        # (1/pi) int_0^inf cos(px) exp(-i F(p) tau) dp
        re = integrate.quad(lambda p: (np.exp(-1j * F(p) * tau)).real, 0, pmax, weight="cos", wvar=x, limit=4000, epsabs=1e-13)[0]
        im = integrate.quad(lambda p: (np.exp(-1j * F(p) * tau)).imag, 0, pmax, weight="cos", wvar=x, limit=4000, epsabs=1e-13)[0]
        return (re + 1j * im) / math.pi
    r = abs(x)
    re = integrate.quad(lambda p: p * (np.exp(-1j * F(p) * tau)).real, 0, pmax, weight="sin", wvar=r, limit=4000, epsabs=1e-13)[0]
    im = integrate.quad(lambda p: p * (np.exp(-1j * F(p) * tau)).imag, 0, pmax, weight="sin", wvar=r, limit=4000, epsabs=1e-13)[0]
    return (re + 1j * im) / (2 * math.pi**2 * r)


def kernel_multiplier(family: PropagatorFamily, p, t: float, eps: float):
    """Fourier multiplier of K_t^eps: exp(-i F(p) (t - i eps))."""
    _check_eps(family, eps)
    return np.exp(-1j * family.symbol(p) * (t - 1j * eps))


def _wrap_mass(psi0: WaveField) -> float:
    v = np.abs(psi0.values) ** 2
    k = max(1, v.size // 64)
    if isinstance(psi0.grid, RadialGrid3D):
        v = v * psi0.grid.r**2
        return float(np.sum(v[-k:]) / max(np.sum(v), 1e-300))
    edge = np.sum(v[:k]) + np.sum(v[-k:])
    return float(edge / max(np.sum(v), 1e-300))


def propagate_with_kernel(psi0: WaveField, family: PropagatorFamily, t: float, eps: float | None = None) -> WaveField:
    """psi0 * K_t^eps as a periodic convolution.

    The convolution is carried out in the Fourier domain with the exact
    transform of the regularized kernel, so eps well below the grid spacing is
    still resolved.
    """
    grid = psi0.grid
    if eps is None:
        eps = default_epsilon(grid.dx if isinstance(grid, Grid1D) else grid.dr, family.c)
    if family.tag == "oscillator_1d":
        raise DomainError("the oscillator propagator is not a convolution kernel")
    if (family.dim == 3) != isinstance(grid, RadialGrid3D):
        raise DomainError("3D families propagate on RadialGrid3D, 1D families on Grid1D")
    wrap = _wrap_mass(psi0)
    if wrap > 1e-8:
        warnings.warn(f"periodic wrap-around mass {wrap:.2e} exceeds 1e-8", GridWarning, stacklevel=2)
    p = grid.p if isinstance(grid, Grid1D) else grid.k
    mult = kernel_multiplier(family, p, t, eps)
    return psi0.with_values(grid.apply_multiplier(np.asarray(psi0.values, dtype=complex), mult))


def propagate_direct(psi0: WaveField, family: PropagatorFamily, t: float, eps: float, x_out=None) -> np.ndarray:
    """Real-space quadrature sum_j psi0(x_j) K_t^eps(x - x_j) dx (1D only).

    Accurate only while eps spans several grid cells; kept as a cross-check
    of the closed-form kernel against :func:`propagate_with_kernel`.
    """
    grid = psi0.grid
    if not isinstance(grid, Grid1D):
        raise DomainError("direct convolution is implemented on 1D grids")
    x_out = grid.x if x_out is None else np.asarray(x_out, dtype=float)
    out = np.empty(x_out.shape, dtype=complex)
    for i, xo in enumerate(x_out):
        out[i] = np.sum(psi0.values * quantum_propagator(family, xo - grid.x, t, eps)) * grid.dx
    return out


def naive_cauchy_propagate(f, x, t: float):
    """Principal-value convolution with i t/(pi (x^2 - t^2)) and no delta terms.

    For smooth f decaying at infinity this evaluates to
    (i/2)[(x - t) f(x - t) - (x + t) f(x + t)] only when f = sqrt(2/pi)/(1 + x^2);
    here the PV integral is computed by quadrature for general callables f.
    """
    x = np.atleast_1d(np.asarray(x, dtype=float))
    out = np.empty(x.shape, dtype=complex)
    for i, xi in enumerate(x):
        # PV int f(xi - z) t/(pi (z^2 - t^2)) dz; poles at z = +-t
        g = lambda z: f(xi - z) * t / math.pi
        # 1/(z^2 - t^2) = (1/2t)[1/(z - t) - 1/(z + t)]
        pv1 = integrate.quad(lambda z: g(z) / (2 * t), -200.0, 200.0, weight="cauchy", wvar=t, limit=2000)[0]
        pv2 = integrate.quad(lambda z: g(z) / (2 * t), -200.0, 200.0, weight="cauchy", wvar=-t, limit=2000)[0]
        out[i] = 1j * (pv1 - pv2)
    return out


def naive_cauchy_closed(f, x, t: float):
    """(i/2)[(x - t) f(x - t) - (x + t) f(x + t)], the imaginary half of the Lorentz solution."""
    x = np.asarray(x, dtype=float)
    return 0.5j * ((x - t) * f(x - t) - (x + t) * f(x + t))


def sokhotski_pair(f, t: float, eps: float, half_width: float = 400.0) -> float:
    """int Re K_t^eps(x) f(x) dx for the 1D Cauchy kernel; tends to (f(t)+f(-t))/2."""
    fam = PropagatorFamily("cauchy_1d")
    g = lambda x: quantum_propagator(fam, x, t, eps).real * f(x)
    pts = sorted({-t, t})
    edges = [-half_width] + [p - 50 * eps for p in pts] + [p + 50 * eps for p in pts] + [half_width]
    edges = sorted(edges)
    return sum(integrate.quad(g, a, b, limit=2000, epsabs=1e-13, epsrel=1e-12)[0] for a, b in zip(edges[:-1], edges[1:]))
