"""Semigroup kernels: transition densities of Gaussian, stable, Cauchy,
relativistic and Ornstein-Uhlenbeck processes.

Every kernel is normalized so that it integrates to one over R^n.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from . import specfun
from .errors import DomainError

_TAIL = 36.9  # exp(-36.9) < 1e-16


@dataclass(frozen=True)
class KernelFamily:
    """Semigroup family with its parameters and spatial dimension (1 or 3)."""

    tag: str
    dim: int = 1
    D: float = 1.0
    mu: float = 1.0
    intensity: float = 1.0
    c: float = 1.0
    m: float = 0.0

    def __post_init__(self):
        if self.tag not in ("heat", "stable", "cauchy", "relativistic"):
            raise DomainError(f"unknown kernel family {self.tag!r}")
        if self.dim not in (1, 3):
            raise DomainError("kernels are provided for dimensions 1 and 3")
        if self.tag == "stable" and not 0 < self.mu < 2:
            raise DomainError(f"stability index must lie in (0, 2), got {self.mu}")
        if min(self.D, self.intensity, self.c) <= 0 or self.m < 0:
            raise DomainError("D, intensity and c must be positive and m non-negative")

    @classmethod
    def heat(cls, D=1.0, dim=1):
        return cls("heat", dim=dim, D=D)

    @classmethod
    def stable(cls, mu, intensity=1.0, dim=1):
        return cls("stable", dim=dim, mu=mu, intensity=intensity)

    @classmethod
    def cauchy(cls, c=1.0, dim=1):
        return cls("cauchy", dim=dim, c=c)

    @classmethod
    def relativistic(cls, m, c=1.0, dim=1):
        return cls("relativistic", dim=dim, m=m, c=c)

    def exponent(self, p):
        """F(p) with e^{-t F(p)} the Fourier multiplier of the semigroup."""
        p = np.abs(np.asarray(p, dtype=float))
        if self.tag == "heat":
            return self.D * p * p
        if self.tag == "stable":
            return self.intensity * p**self.mu
        if self.tag == "cauchy" or self.m == 0:
            return self.c * p
        mc = self.m * self.c
        return self.c * p * p / (np.sqrt(p * p + mc * mc) + mc)


def _check_time(t):
    if np.any(np.asarray(t) <= 0):
        raise DomainError("kernel time must be positive")


def heat_kernel(x, t, D=1.0, dim=1):
    _check_time(t)
    x = np.asarray(x, dtype=float)
    return (4 * math.pi * D * t) ** (-dim / 2) * np.exp(-x * x / (4 * D * t))


def cauchy_kernel(x, t, c=1.0, dim=1):
    _check_time(t)
    x = np.asarray(x, dtype=float)
    n = dim
    return math.gamma((n + 1) / 2) * c * t / (math.pi * (x * x + (c * t) ** 2)) ** ((n + 1) / 2)


def relativistic_kernel(x, t, m, c=1.0, dim=1):
    """Kernel of exp[-t (sqrt(-c^2 Lap + m^2 c^4) - m c^2)]."""
    _check_time(t)
    if m == 0:
        return cauchy_kernel(x, t, c, dim)
    x = np.asarray(x, dtype=float)
    n = dim
    order = (n + 1) / 2
    rad = np.sqrt(x * x + (c * t) ** 2)
    z = m * c * rad
    # exp(m c^2 t) K(z) = kve(z) exp(m c^2 t - z), exponent <= 0
    scaled = specfun.bessel_k_scaled(order, z) * np.exp(m * c * c * t - z)
    return 2 * (m / (2 * math.pi)) ** order * c ** ((n + 3) / 2) * t * rad ** (-order) * scaled


def stable_kernel(x, t, mu, intensity=1.0, dim=1, return_error=False):
    """Symmetric stable density by Fourier synthesis along the radial frequency.

    n = 1 uses the cosine transform, n = 3 the p sin(pr) reduction; the
    frequency range is cut where exp(-t F(p)) < 1e-16.
    """
    _check_time(t)
    if not 0 < mu < 2:
        raise DomainError(f"stability index must lie in (0, 2), got {mu}")
    s = intensity * t
    pmax = (_TAIL / s) ** (1 / mu)
    xs = np.atleast_1d(np.abs(np.asarray(x, dtype=float)))
    vals = np.empty(xs.shape)
    errs = np.empty(xs.shape)
    for i, r in enumerate(xs.flat):
        if dim == 1:
            if r == 0:
                v, e = math.gamma(1 + 1 / mu) * s ** (-1 / mu), 0.0
            else:
                v, e = integrate.quad(lambda p: math.exp(-s * p**mu), 0, pmax, weight="cos", wvar=r, limit=2000, epsabs=1e-13)
            vals.flat[i], errs.flat[i] = v / math.pi, e / math.pi
        else:
            if r == 0:
                v, e = math.gamma(1 + 3 / mu) * s ** (-3 / mu) / 3, 0.0
                vals.flat[i], errs.flat[i] = v / (2 * math.pi**2), 0.0
                continue
            v, e = integrate.quad(lambda p: p * math.exp(-s * p**mu), 0, pmax, weight="sin", wvar=r, limit=2000, epsabs=1e-13)
            vals.flat[i], errs.flat[i] = v / (2 * math.pi**2 * r), e / (2 * math.pi**2 * r)
    out = vals.reshape(np.shape(x)) if np.ndim(x) else float(vals[0])
    if return_error:
        return out, (errs.reshape(np.shape(x)) if np.ndim(x) else float(errs[0]))
    return out


def semigroup_kernel(family: KernelFamily, x, t):
    """Transition density k_t(x) (radial argument for dim = 3)."""
    if family.tag == "heat":
        return heat_kernel(x, t, family.D, family.dim)
    if family.tag == "cauchy":
        return cauchy_kernel(x, t, family.c, family.dim)
    if family.tag == "relativistic":
        return relativistic_kernel(x, t, family.m, family.c, family.dim)
    return stable_kernel(x, t, family.mu, family.intensity, family.dim)


def _stable_tail_mass(mu, s, X, dim, terms=8):
    """Mass beyond |x| = X from the large-distance expansion of the density."""
    total = 0.0
    for j in range(1, terms + 1):
        sign = (-1) ** (j + 1)
        a = math.sin(j * math.pi * mu / 2) * s**j / math.factorial(j) * X ** (-j * mu) / (j * mu)
        if dim == 1:
            total += sign * (2 / math.pi) * math.gamma(1 + j * mu) * a
        else:
            total += sign * (2 / math.pi) * math.gamma(2 + j * mu) * a
    return total


def kernel_mass(family: KernelFamily, t: float, X: float | None = None) -> float:
    """Integral of the kernel over R^n: quadrature on |x| < X plus analytic tail."""
    _check_time(t)
    n = family.dim
    weight = (lambda r: 2.0) if n == 1 else (lambda r: 4 * math.pi * r * r)
    f = lambda r: weight(r) * float(semigroup_kernel(family, r, t))
    if family.tag == "stable":
        s = family.intensity * t
        X = X or 60 * s ** (1 / family.mu) + 20
        edges = np.concatenate([[0.0], np.geomspace(1e-3 * s ** (1 / family.mu), X, 40)])
        head = sum(integrate.quad(f, a, b, epsabs=1e-14, epsrel=1e-12, limit=200)[0] for a, b in zip(edges[:-1], edges[1:]))
        return head + _stable_tail_mass(family.mu, s, X, n)
    scale = {"heat": math.sqrt(family.D * t), "cauchy": family.c * t, "relativistic": family.c * t}[family.tag]
    edges = np.concatenate([[0.0], np.geomspace(1e-3 * scale, 1e3 * scale, 30)])
    head = sum(integrate.quad(f, a, b, epsabs=0, epsrel=1e-13, limit=200)[0] for a, b in zip(edges[:-1], edges[1:]))
    X = edges[-1]
    if family.tag == "heat":
        tail = integrate.quad(f, X, np.inf)[0]
    elif family.tag == "cauchy" or family.m == 0:
        tail = _cauchy_tail(X, family.c * t, n)
    else:
        tail = integrate.quad(f, X, np.inf, epsabs=0, epsrel=1e-10, limit=200)[0]
    return head + tail


def _cauchy_tail(X, a, n):
    if n == 1:
        return 1 - (2 / math.pi) * math.atan(X / a)
    # 4 pi int_X^inf r^2 a/(pi^2 (r^2+a^2)^2) dr
    return (2 / math.pi) * (math.pi / 2 - math.atan(X / a) + a * X / (X * X + a * a))


def mehler_kernel(y, x, t):
    """Kernel of exp(-t H), H = (-Lap + x^2 - 1)/2; symmetric in (x, y)."""
    _check_time(t)
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    a = math.exp(-t)
    q = -math.expm1(-2 * t)
    return (math.pi * q) ** -0.5 * np.exp(0.5 * (x * x - y * y) - (x - a * y) ** 2 / q)


def mehler_kernel_hyperbolic(y, x, t):
    """Same kernel in cosh/sinh form."""
    _check_time(t)
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    sh, ch = math.sinh(t), math.cosh(t)
    return math.exp(t / 2) / math.sqrt(2 * math.pi * sh) * np.exp(-((x * x + y * y) * ch - 2 * x * y) / (2 * sh))


def ou_transition(u, s, v, t, beta=1.0, D=0.5):
    """OU velocity transition density p(u, s, v, t).

    Stationary variance is beta*D; the density solves
    dp/dt = beta^2 D p'' + beta (v p)'. With beta = 1, D = 1/2 it is the
    dimensionless [pi (1 - e^{-2t})]^{-1/2} exp(-(v - e^{-t} u)^2/(1 - e^{-2t})).
    """
    if np.any(np.asarray(t) - np.asarray(s) <= 0):
        raise DomainError("OU transition requires t > s")
    if beta <= 0 or D <= 0:
        raise DomainError("beta and D must be positive")
    tau = np.asarray(t, dtype=float) - np.asarray(s, dtype=float)
    var2 = 2 * beta * D * -np.expm1(-2 * beta * tau)
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    return (math.pi * var2) ** -0.5 * np.exp(-((v - u * np.exp(-beta * tau)) ** 2) / var2)


def ou_stationary(v, beta=1.0, D=0.5):
    v = np.asarray(v, dtype=float)
    return (2 * math.pi * beta * D) ** -0.5 * np.exp(-v * v / (2 * beta * D))


def ou_correlation(t_prime: float, t: float) -> float:
    """Stationary OU autocorrelation E[X(t') X(t)] = exp(-(t - t'))/2."""
    if t < t_prime:
        raise DomainError("correlation needs t >= t'")
    return 0.5 * math.exp(-(t - t_prime))


def ou_correlation_quadrature(t_prime: float, t: float, half_width: float = 9.0, order: int = 160) -> float:
    """Double integral of x' x rho*(x') p(x', t', x, t) on a Gauss-Legendre grid."""
    if t < t_prime:
        raise DomainError("correlation needs t >= t'")
    if t == t_prime:
        z, w = np.polynomial.legendre.leggauss(order)
        z, w = z * half_width, w * half_width
        return float(np.sum(w * z * z * ou_stationary(z)))
    z, w = np.polynomial.legendre.leggauss(order)
    z, w = z * half_width, w * half_width
    xp, xx = np.meshgrid(z, z, indexing="ij")
    dens = ou_stationary(xp) * ou_transition(xp, t_prime, xx, t)
    return float(np.einsum("i,j,ij->", w, w, xp * xx * dens))
