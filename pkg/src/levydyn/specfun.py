"""Special functions used by the closed-form kernels and wave-packet oracles.

Half-integer Bessel orders are evaluated from their elementary closed forms.
Integer orders, the Dawson function and Gamma delegate to ``scipy.special``.
"""
from __future__ import annotations

import math

import numpy as np
from scipy import special as _sp

from .errors import DomainError

SUPPORTED_ORDERS = (0.5, 1.0, 1.5, 2.0)
_SQRT_PI = math.sqrt(math.pi)


def _check_order(nu: float) -> float:
    nu = float(nu)
    if not any(abs(nu - o) < 1e-15 for o in SUPPORTED_ORDERS) and nu != 0.0:
        raise DomainError(f"Bessel order {nu} not in supported set {SUPPORTED_ORDERS}")
    return nu


def bessel_k_scaled(nu: float, z):
    """exp(z) * K_nu(z) for real z > 0; finite for arbitrarily large z."""
    nu = _check_order(nu)
    z = np.asarray(z, dtype=float)
    if np.any(z <= 0):
        raise DomainError("bessel_k requires z > 0")
    if nu == 0.5:
        out = np.sqrt(np.pi / (2 * z))
    elif nu == 1.5:
        out = np.sqrt(np.pi / (2 * z)) * (1 + 1 / z)
    else:
        out = _sp.kve(nu, z)
    return out[()] if out.ndim == 0 else out


def bessel_k(nu: float, z, return_flag: bool = False):
    """Modified Bessel function of the third kind K_nu(z), z > 0.

    With ``return_flag`` a boolean mask marking underflowed entries is returned
    alongside the values.
    """
    scaled = np.asarray(bessel_k_scaled(nu, z))
    z = np.asarray(z, dtype=float)
    with np.errstate(under="ignore"):
        out = scaled * np.exp(-z)
    under = (out == 0.0) & (scaled > 0)
    out = out[()] if out.ndim == 0 else out
    if return_flag:
        return out, (under[()] if under.ndim == 0 else under)
    return out


def dawson(x):
    """Dawson function D(x) = exp(-x^2) * integral_0^x exp(t^2) dt."""
    return _sp.dawsn(x)


def erfi(x):
    """Imaginary error function -i erf(ix); overflows to inf for |x| > ~26."""
    x = np.asarray(x, dtype=float)
    with np.errstate(over="ignore"):
        out = (2 / _SQRT_PI) * np.exp(x * x) * _sp.dawsn(x)
    return out[()] if out.ndim == 0 else out


def erfi_scaled(a, b):
    """exp(-a^2) * erfi(b) without forming exp(b^2) on its own."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    with np.errstate(under="ignore"):
        out = (2 / _SQRT_PI) * np.exp(b * b - a * a) * _sp.dawsn(b)
    return out[()] if out.ndim == 0 else out


def gamma(x):
    """Euler Gamma; raises at the poles 0, -1, -2, ..."""
    x = np.asarray(x, dtype=float)
    if np.any((x <= 0) & (x == np.round(x))):
        raise DomainError("gamma has a pole at non-positive integers")
    out = _sp.gamma(x)
    return out[()] if out.ndim == 0 else out


def reflection_constant(mu: float) -> float:
    """2 Gamma(1+mu) Gamma(-mu) sin(pi mu/2) cos(pi mu/2) / pi, identically -1."""
    return float(
        2 * gamma(1 + mu) * gamma(-mu) * math.sin(math.pi * mu / 2) * math.cos(math.pi * mu / 2) / math.pi
    )
