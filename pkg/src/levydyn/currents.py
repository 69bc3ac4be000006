"""Probability currents of semigroup and quantum flows, and the continuity
residual used to test candidate currents for fractional dynamics.

Conventions: psi~(p) = (2 pi)^(-1/2) int psi(x) e^{-ipx} dx, hbar = 1, and
i d/dt psi = F(p^) psi. The quantum current of the Salpeter family is

    j(x) = (1/2 pi) int int v (k + p)/(E_k + E_p) psi~*(p) psi~(k) e^{ix(k-p)} dp dk

with E = sqrt(p^2 + m^2 c^2) and v = c (for the Cauchy symbol a|p|, E = |p|
and v = a). This normalization is the one for which d|psi|^2/dt + div j = 0
holds exactly.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import fft as sfft
from scipy import integrate

from . import specfun
from .errors import DomainError, UnsupportedRegimeError
from .generators import MultiplierSymbol
from .grids import Grid1D, RadialGrid3D, WaveField

DIRECT_LIMIT = 512
RULES = ("laskin_candidate", "sgn_spectral")


@dataclass(frozen=True)
class CurrentSample:
    x: float
    t: float
    j: float


@dataclass
class CurrentProfile:
    """Current j sampled on the nodes of a grid at one time."""

    x: np.ndarray
    t: float
    j: np.ndarray

    def samples(self) -> list[CurrentSample]:
        return [CurrentSample(float(a), self.t, float(b)) for a, b in zip(self.x, self.j)]


def semigroup_cauchy_current(x, t: float, b: float = 1.0, c: float = 1.0):
    """Current (c/pi) x/(x^2 + lam^2), lam = b + c t, of the spreading Cauchy density."""
    lam = b + c * t
    if lam <= 0:
        raise DomainError("need b + c t > 0")
    x = np.asarray(x, dtype=float)
    return c / math.pi * x / (x * x + lam * lam)


def semigroup_cauchy_velocity(x, t: float, b: float = 1.0, c: float = 1.0):
    """Current velocity j/rho = c x/(b + c t)."""
    lam = b + c * t
    if lam <= 0:
        raise DomainError("need b + c t > 0")
    return c * np.asarray(x, dtype=float) / lam


def _speed_and_energy(F: MultiplierSymbol):
    """(v, E) with the pair kernel v (k + p)/(E(k) + E(p))."""
    if F.tag == "salpeter":
        mc = F.m * F.c
        return F.c, (lambda p: np.sqrt(p * p + mc * mc))
    if F.tag == "stable" and F.mu == 1:
        return F.intensity, np.abs
    raise UnsupportedRegimeError("quantum currents are defined for salpeter and cauchy (stable mu = 1) symbols")


def _log_nodes(lo: float, hi: float, step: float = 0.25, tol: float = 1e-14):
    """Trapezoid nodes in u = ln s for int_0^inf e^{-s sigma} ds, sigma in [lo, hi]."""
    u0 = math.log(tol / hi)
    u1 = math.log(-math.log(tol) / lo)
    count = int(math.ceil((u1 - u0) / step)) + 1
    u = np.linspace(u0, u1, count)
    s = np.exp(u)
    return s, s * (u[1] - u[0])


def _spectral_extent(grid, energy):
    if isinstance(grid, Grid1D):
        p = np.abs(grid.p)
        lo_p, hi_p = grid.dp, grid.p_max
    else:
        p = grid.k
        lo_p, hi_p = grid.k[0], grid.k[-1]
    lo = float(energy(np.array([0.0]))[0] + energy(np.array([lo_p]))[0])
    return p, lo, 2 * float(energy(np.array([hi_p]))[0])


def _current_split_1d(psi: WaveField, v, energy, step):
    grid = psi.grid
    p = grid.p
    E = energy(p)
    _, lo, hi = _spectral_extent(grid, energy)
    spec = grid.fft(np.asarray(psi.values, dtype=complex))
    ip = 1j * p
    ip[grid.n // 2] = 0.0
    j = np.zeros(grid.n)
    for s, w in zip(*_log_nodes(lo, hi, step)):
        damp = spec * np.exp(-s * E)
        a = grid.ifft(damp)
        da = grid.ifft(damp * ip)
        j += w * np.imag(np.conj(a) * da)
    return 2 * v * j


def _radial_derivative(grid: RadialGrid3D, values):
    """d/dr of a radial field given by its sine expansion of r f(r)."""
    u = grid.r * values
    coef = sfft.dst(u, type=1) / (grid.n_r + 1)
    padded = np.concatenate([[0.0], coef * grid.k, [0.0]])
    du = 0.5 * sfft.dct(padded, type=1)[1:-1]
    return (du - values) / grid.r


def _current_split_radial(psi: WaveField, v, energy, step):
    grid = psi.grid
    E = energy(grid.k)
    _, lo, hi = _spectral_extent(grid, energy)
    vals = np.asarray(psi.values, dtype=complex)
    j = np.zeros(grid.n_r)
    for s, w in zip(*_log_nodes(lo, hi, step)):
        a = grid.apply_multiplier(vals, np.exp(-s * E))
        da = _radial_derivative(grid, a.real) + 1j * _radial_derivative(grid, a.imag)
        j += w * np.imag(np.conj(a) * da)
    return 2 * v * j


def pair_current_direct(psi: WaveField, kernel) -> np.ndarray:
    """Quadratic-cost double sum of kernel(p, k) psi~*(p) psi~(k) e^{ix(k-p)} on a 1D grid."""
    grid = psi.grid
    if not isinstance(grid, Grid1D):
        raise UnsupportedRegimeError("the direct double sum is implemented on 1D grids")
    if grid.n > DIRECT_LIMIT:
        raise UnsupportedRegimeError(f"direct double sum is limited to {DIRECT_LIMIT} nodes")
    p = grid.p.copy()
    spec = grid.fft(np.asarray(psi.values, dtype=complex)) / grid.n
    xr = grid.x - grid.x[0]
    amp = spec[None, :] * np.exp(1j * np.outer(xr, p))
    K = kernel(p[:, None], p[None, :])
    return np.real(np.einsum("xp,pk,xk->x", np.conj(amp), K, amp))


def quantum_current(psi: WaveField, F: MultiplierSymbol, t: float = 0.0, method: str = "auto", step: float = 0.25) -> CurrentProfile:
    """Probability current of a Salpeter or Cauchy wave field.

    ``method`` is ``direct`` (1D, at most 512 nodes), ``split`` (the pair
    denominator is separated through 1/(a+b) = int e^{-s(a+b)} ds) or ``auto``.
    Radial fields on :class:`RadialGrid3D` return the radial component.
    """
    v, energy = _speed_and_energy(F)
    grid = psi.grid
    if isinstance(grid, RadialGrid3D):
        if method == "direct":
            raise UnsupportedRegimeError("radial currents use the split evaluation")
        return CurrentProfile(grid.r, t, _current_split_radial(psi, v, energy, step))
    if not isinstance(grid, Grid1D):
        raise UnsupportedRegimeError("currents need a 1D grid or a radial 3D grid")
    if method == "auto":
        method = "direct" if grid.n <= DIRECT_LIMIT else "split"
    if method == "direct":

        def kernel(p, k):
            den = energy(p) + energy(k)
            with np.errstate(invalid="ignore", divide="ignore"):
                out = v * (p + k) / den
            return np.where(den > 0, out, 0.0)

        j = pair_current_direct(psi, kernel)
    elif method == "split":
        j = _current_split_1d(psi, v, energy, step)
    else:
        raise DomainError(f"unknown method {method!r}")
    return CurrentProfile(grid.x, t, j)


def density_rate(psi: WaveField, F: MultiplierSymbol) -> np.ndarray:
    """d|psi|^2/dt = 2 Im(psi* F psi), from the evolution equation itself."""
    grid = psi.grid
    vals = np.asarray(psi.values, dtype=complex)
    p = grid.p if isinstance(grid, Grid1D) else grid.k
    return 2 * np.imag(np.conj(vals) * grid.apply_multiplier(vals, F(p)))


def divergence(j, grid) -> np.ndarray:
    """Spectral divergence of a 1D current."""
    if not isinstance(grid, Grid1D):
        raise UnsupportedRegimeError("spectral divergence is implemented on 1D grids")
    return grid.derivative(np.asarray(j, dtype=float), 1)


def radial_flux_balance(psi: WaveField, F: MultiplierSymbol, j) -> np.ndarray:
    """d/dt of the mass inside radius r plus 4 pi r^2 j(r); zero for an exact current."""
    grid = psi.grid
    rate = density_rate(psi, F)
    r = np.concatenate([[0.0], grid.r])
    f = np.concatenate([[0.0], 4 * math.pi * grid.r**2 * rate])
    inside = integrate.cumulative_simpson(f, x=r)
    return inside + 4 * math.pi * grid.r**2 * np.asarray(j)


def gaussian_cauchy_current_closed(x, t: float, return_imag: bool = False):
    """Current of the unit Gaussian packet under the Cauchy symbol |p|, as one angular integral.

    The radial integral int_0^inf r e^{-r^2 + i lam r} dr is taken in closed form
    via the Dawson function.
    """
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    re = np.empty(xs.shape)
    im = np.empty(xs.shape)
    edges = np.linspace(0.0, 2 * math.pi, 9)
    for i, xi in enumerate(xs.flat):

        def radial(phi):
            s, c = math.sin(phi), math.cos(phi)
            lam = xi * (s - c) + t * (abs(c) - abs(s))
            w = (s + c) / (abs(s) + abs(c))
            return w, 0.5 * (1 - lam * float(specfun.dawson(lam / 2))), 0.5 * lam * math.sqrt(math.pi) / 2 * math.exp(-lam * lam / 4)

        fr = lambda phi: (lambda w, a, b: w * a)(*radial(phi))
        fi = lambda phi: (lambda w, a, b: w * b)(*radial(phi))
        re.flat[i] = sum(integrate.quad(fr, a, b, epsabs=1e-14, epsrel=1e-12, limit=200)[0] for a, b in zip(edges[:-1], edges[1:]))
        im.flat[i] = sum(integrate.quad(fi, a, b, epsabs=1e-14, epsrel=1e-12, limit=200)[0] for a, b in zip(edges[:-1], edges[1:]))
    scale = 1 / (math.pi * math.sqrt(2 * math.pi))
    re, im = re * scale, im * scale
    if np.max(np.abs(im), initial=0.0) > 1e-10:
        raise DomainError(f"angular integral left an imaginary part {np.max(np.abs(im)):.2e}")
    out = re.reshape(np.shape(x)) if np.ndim(x) else float(re[0])
    if return_imag:
        return out, (im.reshape(np.shape(x)) if np.ndim(x) else float(im[0]))
    return out


def _grad_power(grid: Grid1D, mu: float):
    """Multiplier of |Delta|^{mu/2 - 1} d/dx, i sgn(p)|p|^{mu-1}, with the zero mode removed."""
    p = grid.p
    out = np.zeros(grid.n, dtype=complex)
    nz = p != 0
    out[nz] = 1j * np.sign(p[nz]) * np.abs(p[nz]) ** (mu - 1)
    out[grid.n // 2] = 0.0
    return out


def candidate_current(psi: WaveField, mu: float) -> np.ndarray:
    """j = -i [psi* G psi' - psi G psi*'] with G = |Delta|^{mu/2 - 1}."""
    grid = psi.grid
    vals = np.asarray(psi.values, dtype=complex)
    m = _grad_power(grid, mu)
    g = grid.ifft(grid.fft(vals) * m)
    gc = grid.ifft(grid.fft(np.conj(vals)) * m)
    return np.real(-1j * (np.conj(vals) * g - vals * gc))


def candidate_cross_term(psi: WaveField, mu: float) -> np.ndarray:
    """-i [psi*' G psi' - psi' G psi*']: what remains of div j after the density rate cancels."""
    grid = psi.grid
    vals = np.asarray(psi.values, dtype=complex)
    d = grid.derivative(vals, 1)
    m = _grad_power(grid, mu)
    gd = grid.ifft(grid.fft(vals) * m)
    gdc = grid.ifft(grid.fft(np.conj(vals)) * m)
    return np.real(-1j * (np.conj(d) * gd - d * gdc))


def operator_identity_gap(psi: WaveField, mu: float) -> float:
    """max |psi* d/dx G d/dx psi + psi* |Delta|^{mu/2} psi| on the grid."""
    grid = psi.grid
    vals = np.asarray(psi.values, dtype=complex)
    lhs = np.conj(vals) * grid.derivative(grid.ifft(grid.fft(vals) * _grad_power(grid, mu)), 1)
    p = grid.p
    frac = np.abs(p) ** mu
    frac[grid.n // 2] = 0.0
    rhs = -np.conj(vals) * grid.ifft(grid.fft(vals) * frac)
    return float(np.max(np.abs(lhs - rhs)))


def sgn_spectral_current(psi: WaveField, mu: float, intensity: float = 1.0, method: str = "auto") -> np.ndarray:
    """Pair current with kernel intensity (|k|^mu - |p|^mu)/(k - p).

    At mu = 1 the kernel is (k + p)/(|k| + |p|) and the split evaluation
    applies; other indices need the direct sum.
    """
    grid = psi.grid
    if mu == 1:
        return quantum_current(psi, MultiplierSymbol.stable(1.0, intensity), method=method).j
    if grid.n > DIRECT_LIMIT:
        raise UnsupportedRegimeError(f"sgn_spectral with mu != 1 needs at most {DIRECT_LIMIT} nodes")

    def kernel(p, k):
        ap, ak = np.abs(p), np.abs(k)
        same = np.isclose(p, k, rtol=0, atol=1e-14)
        with np.errstate(invalid="ignore", divide="ignore"):
            out = (ak**mu - ap**mu) / (k - p)
            slope = mu * np.sign(k) * ak ** (mu - 1) if mu >= 1 else np.where(ak > 0, mu * np.sign(k) * ak ** (mu - 1), 0.0)
        return intensity * np.where(same, slope, out)

    return pair_current_direct(psi, kernel)


@dataclass
class ResidualReport:
    """Continuity residual r = d|psi|^2/dt + div j for a candidate current."""

    rule: str
    mu: float
    residual: np.ndarray
    rate: np.ndarray
    current: np.ndarray
    cross_term: np.ndarray | None = None

    @property
    def linf(self) -> float:
        return float(np.max(np.abs(self.residual)))


def continuity_residual(psi: WaveField, mu: float, rule: str = "laskin_candidate", intensity: float = 1.0) -> ResidualReport:
    """Residual of the continuity equation under i d/dt psi = intensity |Delta|^{mu/2} psi.

    The density rate comes from the evolution equation (no time stepping).
    ``laskin_candidate`` also returns the cross term that the residual should
    equal.
    """
    if rule not in RULES:
        raise DomainError(f"unknown rule {rule!r}; choose from {RULES}")
    grid = psi.grid
    if not isinstance(grid, Grid1D):
        raise UnsupportedRegimeError("the residual diagnostic runs on 1D grids")
    F = MultiplierSymbol.stable(mu, intensity)
    rate = density_rate(psi, F)
    if rule == "laskin_candidate":
        j = intensity * candidate_current(psi, mu)
        cross = intensity * candidate_cross_term(psi, mu)
    else:
        j = sgn_spectral_current(psi, mu, intensity)
        cross = None
    return ResidualReport(rule, mu, rate + divergence(j, grid), rate, j, cross)
