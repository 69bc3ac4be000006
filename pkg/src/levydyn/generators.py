"""Nonlocal generators: Fourier multipliers, jump integrals and operator calculus.

Fourier convention: f~(p) = (2 pi)^(-1/2) int f(x) exp(-ipx) dx. Every symbol
used here is even in p, so results do not depend on the sign choice.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import integrate
from scipy import special as _sp

from . import specfun
from .errors import DomainError, GridWarning, UnsupportedRegimeError
from .grids import Grid1D, WaveField


@dataclass(frozen=True)
class MultiplierSymbol:
    """Dispersion F(p) >= 0 with F(0) = 0; selects which dynamics runs.

    ``gaussian``: D p^2. ``stable``: intensity |p|^mu. ``salpeter``:
    c (sqrt(p^2 + m^2 c^2) - m c).
    """

    tag: str
    D: float = 1.0
    mu: float = 1.0
    intensity: float = 1.0
    m: float = 0.0
    c: float = 1.0

    def __post_init__(self):
        if self.tag not in ("gaussian", "stable", "salpeter"):
            raise DomainError(f"unknown symbol family {self.tag!r}")
        if self.tag == "stable" and not 0 < self.mu <= 2:
            raise DomainError(f"stability index must lie in (0, 2], got {self.mu}")
        if self.tag == "salpeter" and (self.m < 0 or self.c <= 0):
            raise DomainError("salpeter symbol needs m >= 0 and c > 0")
        if self.D <= 0 or self.intensity <= 0:
            raise DomainError("D and intensity must be positive")

    @classmethod
    def gaussian(cls, D: float = 1.0) -> "MultiplierSymbol":
        return cls("gaussian", D=D)

    @classmethod
    def stable(cls, mu: float, intensity: float = 1.0) -> "MultiplierSymbol":
        return cls("stable", mu=mu, intensity=intensity)

    @classmethod
    def salpeter(cls, m: float, c: float = 1.0) -> "MultiplierSymbol":
        return cls("salpeter", m=m, c=c)

    @classmethod
    def parse(cls, text: str) -> "MultiplierSymbol":
        """Parse ``gaussian:D``, ``stable:mu[:intensity]`` or ``salpeter:m[:c]``."""
        name, *args = text.split(":")
        try:
            vals = [float(a) for a in args]
        except ValueError as exc:
            raise DomainError(f"bad symbol parameters in {text!r}") from exc
        if name == "gaussian":
            return cls.gaussian(*vals)
        if name == "stable":
            if not vals:
                raise DomainError("stable symbol needs mu, e.g. stable:1")
            return cls.stable(*vals)
        if name in ("salpeter", "cauchy"):
            if name == "cauchy":
                return cls.salpeter(0.0, *vals)
            if not vals:
                raise DomainError("salpeter symbol needs m, e.g. salpeter:1")
            return cls.salpeter(*vals)
        raise DomainError(f"unknown symbol family {name!r}")

    def __call__(self, p):
        p = np.asarray(p, dtype=float)
        if self.tag == "gaussian":
            return self.D * p * p
        if self.tag == "stable":
            return self.intensity * np.abs(p) ** self.mu
        mc = self.m * self.c
        if mc == 0:
            return self.c * np.abs(p)
        # sqrt(p^2+a^2) - a written without cancellation
        return self.c * p * p / (np.sqrt(p * p + mc * mc) + mc)

    def positive_part(self, p):
        """Strictly positive operator underlying the symbol (adds back m c^2)."""
        if self.tag == "salpeter":
            p = np.asarray(p, dtype=float)
            return self.c * np.sqrt(p * p + (self.m * self.c) ** 2)
        if self.tag == "stable" and self.mu == 1:
            return self.intensity * np.abs(np.asarray(p, dtype=float))
        raise DomainError("energy normalization is defined for salpeter and cauchy symbols only")

    def label(self) -> str:
        if self.tag == "gaussian":
            return f"gaussian:{self.D:g}"
        if self.tag == "stable":
            return f"stable:{self.mu:g}:{self.intensity:g}"
        return f"salpeter:{self.m:g}:{self.c:g}"


@dataclass(frozen=True)
class LevyMeasure:
    """Symmetric jump intensity nu(y) with a small-jump cutoff radius.

    ``stable`` carries the index mu and an intensity factor; ``relativistic``
    carries mass m and speed c. ``cutoff=None`` means one grid spacing.
    """

    family: str
    mu: float = 1.0
    m: float = 0.0
    n: int = 1
    intensity: float = 1.0
    c: float = 1.0
    cutoff: float | None = None

    def __post_init__(self):
        if self.family not in ("stable", "relativistic"):
            raise DomainError(f"unknown Levy family {self.family!r}")
        if self.family == "stable" and not 0 < self.mu < 2:
            raise DomainError(f"stability index must lie in (0, 2), got {self.mu}")
        if self.m < 0:
            raise DomainError("mass must be non-negative")
        if self.n not in (1, 3):
            raise DomainError("only dimensions 1 and 3 are supported")
        if self.cutoff is not None and self.cutoff <= 0:
            raise DomainError("small-jump cutoff must be positive")

    @classmethod
    def stable(cls, mu: float, n: int = 1, intensity: float = 1.0, cutoff=None) -> "LevyMeasure":
        return cls("stable", mu=mu, n=n, intensity=intensity, cutoff=cutoff)

    @classmethod
    def relativistic(cls, m: float, n: int = 1, c: float = 1.0, cutoff=None) -> "LevyMeasure":
        return cls("relativistic", m=m, n=n, c=c, cutoff=cutoff)

    @property
    def is_power_law(self) -> bool:
        return self.family == "stable" or self.m * self.c == 0

    @property
    def index(self) -> float:
        return self.mu if self.family == "stable" else 1.0

    @property
    def power_coefficient(self) -> float:
        """C in nu(y) = C |y|^(-mu-n) for the power-law families."""
        mu, n = self.index, self.n
        coef = 2**mu * math.gamma((mu + n) / 2) / (math.pi ** (n / 2) * abs(math.gamma(-mu / 2)))
        scale = self.intensity if self.family == "stable" else self.c
        return scale * coef

    def symbol(self) -> MultiplierSymbol:
        if self.family == "stable":
            return MultiplierSymbol.stable(self.mu, self.intensity)
        return MultiplierSymbol.salpeter(self.m, self.c)

    def __call__(self, y):
        return levy_measure_density(self, y)


def levy_measure_density(measure: LevyMeasure, y):
    """Jump density nu(y); singular and undefined at y = 0."""
    y = np.abs(np.asarray(y, dtype=float))
    if np.any(y == 0):
        raise DomainError("Levy density is not defined at zero displacement")
    n = measure.n
    if measure.is_power_law:
        return measure.power_coefficient * y ** (-measure.index - n)
    a = measure.m * measure.c
    order = (n + 1) / 2
    with np.errstate(under="ignore"):
        kv = specfun.bessel_k(order, a * y)
    return measure.c * 2 * (a / (2 * math.pi)) ** order * kv / y**order


def _periodic_images(measure: LevyMeasure, y, period: float):
    """Sum of nu(y + k period) over k != 0, for 0 < y <= period/2."""
    y = np.asarray(y, dtype=float)
    if measure.is_power_law:
        s = 1 + measure.index
        q = y / period
        return measure.power_coefficient * (_sp.zeta(s, 1 + q) + _sp.zeta(s, 1 - q)) * period ** (-s)
    a = measure.m * measure.c
    kmax = int(min(np.ceil(45.0 / (a * period)) + 2, 20000))
    out = np.zeros_like(y)
    for k in range(1, kmax + 1):
        out += levy_measure_density(measure, y + k * period) + levy_measure_density(measure, k * period - y)
    return out


def _taylor_moments(measure: LevyMeasure, delta: float) -> tuple[float, float]:
    """int_0^delta y^2 nu dy and int_0^delta y^4 nu dy."""
    if measure.is_power_law:
        C, mu = measure.power_coefficient, measure.index
        return C * delta ** (2 - mu) / (2 - mu), C * delta ** (4 - mu) / (4 - mu)
    m2 = integrate.quad(lambda y: y * y * levy_measure_density(measure, y), 0, delta, epsabs=1e-300, epsrel=1e-12, limit=200)[0]
    m4 = integrate.quad(lambda y: y**4 * levy_measure_density(measure, y), 0, delta, epsabs=1e-300, epsrel=1e-12, limit=200)[0]
    return m2, m4


@lru_cache(maxsize=32)
def _jump_nodes(delta: float, half_period: float, panel: float, order: int):
    """Gauss-Legendre nodes on [delta, half_period], geometrically graded from delta."""
    edges = [delta]
    while edges[-1] < half_period:
        step = min(edges[-1], panel)
        edges.append(min(edges[-1] + step, half_period))
    gx, gw = np.polynomial.legendre.leggauss(order)
    a = np.array(edges[:-1])
    b = np.array(edges[1:])
    nodes = (0.5 * (b - a)[:, None] * gx[None, :] + 0.5 * (a + b)[:, None]).ravel()
    weights = (0.5 * (b - a)[:, None] * gw[None, :]).ravel()
    return nodes, weights


def apply_levy_generator(f: WaveField, measure: LevyMeasure, panel: float = 0.5, order: int = 16) -> WaveField:
    """Jump-integral action int [f(x+y) - f(x)] nu(dy) on the periodic grid.

    Jumps are paired as +y/-y (principal value); jumps shorter than the cutoff
    use the Taylor closure f'' y^2/2 + f'''' y^4/24 integrated against nu.
    Translations are spectral, so f(x +- y) is the trigonometric interpolant
    and the long-jump mass that wraps around the box is accounted for by
    periodizing nu.
    """
    grid = f.grid
    if not isinstance(grid, Grid1D):
        raise DomainError("the jump integral is implemented on 1D grids")
    if measure.n != 1:
        raise DomainError("1D grid requires a 1D Levy measure")
    delta = measure.cutoff if measure.cutoff is not None else grid.dx
    if not 0 < delta <= 10 * grid.dx + 1e-15:
        raise DomainError(f"cutoff must lie in (0, 10 dx], got {delta}")
    values = f.values
    spec = grid.fft(values)
    p = grid.p
    L = grid.L

    m2, m4 = _taylor_moments(measure, delta)
    d2 = grid.ifft(spec * (-(p**2)))
    d4 = grid.ifft(spec * p**4)
    acc = m2 * d2 + m4 / 12 * d4

    ys, ws = _jump_nodes(float(delta), float(L), panel, order)
    nu = levy_measure_density(measure, ys) + _periodic_images(measure, ys, 2 * L)
    # image contributions are smooth on [0, delta], integrate them directly
    gx, gw = np.polynomial.legendre.leggauss(order)
    ys0 = 0.5 * delta * (gx + 1)
    ws0 = 0.5 * delta * gw
    nu0 = _periodic_images(measure, ys0, 2 * L)
    all_y = np.concatenate([ys0, ys])
    all_w = np.concatenate([ws0 * nu0, ws * nu])
    for y, w in zip(all_y, all_w):
        acc = acc + w * grid.ifft(spec * (2 * np.cos(p * y) - 2))
    out = acc.real if np.isrealobj(values) else acc
    return f.with_values(out)


def levy_symbol_quadrature(measure: LevyMeasure, p: float) -> float:
    """F(p) = -int (exp(ipy) - 1) nu(dy) by direct 1D quadrature."""
    if measure.n != 1:
        raise DomainError("quadrature route implemented for n = 1")
    p = abs(float(p))
    if p == 0:
        return 0.0

    def bracket(y):
        # (1 - cos py)/y^2, smooth through y = 0
        py = p * y
        return p * p * 0.5 * (math.sin(py / 2) / (py / 2)) ** 2 if py else p * p * 0.5

    a = 1.0
    if measure.is_power_law:
        coef, alpha = measure.power_coefficient, 1 - measure.index
        head = coef * integrate.quad(bracket, 0, a, weight="alg", wvar=(alpha, 0), epsabs=0, epsrel=1e-12, limit=400)[0]
    else:
        y2nu = lambda y: y * y * float(levy_measure_density(measure, y)) if y > 0 else measure.c / math.pi
        head = integrate.quad(lambda y: bracket(y) * y2nu(y), 0, a, epsabs=0, epsrel=1e-12, limit=400)[0]
    nu_tail = lambda y: float(levy_measure_density(measure, y))
    if measure.is_power_law:
        mass = measure.power_coefficient / measure.index * a ** (-measure.index)
    else:
        mass = integrate.quad(nu_tail, a, np.inf, epsabs=0, epsrel=1e-12, limit=400)[0]
    osc = integrate.quad(nu_tail, a, np.inf, weight="cos", wvar=p, limlst=200)[0]
    return 2 * (head + mass - osc)


def _spectral_tail_mass(spec: np.ndarray) -> float:
    a = np.abs(spec)
    n = a.size
    edge = a[n // 2 - n // 16 : n // 2 + n // 16 + 1]
    return float(edge.max() / max(a.max(), 1e-300))


def apply_symbol(psi: WaveField, F: MultiplierSymbol, tail_tol: float = 1e-12) -> WaveField:
    """F(p^) psi by multiplication of the discrete spectrum."""
    grid = psi.grid
    if isinstance(grid, Grid1D):
        spec = grid.fft(psi.values)
        tail = _spectral_tail_mass(spec)
        if tail > tail_tol:
            warnings.warn(f"spectrum not resolved: relative tail amplitude {tail:.2e}", GridWarning, stacklevel=2)
        out = grid.ifft(spec * F(grid.p))
        return psi.with_values(out.real if np.isrealobj(psi.values) else out)
    return psi.with_values(grid.apply_multiplier(psi.values, F(grid.k)))


def _check_zero_mode(f: WaveField, tol: float, what: str):
    grid = f.grid
    zero = abs(grid.integrate(f.values))
    scale = math.sqrt(max(f.norm_sq, 1e-300)) * math.sqrt(2 * grid.L)
    if zero > tol * scale:
        raise DomainError(f"{what} requires a vanishing zero mode; relative zero-mode mass {zero / scale:.3e}")


def inverse_gradient(g: WaveField, mean_tol: float = 1e-10) -> WaveField:
    """Zero-mean antiderivative: spectrum g~(k)/(ik) with the zero mode removed."""
    grid = g.grid
    _check_zero_mode(g, mean_tol, "inverse gradient")
    p = grid.p
    mult = np.zeros_like(p, dtype=complex)
    nz = p != 0
    mult[nz] = 1 / (1j * p[nz])
    mult[grid.n // 2] = 0
    out = grid.ifft(grid.fft(g.values) * mult)
    return g.with_values(out.real if np.isrealobj(g.values) else out)


def fractional_power(f: WaveField, s: float, mean_tol: float = 1e-10) -> WaveField:
    """|Delta|^s f, i.e. spectrum multiplied by |k|^(2s); s = 1 gives -Laplacian."""
    grid = f.grid
    p = np.abs(grid.p)
    if s < 0:
        _check_zero_mode(f, mean_tol, "a negative fractional power")
        mult = np.zeros_like(p)
        mult[p > 0] = p[p > 0] ** (2 * s)
    else:
        mult = p ** (2 * s)
    out = grid.ifft(grid.fft(f.values) * mult)
    return f.with_values(out.real if np.isrealobj(f.values) else out)


def grad_inv_fractional(rho: WaveField, mu: float, intensity: float = 1.0) -> WaveField:
    """Current j with -dj/dx = -intensity |Delta|^(mu/2) rho, for mu in [1, 2).

    Spectrum -i sgn(k) |k|^(mu-1) rho~(k). For mu < 1 the flux would need
    |k|^(mu-1), singular at k = 0, so that regime is refused.
    """
    if not 1 <= mu < 2:
        raise UnsupportedRegimeError(f"no gradient form of the fractional flux for mu={mu}; need 1 <= mu < 2")
    grid = rho.grid
    p = grid.p
    mult = -1j * np.sign(p) * np.abs(p) ** (mu - 1) * intensity
    mult[grid.n // 2] = 0
    out = grid.ifft(grid.fft(rho.values) * mult)
    return rho.with_values(out.real)


def ground_state_potential(sqrt_rho: WaveField, F: MultiplierSymbol, intensity: float = 1.0, two_m_d2: float = 1.0):
    """Potential for which sqrt_rho is a zero-energy ground state.

    Gaussian family: 2mD^2 Laplacian(sqrt_rho)/sqrt_rho. Nonlocal families:
    -intensity (F sqrt_rho)/sqrt_rho.
    """
    phi = np.real(sqrt_rho.values)
    if np.any(phi <= 0):
        raise DomainError("ground-state amplitude must be strictly positive on the grid")
    grid = sqrt_rho.grid
    if F.tag == "gaussian":
        return two_m_d2 * grid.derivative(phi, 2) / phi
    return -intensity * apply_symbol(sqrt_rho.with_values(phi), F).values / phi


def drift_to_potential(b, grid: Grid1D, mass: float, D: float, grad_b=None):
    """V = 2 m D^2 (b^2/(2D) + b'); b' spectral unless supplied."""
    b = np.asarray(b, dtype=float)
    db = grid.derivative(b, 1) if grad_b is None else np.asarray(grad_b, dtype=float)
    return 2 * mass * D**2 * (b * b / (2 * D) + db)


def fokker_planck_rhs(rho, b, grid: Grid1D, D: float):
    """D rho'' - (b rho)'."""
    return D * grid.derivative(rho, 2) - grid.derivative(b * rho, 1)


def mean_energy_normalize(phi: WaveField, F: MultiplierSymbol) -> tuple[WaveField, float]:
    """Map phi to Phi = E^(-1/2) P^(1/2) phi with E = <phi, P phi>.

    P is sqrt(p^2 + m^2) (times c) for salpeter and |p| for cauchy; the square
    root of P is the quarter power of m^2 - Laplacian.
    """
    grid = phi.grid
    P = F.positive_part(grid.p)
    if F.tag == "stable":
        _check_zero_mode(phi, 1e-10, "energy normalization with the cauchy symbol")
    spec = grid.fft(phi.values)
    Pphi = grid.ifft(spec * P)
    E = float(np.real(grid.integrate(np.conj(phi.values) * Pphi)))
    if E <= 0:
        raise DomainError("mean energy must be positive")
    Phi = grid.ifft(spec * np.sqrt(P)) / math.sqrt(E)
    return phi.with_values(Phi), E


def mean_energy_restore(Phi: WaveField, F: MultiplierSymbol, E: float) -> WaveField:
    """Inverse map phi = sqrt(E) P^(-1/2) Phi."""
    grid = Phi.grid
    P = F.positive_part(grid.p)
    mult = np.zeros_like(P)
    mult[P > 0] = P[P > 0] ** -0.5
    return Phi.with_values(math.sqrt(E) * grid.ifft(grid.fft(Phi.values) * mult))
