"""Pseudo-spectral unitary and dissipative evolution, confining transport,
closed-form wave-packet solutions and mode analysis."""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import special as _sp

from . import specfun
from .errors import DomainError
from .generators import LevyMeasure, MultiplierSymbol, apply_levy_generator, fractional_power
from .grids import Grid1D, RadialGrid3D, WaveField

REFERENCE_GRID = Grid1D(32768, 1600.0)


def _freqs(grid):
    return grid.p if isinstance(grid, Grid1D) else grid.k


def unitary_multiplier(F: MultiplierSymbol, p, t):
    return np.exp(-1j * F(p) * t)


def dissipative_multiplier(F: MultiplierSymbol, p, t):
    return np.exp(-F(p) * t)


def evolve_unitary(psi: WaveField, F: MultiplierSymbol, t: float) -> WaveField:
    """exp(-i t F(p^)) psi."""
    if t == 0:
        return psi.with_values(np.array(psi.values, dtype=complex))
    mult = unitary_multiplier(F, _freqs(psi.grid), t)
    return psi.with_values(psi.grid.apply_multiplier(np.asarray(psi.values, dtype=complex), mult))


def evolve_dissipative(rho: WaveField, F: MultiplierSymbol, t: float) -> WaveField:
    """exp(-t F(p^)) rho; convolution with the matching semigroup kernel."""
    if t < 0:
        raise DomainError("dissipative evolution runs forward in time only")
    mult = dissipative_multiplier(F, _freqs(rho.grid), t)
    return rho.with_values(rho.grid.apply_multiplier(rho.values, mult))


def master_rhs(rho: WaveField, measure: LevyMeasure) -> WaveField:
    """Master-equation right side int [rho(x+y) - rho(x)] nu(dy)."""
    return apply_levy_generator(rho, measure)


# closed-form solutions ---------------------------------------------------


def quad_lorentz_wave(x, t, gamma=1.0):
    """sqrt(2 gamma/pi) (gamma + it)/((gamma + it)^2 + x^2)."""
    x = np.asarray(x, dtype=float)
    z = gamma + 1j * t
    return math.sqrt(2 * gamma / math.pi) * z / (z * z + x * x)


def quad_lorentz_density(x, t, gamma=1.0):
    x = np.asarray(x, dtype=float)
    g2, t2 = gamma * gamma, t * t
    return (2 * gamma / math.pi) * (g2 + t2) / (x**4 + 2 * x * x * (g2 - t2) + (g2 + t2) ** 2)


def gaussian_wave(x, t, width=1.0, c=1.0):
    """Cauchy evolution of (2 pi w^2)^(-1/4) exp(-x^2/(4 w^2)) in Dawson form."""
    x = np.asarray(x, dtype=float)
    s = width
    a = (c * t - x) / s
    b = (c * t + x) / s
    root_pi = math.sqrt(math.pi)
    re = 0.5 * root_pi * (np.exp(-a * a / 4) + np.exp(-b * b / 4))
    im = -(specfun.dawson(a / 2) + specfun.dawson(b / 2))
    pref = (2 * s * s / math.pi) ** 0.25 / (s * math.sqrt(2 * math.pi))
    return pref * (re + 1j * im)


def gaussian_wave_erfi_form(x, t):
    """Unit-width packet written with erfi against Gaussian envelopes.

    Each erfi sits next to its decaying Gaussian and goes through
    :func:`specfun.erfi_scaled`, so nothing overflows for large |x +- t|.
    """
    x = np.asarray(x, dtype=float)
    pref = (2 / math.pi) ** 0.25 / (2 * math.sqrt(2))
    env = np.exp(-((x + t) ** 2) / 4) + np.exp(-((x - t) ** 2) / 4)
    odd = specfun.erfi_scaled((x - t) / 2, (t - x) / 2) + specfun.erfi_scaled((x + t) / 2, (t + x) / 2)
    return pref * (env - 1j * odd)


def salpeter_bessel_wave(x, t, gamma=1.0, m=1.0):
    """Salpeter (c = 1) packet from the substitution gamma -> gamma + it.

    Includes the phase exp(imt) that comes from subtracting the rest energy.
    """
    if m <= 0:
        return quad_lorentz_wave(x, t, gamma)
    x = np.asarray(x, dtype=float)
    z = gamma + 1j * t
    rad = np.sqrt(x * x + z * z)
    norm = math.sqrt(m / (math.pi * float(specfun.bessel_k(1, 2 * m * gamma))))
    # K1(m rad) = kve(m rad) exp(-m rad)
    return norm * np.exp(1j * m * t) * z * _sp.kve(1, m * rad) * np.exp(-m * rad) / rad


def radial3d_wave(r, t, gamma=1.0):
    """3D radial Cauchy packet (sqrt(2 gamma))^3/pi (gamma + it)/(r^2 + (gamma + it)^2)^2."""
    r = np.asarray(r, dtype=float)
    z = gamma + 1j * t
    return (2 * gamma) ** 1.5 / math.pi * z / (r * r + z * z) ** 2


def radial3d_density(r, t):
    """Unit-scale 3D pdf (8/pi^2)(1 + t^2)/((r^2 - t^2 + 1)^2 + 4 t^2)^2."""
    r = np.asarray(r, dtype=float)
    return (8 / math.pi**2) * (1 + t * t) / ((r * r - t * t + 1) ** 2 + 4 * t * t) ** 2


def cauchy_density(x, t, gamma=1.0, c=1.0):
    """Semigroup (dissipative) Cauchy solution with lambda = gamma + c t."""
    lam = gamma + c * t
    x = np.asarray(x, dtype=float)
    return lam / (math.pi * (lam * lam + x * x))


ORACLES = {
    "quad_lorentz": lambda x, t, p: quad_lorentz_wave(x, t, p.get("gamma", 1.0)),
    "gaussian": lambda x, t, p: gaussian_wave(x, t, p.get("width", 1.0)),
    "salpeter_bessel": lambda x, t, p: salpeter_bessel_wave(x, t, p.get("gamma", 1.0), p.get("m", 1.0)),
    "radial3d": lambda x, t, p: radial3d_wave(x, t, p.get("gamma", 1.0)),
    "lorentz": lambda x, t, p: cauchy_density(x, t, p.get("gamma", 1.0)),
}


def oracle_solution(tag: str, x, t: float, **params):
    """Closed-form psi(x, t) for a named scenario.

    ``lorentz`` is the semigroup scenario and returns the density instead.
    """
    if tag not in ORACLES:
        raise DomainError(f"no closed form for scenario {tag!r}")
    return ORACLES[tag](x, t, params)


def pdf_modes(gamma: float, t: float) -> list[tuple[float, str]]:
    """Critical points of the quadratic-Lorentz density with their type.

    Unimodal (single maximum at 0) while t <= gamma; beyond that 0 becomes a
    minimum flanked by maxima at +-sqrt(t^2 - gamma^2).
    """
    if gamma <= 0:
        raise DomainError("gamma must be positive")
    d = t * t - gamma * gamma
    if d <= 0:
        return [(0.0, "max")]
    s = math.sqrt(d)
    return [(-s, "max"), (0.0, "min"), (s, "max")]


# initial data ------------------------------------------------------------

INITIAL_KINDS = ("lorentz", "quad_lorentz", "gaussian", "salpeter_bessel", "radial3d", "file")


@dataclass
class Scenario:
    """Named initial datum, generator symbol and sample times."""

    initial: str
    params: dict
    symbol: MultiplierSymbol
    times: list[float]
    n: int = 32768
    L: float = 1600.0
    mode: str = "unitary"
    path: str | None = None
    norm_constant: float = field(init=False, default=1.0)

    def __post_init__(self):
        if self.initial not in INITIAL_KINDS:
            raise DomainError(f"unknown initial datum {self.initial!r}")
        if self.mode not in ("unitary", "dissipative"):
            raise DomainError(f"unknown evolution mode {self.mode!r}")

    @property
    def radial(self) -> bool:
        return self.initial == "radial3d"

    def grid(self):
        return RadialGrid3D(self.n, self.L) if self.radial else Grid1D(self.n, self.L)

    def initial_field(self) -> WaveField:
        """Initial datum on the grid, renormalized numerically.

        The factor applied is kept in :attr:`norm_constant`.
        """
        grid = self.grid()
        xs = grid.r if self.radial else grid.x
        if self.initial == "file":
            if not self.path:
                raise DomainError("file initial datum needs a path")
            values = initial_from_csv(self.path, grid)
        elif self.initial == "lorentz":
            g = self.params.get("gamma", 1.0)
            values = cauchy_density(xs, 0.0, g) if self.mode == "dissipative" else np.sqrt(cauchy_density(xs, 0.0, g))
        else:
            values = oracle_solution(self.initial, xs, 0.0, **self.params)
        w = WaveField(grid, values)
        if self.mode == "dissipative":
            mass = float(np.real(grid.integrate(w.values)))
            self.norm_constant = 1 / mass
            return w.with_values(w.values / mass)
        self.norm_constant = 1 / math.sqrt(w.norm_sq)
        return w.normalized()

    def run(self):
        """Yield (t, field) for each sample time."""
        psi0 = self.initial_field()
        for t in self.times:
            if self.mode == "unitary":
                yield t, evolve_unitary(psi0, self.symbol, t)
            else:
                yield t, evolve_dissipative(psi0, self.symbol, t)


def parse_initial(text: str) -> tuple[str, dict]:
    """``quad_lorentz:1``, ``gaussian:1``, ``salpeter_bessel:1:2``, ``file:path``."""
    name, _, rest = text.partition(":")
    if name == "file":
        return name, {"path": rest}
    args = [a for a in rest.split(":") if a]
    try:
        vals = [float(a) for a in args]
    except ValueError as exc:
        raise DomainError(f"bad initial-datum parameters in {text!r}") from exc
    keys = {
        "lorentz": ["gamma"],
        "quad_lorentz": ["gamma"],
        "gaussian": ["width"],
        "salpeter_bessel": ["gamma", "m"],
        "radial3d": ["gamma"],
    }
    if name not in keys:
        raise DomainError(f"unknown initial datum {name!r}")
    if len(vals) > len(keys[name]):
        raise DomainError(f"too many parameters for {name}")
    return name, dict(zip(keys[name], vals))


def initial_from_csv(path: str, grid) -> np.ndarray:
    """Read uniformly spaced (x, Re, Im) rows and resample band-limited onto ``grid``.

    Points outside the sampled range are set to zero.
    """
    rows = []
    with open(path, newline="") as fh:
        for row in csv.reader(fh):
            if not row or row[0].strip().startswith("#"):
                continue
            try:
                rows.append([float(v) for v in row[:3]])
            except ValueError:
                continue
    if len(rows) < 4:
        raise DomainError(f"initial-data file {path} has fewer than 4 numeric rows")
    data = np.array(rows)
    xs = data[:, 0]
    vals = data[:, 1] + 1j * (data[:, 2] if data.shape[1] > 2 else 0.0)
    h = np.diff(xs)
    if np.any(h <= 0) or np.ptp(h) > 1e-9 * max(abs(h[0]), 1e-300):
        raise DomainError("initial-data abscissae must be uniformly increasing")
    target = grid.r if isinstance(grid, RadialGrid3D) else grid.x
    out = np.zeros(target.shape, dtype=complex)
    inside = (target >= xs[0]) & (target <= xs[-1])
    # Whittaker-Shannon interpolation from the uniform samples
    dx = h[0]
    for i in np.flatnonzero(inside):
        out[i] = np.sum(vals * np.sinc((target[i] - xs) / dx))
    return out


# confining transport -----------------------------------------------------


def _as_array(f):
    return f.values if isinstance(f, WaveField) else np.asarray(f)


def _frac(grid, values, mu):
    return fractional_power(WaveField(grid, values), mu / 2).values


def confining_rhs(rho: WaveField, sqrt_rho_star, mu: float, intensity: float = 1.0) -> WaveField:
    """lambda [ -phi A(rho/phi) + rho A(phi)/phi ], A = |Lap|^(mu/2), phi = sqrt(rho*)."""
    grid = rho.grid
    phi = np.real(_as_array(sqrt_rho_star))
    if np.any(phi <= 0):
        raise DomainError("sqrt of the target density must be strictly positive")
    r = np.real(rho.values)
    out = intensity * (-phi * _frac(grid, r / phi, mu) + r * _frac(grid, phi, mu) / phi)
    return rho.with_values(out)


def confining_rhs_potential_form(rho: WaveField, Phi, mu: float, intensity: float = 1.0) -> WaveField:
    """Same generator written with exp(+-Phi) weights for an arbitrary Phi(x)."""
    grid = rho.grid
    Phi = np.real(_as_array(Phi))
    r = np.real(rho.values)
    ep, em = np.exp(Phi), np.exp(-Phi)
    out = intensity * (-ep * _frac(grid, em * r, mu) + r * em * _frac(grid, ep, mu))
    return rho.with_values(out)


def fractional_fp_rhs(rho: WaveField, drift, mu: float, intensity: float = 1.0) -> WaveField:
    """-(b rho)' - lambda |Lap|^(mu/2) rho, the naive fractional Fokker-Planck form."""
    grid = rho.grid
    r = np.real(rho.values)
    b = np.real(_as_array(drift))
    return rho.with_values(-grid.derivative(b * r, 1) - intensity * _frac(grid, r, mu))


def confining_step(rho: WaveField, sqrt_rho_star, mu: float, intensity: float, dt: float, cfl: float = 0.1) -> WaveField:
    """One explicit Euler step of the confining transport equation.

    Refuses steps with dt |rhs|_inf > cfl |rho|_inf or beyond the explicit
    stability bound dt lambda p_max^mu <= 1.
    """
    if dt <= 0:
        raise DomainError("time step must be positive")
    grid = rho.grid
    if dt * intensity * grid.p_max**mu > 1:
        raise DomainError(f"step dt={dt} exceeds the explicit stability bound {1 / (intensity * grid.p_max**mu):.3e}")
    rhs = confining_rhs(rho, sqrt_rho_star, mu, intensity).values
    if dt * np.max(np.abs(rhs)) > cfl * np.max(np.abs(rho.values)):
        raise DomainError(f"step dt={dt} violates the CFL guard")
    return rho.with_values(np.real(rho.values) + dt * rhs)


# 3D radial transforms ----------------------------------------------------


def radial_fourier(values, grid: RadialGrid3D, direction: str = "forward", tail_tol: float = 1e-12):
    """3D Fourier transform of a radial function via sine transforms of r f(r)."""
    values = np.asarray(values)
    if direction == "forward":
        edge = abs(grid.r[-1] * values[-1])
        if edge > tail_tol * max(np.max(np.abs(grid.r * values)), 1e-300):
            import warnings

            from .errors import GridWarning

            warnings.warn(f"radial field not decayed at R: r f(R) = {edge:.2e}", GridWarning, stacklevel=2)
        return grid.to_dual(values)
    if direction == "inverse":
        return grid.from_dual(values)
    raise DomainError("direction must be 'forward' or 'inverse'")
