"""Sample lattices, their spectral duals and wave fields living on them."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from scipy import fft as sfft

from .errors import DomainError

SQRT_2PI = math.sqrt(2 * math.pi)


@dataclass(frozen=True)
class Grid1D:
    """Periodic lattice x_j = -L + j dx on [-L, L) with dx = 2L/n."""

    n: int
    L: float

    def __post_init__(self):
        if self.n < 64 or self.n & (self.n - 1):
            raise DomainError(f"node count must be a power of two >= 64, got {self.n}")
        if self.L <= 0:
            raise DomainError("box half-length must be positive")

    @property
    def dx(self) -> float:
        return 2 * self.L / self.n

    @property
    def dp(self) -> float:
        return math.pi / self.L

    @cached_property
    def x(self) -> np.ndarray:
        return -self.L + np.arange(self.n) * self.dx

    @cached_property
    def p(self) -> np.ndarray:
        """Angular frequencies in FFT order."""
        return 2 * math.pi * np.fft.fftfreq(self.n, self.dx)

    @property
    def p_max(self) -> float:
        return math.pi / self.dx

    @cached_property
    def _phase(self) -> np.ndarray:
        return np.exp(-1j * self.p * self.x[0])

    def fft(self, values) -> np.ndarray:
        """Raw FFT; pair with :meth:`ifft` for multiplier application."""
        return sfft.fft(values, workers=_workers())

    def ifft(self, spectrum) -> np.ndarray:
        return sfft.ifft(spectrum, workers=_workers())

    def to_dual(self, values) -> np.ndarray:
        """Samples of (2 pi)^(-1/2) int f(x) exp(-ipx) dx at :attr:`p`."""
        return self.dx / SQRT_2PI * self._phase * self.fft(values)

    def from_dual(self, spectrum) -> np.ndarray:
        return SQRT_2PI / self.dx * self.ifft(spectrum / self._phase)

    def apply_multiplier(self, values, symbol_values) -> np.ndarray:
        out = self.ifft(self.fft(values) * symbol_values)
        if np.isrealobj(values) and np.isrealobj(symbol_values):
            return out.real
        return out

    def integrate(self, values) -> complex | float:
        return np.sum(values) * self.dx

    def derivative(self, values, order: int = 1) -> np.ndarray:
        mult = (1j * self.p) ** order
        if order % 2:
            mult[self.n // 2] = 0.0
        out = self.ifft(self.fft(values) * mult)
        return out.real if np.isrealobj(values) else out


@dataclass(frozen=True)
class RadialGrid3D:
    """Radial nodes r_j = j dr, j = 1..n_r, with r = R = (n_r + 1) dr excluded.

    Radial fields are transformed through the sine transform of r f(r), which is
    the odd-extension trick for spherically symmetric 3D functions.
    """

    n_r: int
    R: float

    def __post_init__(self):
        if self.n_r < 64:
            raise DomainError("radial grid needs at least 64 nodes")
        if self.R <= 0:
            raise DomainError("radius cap must be positive")

    @property
    def dr(self) -> float:
        return self.R / (self.n_r + 1)

    @cached_property
    def r(self) -> np.ndarray:
        return np.arange(1, self.n_r + 1) * self.dr

    @cached_property
    def k(self) -> np.ndarray:
        return np.arange(1, self.n_r + 1) * (math.pi / self.R)

    def sine(self, u) -> np.ndarray:
        return sfft.dst(u, type=1, workers=_workers())

    def isine(self, v) -> np.ndarray:
        return sfft.idst(v, type=1, workers=_workers())

    def to_dual(self, values) -> np.ndarray:
        """3D Fourier transform (2 pi)^(-3/2) int f exp(-ik.x) d^3x sampled at :attr:`k`."""
        u = self.r * np.asarray(values)
        return math.sqrt(2 / math.pi) * (self.dr / 2) * self._sine_any(u) / self.k

    def from_dual(self, spectrum) -> np.ndarray:
        v = self.k * np.asarray(spectrum)
        dk = math.pi / self.R
        return math.sqrt(2 / math.pi) * (dk / 2) * self._sine_any(v) / self.r

    def _sine_any(self, u) -> np.ndarray:
        u = np.asarray(u)
        if np.iscomplexobj(u):
            return self.sine(u.real) + 1j * self.sine(u.imag)
        return self.sine(u)

    def apply_multiplier(self, values, symbol_values) -> np.ndarray:
        u = self.r * np.asarray(values)
        if np.iscomplexobj(u) or np.iscomplexobj(symbol_values):
            s = (self.sine(u.real) + 1j * self.sine(np.imag(u))) * symbol_values
            out = self.isine(s.real) + 1j * self.isine(s.imag)
        else:
            out = self.isine(self.sine(u) * symbol_values)
        return out / self.r

    def integrate(self, values) -> complex | float:
        return 4 * math.pi * np.sum(self.r**2 * values) * self.dr


@dataclass
class WaveField:
    """Complex samples of a wave function (or real density) on a grid."""

    grid: Grid1D | RadialGrid3D
    values: np.ndarray
    norm_sq: float = field(init=False)

    def __post_init__(self):
        self.values = np.asarray(self.values)
        if self.values.shape != self.grid_coords.shape:
            raise DomainError("values do not match the grid size")
        self.norm_sq = float(np.real(self.grid.integrate(np.abs(self.values) ** 2)))

    @property
    def grid_coords(self) -> np.ndarray:
        return self.grid.x if isinstance(self.grid, Grid1D) else self.grid.r

    @property
    def density(self) -> np.ndarray:
        return np.abs(self.values) ** 2

    def normalized(self) -> "WaveField":
        return WaveField(self.grid, self.values / math.sqrt(self.norm_sq))

    def with_values(self, values) -> "WaveField":
        return WaveField(self.grid, values)


def _workers() -> int | None:
    from .config import thread_count

    return thread_count()
