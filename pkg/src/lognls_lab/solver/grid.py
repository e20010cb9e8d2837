"""
Uniform periodic grids over the centered box [-L/2, L/2)^d and fields on them.

Values are stored as an n^d array with axis order (x_1, ..., x_d); its C-order
flattening is the row-major layout used by the binary field format.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Callable

import numpy as np

from ..infra.errors import ConfigInvalid, GridMismatch, NonFiniteSample
from ..types import ComplexArray, RealArray

MIN_POINTS = 16
BOUNDARY_CELLS = 4


@dataclass(frozen=True)
class Grid:
    dim: int
    extent: float
    n: int

    def __post_init__(self) -> None:
        if self.dim not in (1, 2, 3):
            raise ConfigInvalid("grid dim must be 1, 2 or 3", dim=self.dim)
        if self.n < MIN_POINTS or self.n & (self.n - 1):
            raise ConfigInvalid("points per dim must be a power of two >= 16", n=self.n)
        if not self.extent > 0:
            raise ConfigInvalid("grid extent must be positive", extent=self.extent)

    @property
    def spacing(self) -> float:
        return self.extent / self.n

    @property
    def cell(self) -> float:
        return self.spacing**self.dim

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.n,) * self.dim

    @cached_property
    def axis(self) -> RealArray:
        return -0.5 * self.extent + self.spacing * np.arange(self.n)

    @cached_property
    def mesh(self) -> tuple[RealArray, ...]:
        return tuple(np.meshgrid(*([self.axis] * self.dim), indexing="ij"))

    @cached_property
    def points(self) -> RealArray:
        """Node coordinates with shape (n, ..., n, d)."""
        return np.stack(self.mesh, axis=-1)

    @cached_property
    def r2(self) -> RealArray:
        return sum(m * m for m in self.mesh)

    @cached_property
    def wavenumbers(self) -> RealArray:
        """Per-axis angular frequencies 2 pi m / L in FFT order."""
        return 2.0 * np.pi * np.fft.fftfreq(self.n, d=self.spacing)

    @cached_property
    def k_mesh(self) -> tuple[RealArray, ...]:
        return tuple(np.meshgrid(*([self.wavenumbers] * self.dim), indexing="ij"))

    @cached_property
    def k2(self) -> RealArray:
        return sum(k * k for k in self.k_mesh)

    @cached_property
    def deriv_k(self) -> tuple[RealArray, ...]:
        """First-derivative symbols with the Nyquist mode zeroed."""
        k = self.wavenumbers.copy()
        k[self.n // 2] = 0.0
        return tuple(np.meshgrid(*([k] * self.dim), indexing="ij"))

    @cached_property
    def high_band(self) -> np.ndarray:
        """Modes with some |k_i| above two thirds of the Nyquist wavenumber."""
        cut = (2.0 / 3.0) * np.pi / self.spacing
        return np.any(np.stack([np.abs(k) > cut for k in self.k_mesh]), axis=0)

    @cached_property
    def boundary_band(self) -> np.ndarray:
        edge = 0.5 * self.extent - BOUNDARY_CELLS * self.spacing
        return np.any(np.stack([np.abs(m) >= edge for m in self.mesh]), axis=0)

    def contains(self, center: RealArray, margin: float) -> bool:
        return bool(np.all(np.abs(np.asarray(center)) + margin <= 0.5 * self.extent))

    @classmethod
    def covering(cls, dim: int, radius: float, max_spacing: float = 0.08) -> "Grid":
        """Smallest power-of-two grid on [-radius, radius)^d with h <= max_spacing."""
        extent = 2.0 * radius
        n = max(MIN_POINTS, 1 << int(np.ceil(np.log2(extent / max_spacing))))
        return cls(dim=dim, extent=extent, n=n)


@dataclass(frozen=True, eq=False)
class Field:
    grid: Grid
    values: ComplexArray

    def __post_init__(self) -> None:
        vals = np.asarray(self.values, dtype=complex)
        if vals.shape != self.grid.shape:
            vals = vals.reshape(self.grid.shape)
        object.__setattr__(self, "values", vals)

    @property
    def flat(self) -> ComplexArray:
        return self.values.reshape(-1)

    def with_values(self, values: ComplexArray) -> "Field":
        return Field(self.grid, values)

    def __add__(self, other: "Field") -> "Field":
        same_grid(self, other)
        return Field(self.grid, self.values + other.values)

    def __sub__(self, other: "Field") -> "Field":
        same_grid(self, other)
        return Field(self.grid, self.values - other.values)

    def __mul__(self, scalar: complex) -> "Field":
        return Field(self.grid, self.values * scalar)

    __rmul__ = __mul__


def same_grid(a: Field, b: Field) -> Grid:
    if a.grid != b.grid:
        raise GridMismatch("fields live on different grids", a=a.grid, b=b.grid)
    return a.grid


def sample(fn: Callable[[RealArray], ComplexArray | complex], grid: Grid) -> Field:
    """Evaluate ``fn`` on the grid nodes; ``fn`` receives points of shape (..., d)."""
    values = np.broadcast_to(np.asarray(fn(grid.points), dtype=complex), grid.shape).copy()
    if not np.all(np.isfinite(values)):
        raise NonFiniteSample("sampled function is not finite on the box", grid=grid)
    return Field(grid, values)


def time_reversed(field: Field) -> Field:
    """conj(u): if u(t) solves the equation, conj(u)(-t) does too."""
    return Field(field.grid, np.conj(field.values))
