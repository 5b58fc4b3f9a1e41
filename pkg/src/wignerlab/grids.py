"""Uniform centered sampling lattices and the fields living on them.

All grids are centered: a Grid1D with center c, half-width h and n points
samples x_j = c - h + j*spacing, j = 0..n-1, with spacing = 2h/n (derived,
never stored).  The reciprocal grid pairs with the e^{-2*pi*i} Fourier
convention used throughout the package.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

AXIS_NAMES = ("x", "xi", "y", "eta")


@dataclass(frozen=True)
class Grid1D:
    """Centered uniform lattice: x_j = center - half_width + j*spacing."""

    center: float
    half_width: float
    n: int

    def __post_init__(self):
        if self.n < 4:
            raise ValueError(f"grid needs n >= 4, got n={self.n}")
        if self.n % 2 != 0:
            raise ValueError(f"grid needs even n, got n={self.n}")
        if not self.half_width > 0:
            raise ValueError("half_width must be positive")

    @property
    def spacing(self) -> float:
        return 2.0 * self.half_width / self.n

    def points(self) -> np.ndarray:
        return self.center - self.half_width + self.spacing * np.arange(self.n)

    def reciprocal(self) -> "Grid1D":
        """Dual grid for dft: center 0, half-width n/(4*half_width), n points."""
        return Grid1D(0.0, self.n / (4.0 * self.half_width), self.n)

    def refined(self, factor: int) -> "Grid1D":
        """Same extent, n*factor points (target of Fourier interpolation)."""
        return Grid1D(self.center, self.half_width, self.n * factor)

    def __contains__(self, value: float) -> bool:
        pts = self.points()
        return bool(np.any(np.isclose(pts, value, rtol=0, atol=1e-9 * self.spacing)))

    def index_of(self, value: float) -> int:
        j = int(round((value - self.center + self.half_width) / self.spacing))
        if not (0 <= j < self.n) or abs(self.points()[j] - value) > 1e-8 * self.spacing:
            raise ValueError(f"{value} is not a lattice point of {self}")
        return j


@dataclass(frozen=True)
class Grid2D:
    axis0: Grid1D
    axis1: Grid1D

    @property
    def shape(self) -> tuple[int, int]:
        return (self.axis0.n, self.axis1.n)

    @property
    def cell(self) -> float:
        return self.axis0.spacing * self.axis1.spacing

    def meshgrid(self, sparse: bool = True):
        return np.meshgrid(self.axis0.points(), self.axis1.points(),
                           indexing="ij", sparse=sparse)


@dataclass(frozen=True)
class Grid4D:
    """Product lattice in the axis order (x, xi, y, eta)."""

    x: Grid1D
    xi: Grid1D
    y: Grid1D
    eta: Grid1D

    @property
    def axes(self) -> tuple[Grid1D, Grid1D, Grid1D, Grid1D]:
        return (self.x, self.xi, self.y, self.eta)

    @property
    def shape(self) -> tuple[int, int, int, int]:
        return tuple(a.n for a in self.axes)

    @property
    def cell(self) -> float:
        return float(np.prod([a.spacing for a in self.axes]))

    def axis(self, name: str) -> Grid1D:
        return self.axes[AXIS_NAMES.index(name)]


class Signal:
    """Complex samples over a Grid1D."""

    def __init__(self, grid: Grid1D, samples):
        samples = np.asarray(samples, dtype=complex)
        if samples.shape != (grid.n,):
            raise ValueError(f"samples shape {samples.shape} != ({grid.n},)")
        self.grid = grid
        self.samples = samples

    @classmethod
    def from_function(cls, grid: Grid1D, fn) -> "Signal":
        return cls(grid, np.asarray(fn(grid.points()), dtype=complex))

    def norm_sq(self) -> float:
        """Riemann approximation of the squared L2 norm."""
        return float(self.grid.spacing * np.sum(np.abs(self.samples) ** 2))

    def __len__(self) -> int:
        return self.grid.n


class PhaseSpaceField:
    """Complex samples over a Grid2D, e.g. W(f,g), V_g f, Hf."""

    def __init__(self, grid: Grid2D, samples):
        samples = np.asarray(samples)
        if samples.shape != grid.shape:
            raise ValueError(f"samples shape {samples.shape} != {grid.shape}")
        self.grid = grid
        self.samples = samples

    def l1_mass(self) -> float:
        return float(self.grid.cell * np.sum(np.abs(self.samples)))

    def energy(self) -> float:
        return float(self.grid.cell * np.sum(np.abs(self.samples) ** 2))


def check_realness(field: PhaseSpaceField, tol: float = 1e-10) -> float:
    """Max |imaginary part| relative to the field scale (diagonal-Wigner invariant)."""
    scale = np.abs(field.samples).max()
    if scale == 0:
        return 0.0
    return float(np.abs(field.samples.imag).max() / scale)
