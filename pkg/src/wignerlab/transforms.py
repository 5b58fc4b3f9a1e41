"""Cross-Wigner distribution, STFT, Husimi distribution, polarization check.

Discretization of W(f,g)(x,xi) = int f(x+t/2) conj(g(x-t/2)) e^{-2*pi*i*xi*t} dt:
f and g are upsampled by factor 2 so the half-shifts land on lattice points,
the lag products are formed over t in [-2h, 2h) (zero outside the grid), and
a DFT in t produces the frequency axis.  The output xi axis is the reciprocal
of that t lattice: 2n points with spacing 1/(4h), i.e. the xi extent is half
the upsampled signal's Nyquist range (standard discrete-Wigner behavior).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grids import Grid1D, Grid2D, PhaseSpaceField, Signal
from .spectral import dft, fourier_interpolate


@dataclass(frozen=True)
class WindowSpec:
    """Gaussian analysis window c * e^{-pi t^2}.

    normalization:
      * "l2":          c = 2^{1/4}   (unit L2 norm)
      * "none":        c = 1         (the plain window phi)
      * "wigner_unit": c = 2^{-1/4}  (makes W g(z) = e^{-2*pi*|z|^2}, the
                        constant under which |Gabor matrix|^2 equals the
                        Gaussian-smoothed Wigner kernel exactly)

    Note: the "wigner_unit" window has ||g||_2^2 = 1/2, not 1.  The source
    material is ambiguous about which constant accompanies the Gabor-matrix
    identity; numerically only 2^{-1/4} makes it exact, so that is the
    default for Gabor work, and the difference is surfaced here rather than
    silently absorbed.
    """

    kind: str = "standard_gaussian"
    normalization: str = "l2"

    _CONSTANTS = {"l2": 2.0 ** 0.25, "none": 1.0, "wigner_unit": 2.0 ** -0.25}

    def __post_init__(self):
        if self.kind != "standard_gaussian":
            raise ValueError(f"unknown window kind {self.kind!r}")
        if self.normalization not in self._CONSTANTS:
            raise ValueError(f"unknown normalization {self.normalization!r}")

    @property
    def constant(self) -> float:
        return self._CONSTANTS[self.normalization]

    def __call__(self, t):
        return self.constant * np.exp(-np.pi * np.asarray(t, dtype=float) ** 2)


def wigner_grid(grid: Grid1D) -> Grid2D:
    """Output grid of cross_wigner for signals on `grid`."""
    t_grid = Grid1D(0.0, 2.0 * grid.half_width, 2 * grid.n)
    return Grid2D(grid, t_grid.reciprocal())


def cross_wigner(f: Signal, g: Signal | None = None) -> PhaseSpaceField:
    """Discrete cross-Wigner distribution W(f,g) on wigner_grid(f.grid)."""
    if g is None:
        g = f
    if g.grid != f.grid:
        raise ValueError("f and g must share a grid")
    grid = f.grid
    n, dx = grid.n, grid.spacing
    nf = 2 * n
    F = fourier_interpolate(f, 2).samples
    G = fourier_interpolate(g, 2).samples

    idx = np.arange(nf)
    m = np.where(idx < n, idx, idx - nf)          # lag index, t = m*dx
    j = 2 * np.arange(n)[:, None]                 # fine index of x_j
    ia = j + m[None, :]
    ib = j - m[None, :]
    valid = (ia >= 0) & (ia < nf) & (ib >= 0) & (ib < nf)
    P = np.where(valid, F[np.clip(ia, 0, nf - 1)] * np.conj(G[np.clip(ib, 0, nf - 1)]), 0.0)

    # DFT in t: xi_a = (a - n) / (4h), phase e^{-2 pi i xi_a t_m} = (-1)^m e^{-2 pi i a m / 2n}
    W = np.fft.fft(P * (-1.0) ** idx[None, :], axis=1) * dx
    return PhaseSpaceField(wigner_grid(grid), W)


def wigner(f: Signal) -> PhaseSpaceField:
    return cross_wigner(f, f)


def stft(f: Signal, window: WindowSpec) -> PhaseSpaceField:
    """V_g f(x,xi) = int f(t) conj(g(t-x)) e^{-2*pi*i*xi*t} dt on the product
    grid (x = signal grid, xi = its reciprocal)."""
    grid = f.grid
    t = grid.points()
    x = grid.points()
    win = np.conj(window(t[None, :] - x[:, None]))      # (x_j, t)
    prod = f.samples[None, :] * win
    xi_grid = grid.reciprocal()
    xi = xi_grid.points()
    x0 = grid.center - grid.half_width
    sgn = (-1.0) ** np.arange(grid.n)
    V = grid.spacing * np.exp(-2j * np.pi * xi * x0)[None, :] * \
        np.fft.fft(prod * sgn[None, :], axis=1)
    return PhaseSpaceField(Grid2D(grid, xi_grid), V)


def husimi(f: Signal) -> PhaseSpaceField:
    """Hf = |V_phi f|^2 with the plain Gaussian window phi(t) = e^{-pi t^2}.

    Nonnegative by construction; equals the Gaussian-smoothed Wigner
    distribution W phi * W f (cross-route identity checked in the tests).
    """
    V = stft(f, WindowSpec(normalization="none"))
    return PhaseSpaceField(V.grid, np.abs(V.samples) ** 2)


def polarization_check(f: Signal, g: Signal) -> float:
    """Max-abs residual of W(f+g) = Wf + Wg + 2 Re W(f,g) over the grid."""
    if f.grid != g.grid:
        raise ValueError("f and g must share a grid")
    s = Signal(f.grid, f.samples + g.samples)
    lhs = cross_wigner(s).samples
    rhs = cross_wigner(f).samples + cross_wigner(g).samples \
        + 2.0 * np.real(cross_wigner(f, g).samples)
    return float(np.abs(lhs - rhs).max())
