"""wigner-lab: Wigner distributions, Wigner kernels of type-I Fourier
integral operators, Gaussian and Bessel-Sobolev smoothing, and
ghost-frequency diagnostics, at desk scale in one space dimension."""

__version__ = "0.1.0"

from .grids import Grid1D, Grid2D, Grid4D, PhaseSpaceField, Signal
from .kernelfield import DenseKernel, FactoredKernel, KernelField
from .phases import (CanonicalMap, PhaseSpec, SymbolSpec, apply_fio,
                     canonical_map, lambda_phi, schwartz_kernel, tilde_symbol)
from .smoothing import SmoothingSpec, bessel_potential, smooth_kernel
from .spectral import convolve_field, dft, fourier_interpolate, idft
from .transforms import WindowSpec, cross_wigner, husimi, polarization_check, stft

__all__ = [
    "Grid1D", "Grid2D", "Grid4D", "PhaseSpaceField", "Signal",
    "DenseKernel", "FactoredKernel", "KernelField",
    "CanonicalMap", "PhaseSpec", "SymbolSpec", "apply_fio", "canonical_map",
    "lambda_phi", "schwartz_kernel", "tilde_symbol",
    "SmoothingSpec", "bessel_potential", "smooth_kernel",
    "convolve_field", "dft", "fourier_interpolate", "idft",
    "WindowSpec", "cross_wigner", "husimi", "polarization_check", "stft",
]
