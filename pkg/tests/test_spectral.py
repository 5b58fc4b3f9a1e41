import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wignerlab.grids import Grid1D, Grid2D, PhaseSpaceField, Signal
from wignerlab.spectral import convolve_field, dft, fourier_interpolate, idft
from conftest import brute_ft


def test_dft_gaussian_selfdual(gauss256):
    F = dft(gauss256)
    xi = F.grid.points()
    assert np.abs(F.samples - np.exp(-np.pi * xi ** 2)).max() < 1e-6


def test_dft_zero(grid256):
    F = dft(Signal(grid256, np.zeros(256)))
    assert np.all(F.samples == 0)


def test_dft_modulation_vs_quadrature_oracle(grid256):
    f = Signal.from_function(grid256, lambda t: np.exp(-np.pi * t ** 2)
                             * np.exp(2j * np.pi * t))
    F = dft(f)
    xi = F.grid.points()
    assert np.abs(F.samples - np.exp(-np.pi * (xi - 1) ** 2)).max() < 1e-6
    # independent Riemann oracle at a few frequencies
    for k in (40, 128, 200):
        ora = brute_ft(lambda t: np.exp(-np.pi * t ** 2) * np.exp(2j * np.pi * t), xi[k])
        assert abs(F.samples[k] - ora) < 1e-6


def test_dft_roundtrip_and_plancherel(grid256):
    rng = np.random.default_rng(1)
    base = rng.normal(size=256) + 1j * rng.normal(size=256)
    # band-limit softly so the signal is grid-representable
    f = Signal(grid256, np.fft.ifft(np.fft.fft(base) * np.exp(
        -np.linspace(-4, 4, 256) ** 2)))
    F = dft(f)
    back = idft(F)
    assert np.abs(back.samples - f.samples).max() < 1e-12 * np.abs(f.samples).max()
    assert abs(F.norm_sq() - f.norm_sq()) < 1e-10 * f.norm_sq()


def test_odd_n_rejected():
    with pytest.raises(ValueError):
        Grid1D(0.0, 8.0, 255)


def test_interpolate_identity(gauss256):
    up = fourier_interpolate(gauss256, 1)
    assert np.array_equal(up.samples, gauss256.samples)


def test_interpolate_gaussian(gauss256):
    up = fourier_interpolate(gauss256, 2)
    t = up.grid.points()
    assert np.abs(up.samples - np.exp(-np.pi * t ** 2)).max() < 1e-8
    assert np.abs(up.samples[::2] - gauss256.samples).max() < 1e-12


def test_interpolate_tone(grid256):
    tone = Signal.from_function(grid256, lambda t: np.exp(2j * np.pi * 3.0 * t))
    up = fourier_interpolate(tone, 2)
    t = up.grid.points()
    assert np.abs(up.samples - np.exp(2j * np.pi * 3.0 * t)).max() < 1e-10


@settings(max_examples=25, deadline=None)
@given(st.integers(min_value=0, max_value=127))
def test_interpolate_reproduces_lattice_tones(k):
    # any sub-Nyquist lattice tone upsamples exactly
    g = Grid1D(0.0, 4.0, 256)
    freq = (k - 64) * g.reciprocal().spacing
    tone = Signal.from_function(g, lambda t: np.exp(2j * np.pi * freq * t))
    up = fourier_interpolate(tone, 2)
    assert np.abs(up.samples[::2] - tone.samples).max() < 1e-10


# ---- convolve_field --------------------------------------------------

def _field2(grid, fn):
    X, XI = grid.meshgrid()
    return PhaseSpaceField(grid, np.broadcast_to(fn(X, XI), grid.shape).astype(complex).copy())


def test_convolve_delta_identity():
    g = Grid1D(0.0, 8.0, 128)
    grid = Grid2D(g, g)
    f = _field2(grid, lambda x, xi: np.exp(-x ** 2 - 0.5 * xi ** 2))
    delta = np.zeros(g.n)
    delta[g.n // 2] = 1.0 / g.spacing
    out = convolve_field(f, delta, axes=(0,))
    assert np.abs(out.samples - f.samples).max() < 1e-10


def test_convolve_gaussian_closed_form():
    # e^{-2 pi x^2} * e^{-2 pi x^2} = (1/2) e^{-pi x^2}
    g = Grid1D(0.0, 8.0, 256)
    grid = Grid2D(g, g)
    f = _field2(grid, lambda x, xi: np.exp(-2 * np.pi * x ** 2) + 0 * xi)
    sm = np.exp(-2 * np.pi * g.points() ** 2)
    out = convolve_field(f, sm, axes=(0,))
    X, _ = grid.meshgrid()
    target = 0.5 * np.exp(-np.pi * X ** 2) * np.ones(grid.shape)
    assert np.abs(out.samples - target).max() < 1e-6
    # quadrature oracle at one point
    u = np.arange(-8, 8, 1e-4)
    ora = np.sum(np.exp(-2 * np.pi * (1.0 - u) ** 2) * np.exp(-2 * np.pi * u ** 2)) * 1e-4
    i = g.index_of(1.0)
    assert abs(out.samples[i, 0] - ora) < 1e-6


def test_convolve_linearity_and_axis_independence():
    g = Grid1D(0.0, 6.0, 64)
    grid = Grid2D(g, g)
    rng = np.random.default_rng(0)
    a = _field2(grid, lambda x, xi: np.exp(-x ** 2 - xi ** 2))
    b = _field2(grid, lambda x, xi: np.exp(-(x - 1) ** 2 - 0.3 * xi ** 2) * x)
    sm = np.exp(-2 * np.pi * g.points() ** 2)
    lhs = convolve_field(PhaseSpaceField(grid, a.samples + 2 * b.samples), sm, (0,))
    rhs0 = convolve_field(a, sm, (0,))
    rhs1 = convolve_field(b, sm, (0,))
    assert np.abs(lhs.samples - rhs0.samples - 2 * rhs1.samples).max() < 1e-12
    # smoothing over axis 0 then 1 equals the joint separable convolution
    two = convolve_field(convolve_field(a, sm, (0,)), sm, (1,))
    joint = convolve_field(a, np.outer(sm, sm), (0, 1))
    assert np.abs(two.samples - joint.samples).max() < 1e-10


def test_ghost_term_peak_decreases_under_smoothing():
    # the oscillatory cross term of W(1+delta), smoothed by the phase-space
    # Gaussian, loses peak amplitude (quadrature oracle cross-checks one value)
    g = Grid1D(0.0, 8.0, 256)
    grid = Grid2D(g, g)
    ghost = _field2(grid, lambda x, xi: 2 * np.cos(2 * np.pi * xi * x)
                    * np.exp(-np.pi * (x ** 2 + xi ** 2)))
    sm = np.outer(np.exp(-2 * np.pi * g.points() ** 2),
                  np.exp(-2 * np.pi * g.points() ** 2))
    out = convolve_field(ghost, sm, (0, 1))
    assert np.abs(out.samples).max() < np.abs(ghost.samples).max()
    # oracle at the origin
    u = np.linspace(-4, 4, 801)
    U, V = np.meshgrid(u, u, indexing="ij")
    du = u[1] - u[0]
    ora = np.sum(2 * np.cos(2 * np.pi * U * V) * np.exp(-np.pi * (U ** 2 + V ** 2))
                 * np.exp(-2 * np.pi * (U ** 2 + V ** 2))) * du * du
    i = g.index_of(0.0)
    assert abs(out.samples[i, i] - ora) < 1e-5


def test_convolve_grid_mismatch():
    g = Grid1D(0.0, 8.0, 128)
    grid = Grid2D(g, g)
    f = _field2(grid, lambda x, xi: np.exp(-x ** 2 - xi ** 2))
    with pytest.raises(ValueError):
        convolve_field(f, np.zeros(64), axes=(0,))
    with pytest.raises(ValueError):
        convolve_field(f, np.zeros(128), axes=())
