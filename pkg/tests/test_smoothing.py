import numpy as np
import pytest

from wignerlab.grids import Grid1D
from wignerlab.kernels import natural_kernel_grid, wigner_kernel_analytic
from wignerlab.phases import PhaseSpec
from wignerlab.smoothing import (GAUSS_MASS, SmoothingSpec, bessel_potential,
                                 bessel_potential_spectral, bessel_values,
                                 gaussian_profile, smooth_kernel,
                                 spectral_truncation_bound)
from wignerlab.kernelfield import DenseKernel
from wignerlab.spectral import convolve_axis


def test_v2_closed_form():
    g = Grid1D(0.0, 8.0, 512)
    v = bessel_potential(-2, g)
    x = g.points()
    target = np.pi * np.exp(-2 * np.pi * np.abs(x))
    sel = np.abs(x) <= 4.0
    rel = np.abs(v.samples.real[sel] - target[sel]) / target[sel]
    assert rel.max() < 1e-4


def test_vM_even_and_positive_at_zero():
    g = Grid1D(0.0, 6.0, 2048)
    for M in (-2, -3, -4, -6):
        vals = bessel_values(M, g.points())
        # v_M(-x) = v_M(x): the lattice is symmetric except the unpaired edge
        assert np.abs(vals[1:] - vals[1:][::-1]).max() < 1e-12
        assert vals[g.n // 2] > 0
        # unit total mass up to the cusp's O(spacing^2) Riemann error
        assert abs(np.sum(vals) * g.spacing - 1.0) < 5e-4


def test_vM_rejects_wrong_order():
    g = Grid1D(0.0, 4.0, 64)
    for M in (-1, 0, 1, -2.5):
        with pytest.raises(ValueError):
            bessel_values(M, g.points())


def test_v4_against_mpmath_oracle():
    mp = pytest.importorskip("mpmath")
    mp.mp.dps = 30

    def oracle(x):
        f = lambda w: (1 + w ** 2) ** (-2) * mp.cos(2 * mp.pi * x * w)
        if x == 0:
            return 2 * mp.quad(f, [0, mp.inf])
        return 2 * mp.quadosc(f, [0, mp.inf], period=1 / mp.mpf(x))

    xs = np.array([0.0, 0.2, 0.5, 0.8, 1.0, 1.5, 2.0, 2.5, 3.0, 4.0])
    got = bessel_values(-4, xs)
    for x, g in zip(xs, got):
        o = float(oracle(float(x)))
        assert abs(g - o) / abs(o) < 1e-5


def test_spectral_route_cross_check():
    g = Grid1D(0.0, 8.0, 256)
    for M in (-2, -6):
        closed = bessel_potential(M, g).samples.real
        spect = bessel_potential_spectral(M, g, widen=8).samples.real
        band = 8 * g.reciprocal().half_width
        bound = spectral_truncation_bound(M, band)
        assert np.abs(closed - spect).max() < 2.0 * bound + 1e-9
        # widen-doubling self-test: the change is controlled by the
        # truncation bound (for M <= -4 it is below 1e-6 as such)
        spect16 = bessel_potential_spectral(M, g, widen=16).samples.real
        diff = np.abs(spect16 - spect).max()
        assert diff < 2.0 * bound
        if M <= -4:
            assert diff < 1e-6


def test_smoothing_spec_validation():
    with pytest.raises(ValueError):
        SmoothingSpec.bessel(-1)
    with pytest.raises(ValueError):
        SmoothingSpec(kind="bessel", axes=("x",), M=None)
    with pytest.raises(ValueError):
        SmoothingSpec(kind="gaussian", axes=("zeta",))
    s = SmoothingSpec.from_json('{"kind": "bessel", "M": -6, "axes": ["x", "xi", "y", "eta"]}')
    assert s.M == -6 and s.axes == ("x", "xi", "y", "eta")
    assert "satisfied" in s.theorem_note()
    assert "exploratory" in SmoothingSpec.bessel(-4).theorem_note()


def _grid4(n=32):
    return natural_kernel_grid(Grid1D(0.0, np.sqrt(n / 4.0), n))


def test_factored_free_particle_bessel_sifting():
    g4 = _grid4()
    free = PhaseSpec.multiplier(1.0, [0, 0, 1.0])
    k = wigner_kernel_analytic(free, g4)
    ks = smooth_kernel(k, SmoothingSpec.bessel(-2, axes=("xi", "y")))
    x, xi, y, eta = 0.3, 0.5, -0.2, 0.4
    got = ks.evaluate(x, xi, y, eta)
    target = bessel_values(-2, np.array([y - x + 2 * eta]))[0] \
        * bessel_values(-2, np.array([xi - eta]))[0]
    assert abs(got - target) < 1e-12 * abs(target) + 1e-15


def test_factored_cubic_gauss_sifting():
    from wignerlab import reference
    g4 = _grid4()
    cub = PhaseSpec.multiplier(1.0, [0, 0, 0, 1.0])
    k = wigner_kernel_analytic(cub, g4)
    ks = smooth_kernel(k, SmoothingSpec.gaussian(axes=("xi", "y")))
    x, xi, y, eta = 0.1, 0.3, 0.4, 0.5
    got = ks.evaluate(x, xi, y, eta)
    target = reference.airy_gauss(y - x + 3 * eta ** 2) \
        * np.exp(-2 * np.pi * (xi - eta) ** 2)
    assert abs(got - target) < 1e-6 * abs(target)


def test_zero_kernel_smooths_to_zero():
    g4 = _grid4(16)
    k = DenseKernel(g4, np.zeros(g4.shape, dtype=complex))
    ks = smooth_kernel(k, SmoothingSpec.gaussian())
    assert np.all(ks.samples == 0)


def test_unsmoothed_delta_cannot_densify():
    g4 = _grid4(16)
    k = wigner_kernel_analytic(PhaseSpec.multiplier(1.0, [0, 0, 1.0]), g4)
    with pytest.raises(ValueError):
        k.densify()


def test_axis_order_independence():
    g4 = _grid4(16)
    rng = np.random.default_rng(0)
    pts = [a.points() for a in g4.axes]
    X = np.exp(-pts[0][:, None, None, None] ** 2
               - pts[1][None, :, None, None] ** 2
               - pts[2][None, None, :, None] ** 2
               - pts[3][None, None, None, :] ** 2).astype(complex)
    k = DenseKernel(g4, X)
    a = smooth_kernel(smooth_kernel(k, SmoothingSpec.gaussian(axes=("xi", "y"))),
                      SmoothingSpec.gaussian(axes=("x", "eta")))
    b = smooth_kernel(k, SmoothingSpec.gaussian())
    scale = np.abs(b.samples).max()
    assert np.abs(a.samples - b.samples).max() < 1e-8 * scale


def test_gaussian_mass_scaling():
    g4 = _grid4(16)
    pts = [a.points() for a in g4.axes]
    X = np.exp(-pts[0][:, None, None, None] ** 2
               - pts[1][None, :, None, None] ** 2
               - pts[2][None, None, :, None] ** 2
               - pts[3][None, None, None, :] ** 2).astype(complex)
    k = DenseKernel(g4, X)
    ks = smooth_kernel(k, SmoothingSpec.gaussian())
    cell = g4.cell
    before = np.sum(k.samples) * cell
    after = np.sum(ks.samples) * cell
    assert abs(after - before * GAUSS_MASS ** 4) < 1e-6 * abs(before)


def test_bessel_composition_spectral():
    # <D>^{M1} <D>^{M2} = <D>^{M1+M2} on one axis; the discrete profile
    # convolution composes once the lattice is fine enough that the aliased
    # symbols agree to the target tolerance.
    n, h = 16384, 12.0
    g = Grid1D(0.0, h, n)
    rng = np.random.default_rng(1)
    sig = np.exp(-g.points() ** 2) * (1 + 0.3 * np.cos(g.points()))
    arr = sig.astype(complex)[None, :]
    M1, M2 = -4, -6
    one = convolve_axis(convolve_axis(arr, 1, bessel_values(M1, g.points()), g.spacing),
                        1, bessel_values(M2, g.points()), g.spacing)
    both = convolve_axis(arr, 1, bessel_values(M1 + M2, g.points()), g.spacing)
    assert np.abs(one - both).max() < 1e-10 * np.abs(both).max()


def test_empty_axes_warns():
    g4 = _grid4(16)
    k = DenseKernel(g4, np.zeros(g4.shape, dtype=complex))
    with pytest.warns(RuntimeWarning):
        out = smooth_kernel(k, SmoothingSpec(kind="gaussian", axes=()))
    assert out is k
