import numpy as np
import pytest

from wignerlab.analysis import (DEFAULT_MASK, decay_fit, envelope, ghost_energy,
                                mask_tubes, slope_estimate)
from wignerlab.grids import Grid1D, Grid2D, PhaseSpaceField, Signal
from wignerlab.kernelfield import DenseKernel
from wignerlab.kernels import natural_kernel_grid, wigner_kernel_analytic
from wignerlab.phases import CanonicalMap, PhaseSpec, canonical_map
from wignerlab.smoothing import SmoothingSpec, smooth_kernel
from wignerlab import reference as R


def _smoothed_identity_kernel(n=32):
    g4 = natural_kernel_grid(Grid1D(0.0, np.sqrt(n / 4.0) * 2, n))
    pts = [a.points() for a in g4.axes]
    X = pts[0][:, None, None, None]
    XI = pts[1][None, :, None, None]
    Y = pts[2][None, None, :, None]
    ETA = pts[3][None, None, None, :]
    vals = 0.25 * np.exp(-np.pi * ((X - Y) ** 2 + (XI - ETA) ** 2))
    return DenseKernel(g4, (vals + 0j) * np.ones(g4.shape))


def test_decay_fit_smoothed_identity():
    k = _smoothed_identity_kernel()
    rep = decay_fit(k, CanonicalMap.identity(), [3], seed=1)
    assert np.isfinite(rep.weighted_sup[3])
    # sup attained near the diagonal: e^{-pi d^2} <d>^6 peaks at d ~ 1
    loc = rep.sup_location[3]
    d = np.hypot(loc[0] - loc[2], loc[1] - loc[3])
    assert d < 2.0
    # binned log-log slope over [2, 8] is far below -6
    dist = np.asarray(rep.bin_distance)
    mx = np.asarray(rep.bin_max)
    sel = (dist >= 2.0) & (dist <= 8.0) & (mx > 0)
    slope = np.polyfit(np.log(dist[sel]), np.log(mx[sel]), 1)[0]
    assert slope <= -6.0


def test_decay_fit_zero_kernel():
    g4 = natural_kernel_grid(Grid1D(0.0, 4.0, 16))
    k = DenseKernel(g4, np.zeros(g4.shape, dtype=complex))
    rep = decay_fit(k, CanonicalMap.identity(), [1, 2, 5], seed=0)
    assert all(v == 0.0 for v in rep.weighted_sup.values())


def test_decay_fit_monotone_in_N_and_drift():
    free = PhaseSpec.multiplier(1.0, [0, 0, 1.0])
    g4 = natural_kernel_grid(Grid1D(0.0, 4.0, 32))
    k = smooth_kernel(wigner_kernel_analytic(free, g4),
                      SmoothingSpec.bessel(-2, axes=("xi", "y")))
    rep = decay_fit(k, canonical_map(free), [1, 2, 3, 4], seed=2, n_samples=40_000)
    sups = [rep.weighted_sup[N] for N in (1, 2, 3, 4)]
    assert all(b >= a * (1 - 1e-12) for a, b in zip(sups, sups[1:]))
    assert all(np.isfinite(s) for s in sups)


def test_decay_fit_rejects_unsmoothed_delta():
    free = PhaseSpec.multiplier(1.0, [0, 0, 1.0])
    g4 = natural_kernel_grid(Grid1D(0.0, 4.0, 16))
    k = wigner_kernel_analytic(free, g4)
    with pytest.raises(ValueError):
        decay_fit(k, canonical_map(free), [1])


def test_decay_report_json_roundtrip():
    import json
    k = _smoothed_identity_kernel(16)
    rep = decay_fit(k, CanonicalMap.identity(), [1, 2], seed=0)
    d = json.loads(rep.to_json())
    assert d["N_list"] == [1, 2] and "domain" in d and len(d["bin_distance"]) > 0


# ---- ghost energy -------------------------------------------------------

def _field(grid, fn):
    X, XI = grid.meshgrid()
    return PhaseSpaceField(grid, np.broadcast_to(fn(X, XI), grid.shape).astype(complex).copy())


def test_ghost_gaussian_inside_tube():
    g = Grid2D(Grid1D(0.0, 8.0, 256), Grid1D(0.0, 8.0, 256))
    sigma = 0.25
    f = _field(g, lambda x, xi: np.exp(-(x ** 2 + xi ** 2) / (2 * sigma ** 2)))
    rep = ghost_energy(f, [("x", 0.0, 4 * sigma)])
    assert rep.ghost_ratio_l1 < 1e-3


def test_ghost_husimi_vs_closed_form_cross_term():
    g = Grid2D(Grid1D(0.0, 8.0, 256), Grid1D(0.0, 8.0, 256))
    H = R.husimi_one_plus_delta(g)
    rep = ghost_energy(H, DEFAULT_MASK)
    # oracle: outside the mask the ridges are negligible; the ghost mass is
    # essentially the cross term 2 cos(2 pi xi x) e^{-pi(x^2+xi^2)} plus the
    # ridge tails, all computable by direct quadrature of the closed form
    u = np.linspace(-8, 8, 1601)
    du = u[1] - u[0]
    X, XI = np.meshgrid(u, u, indexing="ij")
    vals = np.abs(np.exp(-2 * np.pi * X ** 2) + np.exp(-2 * np.pi * XI ** 2)
                  + 2 * np.cos(2 * np.pi * X * XI) * np.exp(-np.pi * (X ** 2 + XI ** 2)))
    outside = (np.abs(X) > 1.0) & (np.abs(XI) > 1.0)
    oracle_ratio = np.sum(vals[outside]) / np.sum(vals)
    assert abs(rep.ghost_ratio_l1 - oracle_ratio) < 5e-3


def test_ghost_bessel_exceeds_husimi():
    g = Grid2D(Grid1D(0.0, 8.0, 256), Grid1D(0.0, 8.0, 256))
    H = R.husimi_one_plus_delta(g)
    B = R.bessel_smoothed_one_plus_delta(g)
    assert ghost_energy(B.field, DEFAULT_MASK).ghost_ratio_l2 \
        > ghost_energy(H, DEFAULT_MASK).ghost_ratio_l2


def test_ghost_scale_invariance():
    g = Grid2D(Grid1D(0.0, 6.0, 128), Grid1D(0.0, 6.0, 128))
    f = _field(g, lambda x, xi: np.cos(x) * np.exp(-x ** 2 - xi ** 2))
    r1 = ghost_energy(f, DEFAULT_MASK)
    f7 = PhaseSpaceField(g, 7.0 * f.samples)
    r7 = ghost_energy(f7, DEFAULT_MASK)
    assert r1.ghost_ratio_l1 == pytest.approx(r7.ghost_ratio_l1, rel=1e-12)
    assert r1.ghost_ratio_l2 == pytest.approx(r7.ghost_ratio_l2, rel=1e-12)


def test_ghost_empty_mask_warns():
    g = Grid2D(Grid1D(0.0, 6.0, 64), Grid1D(0.0, 6.0, 64))
    f = _field(g, lambda x, xi: np.exp(-x ** 2 - xi ** 2))
    with pytest.warns(RuntimeWarning):
        rep = ghost_energy(f, [])
    assert rep.ghost_ratio_l1 == 1.0


def test_mask_tube_kinds_and_bounds():
    g = Grid2D(Grid1D(0.0, 4.0, 64), Grid1D(0.0, 4.0, 64))
    m = mask_tubes(g, [("curve", lambda x: 0.5 * x, 0.5)])
    assert m.any() and not m.all()
    with pytest.raises(ValueError):
        mask_tubes(g, [("x", 10.0, 0.5)])
    with pytest.raises(ValueError):
        mask_tubes(g, [("spiral", 0.0, 1.0)])


# ---- slope estimation ----------------------------------------------------

def test_slope_exact_power_law():
    g = Grid1D(20.0, 15.0, 512)
    prof = Signal(g, (g.points() ** -0.25).astype(complex))
    s = slope_estimate(prof, (6.0, 34.0))
    assert abs(s - (-0.25)) < 1e-6


def test_slope_rejects_nonpositive():
    g = Grid1D(20.0, 15.0, 512)
    prof = Signal(g, np.zeros(512))
    with pytest.raises(ValueError):
        slope_estimate(prof, (6.0, 34.0))


def test_envelope_oscillatory():
    g = Grid1D(20.0, 15.0, 2048)
    x = g.points()
    vals = x ** -0.5 * np.cos(3 * x)
    env = envelope(vals, g.spacing)
    sel = (x > 8) & (x < 32)
    s = np.polyfit(np.log(x[sel]), np.log(env[sel]), 1)[0]
    assert abs(s - (-0.5)) < 0.06


def test_airy_bessel_slope_frozen_oracle_value():
    # measured with the validated quadrature engine (see decisions ledger):
    # the Bessel-smoothed Airy envelope decays like |lam|^{-5/4} on [-40, -5]
    n = 2100
    g = Grid1D(-24.5, 21.0, n)
    vals = R.airy_bessel(g.points(), -2)
    s = slope_estimate(Signal(g, vals.astype(complex)), (-40.0, -5.0))
    assert abs(s - (-1.21)) < 0.1


def test_airy_gauss_superpolynomial_bound():
    lams = np.linspace(5.0, 12.0, 15)
    ps = np.abs(R.airy_gauss(lams))
    c = ps[0] * lams[0] ** 6
    assert np.all(ps <= c * lams ** -6.0)
