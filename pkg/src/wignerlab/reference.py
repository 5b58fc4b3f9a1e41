"""Analytic closed forms and validated special-function quadratures.

Centerpiece: the Fourier transform of the unit cubic chirp,

    airy(lam) = int e^{-i*pi*r^3/2} e^{-2*pi*i*lam*r} dr,

a real Airy-type function (decaying for lam > 0, oscillatory for lam < 0),
normalized so that it is exactly the profile appearing in the Wigner kernel
of the cubic propagator.  It relates to the standard Airy function by
airy(lam) = c * Ai(c * lam) with c = 2*pi / (3*pi/2)^{1/3} = (16*pi^2/3)^{1/3}
(substitute r = (2/(3*pi))^{1/3} u in the defining integral to map the cubic
term onto u^3/3).

The same engine evaluates the chirp transform against a spectral weight
m(s): Gaussian weights give the smoothed profile psi = airy * gaussian,
Bessel weights <s>^M give the Bessel-smoothed profile.  Oscillatory segments
use composite Gauss-Legendre panels sized by the local phase rate; the
infinite tails are rotated onto a ray of angle -pi/6 where the cubic phase
decays exponentially ("rotated-segment integration").
"""

from __future__ import annotations

import numpy as np

from .grids import Grid1D, Grid2D, PhaseSpaceField

AIRY_SCALE = (16.0 * np.pi ** 2 / 3.0) ** (1.0 / 3.0)   # airy(x) = c*Ai(c*x)

_GL_CACHE: dict = {}


def _gl(n: int):
    if n not in _GL_CACHE:
        _GL_CACHE[n] = np.polynomial.legendre.leggauss(n)
    return _GL_CACHE[n]


def _panel_nodes(a: float, b: float, rate: float, min_panels: int = 4,
                 nodes_per_panel: int = 12, phase_per_panel: float = 2.5):
    """Gauss-Legendre nodes/weights on [a, b] with panels sized so each one
    spans at most `phase_per_panel` radians of the oscillation."""
    total_phase = abs(rate) * (b - a)
    panels = max(min_panels, int(np.ceil(total_phase / phase_per_panel)))
    xg, wg = _gl(nodes_per_panel)
    edges = np.linspace(a, b, panels + 1)
    mid = 0.5 * (edges[:-1] + edges[1:])[:, None]
    half = 0.5 * (edges[1:] - edges[:-1])[:, None]
    nodes = (mid + half * xg[None, :]).ravel()
    weights = (half * wg[None, :]).ravel()
    return nodes, weights


def _one(s):
    return np.ones_like(np.asarray(s, dtype=complex))


def cubic_chirp_transform(lam, weight=_one, rate_pad: float = 2.0):
    """I(lam) = int e^{-i*pi*r^3/2} weight(r) e^{-2*pi*i*lam*r} dr.

    weight must be real and even on the real line and analytic in the sector
    swept by the pi/6 contour rotation (true for 1, Gaussians, and <r>^M).
    Both half-axes are integrated independently (no conjugate-symmetry
    shortcut), so the imaginary part of the result is a genuine residual;
    it is returned alongside the real values.
    """
    lam = np.atleast_1d(np.asarray(lam, dtype=float))
    out = np.empty(lam.shape, dtype=complex)
    rot = np.exp(-1j * np.pi / 6)

    def integrand(r, lv):
        return np.exp(-1j * (np.pi * r ** 3 / 2 + 2 * np.pi * lv * r)) * weight(r)

    def tail(anchor, direction, lv, decay_rate, smax):
        # integrate from `anchor` to infinity along anchor + s*direction
        s, w = _panel_nodes(0.0, smax, decay_rate)
        return np.sum(w * integrand(anchor + s * direction, lv)) * direction

    for i, lv in enumerate(lam):
        if lv >= -0.5:
            decay = max(lv, 0.0) * np.pi
            smax = 6.0 if decay < 1 else min(6.0, 45.0 / decay + 1.0)
            rate = 1.5 * np.pi * smax ** 2 + 2 * np.pi * abs(lv)
            out[i] = tail(0.0, rot, lv, rate, smax) \
                - tail(0.0, -np.conj(rot), lv, rate, smax)
        else:
            rstar = 2.0 * np.sqrt(-lv / 3.0)
            R = np.sqrt(rstar ** 2 + rate_pad)
            rate = 1.5 * np.pi * R ** 2 + 2 * np.pi * abs(lv)
            s, w = _panel_nodes(-R, R, rate)
            main = np.sum(w * integrand(s, lv))
            gp = 1.5 * np.pi * (R ** 2 - rstar ** 2)
            smax = min(45.0 / (0.5 * gp) + 2.0, 80.0)
            out[i] = main + tail(R, rot, lv, gp, smax) \
                - tail(-R, -np.conj(rot), lv, gp, smax)
    resid = float(np.abs(np.imag(out)).max()) if out.size else 0.0
    return np.real(out), resid


def _airy_saddle(lam: float) -> complex:
    """Decaying side via the steepest-descent line through the saddle
    r = -i*a, a = 2*sqrt(lam/3), where the exponent is real-negative
    (-(8 pi/3 sqrt 3) lam^{3/2}); no cancellation, values track the true
    super-exponential decay down to the underflow limit."""
    a = 2.0 * np.sqrt(lam / 3.0)
    width = 1.0 / np.sqrt(3.0 * np.pi * a)
    X = 12.0 * width + 2.0 / (1.0 + lam)
    rate = 3.0 * np.pi * a * X + 1.5 * np.pi * X ** 2 + 2 * np.pi * lam
    x, w = _panel_nodes(-X, X, rate / 6)
    r = x - 1j * a
    vals = np.exp(-1j * (np.pi * r ** 3 / 2 + 2 * np.pi * lam * r))
    return np.sum(w * vals)


def airy(lam, window: float = 60.0):
    """The cubic-chirp Fourier transform (see module docstring); real.

    Raises outside |lam| <= window, where the quadrature is validated.
    """
    lam_arr = np.atleast_1d(np.asarray(lam, dtype=float))
    if np.any(np.abs(lam_arr) > window):
        raise ValueError(f"airy is validated on |lam| <= {window}")
    vals = np.empty(lam_arr.shape)
    osc = lam_arr < 2.0
    resid = 0.0
    if np.any(osc):
        vals[osc], resid = cubic_chirp_transform(lam_arr[osc])
    for i in np.nonzero(~osc)[0]:
        v = _airy_saddle(float(lam_arr[i]))
        vals[i] = v.real
        resid = max(resid, abs(v.imag))
    airy.last_imag_residual = resid
    return vals if np.ndim(lam) else float(vals[0])


airy.last_imag_residual = 0.0


def airy_scaled(lam, c: float):
    """A_c(lam) = int e^{-2*pi*i*c*s^3/4} e^{-2*pi*i*lam*s} ds = |c|^{-1/3} airy(lam/|c|^{1/3})
    for c > 0; for c < 0 the值 mirrors: A_c(lam) = A_{|c|}(-lam)."""
    if c == 0:
        raise ValueError("cubic coefficient must be nonzero")
    s = abs(c) ** (1.0 / 3.0)
    arg = np.asarray(lam, dtype=float) / s
    if c < 0:
        arg = -arg
    return airy(arg) / s


def airy_gauss(lam, c: float = 1.0):
    """psi_c(lam) = int e^{-2*pi*i*c*s^3/4} ghat(s) e^{-2*pi*i*lam*s} ds with
    ghat(s) = 2^{-1/2} e^{-pi s^2/2} (the transform of e^{-2*pi*u^2}), i.e.
    the Gaussian smoothing of the scaled Airy profile.  Real, Schwartz-class.

    Uses a straight real-line quadrature for lam <= 1 and a saddle-shifted
    horizontal contour for lam > 1 (where the real-line integral cancels to
    below float precision).
    """
    lam = np.atleast_1d(np.asarray(lam, dtype=float))
    if c < 0:
        return airy_gauss(-lam, -c)
    out = np.empty(lam.shape, dtype=float)

    def exponent(s, lv):
        return -2j * np.pi * c * s ** 3 / 4 - np.pi * s ** 2 / 2 - 2j * np.pi * lv * s

    lo = lam <= 1.0
    if np.any(lo):
        rate = 1.5 * np.pi * c * 64 + 2 * np.pi * (np.abs(lam[lo]).max() + 8)
        s, w = _panel_nodes(-8.0, 8.0, rate / 2)
        E = np.exp(exponent(s[None, :], lam[lo][:, None]))
        out[lo] = np.real(E @ w) / np.sqrt(2.0)
    hi = ~lo
    for i in np.nonzero(hi)[0]:
        lv = lam[i]
        disc = 1.0 + 12.0 * c * lv
        s0 = -1j * (np.sqrt(disc) - 1.0) / (3.0 * c)       # lower-half saddle
        rate = 1.5 * np.pi * c * (abs(s0) + 8) ** 2 + 2 * np.pi * lv
        x, w = _panel_nodes(-8.0, 8.0, rate / 4)
        E = np.exp(exponent(x + s0, lv))
        out[i] = float(np.real(np.sum(w * E)) / np.sqrt(2.0))
    return out if np.ndim(lam) else float(out[0])


def airy_bessel(lam, M: int = -2):
    """int e^{-i*pi*s^3/2} <s>^M e^{-2*pi*i*lam*s} ds: the Bessel-Sobolev
    smoothing of the Airy profile (M <= -2).  Validated for lam <= 4."""
    if M > -2:
        raise ValueError("need M <= -2 for an absolutely convergent weight")
    lam = np.asarray(lam, dtype=float)
    if np.any(lam > 4.0):
        raise ValueError("airy_bessel is supported on the oscillatory side (lam <= 4)")

    def weight(s):
        return (1.0 + np.asarray(s, dtype=complex) ** 2) ** (M / 2.0)

    vals, _ = cubic_chirp_transform(lam, weight=weight)
    return vals if np.ndim(lam) else float(vals[0])


# ----------------------------------------------------------------------
# closed forms from the d = 1 "1 + delta" worked example
# ----------------------------------------------------------------------

def stft_gauss_of_one(x, xi):
    """V_phi 1 (x, xi) = e^{-2*pi*i*x*xi} e^{-pi*xi^2} for phi(t) = e^{-pi t^2}."""
    x = np.asarray(x, dtype=float)
    xi = np.asarray(xi, dtype=float)
    return np.exp(-2j * np.pi * x * xi) * np.exp(-np.pi * xi ** 2)


def stft_gauss_of_delta(x, xi):
    """V_phi delta (x, xi) = e^{-pi*x^2}."""
    x = np.asarray(x, dtype=float)
    xi = np.asarray(xi, dtype=float)
    return np.exp(-np.pi * x ** 2) + 0.0 * xi


def wigner_one_delta(x, xi):
    """Cross-Wigner of the pair (1, delta): 2 e^{-4*pi*i*x*xi} (d = 1)."""
    x = np.asarray(x, dtype=float)
    xi = np.asarray(xi, dtype=float)
    return 2.0 * np.exp(-4j * np.pi * x * xi)


class SingularLine:
    """A Dirac line delta(axis_value - position) carrying a constant density."""

    def __init__(self, axis: str, position: float, density: float = 1.0):
        if axis not in ("x", "xi"):
            raise ValueError("axis must be 'x' or 'xi'")
        self.axis = axis
        self.position = position
        self.density = density

    def __repr__(self):
        return f"SingularLine(axis={self.axis}, pos={self.position}, density={self.density})"


class WignerOnePlusDelta:
    """W(1 + delta) = (line delta on x=0) + (line delta on xi=0)
    + 4*cos(4*pi*x*xi); the lines stay symbolic until smoothed."""

    def __init__(self, grid: Grid2D):
        self.grid = grid
        X, XI = grid.meshgrid()
        self.smooth_part = PhaseSpaceField(grid, 4.0 * np.cos(4 * np.pi * X * XI) + 0j)
        self.lines = [SingularLine("x", 0.0), SingularLine("xi", 0.0)]

    def densify(self):
        raise ValueError(
            "W(1+delta) carries Dirac lines; a grid cannot hold them. "
            "Smooth first (the convolution realizes each line by sifting).")

    def smoothed(self, smoother_x, smoother_xi, smoother_mass_x: float,
                 smoother_mass_xi: float) -> PhaseSpaceField:
        """Convolve with the separable smoother s_x(x) s_xi(xi) given as
        callables plus their total masses (needed for the line sifting)."""
        from .spectral import convolve_field
        X, XI = self.grid.meshgrid(sparse=False)
        sx = smoother_x(self.grid.axis0.points())
        sxi = smoother_xi(self.grid.axis1.points())
        smooth = convolve_field(self.smooth_part, np.outer(sx, sxi), axes=(0, 1)).samples
        for line in self.lines:
            if line.axis == "x":
                smooth = smooth + line.density * smoother_x(X - line.position) * smoother_mass_xi
            else:
                smooth = smooth + line.density * smoother_xi(XI - line.position) * smoother_mass_x
        return PhaseSpaceField(self.grid, smooth)


def wigner_one_plus_delta(grid: Grid2D) -> WignerOnePlusDelta:
    return WignerOnePlusDelta(grid)


def husimi_one_plus_delta(grid: Grid2D) -> PhaseSpaceField:
    """H(1+delta)(x,xi) = e^{-2*pi*x^2} + e^{-2*pi*xi^2}
    + 2*cos(2*pi*x*xi) e^{-pi*(x^2+xi^2)} (exact, nonnegative).

    This is |V_phi 1 + V_phi delta|^2 expanded; the second ridge carries the
    squared modulus |e^{-pi xi^2}|^2 = e^{-2 pi xi^2} (the Gaussian-window
    Wigner convolution route confirms the same width).
    """
    X, XI = grid.meshgrid()
    vals = np.exp(-2 * np.pi * X ** 2) + np.exp(-2 * np.pi * XI ** 2) \
        + 2.0 * np.cos(2 * np.pi * XI * X) * np.exp(-np.pi * (X ** 2 + XI ** 2))
    return PhaseSpaceField(grid, np.broadcast_to(vals, grid.shape).copy())


def _cos_conv_exponential(grid: Grid2D, freq: float = 4.0 * np.pi,
                          nodes_per_unit: int = 600) -> np.ndarray:
    """[cos(freq*u*v) * e^{-|u|-|v|}](x, xi) by reducing the u-convolution to
    the closed form int e^{-|x-u|} cos(a*u) du = 2 cos(a*x)/(1+a^2) and doing
    the v-convolution by quadrature."""
    x = grid.axis0.points()
    xi = grid.axis1.points()
    L = max(abs(xi.min()), abs(xi.max())) + 30.0
    m = 2 * int(L * nodes_per_unit) + 1          # symmetric, includes 0
    s = np.linspace(-L, L, m)
    ds = s[1] - s[0]
    lorentz = 2.0 / (1.0 + (freq * s) ** 2)
    expo = np.exp(-np.abs(xi[:, None] - s[None, :]))           # (n_xi, m)
    C = np.cos(freq * np.outer(x, s))                           # (n_x, m)
    return (C * lorentz[None, :]) @ (expo.T * ds)               # (n_x, n_xi)


class BesselSmoothedOnePlusDelta:
    """W(1+delta) * e^{-|u|-|v|}: exact ridge terms 2*pi*(e^{-|x|} + e^{-|xi|})
    plus the numerically convolved cosine cross term."""

    def __init__(self, grid: Grid2D):
        X, XI = grid.meshgrid(sparse=False)
        self.grid = grid
        self.ridge_terms = 2.0 * np.pi * (np.exp(-np.abs(X)) + np.exp(-np.abs(XI)))
        self.cross_term = 4.0 * _cos_conv_exponential(grid)
        self.field = PhaseSpaceField(grid, self.ridge_terms + self.cross_term)


def bessel_smoothed_one_plus_delta(grid: Grid2D) -> BesselSmoothedOnePlusDelta:
    return BesselSmoothedOnePlusDelta(grid)
