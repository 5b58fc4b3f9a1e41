"""Wigner kernels of type-I FIOs by independent routes, and the Gabor matrix.

Routes:
  * wigner_kernel_via_schwartz: numerical; samples the Schwartz kernel k_T on
    a x2-fine lattice, takes the cyclic 2-variable cross-Wigner in (x, y)
    jointly, and relabels axes (eta -> -eta).  For quadratic-family phases
    this is used unsmoothed or smoothed; for cubic multiplier phases the
    circulant structure k_W = delta(xi - eta) * W[m](eta, y - x) is exploited
    and the (xi, y) smoothing is folded into the lag quadrature before
    sampling (the raw kernel is a distribution the lattice cannot hold).
  * wigner_kernel_analytic: closed-form factored kernels for multiplier
    phases, with Dirac factors symbolic until smoothed.

The discrete 2-variable Wigner uses the doubled cyclic lag range with
quadrature weight (spacing/2)^2: the doubled range covers two periods of the
circulant lag products and exists only to oversample the output lattice, so
one period's worth of weight is the correct normalization.
"""

from __future__ import annotations

import warnings

import numpy as np

from .grids import Grid1D, Grid2D, Grid4D, PhaseSpaceField, Signal
from .kernelfield import (CallableProfile, DeltaProfile, DenseKernel,
                          EtaConvolvedKernel, FactoredKernel, KernelField,
                          TabulatedProfile)
from .phases import PhaseSpec, SymbolSpec, apply_fio, canonical_map
from .smoothing import SmoothingSpec, bessel_values, gaussian_profile, smooth_profile
from .transforms import WindowSpec, wigner_grid
from . import reference

MEMORY_GUARD_N = 64


class MemoryGuardError(ValueError):
    """Dense 4D kernel would exceed the desk-scale memory budget."""


def natural_kernel_grid(grid: Grid1D) -> Grid4D:
    """The Grid4D produced by the Schwartz route for signals on `grid`:
    x, y are the signal grid; xi, eta the (doubled, half-spaced) reciprocal
    axis of the cross-Wigner."""
    freq = wigner_grid(grid).axis1
    return Grid4D(grid, freq, grid, freq)


def _validate_kernel_grid(grid4: Grid4D) -> Grid1D:
    base = grid4.x
    if abs(base.center) > 1e-12:
        raise ValueError("kernel grids must be centered at 0")
    nat = natural_kernel_grid(base)
    if nat != grid4:
        raise ValueError(
            "grid4 is not the natural Schwartz-route grid of its x axis; "
            "build it with natural_kernel_grid(...)")
    return base


def _fine_schwartz_samples(phase: PhaseSpec, symbol: SymbolSpec,
                           grid: Grid1D) -> np.ndarray:
    """k_T sampled directly on the x2-fine (2n x 2n) lattice via the
    fine-band quadrature (band = reciprocal of the fine grid)."""
    n = grid.n
    fine = grid.refined(2)
    band = fine.reciprocal()
    xf = fine.points()
    xi = band.points()
    rows = np.exp(2j * np.pi * phase.phi(xf[:, None], xi[None, :])) \
        * symbol(xf[:, None], xi[None, :]) * band.spacing
    cols = np.exp(-2j * np.pi * np.outer(xi, xf))
    return rows @ cols


def cross_wigner_2d_cyclic(fine_kt: np.ndarray, grid: Grid1D) -> DenseKernel:
    """Joint 2-variable cross-Wigner of a fine-sampled kernel, relabeled to
    k_W(x, xi, y, eta) = W k_T(x, y, xi, -eta).  Cyclic lag products."""
    n = grid.n
    nf = 2 * n
    dx = grid.spacing
    if fine_kt.shape != (nf, nf):
        raise ValueError("fine kernel samples must be (2n, 2n)")
    idx = np.arange(nf)
    sgn = (-1.0) ** idx
    negmap = (nf - idx) % nf
    j2 = np.arange(n)
    ja = (2 * j2[:, None] + idx[None, :]) % nf
    jb = (2 * j2[:, None] - idx[None, :]) % nf
    out = np.empty((n, nf, n, nf), dtype=complex)
    w2 = (dx / 2.0) ** 2
    for j1 in range(n):
        ia = (2 * j1 + idx) % nf
        ib = (2 * j1 - idx) % nf
        P = fine_kt[ia[None, :, None], ja[:, None, :]] \
            * np.conj(fine_kt[ib[None, :, None], jb[:, None, :]])
        P *= sgn[None, :, None] * sgn[None, None, :]
        W = np.fft.fft2(P, axes=(1, 2)) * w2
        out[j1] = np.transpose(W[:, :, negmap], (1, 0, 2))
    return DenseKernel(natural_kernel_grid(grid), out)


class MultiplierKernel(FactoredKernel):
    """Factored Wigner kernel of a multiplier-phase FIO (sigma = 1):

        k(x, xi, y, eta) = P_tau(y - x + t*phi'(eta)) * P_xi(xi - eta)

    P_xi starts as a Dirac; P_tau is a Dirac for quadratic phases and the
    (scaled) Airy profile for cubic ones.  Smoothing is absorbed into the
    profiles, exactly for the Dirac factors.
    """

    def __init__(self, grid: Grid4D, phase: PhaseSpec, profile_tau, profile_xi,
                 tau_tag=None, scale: complex = 1.0):
        if phase.family != "multiplier":
            raise ValueError("MultiplierKernel needs a multiplier phase")
        self.phase = phase
        self.chi = canonical_map(phase)
        self.profile_tau = profile_tau
        self.profile_xi = profile_xi
        self.tau_tag = tau_tag          # ("delta",) | ("airy", c) | ("generic",)

        def arg_tau(x, xi, y, eta):
            cx, _ = self.chi(y, eta)
            return cx - x

        def arg_xi(x, xi, y, eta):
            return np.asarray(xi) - np.asarray(eta)

        super().__init__(grid, [(profile_tau, arg_tau, "tau"),
                                (profile_xi, arg_xi, "xi")], scale=scale)

    def _smooth_tau(self, spec: SmoothingSpec):
        tag = self.tau_tag
        if tag[0] == "delta":
            return smooth_profile(DeltaProfile(), spec), ("generic",)
        if tag[0] == "airy":
            c = tag[1]
            if spec.kind == "gaussian":
                lam = np.linspace(-45.0, 45.0, 6001)
                vals = np.where(np.abs(lam) <= 42.0,
                                reference.airy_gauss(np.clip(lam, -42, 42), c=c), 0.0)
                return TabulatedProfile(lam, vals, label=f"airy_gauss(c={c:g})"), ("generic",)
            # Bessel weight decays too slowly to pair with the oscillatory
            # Airy profile at full accuracy; tabulate on the validated window.
            lam = np.linspace(-45.0, 4.0, 4001)
            vals = reference.airy_bessel(lam, M=spec.M)
            warnings.warn("Bessel smoothing of an Airy-type profile is "
                          "tabulated on lam in [-45, 4] and treated as 0 "
                          "beyond; use Gaussian smoothing for full-domain "
                          "work", RuntimeWarning)
            return TabulatedProfile(lam, vals, label=f"airy_v{spec.M}"), ("generic",)
        return smooth_profile(self.profile_tau, spec), ("generic",)

    def smoothed(self, spec: SmoothingSpec) -> KernelField:
        p_tau, tag = self.profile_tau, self.tau_tag
        p_xi = self.profile_xi
        for ax in spec.axes:
            if ax in ("x", "y"):
                k = MultiplierKernel(self.grid, self.phase, p_tau, p_xi, tag, self.scale)
                p_tau, tag = k._smooth_tau(spec)
            elif ax == "xi":
                p_xi = smooth_profile(p_xi, spec)
        out = MultiplierKernel(self.grid, self.phase, p_tau, p_xi, tag, self.scale)
        if "eta" in spec.axes:
            if self.phase.phi_degree <= 1:
                # arg_tau is eta-free: the eta convolution only sees P_xi
                out = MultiplierKernel(self.grid, self.phase, p_tau,
                                       smooth_profile(p_xi, spec), tag, self.scale)
            else:
                if out.has_delta:
                    raise ValueError("smooth the delta-bearing axes first")
                half = 4.0 if spec.kind == "gaussian" else 8.0
                return EtaConvolvedKernel(out, spec.profile, half_support=half)
        return out


def wigner_kernel_analytic(phase: PhaseSpec, grid4: Grid4D) -> MultiplierKernel:
    """Closed-form factored Wigner kernel for multiplier phases.

    Quadratic multiplier phases give a double Dirac on xi = eta,
    y = x - t*phi'(eta); a cubic term adds the Airy profile in the tau slot.
    Dirac factors stay symbolic: densify only after smoothing.
    """
    if phase.family != "multiplier":
        raise ValueError("analytic kernels cover the multiplier family")
    if not phase.decay_analysis_ok():
        raise ValueError("analytic kernels need polynomial phi of degree <= 3")
    deg = phase.phi_degree
    c3 = phase.t * (phase.phi_coeffs[3] if deg >= 3 else 0.0)
    p_xi = DeltaProfile()
    if deg <= 2 or c3 == 0.0:
        p_tau = DeltaProfile()
        tag = ("delta",)
    else:
        cc = c3
        p_tau = CallableProfile(lambda lam: reference.airy_scaled(lam, cc),
                                label=f"airy(c={cc:g})")
        tag = ("airy", cc)
    return MultiplierKernel(grid4, phase, p_tau, p_xi, tau_tag=tag)


def _reduced_smoothed_kernel(phase: PhaseSpec, grid: Grid1D,
                             spec: SmoothingSpec) -> DenseKernel:
    """Schwartz-route kernel for non-quadratic multiplier phases with the
    (xi, y) smoothing folded into the lag quadrature:

        k#(x, xi, y, eta) = g(xi - eta) * SW(eta, y - x),
        SW(eta, tau) = int m(eta+s/2) conj(m(eta-s/2)) ghat(s) e^{-2 pi i s tau} ds,

    where m is the multiplier symbol of the operator and ghat the smoother
    transform.  This is the exact circulant reduction of the 2-variable
    Wigner; the ghat weight makes the lag integral absolutely convergent, so
    sampling happens after smoothing and no fold aliasing occurs.
    """
    if spec.kind != "gaussian":
        raise ValueError(
            "the numerical route for non-quadratic phases supports Gaussian "
            "smoothing only (a Bessel weight decays too slowly in the lag "
            "variable); use wigner_kernel_analytic for Bessel work")
    g4 = natural_kernel_grid(grid)
    eta = g4.eta.points()
    tau = Grid1D(0.0, grid.half_width, grid.n).points()
    # lag quadrature: Gaussian weight kills |s| > ~6
    smax = 6.0
    rate = 0.0
    c = phase.phi_coeffs
    dmax = np.abs(np.polyval(np.polyder(np.array(c[::-1])), eta)).max() if len(c) > 1 else 0.0
    rate = 2 * np.pi * (abs(phase.t) * dmax + np.abs(tau).max() + 3.0 * smax)
    m = max(2048, int(2 * smax * rate / (2 * np.pi) * 8))
    s = np.linspace(-smax, smax, m + 1)
    ds = s[1] - s[0]
    from .smoothing import gaussian_hat
    E, S = np.meshgrid(eta, s, indexing="ij")
    pd = -phase.t * (np.polyval(np.array(c[::-1]), E + S / 2)
                     - np.polyval(np.array(c[::-1]), E - S / 2))
    W = np.exp(2j * np.pi * pd) * gaussian_hat(s)[None, :]
    sw = (W @ np.exp(-2j * np.pi * np.outer(s, tau))) * ds      # (n_eta, n_tau)

    n = grid.n
    didx = (np.arange(n)[None, :] - np.arange(n)[:, None] + n // 2) % n  # wrap(y - x)
    gxi = gaussian_profile(g4.xi.points()[:, None] - eta[None, :])
    out = gxi[None, :, None, :] * np.transpose(sw[:, didx], (1, 2, 0))[:, None, :, :]
    return DenseKernel(g4, np.ascontiguousarray(out))


def wigner_kernel_via_schwartz(phase: PhaseSpec, symbol: SymbolSpec,
                               grid4: Grid4D,
                               smoothing: SmoothingSpec | None = None,
                               allow_large: bool = False) -> DenseKernel:
    """Numerical Wigner kernel via the Schwartz kernel (dense result).

    For quadratic-family phases any smoothing is applied after the dense
    build; non-quadratic multiplier phases require a smoothing covering
    (xi, y) because the unsmoothed kernel is a genuine distribution whose
    lattice samples would alias (the same reason a bare Dirac cannot be
    densified).
    """
    base = _validate_kernel_grid(grid4)
    if base.n > MEMORY_GUARD_N and not allow_large:
        raise MemoryGuardError(
            f"n = {base.n} > {MEMORY_GUARD_N} per axis needs allow_large=True "
            f"(dense kernel would hold {base.n ** 2 * 4 * base.n ** 2} values)")
    if phase.is_quadratic:
        fine = _fine_schwartz_samples(phase, symbol, base)
        dense = cross_wigner_2d_cyclic(fine, base)
        if smoothing is not None:
            from .smoothing import smooth_kernel
            dense = smooth_kernel(dense, smoothing)
        return dense
    if phase.family != "multiplier" or not phase.decay_analysis_ok():
        raise ValueError("the Schwartz route covers quadratic-family phases "
                         "and multiplier phases of degree <= 3")
    if not symbol.is_one:
        raise ValueError("non-quadratic multiplier route needs sigma = 1 "
                         "(general symbols break the circulant reduction)")
    if smoothing is None or not {"xi", "y"} <= set(smoothing.axes):
        raise ValueError(
            "the unsmoothed Wigner kernel of a non-quadratic phase is a "
            "distribution; request a smoothing covering ('xi', 'y') "
            "(cf. the refusal to densify a symbolic Dirac)")
    dense = _reduced_smoothed_kernel(phase, base, smoothing)
    rest = tuple(a for a in smoothing.axes if a not in ("xi", "y"))
    if rest:
        from .smoothing import smooth_kernel
        dense = smooth_kernel(dense, SmoothingSpec(smoothing.kind, rest, smoothing.M))
    return dense


def wigner_contraction(kernel: DenseKernel, field: PhaseSpaceField) -> PhaseSpaceField:
    """Integrate the kernel against a phase-space field over w = (y, eta):
    out(z) = sum_w k(z, w) field(w) * cell."""
    g = kernel.grid
    if (g.y, g.eta) != (field.grid.axis0, field.grid.axis1):
        raise ValueError("field grid must match the kernel's (y, eta) axes")
    cell = g.y.spacing * g.eta.spacing
    out = np.tensordot(kernel.samples, field.samples, axes=([2, 3], [0, 1])) * cell
    return PhaseSpaceField(Grid2D(g.x, g.xi), out)


def time_frequency_shift(grid: Grid1D, window, x0: float, xi0: float) -> Signal:
    """pi(z) g sampled on the grid: e^{2 pi i xi0 t} g(t - x0)."""
    t = grid.points()
    return Signal(grid, np.exp(2j * np.pi * xi0 * t) * window(t - x0))


def gabor_matrix(phase: PhaseSpec, symbol: SymbolSpec, z, w,
                 window: WindowSpec | None = None,
                 grid: Grid1D | None = None) -> complex:
    """G(z, w) = <T pi(z) g, pi(w) g> by quadrature on the working grid."""
    window = window or WindowSpec(normalization="wigner_unit")
    grid = grid or Grid1D(0.0, 8.0, 256)
    gz = time_frequency_shift(grid, window, z[0], z[1])
    gw = time_frequency_shift(grid, window, w[0], w[1])
    edge = max(abs(gz.samples[0]), abs(gz.samples[-1]),
               abs(gw.samples[0]), abs(gw.samples[-1]))
    peak = max(np.abs(gz.samples).max(), np.abs(gw.samples).max())
    if edge > 1e-6 * peak:
        warnings.warn("time-frequency shift has significant mass at the grid "
                      "boundary; Gabor matrix entry may be inaccurate",
                      RuntimeWarning)
    Tgz = apply_fio(phase, symbol, gz)
    return complex(grid.spacing * np.sum(Tgz.samples * np.conj(gw.samples)))


class TrigBesselKernel(KernelField):
    """Exact Bessel-smoothed Wigner kernel k_{W,M} of a Kohn-Nirenberg
    operator with trigonometric-polynomial symbol sigma = sum c e^{i(ax+b xi)}.

    Each symbol pair contributes shifted Dirac factors delta(xi-eta-A),
    delta(y-x-B); the (xi, y) Bessel smoothing sifts them into v_M profiles
    and the (x, eta) smoothing produces the cross profiles
    w_{M,s}(u) = int <om>^M <om-s>^M e^{2 pi i u om} d om (tabulated).
    """

    def __init__(self, symbol: SymbolSpec, M: int, grid4: Grid4D):
        super().__init__(grid4)
        if symbol.trig_terms is None:
            raise ValueError("symbol must carry an exact trig representation")
        if int(M) != M or M > -2:
            raise ValueError("need integer M <= -2")
        self.M = int(M)
        self.terms = []
        shifts = set()
        for cp, ap, bp in symbol.trig_terms:
            for cq, aq, bq in symbol.trig_terms:
                abar = ap - aq
                bbar = bp - bq
                A = (ap + aq) / (4 * np.pi)
                B = (bp + bq) / (4 * np.pi)
                self.terms.append((cp * np.conj(cq), abar, bbar, A, B))
                shifts.add(round(abar / (2 * np.pi), 12))
                shifts.add(round(bbar / (2 * np.pi), 12))
        self._w = {s: self._cross_profile(self.M, s) for s in shifts}

    @staticmethod
    def _cross_profile(M: int, s: float, band: float = 60.0,
                       n: int = 1 << 17) -> TabulatedProfile:
        from .spectral import idft
        wgrid = Grid1D(0.0, band, n)
        om = wgrid.points()
        vals = (1.0 + om ** 2) ** (M / 2.0) * (1.0 + (om - s) ** 2) ** (M / 2.0)
        sig = idft(Signal(wgrid, vals.astype(complex)))
        return TabulatedProfile(sig.grid.points(), sig.samples,
                                label=f"w(M={M}, s={s:g})")

    def evaluate(self, x, xi, y, eta):
        x, xi, y, eta = (np.asarray(a, dtype=float) for a in (x, xi, y, eta))
        out = np.zeros(np.broadcast(x, xi, y, eta).shape, dtype=complex)
        for C, abar, bbar, A, B in self.terms:
            wa = self._w[round(abar / (2 * np.pi), 12)]
            wb = self._w[round(bbar / (2 * np.pi), 12)]
            out = out + (C
                         * np.exp(1j * abar * (y - B)) * wa(x - y + B)
                         * np.exp(1j * bbar * (xi - A)) * wb(eta - xi + A))
        return out

    def densify(self) -> DenseKernel:
        ax = [a.points() for a in self.grid.axes]
        X = ax[0][:, None, None, None]
        XI = ax[1][None, :, None, None]
        Y = ax[2][None, None, :, None]
        ETA = ax[3][None, None, None, :]
        return DenseKernel(self.grid, self.evaluate(X, XI, Y, ETA))
