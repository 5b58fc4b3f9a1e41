"""Phase functions, symbols, type-I FIO application, Schwartz kernels, and
the canonical transformation solved from xi = Phi_x, y = Phi_xi.

Supported phase families (d = 1):
  * kohn_nirenberg          Phi = x*xi
  * quadratic               Phi = axx/2 x^2 + axy x xi + ayy/2 xi^2 + bx x + by xi
  * multiplier              Phi = x*xi - t*phi(xi), phi polynomial
  * custom                  user-supplied Phi, Phi_x, Phi_xi evaluators
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from numpy.polynomial import polynomial as P

from .grids import Grid1D, Grid2D, PhaseSpaceField, Signal
from .spectral import dft


class DegeneratePhaseError(ValueError):
    """Mixed second derivative d^2 Phi / dx dxi is (numerically) singular, so
    the canonical transformation cannot be solved from the stationarity
    system."""


@dataclass(frozen=True)
class PhaseSpec:
    family: str
    t: float = 0.0
    phi_coeffs: tuple = ()              # lowest degree first
    quad: tuple = ()                    # (axx, axy, ayy, bx, by)
    custom_fns: tuple = field(default=(), repr=False)

    # ---- constructors -------------------------------------------------
    @classmethod
    def kohn_nirenberg(cls) -> "PhaseSpec":
        return cls(family="multiplier", t=0.0, phi_coeffs=(0.0,))

    @classmethod
    def multiplier(cls, t: float, phi_coeffs: Sequence[float]) -> "PhaseSpec":
        coeffs = tuple(float(c) for c in phi_coeffs) or (0.0,)
        return cls(family="multiplier", t=float(t), phi_coeffs=coeffs)

    @classmethod
    def quadratic(cls, axx=0.0, axy=1.0, ayy=0.0, bx=0.0, by=0.0) -> "PhaseSpec":
        return cls(family="quadratic", quad=(axx, axy, ayy, bx, by))

    @classmethod
    def custom(cls, phi: Callable, phi_x: Callable, phi_xi: Callable) -> "PhaseSpec":
        return cls(family="custom", custom_fns=(phi, phi_x, phi_xi))

    @classmethod
    def from_json(cls, text: str) -> "PhaseSpec":
        cfg = json.loads(text)
        fam = cfg.get("family", "multiplier")
        if fam in ("kohn-nirenberg", "kohn_nirenberg"):
            return cls.kohn_nirenberg()
        if fam == "multiplier":
            return cls.multiplier(cfg.get("t", 0.0), cfg.get("phi", [0.0]))
        if fam == "quadratic":
            return cls.quadratic(*(cfg.get(k, d) for k, d in
                                   (("axx", 0.0), ("axy", 1.0), ("ayy", 0.0),
                                    ("bx", 0.0), ("by", 0.0))))
        raise ValueError(f"unsupported phase family in config: {fam!r}")

    def to_json(self) -> str:
        if self.family == "multiplier":
            return json.dumps({"family": "multiplier", "t": self.t,
                               "phi": list(self.phi_coeffs)})
        if self.family == "quadratic":
            axx, axy, ayy, bx, by = self.quad
            return json.dumps({"family": "quadratic", "axx": axx, "axy": axy,
                               "ayy": ayy, "bx": bx, "by": by})
        raise ValueError("custom phases have no JSON form")

    # ---- basic queries -------------------------------------------------
    @property
    def phi_degree(self) -> int:
        if self.family != "multiplier":
            return -1
        nz = [i for i, c in enumerate(self.phi_coeffs) if c != 0.0]
        return max(nz) if nz else 0

    @property
    def is_quadratic(self) -> bool:
        """Whether the phase is a polynomial of total degree <= 2 (the
        third-order remainder vanishes identically)."""
        if self.family == "quadratic":
            return True
        if self.family == "multiplier":
            return self.phi_degree <= 2
        return False

    def decay_analysis_ok(self) -> bool:
        """Bounded third-and-higher derivatives: polynomial multiplier phases
        of degree <= 3 (and all quadratic phases)."""
        if self.family == "quadratic":
            return True
        if self.family == "multiplier":
            return self.phi_degree <= 3
        return False

    # ---- evaluation ----------------------------------------------------
    def phi(self, x, xi):
        x = np.asarray(x, dtype=float)
        xi = np.asarray(xi, dtype=float)
        if self.family == "multiplier":
            return x * xi - self.t * P.polyval(xi, self.phi_coeffs)
        if self.family == "quadratic":
            axx, axy, ayy, bx, by = self.quad
            return 0.5 * axx * x ** 2 + axy * x * xi + 0.5 * ayy * xi ** 2 \
                + bx * x + by * xi
        return self.custom_fns[0](x, xi)

    def phi_x(self, x, xi):
        x = np.asarray(x, dtype=float)
        xi = np.asarray(xi, dtype=float)
        if self.family == "multiplier":
            return xi + 0.0 * x
        if self.family == "quadratic":
            axx, axy, _, bx, _ = self.quad
            return axx * x + axy * xi + bx
        return self.custom_fns[1](x, xi)

    def phi_xi(self, x, xi):
        x = np.asarray(x, dtype=float)
        xi = np.asarray(xi, dtype=float)
        if self.family == "multiplier":
            dphi = P.polyval(xi, P.polyder(self.phi_coeffs)) if len(self.phi_coeffs) > 1 else 0.0
            return x - self.t * dphi
        if self.family == "quadratic":
            _, axy, ayy, _, by = self.quad
            return axy * x + ayy * xi + by
        return self.custom_fns[2](x, xi)

    def phase_difference(self, x, eta, t, r):
        """Phi(x+t/2, eta+r/2) - Phi(x-t/2, eta-r/2) (exact identity)."""
        return self.phi(x + t / 2, eta + r / 2) - self.phi(x - t / 2, eta - r / 2)

    def third_remainder(self, x, eta, t, r):
        """phase_difference minus its linearization t*Phi_x + r*Phi_xi at
        (x, eta); the quadratic terms cancel in the symmetric difference, so
        this is the cubic-and-higher contribution."""
        x, eta, t, r = (np.asarray(a, dtype=float) for a in (x, eta, t, r))
        if self.is_quadratic:
            return np.zeros(np.broadcast(x, eta, t, r).shape)
        if self.family == "multiplier":
            # only phi contributes: -t_coef * [phi(eta+r/2) - phi(eta-r/2) - r phi'(eta)]
            c = self.phi_coeffs
            odd = P.polyval(eta + r / 2, c) - P.polyval(eta - r / 2, c)
            lin = r * P.polyval(eta, P.polyder(c))
            return -self.t * (odd - lin)
        return self.phase_difference(x, eta, t, r) \
            - t * self.phi_x(x, eta) - r * self.phi_xi(x, eta)


class SymbolSpec:
    """Symbol sigma(x, xi); expected bounded with bounded derivatives."""

    def __init__(self, evaluator: Callable | None = None, label: str = "sigma",
                 trig_terms: Sequence[tuple] | None = None):
        self.evaluator = evaluator if evaluator is not None else (
            lambda x, xi: np.ones(np.broadcast(np.asarray(x), np.asarray(xi)).shape))
        self.label = label
        # optional exact representation sigma = sum c * e^{i(a x + b xi)}
        self.trig_terms = list(trig_terms) if trig_terms is not None else None
        self.s00_witness: dict | None = None

    @classmethod
    def one(cls) -> "SymbolSpec":
        return cls(label="1")

    @classmethod
    def from_trig(cls, terms: Sequence[tuple], label: str = "trig") -> "SymbolSpec":
        """terms: iterable of (coef, a, b) meaning coef * e^{i(a*x + b*xi)}."""
        terms = [(complex(c), float(a), float(b)) for c, a, b in terms]

        def ev(x, xi):
            x = np.asarray(x, dtype=float)
            xi = np.asarray(xi, dtype=float)
            out = np.zeros(np.broadcast(x, xi).shape, dtype=complex)
            for c, a, b in terms:
                out = out + c * np.exp(1j * (a * x + b * xi))
            return out

        return cls(ev, label=label, trig_terms=terms)

    @property
    def is_one(self) -> bool:
        return self.label == "1"

    def __call__(self, x, xi):
        return np.asarray(self.evaluator(x, xi), dtype=complex)

    def spot_check(self, grid: Grid2D, bound: float = 1e6) -> dict:
        """Sample |sigma| on a grid; record a boundedness witness."""
        X, XI = grid.meshgrid()
        m = float(np.abs(self(X, XI)).max())
        self.s00_witness = {"max_abs": m, "bounded": bool(np.isfinite(m) and m <= bound)}
        return self.s00_witness


@dataclass(frozen=True)
class CanonicalMap:
    """z = chi(w): the symplectic map solved from xi = Phi_x(x, eta),
    y = Phi_xi(x, eta)."""

    fn: Callable = field(repr=False)
    family: str = "custom"

    def __call__(self, y, eta):
        return self.fn(np.asarray(y, dtype=float), np.asarray(eta, dtype=float))

    @classmethod
    def identity(cls) -> "CanonicalMap":
        return cls(fn=lambda y, eta: (y, eta), family="identity")

    def consistency_residual(self, phase: PhaseSpec, y, eta) -> float:
        """Max residual of the stationarity system at chi(y, eta)."""
        x, xi = self(y, eta)
        r1 = np.abs(xi - phase.phi_x(x, eta))
        r2 = np.abs(y - phase.phi_xi(x, eta))
        return float(max(np.max(r1), np.max(r2)))


def canonical_map(phase: PhaseSpec, degeneracy_tol: float = 1e-12) -> CanonicalMap:
    if phase.family == "multiplier":
        t = phase.t
        dphi = P.polyder(phase.phi_coeffs) if len(phase.phi_coeffs) > 1 else (0.0,)

        def chi(y, eta):
            return (y + t * P.polyval(eta, dphi), eta + 0.0 * y)

        return CanonicalMap(fn=chi, family="multiplier")
    if phase.family == "quadratic":
        axx, axy, ayy, bx, by = phase.quad
        if abs(axy) < degeneracy_tol:
            raise DegeneratePhaseError(
                f"|d^2 Phi/dx dxi| = {abs(axy):g} < {degeneracy_tol:g}: the "
                "mixed-derivative block is degenerate and the stationarity "
                "system has no (stable) solution for (x, xi).")

        def chi(y, eta):
            x = (y - ayy * eta - by) / axy
            xi = axx * x + axy * eta + bx
            return (x, xi)

        return CanonicalMap(fn=chi, family="quadratic")
    raise ValueError(
        "canonical_map supports the kohn_nirenberg / quadratic / multiplier "
        "families; custom phases would need a Newton solve, which is out of "
        "scope.")


def lambda_phi(phase: PhaseSpec, z, w):
    """Phase-adapted weight (1 + |xi - Phi_x(x,eta)|^2 + |y - Phi_xi(x,eta)|^2)^{1/2}."""
    x, xi = (np.asarray(a, dtype=float) for a in z)
    y, eta = (np.asarray(a, dtype=float) for a in w)
    r1 = xi - phase.phi_x(x, eta)
    r2 = y - phase.phi_xi(x, eta)
    return np.sqrt(1.0 + r1 ** 2 + r2 ** 2)


def tilde_symbol(phase: PhaseSpec, symbol: SymbolSpec, x, eta, t, r):
    """sigma-tilde(x, eta, t, r): the twisted symbol of the Wigner kernel,
    e^{2*pi*i*(third-order remainder)} sigma(x+t/2, eta+r/2) conj(sigma(x-t/2, eta-r/2))."""
    x, eta, t, r = (np.asarray(a, dtype=float) for a in (x, eta, t, r))
    rem = phase.third_remainder(x, eta, t, r)
    return np.exp(2j * np.pi * rem) * symbol(x + t / 2, eta + r / 2) \
        * np.conj(symbol(x - t / 2, eta - r / 2))


def apply_fio(phase: PhaseSpec, symbol: SymbolSpec, f: Signal,
              out_grid: Grid1D | None = None) -> Signal:
    """T f(x) = int e^{2*pi*i*Phi(x,xi)} sigma(x,xi) fhat(xi) dxi, row by row."""
    out_grid = out_grid if out_grid is not None else f.grid
    fh = dft(f)
    xi = fh.grid.points()
    x = out_grid.points()
    X = x[:, None]
    XI = xi[None, :]
    sig = symbol(X, XI)
    m = float(np.abs(sig).max()) if sig.size else 0.0
    if not np.isfinite(m) or m > 1e6:
        warnings.warn(f"symbol samples look unbounded (max |sigma| = {m:g}); "
                      "results may be meaningless", RuntimeWarning)
    rows = np.exp(2j * np.pi * phase.phi(X, XI)) * sig
    vals = rows @ (fh.samples * fh.grid.spacing)
    return Signal(out_grid, vals)


def schwartz_kernel(phase: PhaseSpec, symbol: SymbolSpec, grid: Grid1D,
                    band: Grid1D | None = None) -> PhaseSpaceField:
    """Discrete Schwartz kernel k_T(x, y) of the type-I operator:
    column j equals T applied to the discrete delta at y_j, scaled by
    1/spacing; equivalently the xi-quadrature of e^{2 pi i (Phi(x,xi) - y xi)} sigma."""
    band = band if band is not None else grid.reciprocal()
    xi = band.points()
    x = grid.points()
    rows = np.exp(2j * np.pi * phase.phi(x[:, None], xi[None, :])) \
        * symbol(x[:, None], xi[None, :])
    cols = np.exp(-2j * np.pi * np.outer(xi, x))
    kt = (rows * band.spacing) @ cols
    return PhaseSpaceField(Grid2D(grid, grid), kt)
