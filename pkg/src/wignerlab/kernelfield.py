"""Kernel fields over Grid4D: dense arrays and factored (profile) forms.

The factored form encodes kernels like v(y - x + 2*eta) * v(xi - eta) as a
product of 1-variable profiles composed with argument maps.  Dirac factors
are kept symbolic and are only realized by smoothing (exact sifting); a
factored kernel refuses to densify while a delta factor remains.
"""

from __future__ import annotations

import numpy as np

from .grids import Grid4D


class DeltaProfile:
    """Symbolic Dirac factor (unit mass).  Cannot be evaluated pointwise."""

    is_delta = True

    def __call__(self, u):
        raise ValueError(
            "kernel carries a symbolic Dirac factor; it has no pointwise "
            "values on a grid.  Smooth it first (convolution realizes the "
            "delta by sifting)."
        )

    def __repr__(self):
        return "DeltaProfile()"


class CallableProfile:
    """Vectorized 1-variable profile."""

    is_delta = False

    def __init__(self, fn, label: str = "profile"):
        self.fn = fn
        self.label = label

    def __call__(self, u):
        return np.asarray(self.fn(np.asarray(u, dtype=float)), dtype=complex)

    def __repr__(self):
        return f"CallableProfile({self.label})"


class TabulatedProfile:
    """Profile stored as dense samples with cubic-spline interpolation.

    Outside the table the profile is treated as 0; tables are built wide
    enough that the dropped tail is below the interpolation tolerance.
    """

    is_delta = False

    def __init__(self, u_table, values, label: str = "tabulated"):
        from scipy.interpolate import CubicSpline

        self.u = np.asarray(u_table, dtype=float)
        self.values = np.asarray(values, dtype=complex)
        if self.u.ndim != 1 or self.u.shape != self.values.shape:
            raise ValueError("table axes mismatch")
        self.label = label
        self._spline = CubicSpline(self.u, self.values, extrapolate=False)

    @classmethod
    def from_function(cls, fn, lo, hi, num, label="tabulated"):
        u = np.linspace(lo, hi, num)
        return cls(u, fn(u), label=label)

    def __call__(self, u):
        u = np.asarray(u, dtype=float)
        vals = self._spline(u)
        return np.where(np.isnan(vals), 0.0 + 0.0j, vals)

    def __repr__(self):
        return f"TabulatedProfile({self.label}, [{self.u[0]:g},{self.u[-1]:g}], n={len(self.u)})"


class KernelField:
    """Base class: a complex kernel k(x, xi, y, eta) over a Grid4D."""

    def __init__(self, grid: Grid4D):
        self.grid = grid

    def evaluate(self, x, xi, y, eta):
        raise NotImplementedError

    def densify(self) -> "DenseKernel":
        raise NotImplementedError


class DenseKernel(KernelField):
    def __init__(self, grid: Grid4D, samples):
        super().__init__(grid)
        samples = np.asarray(samples)
        if samples.shape != grid.shape:
            raise ValueError(f"samples shape {samples.shape} != {grid.shape}")
        self.samples = samples

    def densify(self) -> "DenseKernel":
        return self

    def evaluate(self, x, xi, y, eta):
        """Lattice-point evaluation (arguments must be grid nodes)."""
        idx = []
        for vals, axis in zip((x, xi, y, eta), self.grid.axes):
            v = np.asarray(vals, dtype=float)
            j = np.rint((v - axis.center + axis.half_width) / axis.spacing).astype(int)
            pts = axis.points()
            if np.any((j < 0) | (j >= axis.n)) or np.max(np.abs(pts[j] - v)) > 1e-8 * axis.spacing:
                raise ValueError("dense kernels evaluate on lattice points only")
            idx.append(j)
        return self.samples[tuple(idx)]


class FactoredKernel(KernelField):
    """Product of 1-variable profiles composed with argument maps.

    factors: sequence of (profile, argfn, label) where argfn(x, xi, y, eta)
    returns the profile argument (broadcasting).  A scalar prefactor scales
    the product.
    """

    def __init__(self, grid: Grid4D, factors, scale: complex = 1.0):
        super().__init__(grid)
        self.factors = list(factors)
        self.scale = scale

    @property
    def has_delta(self) -> bool:
        return any(p.is_delta for p, _, _ in self.factors)

    def evaluate(self, x, xi, y, eta):
        if self.has_delta:
            raise ValueError(
                "kernel still carries a symbolic Dirac factor; smooth over "
                "the corresponding axes before evaluating or densifying."
            )
        out = np.asarray(self.scale, dtype=complex)
        for profile, argfn, _ in self.factors:
            out = out * profile(argfn(x, xi, y, eta))
        return out

    def densify(self) -> DenseKernel:
        ax = [a.points() for a in self.grid.axes]
        X = ax[0][:, None, None, None]
        XI = ax[1][None, :, None, None]
        Y = ax[2][None, None, :, None]
        ETA = ax[3][None, None, None, :]
        vals = self.evaluate(X, XI, Y, ETA)
        return DenseKernel(self.grid, np.broadcast_to(vals, self.grid.shape).copy())


class EtaConvolvedKernel(KernelField):
    """A factored kernel post-convolved along eta (quadrature evaluation).

    Needed because eta enters several factors at once (through the canonical
    map), so the convolution does not reduce to a profile convolution.
    """

    def __init__(self, base: FactoredKernel, smoother_fn, half_support: float,
                 nodes: int = 257):
        super().__init__(base.grid)
        self.base = base
        self.smoother_fn = smoother_fn
        u = np.linspace(-half_support, half_support, nodes)
        self._u = u
        self._w = smoother_fn(u) * (u[1] - u[0])

    def evaluate(self, x, xi, y, eta):
        x, xi, y, eta = np.broadcast_arrays(
            *(np.asarray(a, dtype=float) for a in (x, xi, y, eta)))
        shape = x.shape
        flat = [a.reshape(-1, 1) for a in (x, xi, y, eta)]
        vals = self.base.evaluate(flat[0], flat[1], flat[2],
                                  flat[3] - self._u[None, :])
        return (vals @ self._w).reshape(shape)

    def densify(self) -> DenseKernel:
        ax = [a.points() for a in self.grid.axes]
        out = np.empty(self.grid.shape, dtype=complex)
        XI = ax[1][:, None, None]
        Y = ax[2][None, :, None]
        ETA = ax[3][None, None, :]
        for i, xv in enumerate(ax[0]):
            out[i] = self.evaluate(np.full_like(XI, xv), XI, Y, ETA)
        return DenseKernel(self.grid, out)
