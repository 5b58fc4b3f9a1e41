import numpy as np
import pytest

from wignerlab.grids import Grid1D, Signal


@pytest.fixture
def grid256():
    return Grid1D(0.0, 8.0, 256)


@pytest.fixture
def gauss256(grid256):
    return Signal.from_function(grid256, lambda t: np.exp(-np.pi * t ** 2))


def brute_wigner(f_fn, g_fn, x, xi, t_half=10.0, dt=1e-3):
    """Independent quadrature oracle for W(f,g)(x, xi) from analytic f, g."""
    t = np.arange(-t_half, t_half, dt)
    vals = f_fn(x + t / 2) * np.conj(g_fn(x - t / 2)) * np.exp(-2j * np.pi * xi * t)
    return np.sum(vals) * dt


def brute_ft(f_fn, xi, t_half=10.0, dt=1e-3):
    t = np.arange(-t_half, t_half, dt)
    return np.sum(f_fn(t) * np.exp(-2j * np.pi * xi * t)) * dt
