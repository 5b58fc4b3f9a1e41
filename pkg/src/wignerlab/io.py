"""Binary field format with JSON sidecar, and CSV export for 2D slices.

Binary layout: little-endian 64-bit floats, interleaved (re, im), row-major
in the documented axis order.  The sidecar carries the axes, a kind tag
("signal" | "field2d" | "kernel4d"), a real_only flag, and free-form
provenance.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .grids import Grid1D, Grid2D, Grid4D, PhaseSpaceField, Signal
from .kernelfield import DenseKernel

KINDS = ("signal", "field2d", "kernel4d")


def _sidecar_path(path: Path) -> Path:
    return path.with_suffix(".json")


def save_field(path, samples: np.ndarray, axes, kind: str,
               real_only: bool = False, provenance: dict | None = None) -> Path:
    if kind not in KINDS:
        raise ValueError(f"kind must be one of {KINDS}")
    path = Path(path)
    data = np.asarray(samples, dtype=complex)
    inter = np.empty(data.shape + (2,), dtype="<f8")
    inter[..., 0] = data.real
    inter[..., 1] = data.imag
    inter.tofile(path)
    sidecar = {
        "axes": [{"center": a.center, "half_width": a.half_width, "n": a.n}
                 for a in axes],
        "kind": kind,
        "real_only": bool(real_only),
    }
    if provenance:
        sidecar["provenance"] = provenance
    _sidecar_path(path).write_text(json.dumps(sidecar, indent=2))
    return path


def save_signal(path, signal: Signal, provenance=None) -> Path:
    return save_field(path, signal.samples, [signal.grid], "signal",
                      provenance=provenance)


def save_field2d(path, field: PhaseSpaceField, provenance=None,
                 real_only: bool = False) -> Path:
    return save_field(path, field.samples, [field.grid.axis0, field.grid.axis1],
                      "field2d", real_only=real_only, provenance=provenance)


def save_kernel4d(path, kernel: DenseKernel, provenance=None) -> Path:
    return save_field(path, kernel.samples, list(kernel.grid.axes), "kernel4d",
                      provenance=provenance)


def load_field(path):
    """Returns (samples, grids, sidecar_dict)."""
    path = Path(path)
    side = _sidecar_path(path)
    if not side.exists():
        raise FileNotFoundError(f"missing sidecar {side}")
    meta = json.loads(side.read_text())
    grids = [Grid1D(a["center"], a["half_width"], a["n"]) for a in meta["axes"]]
    shape = tuple(g.n for g in grids)
    expected = int(np.prod(shape)) * 2
    raw = np.fromfile(path, dtype="<f8")
    if raw.size != expected:
        offset = raw.size * 8
        raise ValueError(f"malformed field file {path}: expected {expected * 8} "
                         f"bytes of payload, file ends at byte offset {offset}")
    raw = raw.reshape(shape + (2,))
    samples = raw[..., 0] + 1j * raw[..., 1]
    return samples, grids, meta


def load_field2d(path) -> PhaseSpaceField:
    samples, grids, meta = load_field(path)
    if meta["kind"] != "field2d":
        raise ValueError(f"{path} holds kind {meta['kind']!r}, not field2d")
    return PhaseSpaceField(Grid2D(grids[0], grids[1]), samples)


def export_slice_csv(path, field: PhaseSpaceField) -> Path:
    """CSV export of a 2D field: header x,xi,re,im."""
    path = Path(path)
    x = field.grid.axis0.points()
    xi = field.grid.axis1.points()
    with path.open("w") as fh:
        fh.write("x,xi,re,im\n")
        for i, xv in enumerate(x):
            row = field.samples[i]
            for j, xiv in enumerate(xi):
                fh.write(f"{xv:.17g},{xiv:.17g},{row[j].real:.17g},{row[j].imag:.17g}\n")
    return path
