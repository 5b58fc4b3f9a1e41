"""wigner-lab: command-line surface over the library.

Subcommands: wigner, stft, husimi, kernel, gabor, ghostbusters, decay.
Exit codes: 0 success, 2 usage error, 3 domain error, 4 numerical-guard trip.
All commands are deterministic for fixed flags (fixed seeds, no wall-clock
state); sidecars carry the full provenance.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import __version__
from .analysis import DEFAULT_MASK, decay_fit, ghost_energy
from .grids import Grid1D, Grid2D, PhaseSpaceField, Signal
from .io import (export_slice_csv, load_field, save_field2d, save_kernel4d,
                 save_signal)
from .kernels import (MemoryGuardError, gabor_matrix, natural_kernel_grid,
                      wigner_kernel_analytic, wigner_kernel_via_schwartz)
from .phases import DegeneratePhaseError, PhaseSpec, SymbolSpec, canonical_map
from .reference import bessel_smoothed_one_plus_delta, husimi_one_plus_delta, \
    wigner_one_plus_delta
from .smoothing import GAUSS_MASS, SmoothingSpec, gaussian_profile, smooth_kernel
from .transforms import WindowSpec, cross_wigner, husimi, stft

BUILTIN_SIGNALS = ("gaussian", "shifted-gaussian", "chirp", "two-gaussians")


def _builtin_signal(name: str, grid: Grid1D) -> Signal:
    t = grid.points()
    if name == "gaussian":
        return Signal(grid, np.exp(-np.pi * t ** 2).astype(complex))
    if name == "shifted-gaussian":
        return Signal(grid, np.exp(-np.pi * (t - 1.0) ** 2) * np.exp(2j * np.pi * t))
    if name == "chirp":
        return Signal(grid, np.exp(-np.pi * (t / 2.0) ** 2) * np.exp(1j * np.pi * 0.5 * t ** 2))
    if name == "two-gaussians":
        return Signal(grid, (np.exp(-np.pi * (t - 2.0) ** 2)
                             + np.exp(-np.pi * (t + 2.0) ** 2)).astype(complex))
    raise DomainError(f"unknown builtin {name!r}; available: {', '.join(BUILTIN_SIGNALS)}")


class DomainError(ValueError):
    pass


def _load_signal(args, parser) -> Signal:
    if args.builtin:
        grid = Grid1D(0.0, args.half_width, args.n)
        return _builtin_signal(args.builtin, grid)
    if args.input:
        samples, grids, meta = load_field(args.input)
        if meta["kind"] != "signal":
            raise DomainError(f"{args.input} holds {meta['kind']!r}, not a signal")
        return Signal(grids[0], samples)
    parser.error("need --builtin or --input")


def _provenance(args, extra=None) -> dict:
    d = {"tool": "wigner-lab", "version": __version__,
         "command": " ".join(sys.argv[1:])}
    if extra:
        d.update(extra)
    return d


def _add_common(p, out_required=True):
    p.add_argument("--n", type=int, default=256, help="samples per 1D axis")
    p.add_argument("--half-width", type=float, default=8.0, dest="half_width")
    p.add_argument("--csv", action="store_true", help="also export a CSV slice")
    p.add_argument("-o", "--output", required=out_required, help="output file (.bin)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int,
                   default=int(os.environ.get("WIGNER_LAB_THREADS", "0")),
                   help="recorded in provenance; BLAS threading is left to the "
                        "environment")


def cmd_wigner(args, parser):
    f = _load_signal(args, parser)
    W = cross_wigner(f)
    prov = _provenance(args, {"builtin": args.builtin})
    save_field2d(args.output, W, provenance=prov,
                 real_only=bool(np.abs(W.samples.imag).max()
                                <= 1e-10 * max(np.abs(W.samples).max(), 1e-300)))
    if args.csv:
        export_slice_csv(args.output + ".csv", W)
    return 0


def cmd_stft(args, parser):
    f = _load_signal(args, parser)
    V = stft(f, WindowSpec(normalization=args.window))
    save_field2d(args.output, V, provenance=_provenance(args))
    if args.csv:
        export_slice_csv(args.output + ".csv", V)
    return 0


def cmd_husimi(args, parser):
    f = _load_signal(args, parser)
    H = husimi(f)
    save_field2d(args.output, H, provenance=_provenance(args), real_only=True)
    if args.csv:
        export_slice_csv(args.output + ".csv", H)
    return 0


def _parse_phase(args) -> PhaseSpec:
    if args.phase is None:
        return PhaseSpec.kohn_nirenberg()
    text = args.phase
    if os.path.exists(text):
        with open(text) as fh:
            text = fh.read()
    return PhaseSpec.from_json(text)


def cmd_kernel(args, parser):
    phase = _parse_phase(args)
    smoothing = SmoothingSpec.from_json(args.smoothing) if args.smoothing else None
    grid = Grid1D(0.0, args.half_width, args.n)
    g4 = natural_kernel_grid(grid)
    symbol = SymbolSpec.one()
    N_list = [int(s) for s in args.N.split(",")] if args.N else [1, 2, 3]
    chi = canonical_map(phase)
    reports = {}
    routes = ("schwartz", "analytic") if args.route == "both" else (args.route,)
    kernels = {}
    for route in routes:
        if route == "schwartz":
            k = wigner_kernel_via_schwartz(phase, symbol, g4, smoothing=smoothing,
                                           allow_large=args.force)
        elif route == "analytic":
            if phase.family != "multiplier":
                raise DomainError("the analytic route covers multiplier phases")
            k = wigner_kernel_analytic(phase, g4)
            if smoothing is not None:
                k = smooth_kernel(k, smoothing)
        else:
            raise DomainError(f"unknown route {args.route!r}")
        kernels[route] = k
    primary = kernels[routes[0]]
    dense = primary.densify()
    save_kernel4d(args.output, dense, provenance=_provenance(args, {
        "phase": json.loads(phase.to_json()), "route": routes[0],
        "smoothing": json.loads(smoothing.to_json()) if smoothing else None}))
    rep = decay_fit(kernels[routes[-1]], chi, N_list, seed=args.seed,
                    safe_fraction=0.5 if routes[-1] == "schwartz" else 1.0)
    with open(args.output + ".decay.json", "w") as fh:
        fh.write(rep.to_json())
    if len(routes) == 2:
        other = kernels["analytic"].densify()
        scale = np.abs(dense.samples).max()
        mask = np.abs(other.samples) > 1e-3 * np.abs(other.samples).max()
        rel = float(np.abs(dense.samples - other.samples)[mask].max()
                    / np.abs(other.samples)[mask].max())
        with open(args.output + ".routes.json", "w") as fh:
            json.dump({"relative_deviation_on_significant_set": rel,
                       "significant_threshold": 1e-3, "scale": float(scale)}, fh)
    return 0


def cmd_gabor(args, parser):
    phase = _parse_phase(args)
    grid = Grid1D(0.0, args.half_width, args.n)
    z = tuple(float(v) for v in args.z.split(","))
    w = tuple(float(v) for v in args.w.split(","))
    val = gabor_matrix(phase, SymbolSpec.one(), z, w,
                       WindowSpec(normalization=args.window), grid)
    out = {"z": list(z), "w": list(w), "re": val.real, "im": val.imag,
           "abs2": abs(val) ** 2}
    text = json.dumps(out, indent=2)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        print(text)
    return 0


def cmd_ghostbusters(args, parser):
    grid2 = Grid2D(Grid1D(0.0, args.half_width, args.n),
                   Grid1D(0.0, args.half_width, args.n))
    mask = (("x", 0.0, args.mask_width), ("xi", 0.0, args.mask_width))
    base = args.output

    wd = wigner_one_plus_delta(grid2)
    smooth = wd.smoothed(gaussian_profile, gaussian_profile, GAUSS_MASS, GAUSS_MASS)
    prov = _provenance(args, {"provenance": "closed-form"})
    save_field2d(base + ".wigner.bin",
                 PhaseSpaceField(grid2, wd.smooth_part.samples),
                 provenance={**prov, "object": "W(1+delta) smooth part",
                             "singular_lines": [repr(l) for l in wd.lines]})
    hus = husimi_one_plus_delta(grid2)
    save_field2d(base + ".husimi.bin", hus, real_only=True,
                 provenance={**prov, "object": "H(1+delta)"})
    bes = bessel_smoothed_one_plus_delta(grid2)
    save_field2d(base + ".bessel.bin", bes.field, real_only=True,
                 provenance={**prov, "object": "W(1+delta)*exp(-|u|-|v|)"})
    reports = {
        "wigner_smoothed": ghost_energy(smooth, mask).__dict__,
        "husimi": ghost_energy(hus, mask).__dict__,
        "bessel": ghost_energy(bes.field, mask).__dict__,
        "mask_width": args.mask_width,
    }
    with open(base + ".ghosts.json", "w") as fh:
        json.dump(reports, fh, indent=2)
    if args.csv:
        export_slice_csv(base + ".husimi.csv", hus)
    return 0


def cmd_decay(args, parser):
    phase = _parse_phase(args)
    if phase.family != "multiplier":
        raise DomainError("decay runs on multiplier phases (analytic route)")
    grid = Grid1D(0.0, args.half_width, args.n)
    g4 = natural_kernel_grid(grid)
    smoothing = SmoothingSpec.from_json(args.smoothing) if args.smoothing \
        else SmoothingSpec.gaussian()
    k = smooth_kernel(wigner_kernel_analytic(phase, g4), smoothing)
    N_list = [int(s) for s in args.N.split(",")]
    rep = decay_fit(k, canonical_map(phase), N_list, seed=args.seed)
    with open(args.output, "w") as fh:
        fh.write(rep.to_json())
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="wigner-lab", description=__doc__)
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    pw = sub.add_parser("wigner", help="cross-Wigner distribution of a signal")
    pw.add_argument("--builtin", choices=BUILTIN_SIGNALS)
    pw.add_argument("--input", help="signal file (.bin with sidecar)")
    _add_common(pw)
    pw.set_defaults(fn=cmd_wigner)

    ps = sub.add_parser("stft", help="short-time Fourier transform")
    ps.add_argument("--builtin", choices=BUILTIN_SIGNALS)
    ps.add_argument("--input")
    ps.add_argument("--window", default="l2", choices=("l2", "none", "wigner_unit"))
    _add_common(ps)
    ps.set_defaults(fn=cmd_stft)

    ph = sub.add_parser("husimi", help="Husimi distribution")
    ph.add_argument("--builtin", choices=BUILTIN_SIGNALS)
    ph.add_argument("--input")
    _add_common(ph)
    ph.set_defaults(fn=cmd_husimi)

    pk = sub.add_parser("kernel", help="Wigner kernel of a type-I FIO")
    pk.add_argument("--phase", help="phase config JSON (inline or path)")
    pk.add_argument("--smoothing", help="smoothing config JSON")
    pk.add_argument("--route", default="analytic",
                    choices=("schwartz", "analytic", "both"))
    pk.add_argument("--N", default="1,2,3")
    pk.add_argument("--force", action="store_true",
                    help="override the dense-kernel memory guard")
    _add_common(pk)
    pk.set_defaults(fn=cmd_kernel, n=48, half_width=float(np.sqrt(12.0)))

    pg = sub.add_parser("gabor", help="single Gabor-matrix entry")
    pg.add_argument("--phase")
    pg.add_argument("--z", required=True, help="x,xi")
    pg.add_argument("--w", required=True, help="y,eta")
    pg.add_argument("--window", default="wigner_unit",
                    choices=("l2", "none", "wigner_unit"))
    _add_common(pg, out_required=False)
    pg.set_defaults(fn=cmd_gabor)

    pgh = sub.add_parser("ghostbusters",
                         help="ghost-frequency comparison for 1 + delta")
    pgh.add_argument("--mask-width", type=float, default=1.0, dest="mask_width")
    _add_common(pgh)
    pgh.set_defaults(fn=cmd_ghostbusters)

    pd = sub.add_parser("decay", help="decay-fit report for a smoothed kernel")
    pd.add_argument("--phase", required=True)
    pd.add_argument("--smoothing")
    pd.add_argument("--N", default="1,2,3,4")
    _add_common(pd)
    pd.set_defaults(fn=cmd_decay, n=48, half_width=float(np.sqrt(12.0)))
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args, parser)
    except MemoryGuardError as exc:
        print(f"wigner-lab: numerical guard: {exc}", file=sys.stderr)
        return 4
    except (DomainError, DegeneratePhaseError) as exc:
        print(f"wigner-lab: {exc}", file=sys.stderr)
        return 3
    except ValueError as exc:
        print(f"wigner-lab: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
