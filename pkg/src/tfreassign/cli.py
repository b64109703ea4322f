"""Command-line front end: gen, stft, cwt, reassign, render, verify.

Every command is deterministic given its flags; the resolved configuration
is recorded into the output metadata (grid descriptors, image sidecar
JSON, or the verification report).  Frequencies on the command line accept
an ``hz``/``khz`` suffix; bare numbers are angular (rad/s), which is the
unit of every stored axis.
"""

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .cwt import cwt, default_scales, geometric_scales
from .grid import ComplexGrid
from .io import read_grid, read_signal, write_grid, write_signal
from .render import render_figure, render_pgm
from .scalogram_reassign import (
    cwt_log_derivatives,
    map_amplitude,
    map_holomorphic,
    map_T,
    map_Tbeta,
    reassign_scalogram,
    structure_residual,
)
from .signals import gen_chirp, gen_click, gen_cosine
from .stft import fft_omega_axis, stft
from .stft_reassign import (
    reassign_spectrogram,
    reassignment_map,
    stft_phase_gradients,
)
from .verify import CHECK_NAMES, run_checks
from .wavelet import ExtremalParams
from .window import Window

__all__ = ["main", "parse_frequency"]

_CWT_MAPS = {
    "cwt-T": lambda ld, grid, p: map_T(ld, grid),
    "cwt-Tbeta": map_Tbeta,
    "cwt-amplitude": map_amplitude,
    "cwt-holomorphic": map_holomorphic,
}


def parse_frequency(text) -> float:
    """Frequency flag value in rad/s; 'hz'/'khz' suffixes convert."""
    s = str(text).strip().lower()
    for suffix, factor in (
        ("khz", 2000.0 * np.pi),
        ("hz", 2.0 * np.pi),
        ("rad/s", 1.0),
        ("rads", 1.0),
        ("rad", 1.0),
    ):
        if s.endswith(suffix):
            return float(s[: -len(suffix)]) * factor
    return float(s)


def _resolved_config(args) -> dict:
    skip = {"func", "config"}
    out = {}
    for key, value in vars(args).items():
        if key in skip:
            continue
        if isinstance(value, Path):
            value = str(value)
        out[key] = value
    return out


def _load_signal(args):
    return read_signal(args.infile, rate=args.rate, start_time=args.start)


def _wavelet(args) -> ExtremalParams:
    return ExtremalParams(
        kappa=args.kappa,
        nu=args.nu,
        alpha=args.alpha,
        beta=args.beta,
        epsilon=args.epsilon,
        c=args.c,
    )


def _scales(args, p: ExtremalParams, rate: float, n: int) -> np.ndarray:
    if (args.a_min is None) != (args.a_max is None):
        raise ValueError("give both --a-min and --a-max, or neither")
    if args.a_min is None:
        ends = default_scales(p, rate, n, count=2)
        a_min, a_max = float(ends[0]), float(ends[-1])
    else:
        a_min, a_max = args.a_min, args.a_max
    if args.scale_count is not None:
        count = args.scale_count
    else:
        count = int(math.ceil(args.voices * math.log2(a_max / a_min))) + 1
    return geometric_scales(a_min, a_max, count)


def _omega(args, rate: float):
    given = [args.omega_min, args.omega_max, args.omega_count]
    if any(v is not None for v in given):
        if any(v is None for v in given):
            raise ValueError("--omega-min/--omega-max/--omega-count go together")
        if args.omega_count < 2 or args.omega_max <= args.omega_min:
            raise ValueError("need omega-max > omega-min and at least 2 bins")
        return np.linspace(args.omega_min, args.omega_max, args.omega_count)
    if args.n_fft is not None:
        return fft_omega_axis(rate, args.n_fft)
    return None


def _with_cli_meta(grid: ComplexGrid, args, extra: dict | None = None) -> ComplexGrid:
    desc = dict(grid.source_descriptor)
    desc["cli"] = _resolved_config(args)
    if extra:
        desc.update(extra)
    return ComplexGrid(grid.values, grid.time_axis, grid.second_axis, grid.axis_kind, desc)


def _finite(arr) -> np.ndarray:
    return np.where(np.isfinite(arr), arr, 0.0)


def _write_map_grids(prefix, grid, t_tilde, second_tilde, second_name, mask, jacobian, meta):
    """Coordinate map as two grid triples: coords (t~ + i second~) and aux (mask + i jacobian).

    Invalid points carry zeros in coords/jacobian; the aux real part is the
    validity mask (1 valid, 0 masked or undefined).
    """
    coords = ComplexGrid(
        _finite(t_tilde) + 1j * _finite(second_tilde),
        grid.time_axis,
        grid.second_axis,
        grid.axis_kind,
        {**meta, "fields": {"real": "t_tilde", "imag": second_name}},
    )
    aux = ComplexGrid(
        mask.astype(np.float64) + 1j * _finite(jacobian),
        grid.time_axis,
        grid.second_axis,
        grid.axis_kind,
        {**meta, "fields": {"real": "mask", "imag": "jacobian"}},
    )
    write_grid(coords, f"{prefix}.map_coords")
    write_grid(aux, f"{prefix}.map_aux")


def _sidecar(path, payload: dict) -> None:
    with open(f"{path}.json", "w") as fh:
        json.dump(payload, fh, indent=2, default=str)
        fh.write("\n")


def cmd_gen(args) -> int:
    used = {
        "cosine": ("freq",),
        "click": ("at",),
        "chirp": ("f0", "f1"),
    }[args.kind]
    for flag in ("freq", "at", "f0", "f1"):
        value = getattr(args, flag)
        if flag in used and value is None:
            raise ValueError(f"gen {args.kind} requires --{flag}")
        if flag not in used and value is not None:
            raise ValueError(f"gen {args.kind} does not take --{flag}")
    if args.kind == "cosine":
        sig = gen_cosine(args.freq, args.amplitude, args.n, args.rate, args.start)
    elif args.kind == "click":
        sig = gen_click(args.at, args.n, args.rate)
    else:
        sig = gen_chirp(args.f0, args.f1, args.n, args.rate, args.start)
    write_signal(sig, args.out)
    _sidecar(args.out, {"command": f"gen {args.kind}", "config": _resolved_config(args)})
    print(f"wrote {args.out} ({sig.n} samples at {sig.sample_rate:g} Hz)")
    return 0


def cmd_stft(args) -> int:
    f = _load_signal(args)
    window = Window.gaussian(args.sigma)
    grid = stft(f, window, hop=args.hop, omega=_omega(args, f.sample_rate))
    grid = _with_cli_meta(grid, args)
    write_grid(grid, args.out_prefix)
    if args.figure:
        render_figure(grid, args.figure)
    print(f"wrote {args.out_prefix}.meta.json/.re.csv/.im.csv "
          f"({grid.shape[0]} frequencies x {grid.shape[1]} frames)")
    return 0


def cmd_cwt(args) -> int:
    f = _load_signal(args)
    p = _wavelet(args)
    scales = _scales(args, p, f.sample_rate, f.n)
    grid = cwt(f, p, scales, workers=args.threads)
    grid = _with_cli_meta(grid, args)
    write_grid(grid, args.out_prefix)
    if args.figure:
        render_figure(grid, args.figure)
    for key in ("alias_warning", "support_warning"):
        if grid.source_descriptor.get(key):
            print(f"warning: {key} for the chosen scale range", file=sys.stderr)
    print(f"wrote {args.out_prefix}.meta.json/.re.csv/.im.csv "
          f"({grid.shape[0]} scales x {grid.shape[1]} samples)")
    return 0


def cmd_reassign(args) -> int:
    f = _load_signal(args)
    if args.method == "stft":
        window = Window.gaussian(args.sigma)
        pg, grid = stft_phase_gradients(
            f, window, hop=args.hop, omega=_omega(args, f.sample_rate)
        )
        field = reassignment_map(pg, grid)
        out, diag = reassign_spectrogram(grid, field, window, mode=args.mode)
        meta = {"map": "stft", "diagnostics": diag, "cli": _resolved_config(args)}
        _write_map_grids(
            args.out_prefix, grid, field.t_tilde, field.w_tilde, "w_tilde",
            field.mask, field.jacobian, meta,
        )
    else:
        p = _wavelet(args)
        scales = _scales(args, p, f.sample_rate, f.n)
        ld, grid = cwt_log_derivatives(f, p, scales, workers=args.threads)
        tmap = _CWT_MAPS[args.method](ld, grid, p)
        out, diag = reassign_scalogram(grid, tmap, p, mode=args.mode)
        summary = structure_residual(ld, grid, p)
        meta = {
            "map": tmap.method,
            "diagnostics": diag,
            "structure_residual_median": summary["residual_median"],
            "cli": _resolved_config(args),
        }
        if args.method in ("cwt-amplitude", "cwt-holomorphic") and p.c != 1.0:
            meta["warning"] = (
                "amplitude-based reassignment has no exactness guarantee "
                "outside the c = 1 wavelet family"
            )
            print(f"warning: {meta['warning']}", file=sys.stderr)
        _write_map_grids(
            args.out_prefix, grid, tmap.t_tilde, tmap.a_tilde, "a_tilde",
            tmap.mask, tmap.jacobian, meta,
        )
    out = _with_cli_meta(out, args, {"map": meta["map"]})
    write_grid(out, f"{args.out_prefix}.grid")
    if args.figure:
        render_figure(out, args.figure)
    print(f"wrote {args.out_prefix}.grid.* and {args.out_prefix}.map_*.csv/.meta.json "
          f"(method {meta['map']}, {diag['n_valid']} reassigned points)")
    return 0


def cmd_render(args) -> int:
    grid = read_grid(args.infile)
    render_pgm(grid, args.out, args.db, channel="magnitude")
    written = [str(args.out)]
    if args.channel == "phase":
        out = Path(args.out)
        phase_path = out.with_name(out.stem + ".phase" + (out.suffix or ".pgm"))
        render_pgm(grid, phase_path, args.db, channel="phase")
        written.append(str(phase_path))
    if args.figure:
        render_figure(grid, args.figure, args.db)
        written.append(str(args.figure))
    _sidecar(args.out, {"command": "render", "config": _resolved_config(args)})
    print("wrote " + ", ".join(written))
    return 0


def _match_checks(selectors):
    if not selectors:
        return None
    chosen = []
    for sel in selectors:
        hits = [n for n in CHECK_NAMES if sel == n or n.startswith(sel) or sel in n]
        if not hits:
            raise ValueError(f"no check matches {sel!r}; available: {', '.join(CHECK_NAMES)}")
        for h in hits:
            if h not in chosen:
                chosen.append(h)
    return chosen


def _flat_details(details, prefix=""):
    parts = []
    for key, value in details.items():
        label = f"{prefix}{key}"
        if isinstance(value, dict):
            parts.extend(_flat_details(value, prefix=f"{label}."))
        elif isinstance(value, float):
            parts.append(f"{label}={value:.3g}")
        else:
            parts.append(f"{label}={value}")
    return parts


def cmd_verify(args) -> int:
    names = _match_checks(args.checks)
    figures_prefix = f"{args.out_prefix}." if args.out_prefix else None
    results = run_checks(names, figures_prefix=figures_prefix, structure_c=args.c)
    lines = []
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        lines.append(f"{status} {r.name} ({r.seconds:.1f} s): "
                     + "; ".join(_flat_details(r.details)))
    all_passed = all(r.passed for r in results)
    lines.append(f"{'PASS' if all_passed else 'FAIL'} overall "
                 f"({sum(r.passed for r in results)}/{len(results)} checks)")
    text = "\n".join(lines)
    print(text)
    if args.out_prefix:
        with open(f"{args.out_prefix}.report.txt", "w") as fh:
            fh.write(text + "\n")
        report = {
            "passed": all_passed,
            "checks": [
                {
                    "name": r.name,
                    "passed": r.passed,
                    "seconds": r.seconds,
                    "details": r.details,
                }
                for r in results
            ],
            "config": _resolved_config(args),
        }
        with open(f"{args.out_prefix}.report.json", "w") as fh:
            json.dump(report, fh, indent=2, default=str)
            fh.write("\n")
    return 0 if all_passed else 1


def _add_common(parser):
    parser.add_argument("--config", help="JSON file of flag defaults (flags given explicitly win)")
    parser.add_argument("--threads", type=int, default=None, help="worker threads for spectral transforms")


def _add_input(parser):
    parser.add_argument("--in", dest="infile", required=True, help="input signal (.csv or .wav)")
    parser.add_argument("--rate", type=float, default=1.0, help="sample rate in Hz (CSV input only)")
    parser.add_argument("--start", type=float, default=0.0, help="time of the first sample [s]")


def _add_window(parser):
    parser.add_argument("--sigma", type=float, default=1.0, help="Gaussian window width [s]")
    parser.add_argument("--hop", type=int, default=1, help="frame step in samples")
    parser.add_argument("--n-fft", type=int, default=None, help="full-band FFT frequency bins")
    parser.add_argument("--omega-min", type=parse_frequency, default=None, help="lowest frequency (rad/s, or e.g. 10hz)")
    parser.add_argument("--omega-max", type=parse_frequency, default=None, help="highest frequency")
    parser.add_argument("--omega-count", type=int, default=None, help="frequency bin count")


def _add_wavelet(parser):
    parser.add_argument("--kappa", type=float, default=2.0, help="spectral decay strength")
    parser.add_argument("--nu", type=float, default=1.0, help="order parameter (kappa*nu > 1/2)")
    parser.add_argument("--alpha", type=float, default=0.0, help="log-periodic phase coefficient")
    parser.add_argument("--beta", type=float, default=0.0, help="linear phase (time shift) coefficient")
    parser.add_argument("--epsilon", type=float, default=0.0, help="constant phase offset")
    parser.add_argument("--c", type=float, default=1.0, help="spectral decay exponent")


def _add_scales(parser):
    parser.add_argument("--a-min", type=float, default=None, help="smallest scale [s]")
    parser.add_argument("--a-max", type=float, default=None, help="largest scale [s]")
    parser.add_argument("--voices", type=float, default=16.0, help="scale bins per octave")
    parser.add_argument("--scale-count", type=int, default=None, help="total scale bins (overrides --voices)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tfreassign",
        description="Time-frequency reassignment for short-time Fourier and wavelet transforms.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")
    command_parsers = {}

    p = command_parsers["gen"] = sub.add_parser("gen", help="generate a test signal file")
    p.add_argument("kind", choices=("cosine", "click", "chirp"))
    p.add_argument("--out", required=True, help="output file (.csv or .wav)")
    p.add_argument("--n", type=int, default=4096, help="sample count")
    p.add_argument("--rate", type=float, default=64.0, help="sample rate in Hz")
    p.add_argument("--start", type=float, default=0.0, help="time of the first sample [s]")
    p.add_argument("--freq", type=parse_frequency, default=None, help="cosine frequency (rad/s, or e.g. 440hz)")
    p.add_argument("--amplitude", type=float, default=1.0, help="cosine amplitude")
    p.add_argument("--at", type=float, default=None, help="click time [s]")
    p.add_argument("--f0", type=parse_frequency, default=None, help="chirp start frequency")
    p.add_argument("--f1", type=parse_frequency, default=None, help="chirp end frequency")
    _add_common(p)
    p.set_defaults(func=cmd_gen)

    p = command_parsers["stft"] = sub.add_parser("stft", help="short-time transform to a grid triple")
    _add_input(p)
    _add_window(p)
    p.add_argument("--out-prefix", required=True, help="grid file prefix")
    p.add_argument("--figure", default=None, help="also render an annotated figure (e.g. .png)")
    _add_common(p)
    p.set_defaults(func=cmd_stft)

    p = command_parsers["cwt"] = sub.add_parser("cwt", help="wavelet transform to a grid triple")
    _add_input(p)
    _add_wavelet(p)
    _add_scales(p)
    p.add_argument("--out-prefix", required=True, help="grid file prefix")
    p.add_argument("--figure", default=None, help="also render an annotated figure")
    _add_common(p)
    p.set_defaults(func=cmd_cwt)

    p = command_parsers["reassign"] = sub.add_parser("reassign", help="reassigned grid plus coordinate-map files")
    _add_input(p)
    p.add_argument(
        "--method",
        required=True,
        choices=("stft", "cwt-T", "cwt-Tbeta", "cwt-amplitude", "cwt-holomorphic"),
    )
    p.add_argument("--mode", choices=("grid_sum", "full_kernel"), default="grid_sum")
    _add_window(p)
    _add_wavelet(p)
    _add_scales(p)
    p.add_argument("--out-prefix", required=True, help="output file prefix")
    p.add_argument("--figure", default=None, help="also render the reassigned grid")
    _add_common(p)
    p.set_defaults(func=cmd_reassign)

    p = command_parsers["render"] = sub.add_parser("render", help="grid to 8-bit portable graymap")
    p.add_argument("--in", dest="infile", required=True, help="grid file prefix")
    p.add_argument("--out", required=True, help="output image (.pgm)")
    p.add_argument("--db", type=float, default=60.0, help="dynamic range below peak [dB]")
    p.add_argument(
        "--channel",
        choices=("magnitude", "phase"),
        default="magnitude",
        help="'phase' writes a phase image next to the magnitude image",
    )
    p.add_argument("--figure", default=None, help="also render an annotated figure")
    _add_common(p)
    p.set_defaults(func=cmd_render)

    p = command_parsers["verify"] = sub.add_parser("verify", help="run built-in checks; nonzero exit on failure")
    p.add_argument("checks", nargs="*", help=f"check selectors (default: all of {', '.join(CHECK_NAMES)})")
    p.add_argument("--out-prefix", default=None, help="write .report.txt/.report.json and figures")
    p.add_argument("--c", type=float, default=1.0, help="wavelet decay exponent for the structure check")
    _add_common(p)
    p.set_defaults(func=cmd_verify)

    parser.command_parsers = command_parsers
    return parser


def _apply_config(parser, argv):
    """Merge a --config JSON file as subcommand defaults; explicit flags win."""
    # exact flag only: abbreviation would swallow the wavelet's --c
    pre = argparse.ArgumentParser(add_help=False, allow_abbrev=False)
    pre.add_argument("--config", default=None)
    known, _ = pre.parse_known_args(argv)
    if not known.config:
        return
    with open(known.config) as fh:
        overrides = json.load(fh)
    if not isinstance(overrides, dict):
        raise ValueError("--config file must hold a JSON object")
    command = next((a for a in argv if not a.startswith("-")), None)
    target = parser.command_parsers.get(command)
    if target is None:
        raise ValueError("--config needs a known subcommand on the command line")
    actions = {action.dest: action for action in target._actions}
    overrides = {str(k).replace("-", "_"): v for k, v in overrides.items()}
    unknown = sorted(set(overrides) - set(actions))
    if unknown:
        raise ValueError(f"--config keys not recognized for {command!r}: {unknown}")
    typed = {}
    for key, value in overrides.items():
        conv = actions[key].type
        typed[key] = conv(value) if conv is not None and isinstance(value, str) else value
    target.set_defaults(**typed)


def main(argv=None) -> int:
    argv = list(sys.argv[1:]) if argv is None else list(argv)
    parser = build_parser()
    try:
        _apply_config(parser, argv)
        args = parser.parse_args(argv)
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
