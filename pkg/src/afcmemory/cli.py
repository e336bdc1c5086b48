"""Spectral efficiency, bandwidth and atlas tools for AFC echo quantum memories.

All frequencies are in units of the inhomogeneous linewidth (the FWHM of the
Gaussian absorption line); times are in units of its inverse.

Exit status: 0 on success, 2 on invalid configuration, 1 on numerical or I/O
failure.
"""

import argparse
import json
import logging
import os
import subprocess
import sys
from functools import lru_cache

import numpy as np

from . import __version__
from .atlas import DEFAULT_D0_RANGE, DEFAULT_F_RANGE, CENTER_LEVELS, axis_from_range, center_map, \
    export_artifacts, generate_atlas, to_json
from .bandwidth import measure_bandwidth, optimize_delta0
from .echosim import PulseSpec, echo_field, time_grid_for
from .exceptions import AFCError, ConfigurationError
from .medium import CombDesign, design_from_mapping, parse_key_values
from .response import DEFAULT_GRID, export_response, phase_profile, spectral_response

log = logging.getLogger("afcmemory")

SUBCOMMANDS = ("profile", "response", "bandwidth", "optimize", "map", "center-map", "echo")
_FORMATS = ("csv", "json", "svg")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(2, f"{self.prog}: error: {message}\n")


@lru_cache(maxsize=1)
def version_stamp():
    """Package version, plus the short commit id when run from a git checkout."""
    here = os.path.dirname(os.path.abspath(__file__))
    try:
        sha = subprocess.run(["git", "rev-parse", "--short", "HEAD"], cwd=here, capture_output=True,
                             text=True, timeout=5, check=True).stdout.strip()
    except (OSError, subprocess.SubprocessError):
        return __version__
    return f"{__version__}+g{sha}" if sha else __version__


def _range(text, flag):
    try:
        parts = [float(p) for p in text.split(":")]
    except ValueError:
        raise ConfigurationError(f"{flag} expects start:stop:step, got {text!r}") from None
    if len(parts) != 3:
        raise ConfigurationError(f"{flag} expects start:stop:step, got {text!r}")
    return parts


def _grid(text):
    try:
        a, b, n = text.split(":")
        return float(a), float(b), int(n)
    except ValueError:
        raise ConfigurationError(f"--grid expects start:stop:points, got {text!r}") from None


def _floats(text, flag):
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise ConfigurationError(f"{flag} expects comma-separated numbers, got {text!r}") from None


def _design_args(p):
    g = p.add_argument_group("comb design (frequencies in linewidth units)")
    g.add_argument("--config", help="flat key = value file; command-line flags override its entries")
    g.add_argument("--d0", type=float, help="peak optical depth of the original line (dimensionless, > 0)")
    g.add_argument("--finesse", type=float, help="tooth spacing / tooth width (dimensionless, >= 1)")
    g.add_argument("--delta0", type=float, help="full width of the burned comb region (linewidth units, > 0)")
    g.add_argument("--delta", type=float, help="tooth spacing (linewidth units); tooth-resolved model only")
    g.add_argument("--area-factor", type=float, dest="area_factor",
                   help="tooth-area convention for the averaged comb depth (default 1.0)")
    g.add_argument("--no-kappa", dest="kappa", action="store_const", const=False,
                   help="omit the tooth-dephasing factor exp(-7/f^2) from efficiencies")
    g.add_argument("--kappa", dest="kappa", action="store_const", const=True,
                   help="include the tooth-dephasing factor (default)")
    g.add_argument("--no-dilution", dest="dilution", action="store_const", const=False,
                   help="keep the full line depth inside the comb region")
    g.add_argument("--grid", help="evaluation grid start:stop:points (linewidth units; default -1.5:1.5:4096)")


def _output_args(p, formats=None):
    p.add_argument("--out", help="output directory for artifacts")
    if formats:
        p.add_argument("--format", default=",".join(formats),
                       help=f"comma-separated artifact formats from {{{','.join(formats)}}}")
    p.add_argument("--json", action="store_true", help="print the JSON result to stdout")


def build_parser():
    parser = _Parser(prog="afcmemory", description=__doc__.split("\n\n")[0] + " " + __doc__.split("\n\n")[1],
                     formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--version", action="version", version=f"afcmemory {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", metavar="command", parser_class=_Parser)

    p = sub.add_parser("profile", help="depth D(w) and dispersion phase phi(w) of a comb design")
    _design_args(p)
    _output_args(p)

    p = sub.add_parser("response", help="spectral response Gamma(w) and efficiency eta(w)")
    _design_args(p)
    _output_args(p)

    for name, text in (("bandwidth", "high-efficiency bandwidth of a fixed design"),
                       ("optimize", "comb extent maximising the high-efficiency bandwidth")):
        p = sub.add_parser(name, help=text)
        _design_args(p)
        p.add_argument("--eta-target", type=float, dest="eta_target", help="efficiency threshold in (0, 1)")
        if name == "optimize":
            p.add_argument("--search",
                           help="comb-extent search interval lo:hi (linewidth units, inside (0, 2.5], default 0:2.5)")
        _output_args(p)

    p = sub.add_parser("map", help="atlas of maximal bandwidth with optimal comb extent over depth x finesse")
    _design_args(p)
    p.add_argument("--eta-target", type=float, dest="eta_target", help="efficiency threshold in (0, 1); required")
    p.add_argument("--d0-range", dest="d0_range", help="optical-depth axis start:stop:step (default 1:60:1)")
    p.add_argument("--f-range", dest="f_range", help="finesse axis start:stop:step (default 2:15:0.5)")
    p.add_argument("--levels", help="bandwidth contour levels, comma-separated (linewidth units)")
    p.add_argument("--delta0-levels", dest="delta0_levels",
                   help="comb-extent contour levels, comma-separated (linewidth units)")
    p.add_argument("--search", help="comb-extent search interval lo:hi (linewidth units, default 0:2.5)")
    p.add_argument("--threads", type=int, default=1, help="worker processes for the sweep (default 1)")
    _output_args(p, _FORMATS)

    p = sub.add_parser("center-map", help="line-centre efficiency over depth x finesse")
    _design_args(p)
    p.add_argument("--method", choices=("analytic", "srf"), default="analytic",
                   help="closed-form formula or full dispersion pipeline at w = 0")
    p.add_argument("--d0-range", dest="d0_range", help="optical-depth axis start:stop:step (default 1:60:1)")
    p.add_argument("--f-range", dest="f_range", help="finesse axis start:stop:step (default 2:15:0.5)")
    p.add_argument("--levels", help="efficiency contour levels (default 0.1,...,0.9,0.99)")
    _output_args(p, _FORMATS)

    p = sub.add_parser("echo", help="time-domain echo of a Gaussian pulse")
    _design_args(p)
    p.add_argument("--pulse-center", type=float, default=0.0, dest="pulse_center",
                   help="pulse carrier detuning (linewidth units)")
    p.add_argument("--pulse-bandwidth", type=float, default=0.1, dest="pulse_bandwidth",
                   help="FWHM of the Gaussian amplitude spectrum (linewidth units)")
    p.add_argument("--samples", type=int, default=4096, help="number of time samples (default 4096)")
    _output_args(p)
    return parser


def _load_config(args):
    values = {}
    if getattr(args, "config", None):
        try:
            with open(args.config, encoding="utf-8") as fh:
                values = parse_key_values(fh.read())
        except OSError as exc:
            raise ConfigurationError(f"cannot read config file {args.config!r}: {exc}") from exc
    for key in ("d0", "finesse", "delta0", "delta", "area_factor", "kappa", "dilution"):
        v = getattr(args, key, None)
        if v is not None:
            values[key] = v
    for key in ("eta_target", "d0_range", "f_range", "threads", "grid", "search", "levels"):
        if getattr(args, key, None) is None and key in values:
            setattr(args, key, values[key])
    try:
        if isinstance(getattr(args, "eta_target", None), str):
            args.eta_target = float(args.eta_target)
        if isinstance(getattr(args, "threads", None), str):
            args.threads = int(args.threads)
    except ValueError as exc:
        raise ConfigurationError(f"bad value in config file: {exc}") from None
    return design_from_mapping(values)


def _omega(args):
    spec = _grid(args.grid) if getattr(args, "grid", None) else DEFAULT_GRID
    if spec[2] < 3 or spec[1] <= spec[0]:
        raise ConfigurationError(f"--grid needs start < stop and at least 3 points, got {spec}")
    return np.linspace(*spec)


def _need_eta(args):
    if args.eta_target is None:
        raise ConfigurationError("--eta-target is required for this command")
    if not 0.0 < args.eta_target < 1.0:
        raise ConfigurationError(f"--eta-target must lie in (0, 1), got {args.eta_target}")
    return args.eta_target


def _emit(args, doc, summary, stem):
    text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        with open(os.path.join(args.out, f"{stem}.json"), "w", encoding="utf-8") as fh:
            fh.write(text)
    _report(args, text, summary)


def _report(args, text, summary):
    if args.json:
        sys.stdout.write(text)
        print(summary, file=sys.stderr)
    else:
        print(summary)


def _formats(args):
    fmts = [f.strip() for f in args.format.split(",") if f.strip()]
    bad = [f for f in fmts if f not in _FORMATS]
    if bad or not fmts:
        raise ConfigurationError(f"--format accepts {','.join(_FORMATS)}, got {args.format!r}")
    return fmts


def _axes(args):
    d0 = axis_from_range(*(_range(args.d0_range, "--d0-range") if args.d0_range else DEFAULT_D0_RANGE))
    f = axis_from_range(*(_range(args.f_range, "--f-range") if args.f_range else DEFAULT_F_RANGE))
    if np.any(d0 <= 0) or np.any(f < 1):
        raise ConfigurationError("optical depths must be > 0 and finesse values >= 1")
    return d0, f


def _search(args):
    if getattr(args, "search", None) is None:
        return (0.0, 2.5)
    try:
        lo_hi = [float(v) for v in str(args.search).split(":")]
    except ValueError:
        raise ConfigurationError(f"--search expects lo:hi, got {args.search!r}") from None
    if len(lo_hi) != 2:
        raise ConfigurationError(f"--search expects lo:hi, got {args.search!r}")
    return tuple(lo_hi)


def _cmd_profile(args, design):
    prof = phase_profile(design, _omega(args))
    out = args.out or "."
    path = os.path.join(out, "profile.csv")
    os.makedirs(out, exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("omega,D,phi\n")
        for w, d, p in zip(prof.omega, prof.depth, prof.phase):
            fh.write(f"{w!r},{d!r},{p!r}\n")
    print(f"profile: {len(prof.omega)} samples, max D={prof.depth.max():.6g}, wrote {path}")


def _cmd_response(args, design):
    resp = spectral_response(design, _omega(args))
    paths = export_response(resp, args.out or ".")
    centre = float(np.interp(0.0, resp.omega, resp.eta))
    print(f"response: eta(0)={centre:.6g}, min eta={resp.eta.min():.6g}, wrote {', '.join(paths)}")


def _result_doc(result):
    doc = result.to_dict()
    doc["version"] = version_stamp()
    return doc


def _cmd_bandwidth(args, design):
    eta = _need_eta(args)
    result = measure_bandwidth(design, eta, _omega(args))
    flag = " (grid-limited)" if result.grid_limited else ""
    _emit(args, _result_doc(result), f"bandwidth: delta_qm={result.delta_qm:.4f} at delta0={result.delta0:.4f}"
                                     f" for eta >= {eta:g}{flag}", "bandwidth")


def _cmd_optimize(args, design):
    eta = _need_eta(args)
    result = optimize_delta0(design.d0, design.finesse, eta, search=_search(args), base=design, omega=_omega(args))
    flag = " (no extent reaches the target)" if result.flagged else ""
    _emit(args, _result_doc(result), f"optimize: delta0={result.delta0:.4f} delta_qm={result.delta_qm:.4f} "
                                     f"for eta >= {eta:g}{flag}", "optimize")


def _cmd_map(args, design):
    eta = _need_eta(args)
    d0, f = _axes(args)
    fmts = _formats(args)
    kwargs = {}
    if args.levels:
        kwargs["qm_levels"] = _floats(args.levels, "--levels")
    if args.delta0_levels:
        kwargs["delta0_levels"] = _floats(args.delta0_levels, "--delta0-levels")
    if args.threads < 1:
        raise ConfigurationError("--threads must be >= 1")
    omega = _omega(args) if args.grid else None
    log.info("sweeping %d x %d cells at eta >= %g with %d worker(s)", len(d0), len(f), eta, args.threads)
    atlas = generate_atlas(d0, f, eta, base=design, search=_search(args), omega=omega, threads=int(args.threads),
                           **kwargs)
    for fail in atlas.meta["failures"]:
        log.warning("cell d0=%g f=%g failed: %s", fail["d0"], fail["f"], fail["error"])
    paths = export_artifacts(atlas, args.out or ".", fmts)
    i, j = np.unravel_index(np.argmax(atlas.delta_qm_max), atlas.delta_qm_max.shape)
    _report(args, to_json(atlas), f"map: {atlas.delta_qm_max.size} cells at eta >= {eta:g}; widest delta_qm={atlas.delta_qm_max[i, j]:.4f} "
          f"at d0={d0[i]:g}, f={f[j]:g}; wrote {', '.join(paths)}")


def _cmd_center_map(args, design):
    d0, f = _axes(args)
    levels = _floats(args.levels, "--levels") if args.levels else CENTER_LEVELS
    cmap = center_map(d0, f, method=args.method, base=design, levels=levels)
    paths = export_artifacts(cmap, args.out or ".", _formats(args))
    _report(args, to_json(cmap), f"center-map ({args.method}): eta in [{cmap.eta_center.min():.4g}, {cmap.eta_center.max():.4g}]; "
          f"wrote {', '.join(paths)}")


def _cmd_echo(args, design):
    pulse = PulseSpec(args.pulse_center, args.pulse_bandwidth)
    times = time_grid_for(pulse, n=args.samples)
    res = echo_field(design, pulse, times)
    out = args.out or "."
    os.makedirs(out, exist_ok=True)
    path = os.path.join(out, "echo.csv")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("t,re,im,abs2\n")
        for t, a in zip(res.times, res.amplitude):
            fh.write(f"{t!r},{a.real!r},{a.imag!r},{abs(a) ** 2!r}\n")
    doc = {"version": version_stamp(), "design": design.to_dict(),
           "pulse": {"center_detuning": pulse.center_detuning, "bandwidth": pulse.bandwidth},
           "samples": len(times), "energy_efficiency": res.energy_efficiency}
    args.out = out
    _emit(args, doc, f"echo: energy efficiency {res.energy_efficiency:.6g}, wrote {path}", "echo")


_COMMANDS = {
    "profile": _cmd_profile,
    "response": _cmd_response,
    "bandwidth": _cmd_bandwidth,
    "optimize": _cmd_optimize,
    "map": _cmd_map,
    "center-map": _cmd_center_map,
    "echo": _cmd_echo,
}


def run(argv=None):
    """Parse `argv`, run the subcommand and return the exit status."""
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command is None:
        parser.print_help(sys.stderr)
        return 2
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        design = _load_config(args)
        _COMMANDS[args.command](args, design)
    except ConfigurationError as exc:
        print(f"afcmemory {args.command}: configuration error: {exc}", file=sys.stderr)
        return 2
    except (AFCError, ArithmeticError, OSError) as exc:
        print(f"afcmemory {args.command}: {exc}", file=sys.stderr)
        return 1
    return 0


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
