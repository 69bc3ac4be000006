"""Command-line entry point: tabulate kernels and propagators, run scenarios,
compute currents and emit figure series."""
from __future__ import annotations

import argparse
import io
import json
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .config import THREADS_ENV
from .errors import DomainError

# sample times for the figure presets are reconstructed from curve labels
FIGURE_TIMES = [0.0, 1.0, 2.0, 5.0]
FIGURES = {
    1: {
        "command": "evolve",
        "initial": "quad_lorentz:1",
        "symbol": "stable:1",
        "n": 32768,
        "L": 1600.0,
        "xmax": 10.0,
        "title": "rho(x, t), Lorentzian packet, Cauchy dynamics",
    },
    2: {
        "command": "evolve",
        "initial": "gaussian:1",
        "symbol": "stable:1",
        "n": 32768,
        "L": 1600.0,
        "xmax": 10.0,
        "title": "rho(x, t), Gaussian packet, Cauchy dynamics",
    },
    3: {
        "command": "current",
        "initial": "gaussian:1",
        "symbol": "stable:1",
        "n": 16384,
        "L": 1024.0,
        "xmax": 10.0,
        "title": "j(x, t), Gaussian packet, Cauchy dynamics",
    },
    4: {
        "command": "evolve",
        "initial": "radial3d:1",
        "symbol": "stable:1",
        "n": 16384,
        "L": 400.0,
        "xmax": 10.0,
        "title": "r^2 rho(r, t), 3D radial packet, Cauchy dynamics",
    },
}


def _floats(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from exc


def _fmt(v) -> str:
    return format(float(v), ".17g")


class Table:
    """Column-named numeric table with deterministic CSV and JSON encodings."""

    def __init__(self, columns: list[str]):
        self.columns = columns
        self.rows: list[tuple] = []

    def extend(self, *cols):
        self.rows.extend(zip(*(np.broadcast_to(np.asarray(c, dtype=float), np.shape(cols[0])) for c in cols)))

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write(",".join(self.columns) + "\n")
        for row in self.rows:
            buf.write(",".join(_fmt(v) for v in row) + "\n")
        return buf.getvalue()

    def to_json(self, command: str, config: dict, errors: dict) -> str:
        doc = {
            "command": command,
            "version": __version__,
            "config": config,
            "columns": self.columns,
            "error_estimates": {k: float(v) for k, v in errors.items()},
            "data": [[float(_fmt(v)) for v in row] for row in self.rows],
        }
        return json.dumps(doc, indent=1, sort_keys=True) + "\n"


def _x_samples(args) -> np.ndarray:
    if args.npts < 2:
        raise DomainError("need at least two sample points")
    return np.linspace(args.xmin, args.xmax, args.npts)


def cmd_kernel(args):
    from .kernels import KernelFamily, semigroup_kernel, stable_kernel

    fam = KernelFamily(args.family, dim=args.dim, D=args.D, mu=args.mu, intensity=args.intensity, c=args.c, m=args.m)
    xs = _x_samples(args)
    table = Table(["x", "t", "k"])
    worst = 0.0
    for t in args.times:
        if fam.tag == "stable":
            vals, err = stable_kernel(xs, t, fam.mu, fam.intensity, fam.dim, return_error=True)
            worst = max(worst, float(np.max(err)))
        else:
            vals = semigroup_kernel(fam, xs, t)
        table.extend(xs, t, vals)
    return table, {"quadrature_abs_error": worst}


def cmd_propagate(args):
    from .propagators import PropagatorFamily, quantum_propagator

    fam = PropagatorFamily(args.family, m=args.m, c=args.c)
    xs = _x_samples(args)
    table = Table(["x", "t", "re", "im"])
    for t in args.times:
        vals = quantum_propagator(fam, xs, t, args.eps, y=args.y, simplified=args.simplified)
        table.extend(xs, t, np.real(vals), np.imag(vals))
    return table, {"eps": args.eps}


def _scenario(args, mode="unitary"):
    from .evolution import Scenario, parse_initial
    from .generators import MultiplierSymbol

    kind, params = parse_initial(args.initial)
    path = params.pop("path", None)
    return Scenario(kind, params, MultiplierSymbol.parse(args.symbol), list(args.times), n=args.n, L=args.L, mode=mode, path=path)


def cmd_evolve(args, radial_weight=False):
    scen = _scenario(args, args.mode)
    radial = scen.radial
    weighted = radial and (radial_weight or args.r2)
    table = Table(["r", "t", "r2rho"] if weighted else (["r", "t", "rho"] if radial else ["x", "t", "rho"]))
    drift = 0.0
    for t, field in scen.run():
        xs = field.grid_coords
        sel = np.abs(xs) <= args.xmax
        if args.mode == "unitary":
            dens = field.density
            drift = max(drift, abs(field.norm_sq - 1.0))
        else:
            dens = np.real(field.values)
            drift = max(drift, abs(float(np.real(field.grid.integrate(field.values))) - 1.0))
        y = xs**2 * dens if weighted else dens
        table.extend(xs[sel], t, y[sel])
    return table, {"norm_drift": drift}


def cmd_current(args):
    from .currents import density_rate, divergence, quantum_current, radial_flux_balance

    scen = _scenario(args)
    table = Table(["r", "t", "j"] if scen.radial else ["x", "t", "j"])
    worst = 0.0
    for t, field in scen.run():
        prof = quantum_current(field, scen.symbol, t)
        if scen.radial:
            res = radial_flux_balance(field, scen.symbol, prof.j)
        else:
            res = density_rate(field, scen.symbol) + divergence(prof.j, field.grid)
        worst = max(worst, float(np.max(np.abs(res))))
        sel = np.abs(prof.x) <= args.xmax
        table.extend(prof.x[sel], t, prof.j[sel])
    return table, {"continuity_linf": worst}


def cmd_figure(args):
    preset = dict(FIGURES[args.id])
    ns = argparse.Namespace(**vars(args))
    for key in ("initial", "symbol", "n", "L", "xmax"):
        setattr(ns, key, preset[key])
    ns.times = args.times or FIGURE_TIMES
    ns.mode = "unitary"
    ns.r2 = True
    if preset["command"] == "current":
        table, errors = cmd_current(ns)
    else:
        table, errors = cmd_evolve(ns, radial_weight=True)
    errors["times_reconstructed"] = 1.0 if not args.times else 0.0
    return table, errors


def cmd_selftest(args):
    from .selftest import run_selftest

    ok = run_selftest(sys.stdout)
    return None, {"passed": 1.0 if ok else 0.0}


COMMANDS = {
    "kernel": cmd_kernel,
    "propagate": cmd_propagate,
    "evolve": cmd_evolve,
    "current": cmd_current,
    "figure": cmd_figure,
    "selftest": cmd_selftest,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON file whose keys supply defaults for the flags")
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--out", help="output file (stdout when omitted)")
    common.add_argument("--threads", type=int, help=f"FFT worker count (also read from {THREADS_ENV})")

    parser = argparse.ArgumentParser(prog="levydyn", description=__doc__)
    parser.add_argument("--version", action="version", version=f"levydyn {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def x_range(p, lo=-10.0, hi=10.0, n=201):
        p.add_argument("--xmin", type=float, default=lo)
        p.add_argument("--xmax", type=float, default=hi)
        p.add_argument("--npts", type=int, default=n)

    k = sub.add_parser("kernel", parents=[common], help="tabulate a semigroup kernel; columns x,t,k")
    k.add_argument("--family", choices=("heat", "stable", "cauchy", "relativistic"), default="cauchy")
    k.add_argument("--dim", type=int, choices=(1, 3), default=1)
    k.add_argument("--D", type=float, default=1.0)
    k.add_argument("--mu", type=float, default=1.0)
    k.add_argument("--intensity", type=float, default=1.0)
    k.add_argument("--c", type=float, default=1.0)
    k.add_argument("--m", type=float, default=0.0)
    k.add_argument("--times", type=_floats, default=[1.0])
    x_range(k)

    p = sub.add_parser("propagate", parents=[common], help="tabulate a regularized propagator; columns x,t,re,im")
    p.add_argument("--family", default="cauchy_1d", choices=("gaussian_free_1d", "oscillator_1d", "cauchy_1d", "cauchy_3d", "salpeter_1d", "salpeter_3d"))
    p.add_argument("--m", type=float, default=0.0)
    p.add_argument("--c", type=float, default=1.0)
    p.add_argument("--eps", type=float, default=0.05)
    p.add_argument("--y", type=float, default=0.0, help="source point (oscillator only)")
    p.add_argument("--simplified", action="store_true", help="drop eps from the numerator")
    p.add_argument("--times", type=_floats, default=[1.0])
    x_range(p)

    def scenario_flags(s):
        s.add_argument("--initial", default="quad_lorentz:1", help="quad_lorentz:g, lorentz:g, gaussian:w, salpeter_bessel:g:m, radial3d:g, file:path")
        s.add_argument("--symbol", default="stable:1", help="gaussian:D, stable:mu[:a], salpeter:m[:c], cauchy[:c]")
        s.add_argument("--times", type=_floats, default=[0.0, 1.0, 2.0, 5.0])
        s.add_argument("--n", type=int, default=32768)
        s.add_argument("--L", type=float, default=1600.0)
        s.add_argument("--xmax", type=float, default=20.0, help="emit rows with |x| <= xmax")

    e = sub.add_parser("evolve", parents=[common], help="run a scenario; columns x,t,rho")
    scenario_flags(e)
    e.add_argument("--mode", choices=("unitary", "dissipative"), default="unitary")
    e.add_argument("--r2", action="store_true", help="emit r^2 rho for radial scenarios")

    c = sub.add_parser("current", parents=[common], help="probability current of a scenario; columns x,t,j")
    scenario_flags(c)

    f = sub.add_parser("figure", parents=[common], help="emit a figure preset series (and a PNG next to --out)")
    f.add_argument("--id", type=int, choices=sorted(FIGURES), required=True)
    f.add_argument("--times", type=_floats, default=None)
    f.add_argument("--no-png", action="store_true")

    sub.add_parser("selftest", parents=[common], help="run the invariant suite")
    return parser


def _apply_config(parser: argparse.ArgumentParser, argv: list[str]) -> argparse.Namespace:
    args = parser.parse_args(argv)
    if not args.config:
        return args
    try:
        cfg = json.loads(Path(args.config).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        parser.error(f"cannot read config {args.config}: {exc}")
    if not isinstance(cfg, dict):
        parser.error("config must be a JSON object")
    sub = parser._subparsers._group_actions[0].choices[args.command]
    known = {a.dest for a in sub._actions}
    unknown = sorted(set(cfg) - known)
    if unknown:
        parser.error(f"unknown config keys: {', '.join(unknown)}")
    for key, val in cfg.items():
        if key == "times" and isinstance(val, list):
            cfg[key] = [float(v) for v in val]
    sub.set_defaults(**cfg)
    return parser.parse_args(argv)


def _config_echo(args) -> dict:
    skip = {"config", "out", "format", "threads"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = _apply_config(parser, list(sys.argv[1:] if argv is None else argv))
    if args.threads:
        os.environ[THREADS_ENV] = str(args.threads)
    try:
        table, errors = COMMANDS[args.command](args)
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    if table is None:
        return 0 if errors.get("passed", 1.0) == 1.0 else 1
    text = table.to_csv() if args.format == "csv" else table.to_json(args.command, _config_echo(args), errors)
    if args.out:
        Path(args.out).write_text(text)
        if args.command == "figure" and not args.no_png:
            _figure_png(args, table)
    else:
        sys.stdout.write(text)
    return 0


def _figure_png(args, table: Table):
    from .plotting import render_series

    data = np.array(table.rows)
    png = str(Path(args.out).with_suffix(".png"))
    render_series(png, data[:, 0], data[:, 1], data[:, 2], table.columns[0], table.columns[2], FIGURES[args.id]["title"])


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
