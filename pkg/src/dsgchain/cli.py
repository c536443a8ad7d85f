"""
Command-line interface: ``dsgchain {kink,solve,classify,sweep,eos}``.

Every command writes plot-ready data.  CSV goes to ``--out`` (default
stdout) with a header row, 12 significant digits and LF line endings.
JSON summaries embed the tool version, the effective configuration and
where each quantity came from.

Settings resolve as command-line flags, then a flat JSON ``--config``
file keyed by flag name, then built-in defaults.  The worker count comes
from ``--threads`` or the ``DSG_THREADS`` environment variable (0 picks
the CPU count); it never changes the output.

Exit codes: 0 ok, 2 bad configuration, 3 forbidden or divergent P,
4 sweep mostly failed, 5 integrator blow-up.
"""

from __future__ import annotations

import argparse
import io
import json
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__, analytic, eos, orbit, potential, sweep
from .errors import BranchTooSmall, DSGError, InvalidParameters, MixedClasses, NonFiniteState, NotBounded
from .integrate import FieldState, IntegratorConfig, Method, integrate
from .orbit import SolutionClass
from .potential import PotentialParams

EXIT_OK, EXIT_CONFIG, EXIT_DIVERGENT, EXIT_SWEEP_FAILED, EXIT_BLOWUP = 0, 2, 3, 4, 5
MIN_SUCCESS = 0.9
SIG_DIGITS = 12

# keys that only affect where or how fast output is produced
_NOT_ECHOED = {"config", "out", "summary", "threads", "command", "func"}


class ConfigError(Exception):
    pass


def _fmt(v) -> str:
    if isinstance(v, str):
        return v
    if v is None:
        return ""
    return f"{float(v):.{SIG_DIGITS}g}"


def _round(v):
    """JSON-safe value at the CSV precision (NaN and inf become null)."""
    if isinstance(v, dict):
        return {k: _round(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_round(x) for x in v]
    if isinstance(v, (bool, str)) or v is None:
        return v
    if isinstance(v, (int, np.integer)):
        return int(v)
    v = float(v)
    return float(f"{v:.{SIG_DIGITS}g}") if math.isfinite(v) else None


def write_csv(stream, header, rows):
    buf = io.StringIO()
    buf.write(",".join(header) + "\n")
    for row in rows:
        buf.write(",".join(_fmt(v) for v in row) + "\n")
    stream.write(buf.getvalue())


def _open_out(path):
    if path in (None, "-"):
        return sys.stdout
    return open(path, "w", encoding="utf-8", newline="\n")


def _emit_csv(args, header, rows):
    stream = _open_out(args.out)
    try:
        write_csv(stream, header, rows)
    finally:
        if stream is not sys.stdout:
            stream.close()


def _emit_json(args, payload, path=None):
    text = json.dumps(_round(payload), indent=2, sort_keys=True) + "\n"
    if path is None:
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8", newline="\n")


def _effective_config(args) -> dict:
    return {k: v for k, v in sorted(vars(args).items()) if k not in _NOT_ECHOED}


def _envelope(args, provenance, **payload):
    return {"version": __version__, "config": _effective_config(args), "provenance": provenance, **payload}


def _finite(name, value, positive=False):
    if value is None:
        return
    if not math.isfinite(value) or (positive and value <= 0):
        raise ConfigError(f"--{name.replace('_', '-')} must be finite{' and > 0' if positive else ''}, got {value!r}")


def _params(args) -> PotentialParams:
    _finite("eps", args.eps)
    try:
        return PotentialParams(args.eps, args.n)
    except (InvalidParameters, TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc


def _threads(args) -> int:
    t = args.threads
    if t is None:
        env = os.environ.get("DSG_THREADS", "1")
        try:
            t = int(env)
        except ValueError as exc:
            raise ConfigError(f"DSG_THREADS must be an integer, got {env!r}") from exc
    if t < 0:
        raise ConfigError(f"thread count must be >= 0, got {t}")
    return t or (os.cpu_count() or 1)


# -- kink ---------------------------------------------------------------


def cmd_kink(args) -> int:
    params = _params(args)
    if params.n != 2:
        raise ConfigError("kink needs n = 2")
    for name in ("x_min", "x_max"):
        _finite(name, getattr(args, name))
    if args.x_max <= args.x_min or args.num < 2:
        raise ConfigError("need x_min < x_max and num >= 2")
    spec = analytic.KinkSpec(params, analytic.Polarity(args.polarity))
    x = np.linspace(args.x_min, args.x_max, args.num)
    cols = (x, analytic.kink_phi(spec, x), analytic.kink_slope(spec, x), analytic.kink_energy_density(spec, x))
    _emit_csv(args, ["x", "phi", "dphi", "energy_density"], zip(*cols))
    return EXIT_OK


# -- solve --------------------------------------------------------------


def cmd_solve(args) -> int:
    params = _params(args)
    top = potential.eval(params, math.pi)
    if (args.p is None) == (args.dphi0 is None):
        raise ConfigError("give exactly one of --p and --dphi0")
    for name in ("p", "dphi0"):
        _finite(name, getattr(args, name))
    for name in ("x_max", "step", "abs_tol", "rel_tol"):
        _finite(name, getattr(args, name), positive=True)
    if args.p is not None:
        if args.p < -top:
            raise ConfigError(f"--p must be >= -V(pi) = {-top}")
        ic = FieldState(0.0, math.pi, math.sqrt(2.0 * (args.p + top)))
    else:
        ic = FieldState(0.0, math.pi, args.dphi0)
    try:
        cfg = IntegratorConfig(Method(args.method), args.step, args.x_max, args.abs_tol, args.rel_tol)
    except (InvalidParameters, ValueError) as exc:
        raise ConfigError(str(exc)) from exc
    traj = integrate(ic, params, cfg)
    cols = (traj.x, traj.phi, traj.dphi, traj.first_integral(), traj.energy_density())
    _emit_csv(args, ["x", "phi", "dphi", "P_instant", "H"], zip(*cols))
    return EXIT_OK


# -- classify -----------------------------------------------------------


def cmd_classify(args) -> int:
    params = _params(args)
    if args.p is None:
        raise ConfigError("classify needs --p")
    _finite("p", args.p)
    cls = orbit.classify(params, args.p)
    if cls in (SolutionClass.FORBIDDEN, SolutionClass.SEPARATRIX):
        print(f"error: P={args.p} is {cls.value}", file=sys.stderr)
        return EXIT_DIVERGENT
    m = orbit.soliton_metrics(params, args.p)
    prov = {k: "quadrature" for k in ("L", "E_sol", "rho_bar")}
    out = _envelope(args, prov, **{"class": m.cls.value, "P": m.P, "L": m.L, "E_sol": m.E_sol, "rho_bar": m.rho_bar})
    _emit_json(args, out, args.summary)
    return EXIT_OK


# -- sweep / eos --------------------------------------------------------

SWEEP_HEADER = ["P_tension", "class", "branch", "L", "E_sol", "F", "rho_bar", "chi", "inv_chi", "error"]


def _grid(args, params, cls):
    if args.p_values:
        try:
            grid = np.array([float(v) for v in str(args.p_values).split(",")])
        except ValueError as exc:
            raise ConfigError(f"bad --p-values: {exc}") from exc
        if not np.all(np.isfinite(grid)) or len(np.unique(grid)) != len(grid):
            raise ConfigError("--p-values must be finite and distinct")
        return grid
    _finite("clip", args.clip, positive=True)
    _finite("p_max", args.p_max, positive=True)
    if args.num is not None and args.num < 5:
        raise ConfigError("--num must be >= 5")
    return sweep.default_grid(params, cls, args.num, args.clip, args.p_max)


def _sweep_rows(curve, diagram):
    chi = {r.P: (r.chi, r.inv_chi) for r in diagram.rows} if diagram else {}
    rows = []
    for p in curve.points:
        c, ic = chi.get(p.P, (math.nan, math.nan))
        rows.append([p.P, curve.cls.value, p.branch or "", p.L, p.E_sol, p.F, p.rho_bar, c, ic, p.error or ""])
    return rows


def _run_sweep(args, with_eos: bool) -> int:
    params = _params(args)
    cls = SolutionClass(args.cls)
    if cls not in (SolutionClass.PERIODIC, SolutionClass.STEP_LIKE):
        raise ConfigError("--class must be periodic or step-like")
    grid = _grid(args, params, cls)
    threads = _threads(args)
    try:
        curve = sweep.build_curve(params, grid, cls, threads)
    except MixedClasses as exc:
        raise ConfigError(f"invalid grid: {exc}") from exc
    curve = sweep.assign_branches(curve)
    ok = sum(p.ok for p in curve.points)
    status = EXIT_OK if ok >= MIN_SUCCESS * len(curve.points) else EXIT_SWEEP_FAILED
    diagram = None
    if status == EXIT_OK:
        try:
            curve = sweep.force_curve(curve)
        except BranchTooSmall as exc:
            print(f"error: {exc}", file=sys.stderr)
            status = EXIT_SWEEP_FAILED
    if status == EXIT_OK:
        diagram = eos.diagram_from_curve(curve)

    _emit_csv(args, SWEEP_HEADER, _sweep_rows(curve, diagram))

    branches = {}
    for p in curve.points:
        b = branches.setdefault(p.branch or "", {"rows": 0, "P_min": p.P, "P_max": p.P})
        b["rows"] += 1
        b["P_min"], b["P_max"] = min(b["P_min"], p.P), max(b["P_max"], p.P)
    summary = {
        "class": cls.value,
        "rows": len(curve.points),
        "rows_ok": ok,
        "P_star": curve.P_star,
        "stationary_P": curve.stationary,
        "branches": branches,
    }
    prov = {
        "L": "quadrature",
        "E_sol": "quadrature",
        "rho_bar": "quadrature",
        "F": "finite difference of quadrature",
        "chi": "finite difference of quadrature",
        "P_star": "golden section on quadrature L(P)",
    }
    if with_eos and diagram is not None:
        profile = eos.compressibility_profile(diagram)
        summary.update(rho_max=diagram.rho_max, P_at_max=diagram.P_at_max, chi_sign_changes=profile.sign_changes)
        prov["rho_max"] = "parabolic vertex on quadrature rows"
    if args.find_eps_c:
        summary["eps_c"] = sweep.critical_epsilon(args.n)
        prov["eps_c"] = "bisection on presence of P_star"
    out = _envelope(args, prov, **summary)
    path = args.summary
    if path is None and args.out not in (None, "-"):
        path = str(Path(args.out).with_suffix(".json"))
    if path is None:
        sys.stderr.write(json.dumps(_round(out), indent=2, sort_keys=True) + "\n")
    else:
        _emit_json(args, out, path)
    return status


def cmd_sweep(args) -> int:
    return _run_sweep(args, with_eos=False)


def cmd_eos(args) -> int:
    return _run_sweep(args, with_eos=True)


# -- parser -------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--eps", type=float, default=1.0, help="coupling of the second harmonic")
    common.add_argument("--n", type=int, default=2, help="harmonic index")
    common.add_argument("--config", help="flat JSON file of flag values")
    common.add_argument("--out", help="CSV output path (default stdout)")
    common.add_argument("--summary", help="JSON output path")
    common.add_argument("--threads", type=int, default=None, help="worker threads, 0 = auto (env DSG_THREADS)")

    parser = argparse.ArgumentParser(prog="dsgchain", description="Static double sine-Gordon chains.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("kink", parents=[common], help="sample the exact kink")
    p.add_argument("--polarity", choices=[q.value for q in analytic.Polarity], default="kink")
    p.add_argument("--x-min", type=float, default=-10.0)
    p.add_argument("--x-max", type=float, default=10.0)
    p.add_argument("--num", type=int, default=401)
    p.set_defaults(func=cmd_kink)

    p = sub.add_parser("solve", parents=[common], help="integrate from phi = pi")
    p.add_argument("--p", type=float, help="first integral P")
    p.add_argument("--dphi0", type=float, help="slope at phi = pi instead of P")
    p.add_argument("--method", choices=[m.value for m in Method], default="rkf45")
    p.add_argument("--step", type=float, default=1e-3)
    p.add_argument("--x-max", type=float, default=200.0)
    p.add_argument("--abs-tol", type=float, default=1e-10)
    p.add_argument("--rel-tol", type=float, default=1e-10)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("classify", parents=[common], help="classify one P and measure it")
    p.add_argument("--p", type=float)
    p.set_defaults(func=cmd_classify)

    for name, func, text in (("sweep", cmd_sweep, "L, E and F over a P grid"), ("eos", cmd_eos, "sweep plus the equation of state")):
        p = sub.add_parser(name, parents=[common], help=text)
        p.add_argument("--class", dest="cls", choices=["periodic", "step-like"], default="periodic")
        p.add_argument("--num", type=int, default=None, help="grid size")
        p.add_argument("--clip", type=float, default=1e-9, help="distance kept from divergent ends")
        p.add_argument("--p-max", type=float, default=50.0, help="largest step-like P")
        p.add_argument("--p-values", help="explicit comma-separated P grid")
        p.add_argument("--find-eps-c", action="store_true", help="also bisect for the critical coupling")
        p.set_defaults(func=func)
    return parser


def _load_config(path, subparser) -> dict:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, ValueError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError("config file must hold a flat JSON object")
    known = {a.dest: a for a in subparser._actions}
    alias = {"class": "cls"}
    out = {}
    for key, value in data.items():
        dest = alias.get(key, key.lstrip("-").replace("-", "_"))
        if dest not in known or dest in ("help", "config", "func"):
            raise ConfigError(f"unknown config key {key!r}")
        if isinstance(value, (dict, list)):
            raise ConfigError(f"config key {key!r} must be a scalar")
        out[dest] = value
    return out


def _subparser(parser, name):
    for action in parser._actions:
        if isinstance(action, argparse._SubParsersAction):
            return action.choices[name]
    raise KeyError(name)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_CONFIG
    try:
        if args.config:
            # flags > config file > defaults: re-parse with the file as defaults
            sp = _subparser(parser, args.command)
            sp.set_defaults(**_load_config(args.config, sp))
            args = parser.parse_args(argv)
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NonFiniteState as exc:
        print(f"error: integrator blow-up: {exc}", file=sys.stderr)
        return EXIT_BLOWUP
    except NotBounded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DIVERGENT
    except InvalidParameters as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except DSGError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SWEEP_FAILED


if __name__ == "__main__":
    sys.exit(main())
