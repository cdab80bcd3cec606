"""Command-line front end.

    cesolve spectrum   --v1 -1 --n-max 3
    cesolve curves     --preset fig2
    cesolve potential  --preset fig1a
    cesolve iterations --preset fig3
    cesolve surface    --preset fig4
    cesolve verify     [--json] [--override 3=1e-2]

Exit codes: 0 success, 1 verification failure, 2 invalid input,
3 numerical failure.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys
import tempfile
from dataclasses import asdict, dataclass, field

import numpy as np

from . import acceptance, model, oracle, spectrum
from .errors import CesolveError
from .model import Method, PhysicalParams

EXIT_OK, EXIT_VERIFY, EXIT_INPUT, EXIT_NUMERIC = 0, 1, 2, 3

COMMANDS = ("spectrum", "curves", "potential", "iterations", "surface", "verify")

PRESETS = {
    "fig1a": {"command": "potential", "v1": -10.0, "v2_list": [0.0, 0.3, 0.5, 1.0]},
    "fig1b": {"command": "potential", "v1": -10.0, "v2_list": [0.0, -0.7, -0.85, -1.0]},
    "fig2": {"command": "curves", "n_list": list(range(1, 9)), "w_min": -3.0, "w_max": 3.0,
             "step": 0.25},
    "fig3": {"command": "iterations", "v1": -2.0, "n": 2, "v2_min": -1.0, "v2_max": 1.0,
             "v2_step": 0.1, "iterations": 3},
    "fig4": {"command": "surface", "v1_min": -10.0, "v1_max": -0.5, "v1_step": 0.5,
             "v2_min": -1.0, "v2_max": 1.0, "v2_step": 0.1},
}

METHODS = {"exact": Method.EXACT, "approx10": Method.APPROX10,
           "iteration": Method.ITERATION, "oracle": Method.ORACLE}


class InputError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    params: PhysicalParams
    n_max: int = 3
    method: str = "exact"
    output_path: str = "-"
    tolerance: float = 1e-13
    iterations: int = 3
    extra: dict = field(default_factory=dict)

    def validate(self):
        if self.command not in COMMANDS:
            raise InputError(f"unknown command {self.command!r}")
        if self.n_max < 1:
            raise InputError("--n-max must be at least 1")
        if not self.tolerance > 0:
            raise InputError("--tol must be positive")
        if self.method not in METHODS:
            raise InputError(f"unknown method {self.method!r}")
        if self.iterations < 0:
            raise InputError("--iterations must be non-negative")
        if self.output_path != "-":
            folder = os.path.dirname(os.path.abspath(self.output_path))
            if not os.path.isdir(folder) or not os.access(folder, os.W_OK):
                raise InputError(f"cannot write to {self.output_path}")

    def header(self):
        d = asdict(self)
        return "# cesolve " + json.dumps(d, sort_keys=True)


def fmt(x):
    if isinstance(x, str):
        return x
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return str(int(x))
    return "%.17g" % x


def _grid(lo, hi, step):
    if not step > 0:
        raise InputError("step must be positive")
    if hi < lo:
        raise InputError("range maximum is below its minimum")
    count = int(round((hi - lo) / step)) + 1
    return [float(v) for v in np.linspace(lo, hi, count)] if count > 1 else [float(lo)]


# --- commands: each returns (columns, rows, trailer comment lines) ---------------

def cmd_spectrum(cfg: RunConfig):
    p = cfg.params
    p.require_bound()
    method = METHODS[cfg.method]
    if method is Method.ORACLE:
        levels = oracle.eigenvalues_numeric(p, cfg.n_max, tol=min(cfg.tolerance * 10, 1e-10))
    else:
        levels = spectrum.bound_states(p, cfg.n_max, method, tol=cfg.tolerance,
                                       iterations=cfg.iterations)
    rows = [(lev.n, lev.energy, lev.n_eff, lev.label) for lev in levels]
    return ("n", "E", "n_eff", "method"), rows, []


def cmd_curves(cfg: RunConfig):
    ex = cfg.extra
    ns = [ex["n"]] if ex.get("n") else ex.get("n_list", list(range(1, 9)))
    rows, worst = [], 0.0
    ws = _grid(ex["w_min"], ex["w_max"], ex["step"])
    for n in ns:
        if n < 1:
            raise InputError("--n must be at least 1")
        for w in ws:
            try:
                smp = spectrum.solve_branch(n, w)
            except CesolveError as exc:
                raise type(exc)(f"branch {n}, w = {w}: {exc}") from exc
            rows.append((smp.n, smp.w, smp.v_exact, smp.v_approx, smp.rel_error))
            worst = max(worst, smp.rel_error)
    return ("n", "w", "v_exact", "v_approx", "rel_error"), rows, [f"# max_rel_error={fmt(worst)}"]


def cmd_potential(cfg: RunConfig):
    ex = cfg.extra
    if not (ex["x_min"] > 0 and ex["x_max"] > ex["x_min"]):
        raise InputError("potential grid needs 0 < x_min < x_max")
    if ex["x_points"] < 2:
        raise InputError("--x-points must be at least 2")
    xs = np.linspace(ex["x_min"], ex["x_max"], ex["x_points"])
    v2s = ex.get("v2_list") or [cfg.params.v2]
    rows = []
    for v2 in v2s:
        p = PhysicalParams(v1=cfg.params.v1, v2=v2, v0=cfg.params.v0,
                           mass=cfg.params.mass, hbar=cfg.params.hbar)
        rows.extend((v2, float(x), model.potential_value(p, float(x))) for x in xs)
    return ("V2", "x", "V"), rows, []


def cmd_iterations(cfg: RunConfig):
    ex = cfg.extra
    n = ex.get("n") or 2
    k_top = cfg.iterations
    rows = []
    for v2 in _grid(ex["v2_min"], ex["v2_max"], ex["v2_step"]):
        v2 = round(v2, 12)
        p = PhysicalParams(v1=cfg.params.v1, v2=v2, v0=cfg.params.v0,
                           mass=cfg.params.mass, hbar=cfg.params.hbar)
        p.require_bound()
        exact = spectrum.bound_states(p, n, tol=cfg.tolerance)[n - 1].energy
        try:
            trace = spectrum.neff_iterate(p, n, k_max=k_top, tol=0.0)
        except CesolveError as exc:
            raise type(exc)(f"V2 = {v2}: {exc}") from exc
        its = trace.iterates
        for k in range(1, k_top + 1):
            e = its[min(k, len(its) - 1)][2]
            rows.append((v2, k, e, exact, abs(e - exact)))
    return ("V2", "k", "E_iter", "E_exact", "abs_diff"), rows, []


def cmd_surface(cfg: RunConfig):
    ex = cfg.extra
    rows = []
    n_top = min(cfg.n_max, 2) if ex.get("preset") == "fig4" else cfg.n_max
    for v1 in _grid(ex["v1_min"], ex["v1_max"], ex["v1_step"]):
        for v2 in _grid(ex["v2_min"], ex["v2_max"], ex["v2_step"]):
            v1r, v2r = round(v1, 12), round(v2, 12)
            p = PhysicalParams(v1=v1r, v2=v2r, v0=cfg.params.v0,
                               mass=cfg.params.mass, hbar=cfg.params.hbar)
            p.require_bound()
            for lev in spectrum.bound_states(p, n_top, tol=cfg.tolerance):
                rows.append((v1r, v2r, lev.n, lev.energy))
    return ("V1", "V2", "n", "E"), rows, []


def cmd_verify(cfg: RunConfig):
    ex = cfg.extra
    results = acceptance.run(ids=ex.get("criteria"), thresholds=ex.get("overrides"))
    return results


HANDLERS = {"spectrum": cmd_spectrum, "curves": cmd_curves, "potential": cmd_potential,
            "iterations": cmd_iterations, "surface": cmd_surface}


# --- output ---------------------------------------------------------------------

def render_csv(cfg, columns, rows, trailer):
    lines = [cfg.header(), ",".join(columns)]
    lines += [",".join(fmt(v) for v in row) for row in rows]
    lines += trailer
    return "\n".join(lines) + "\n"


def emit(text, path):
    if path == "-":
        sys.stdout.write(text)
        return
    folder = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=folder, prefix=".cesolve-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


# --- argument parsing -------------------------------------------------------------

def _override(text):
    try:
        cid, tol = text.split("=")
        return int(cid), float(tol)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected ID=TOL, got {text!r}")


def build_parser():
    ap = argparse.ArgumentParser(prog="cesolve",
                                 description="Bound states of V0 + V1/sqrt(x) + "
                                             "(8 m V2^2/hbar^2)/x + V2/x^(3/2).")
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("--preset", choices=sorted(PRESETS))
    ap.add_argument("--mass", type=float, default=1.0)
    ap.add_argument("--hbar", type=float, default=1.0)
    ap.add_argument("--v0", type=float, default=0.0)
    ap.add_argument("--v1", type=float, default=-1.0)
    ap.add_argument("--v2", type=float, default=0.0)
    ap.add_argument("--n-max", type=int, default=3)
    ap.add_argument("--method", default="exact", choices=sorted(METHODS))
    ap.add_argument("--iterations", type=int, default=3,
                    help="number of successive approximations (iteration method)")
    ap.add_argument("--tol", type=float, default=1e-13)
    ap.add_argument("--output", default="-", help="CSV path, '-' for stdout")
    ap.add_argument("--n", type=int, help="single branch / level index")
    ap.add_argument("--w-min", type=float, default=-3.0)
    ap.add_argument("--w-max", type=float, default=3.0)
    ap.add_argument("--step", type=float, default=0.25)
    ap.add_argument("--x-min", type=float, default=0.02)
    ap.add_argument("--x-max", type=float, default=5.0)
    ap.add_argument("--x-points", type=int, default=250)
    ap.add_argument("--v1-min", type=float, default=-10.0)
    ap.add_argument("--v1-max", type=float, default=-0.5)
    ap.add_argument("--v1-step", type=float, default=0.5)
    ap.add_argument("--v2-min", type=float, default=-1.0)
    ap.add_argument("--v2-max", type=float, default=1.0)
    ap.add_argument("--v2-step", type=float, default=0.1)
    ap.add_argument("--json", action="store_true", help="machine-readable verify report")
    ap.add_argument("--criteria", type=lambda s: [int(c) for c in s.split(",")],
                    help="comma-separated criterion ids (verify)")
    ap.add_argument("--override", type=_override, action="append", default=[],
                    metavar="ID=TOL", help="replace a criterion tolerance (verify)")
    return ap


def config_from_args(args) -> RunConfig:
    extra = {k: getattr(args, k) for k in
             ("n", "w_min", "w_max", "step", "x_min", "x_max", "x_points", "v1_min",
              "v1_max", "v1_step", "v2_min", "v2_max", "v2_step", "criteria")}
    extra["overrides"] = dict(args.override)
    v1 = args.v1
    if args.preset:
        preset = dict(PRESETS[args.preset])
        if preset.pop("command") != args.command:
            raise InputError(f"preset {args.preset} belongs to another command")
        v1 = preset.pop("v1", v1)
        iterations = preset.pop("iterations", None)
        if iterations is not None:
            args.iterations = iterations
        extra.update(preset)
        extra["preset"] = args.preset
    try:
        params = PhysicalParams(v1=v1, v2=args.v2, v0=args.v0, mass=args.mass, hbar=args.hbar)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    for name in ("tol", "step", "w_min", "w_max"):
        if not math.isfinite(getattr(args, name)):
            raise InputError(f"--{name.replace('_', '-')} must be finite")
    cfg = RunConfig(command=args.command, params=params, n_max=args.n_max, method=args.method,
                    output_path=args.output, tolerance=args.tol, iterations=args.iterations,
                    extra=extra)
    cfg.validate()
    return cfg


def _report(results, as_json):
    if as_json:
        return json.dumps({"all_passed": all(r.passed for r in results),
                           "criteria": [r.as_dict() for r in results]}, indent=2) + "\n"
    lines = [r.line() for r in results]
    lines.append(f"{sum(r.passed for r in results)}/{len(results)} criteria passed")
    return "\n".join(lines) + "\n"


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        cfg = config_from_args(args)
        if cfg.command == "verify":
            results = cmd_verify(cfg)
            emit(_report(results, args.json), cfg.output_path)
            return EXIT_OK if all(r.passed for r in results) else EXIT_VERIFY
        columns, rows, trailer = HANDLERS[cfg.command](cfg)
        emit(render_csv(cfg, columns, rows, trailer), cfg.output_path)
        return EXIT_OK
    except InputError as exc:
        print(f"cesolve: invalid input: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except CesolveError as exc:
        if isinstance(exc, ValueError):
            print(f"cesolve: invalid input: {exc}", file=sys.stderr)
            return EXIT_INPUT
        print(f"cesolve: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
