"""Command-line front end: ``zigzag <mode> [options]``.

Every mode writes into ``--out`` (default: the current directory):
``intensity.csv`` and ``meta.json`` always, ``report.json`` for ``compare``,
``period.json`` for ``period``, ``sweep.json`` plus one subdirectory per
coupling value for ``sweep`` and ``plot.py`` when ``--plot`` is given.

Exit status: 0 on success, 2 for invalid or out-of-scope parameters
(the message names the parameter), 3 when ``compare`` exceeds ``--tol``,
1 for any other failure.
"""

from __future__ import annotations

import argparse
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np
import yaml

from .analytic import dsn_distribution
from .compare import run_analytic, run_compare, run_numeric
from .errors import InvalidParameterError, ZigzagError
from .lattice import LatticeParams
from .maps import IntensityMap, environment_info, write_json
from .numeric import IntegratorConfig
from .periods import bloch_period
from .plotscript import PLOT_STYLES, emit_plot_script

MODES = ("analytic", "numeric", "compare", "sweep", "dsn", "period")
CONFIG_KEYS = ("lambda", "alpha1", "alpha2", "n0", "n_sites", "z_max", "z_steps", "mode")

EXIT_OK, EXIT_FAILURE, EXIT_PARAMS, EXIT_TOLERANCE = 0, 1, 2, 3

_BASELINE = {"lambda": 2.0, "alpha1": 0.1, "alpha2": 0.5, "n0": 10, "n_sites": 200, "z_max": 3.0, "z_steps": 600}
DEFAULTS = {
    "analytic": _BASELINE,
    "numeric": _BASELINE,
    "compare": _BASELINE,
    "period": _BASELINE,
    # the period-doubling scan uses 100 guides and a window holding two doubled periods
    "sweep": _BASELINE | {"n_sites": 100, "z_max": 8.0, "z_steps": 1600},
    "dsn": {"lambda": 0.0, "alpha1": 1.0, "alpha2": 0.5, "n0": 3, "n_sites": 200, "z_max": 1.0, "z_steps": 200},
}
DEFAULT_SWEEP_ALPHA1 = (0.5, 2.0, 4.0, 8.0)


def load_config(path):
    """Read a flat key-value file (YAML, which includes JSON)."""
    try:
        data = yaml.safe_load(Path(path).read_text())
    except OSError as exc:
        raise InvalidParameterError("config", f"cannot read {path}: {exc.strerror}") from exc
    except yaml.YAMLError as exc:
        raise InvalidParameterError("config", f"cannot parse {path}: {exc}") from exc
    if data is None:
        return {}
    if not isinstance(data, dict):
        raise InvalidParameterError("config", f"{path} must hold a flat mapping of keys to values")
    unknown = sorted(set(data) - set(CONFIG_KEYS))
    if unknown:
        raise InvalidParameterError(unknown[0], f"unknown configuration key in {path}")
    for key, value in data.items():
        if isinstance(value, (dict, list)):
            raise InvalidParameterError(key, "configuration values must be scalars")
    return data


def _build_parser():
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("lattice and grid")
    g.add_argument("--lambda", dest="lambda", type=float, help="normalised propagation-constant gradient (>= 0)")
    g.add_argument("--alpha1", type=float, help="first-neighbour coupling modulation")
    g.add_argument("--alpha2", type=float, help="second-neighbour coupling modulation")
    g.add_argument("--n0", type=int, help="excited guide (0-based)")
    g.add_argument("--n-sites", dest="n_sites", type=int, help="number of guides kept")
    g.add_argument("--z-max", dest="z_max", type=float, help="final propagation distance")
    g.add_argument("--z-steps", dest="z_steps", type=int, help="grid intervals on [0, z_max]")
    o = common.add_argument_group("run control")
    o.add_argument("--config", help="YAML or JSON file with flat keys " + ", ".join(CONFIG_KEYS))
    o.add_argument("--out", default=".", help="output directory (default: current directory)")
    o.add_argument("--tol", type=float, default=1e-5, help="compare mode: max intensity error before exit 3")
    o.add_argument("--rel-tol", type=float, help="integrator relative tolerance")
    o.add_argument("--abs-tol", type=float, help="integrator absolute tolerance")
    o.add_argument("--plot", choices=PLOT_STYLES, help="also emit plot.py in this style")
    o.add_argument("--slice-z", type=float, help="slice plots: row at this Z")
    o.add_argument("--slice-site", type=int, help="slice plots: trace of this guide")

    parser = argparse.ArgumentParser(prog="zigzag", description="Light propagation in a semi-infinite zigzag waveguide array.")
    sub = parser.add_subparsers(dest="command", required=True, metavar="MODE")
    helps = {
        "analytic": "closed-form intensity map",
        "numeric": "intensity map from adaptive Runge-Kutta integration",
        "compare": "both engines plus an agreement report",
        "sweep": "revival period over a list of alpha1 values",
        "dsn": "displaced squeezed number distributions (lambda = 0)",
        "period": "measured and predicted Bloch period",
        "run": "take the mode from --mode or the config file",
    }
    for name, text in helps.items():
        p = sub.add_parser(name, parents=[common], help=text, description=text)
        if name == "sweep":
            p.add_argument("--alpha1-values", type=_float_list, default=None,
                           help="comma-separated couplings (default 0.5,2,4,8)")
            p.add_argument("--workers", type=int, default=None, help="worker processes")
        if name == "run":
            p.add_argument("--mode", choices=MODES)
            p.add_argument("--alpha1-values", type=_float_list, default=None)
            p.add_argument("--workers", type=int, default=None)
    return parser


def _float_list(text):
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from exc


def resolve_settings(args):
    """Merge mode defaults, the config file and explicit flags, in that order."""
    file_cfg = load_config(args.config) if args.config else {}
    mode = args.command
    if mode == "run":
        mode = args.mode or file_cfg.get("mode")
        if mode not in MODES:
            raise InvalidParameterError("mode", f"must be one of {', '.join(MODES)}, got {mode!r}")
    settings = dict(DEFAULTS[mode])
    settings.update({k: v for k, v in file_cfg.items() if k != "mode"})
    for key in CONFIG_KEYS[:-1]:
        value = getattr(args, key, None)
        if value is not None:
            settings[key] = value
    settings["mode"] = mode
    return settings


def _grid(settings):
    z_max, steps = settings["z_max"], settings["z_steps"]
    try:
        z_max = float(z_max)
    except (TypeError, ValueError) as exc:
        raise InvalidParameterError("z_max", f"must be a number, got {z_max!r}") from exc
    if not (np.isfinite(z_max) and z_max >= 0):
        raise InvalidParameterError("z_max", f"must be finite and >= 0, got {z_max!r}")
    if isinstance(steps, bool) or int(steps) != steps or steps < 1:
        raise InvalidParameterError("z_steps", f"must be a positive integer, got {steps!r}")
    if z_max == 0:
        return np.zeros(1)
    return np.linspace(0.0, z_max, int(steps) + 1)


def _params(settings):
    try:
        return LatticeParams(settings["lambda"], settings["alpha1"], settings["alpha2"],
                             settings["n0"], settings["n_sites"])
    except TypeError as exc:
        raise InvalidParameterError("config", str(exc)) from exc


def _integrator(args):
    base = IntegratorConfig()
    return IntegratorConfig(rel_tol=args.rel_tol or base.rel_tol, abs_tol=args.abs_tol or base.abs_tol)


def _finish_map(imap, out, args, grid_settings):
    imap.metadata.setdefault("z_max", float(grid_settings["z_max"]))
    imap.metadata.setdefault("z_steps", int(grid_settings["z_steps"]))
    imap.write(out)
    if args.plot:
        emit_plot_script(imap, args.plot, out, at_z=args.slice_z, at_site=args.slice_site)


def _sweep_job(param_fields, alpha1, z_grid, out_dir):
    """One independent sweep point; module level so worker processes can import it."""
    params = LatticeParams(**param_fields).replace(alpha1=alpha1)
    imap = run_analytic(params, z_grid)
    imap.write(out_dir)
    est = bloch_period(imap)
    ratio = est.measured / est.formula if est.measured is not None and est.formula else None
    return {"alpha1": alpha1, "measured": est.measured, "formula": est.formula, "ratio": ratio,
            "dir": Path(out_dir).name}


def _run_sweep(params, z_grid, out, values, workers):
    fields = {"lam": params.lam, "alpha1": params.alpha1, "alpha2": params.alpha2,
              "n0": params.n0, "n_sites": params.n_sites}
    dirs = [out / f"alpha1_{a:g}" for a in values]
    workers = workers or min(len(values), os.cpu_count() or 1)
    if workers <= 1:
        rows = [_sweep_job(fields, a, z_grid, d) for a, d in zip(values, dirs)]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_sweep_job, [fields] * len(values), values, [z_grid] * len(values), dirs))
    write_json(out / "sweep.json", {"base": params.as_dict(), "rows": rows, "versions": environment_info()})
    for r in rows:
        ratio = "n/a" if r["ratio"] is None else f"{r['ratio']:.4f}"
        print(f"alpha1={r['alpha1']:g}  period={r['measured']}  ratio={ratio}")


def execute(args):
    settings = resolve_settings(args)
    mode = settings["mode"]
    z_grid = _grid(settings)
    params = _params(settings)
    out = Path(args.out)
    if mode == "analytic":
        _finish_map(run_analytic(params, z_grid), out, args, settings)
    elif mode == "numeric":
        _finish_map(run_numeric(params, z_grid, _integrator(args)), out, args, settings)
    elif mode == "compare":
        a, n, report = run_compare(params, z_grid, _integrator(args), tolerance=args.tol)
        _finish_map(a, out, args, settings)
        n.write(out / "numeric")
        write_json(out / "report.json", report.as_dict())
        print(f"max_abs_err={report.max_abs_err:.3e} l2_err={report.l2_err:.3e} "
              f"norm_drift={report.norm_drift:.3e} edge_leak={report.edge_leak:.3e}")
        if not report.passed:
            print(f"error: parameter 'tol': max_abs_err {report.max_abs_err:.3e} exceeds {args.tol:g}",
                  file=sys.stderr)
            return EXIT_TOLERANCE
    elif mode == "period":
        imap = run_analytic(params, z_grid)
        _finish_map(imap, out, args, settings)
        est = bloch_period(imap)
        write_json(out / "period.json", {"measured": est.measured, "formula": est.formula,
                                         "revivals": list(est.revivals)})
        print(f"measured={est.measured} formula={est.formula}")
    elif mode == "dsn":
        if params.lam != 0:
            raise InvalidParameterError("lambda", f"dsn mode requires lambda = 0, got {params.lam}")
        if params.alpha2 == 0:
            raise InvalidParameterError("alpha2", "dsn mode requires alpha2 != 0")
        rows = np.array([dsn_distribution(params, z) for z in z_grid])
        meta = params.as_dict() | {"mode": "dsn", "versions": environment_info()}
        _finish_map(IntensityMap(z_grid, np.arange(params.n_sites), rows, meta), out, args, settings)
    elif mode == "sweep":
        values = [float(v) for v in (args.alpha1_values or DEFAULT_SWEEP_ALPHA1)]
        _run_sweep(params, z_grid, out, values, args.workers)
    return EXIT_OK


def main(argv=None):
    args = _build_parser().parse_args(argv)
    try:
        return execute(args)
    except InvalidParameterError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARAMS
    except (ZigzagError, MemoryError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
