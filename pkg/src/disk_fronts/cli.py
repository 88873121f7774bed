"""Command line: fronts, length series, models, density study, stationary-phase checks.

Every command writes CSV (or JSON) to ``--output`` (stdout by default) and can
emit a gnuplot script with ``--plot``. Options may also come from a flat
``key=value`` file given by ``--config``; flags take precedence.
"""

import argparse
import math
import os
import sys

import numpy as np

from . import __version__, io
from .analysis import THREADS_ENV, analysis_report, build_series, time_grid
from .asymptotics import (
    ModelParams, lambda_slope, length_model_integral_alpha, length_model_integral_xi,
    length_model_series,
)
from .billiard import flow
from .density import density_report
from .exceptions import DiskFrontsError
from .stationary_phase import (
    bessel_suite, boundary_suite, brute_force, bessel_problem, critical_points,
    front_phase_family, fresnel_suite, leading_term, linear_family, uniform_remainder_scan,
)
from ._validation import check_positive, check_source_distance

TWO_PI = 2.0 * math.pi

# option name -> (type, default); None means required
OPTIONS = {
    "front": {"a": (float, None), "t": (float, None), "n_alpha": (int, 1000)},
    "series": {"a": (float, None), "t_min": (float, 0.0), "t_max": (float, 50.0),
               "dt": (float, 0.1), "terms": (int, 10), "quad_tol": (float, 1e-8)},
    "model": {"a": (float, None), "t_min": (float, 1.0), "t_max": (float, 50.0),
              "dt": (float, 0.1), "terms": (int, 10), "quad_tol": (float, 1e-8)},
    "density": {"a": (float, None), "t": (float, None), "width": (float, 0.1),
                "quad_tol": (float, 1e-8)},
    "stationary-check": {"family": (str, "bessel"), "a": (float, 0.3), "t": (float, None)},
}
COMMON = {"output": (str, "-"), "format": (str, "csv"), "plot": (str, None)}


class CliError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CliError(message)


def build_parser():
    parser = _Parser(prog="disk-fronts", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name, opts in OPTIONS.items():
        p = sub.add_parser(name)
        for key in opts:
            p.add_argument("--" + key.replace("_", "-"), dest=key, default=None)
        p.add_argument("--config", default=None, help="key=value file; flags override it")
        p.add_argument("--output", "-o", default=None)
        p.add_argument("--format", default=None, help="csv or json")
        p.add_argument("--plot", default=None, help="write a gnuplot script to this path")
    sub.choices["stationary-check"].description = (
        "families: bessel (default suites), front-phase, linear")
    return parser


def resolve(args):
    """Merge flags, config file and defaults into a typed dict."""
    config = {}
    if args.config:
        with open(args.config) as fh:
            config = io.parse_config(fh.read())
    spec = dict(OPTIONS[args.command], **COMMON)
    unknown = set(config) - set(spec)
    if unknown:
        raise CliError(f"unknown config key: {sorted(unknown)[0]}")
    out = {}
    for key, (kind, default) in spec.items():
        raw = getattr(args, key)
        if raw is None:
            raw = config.get(key)
        if raw is None:
            if default is None and key not in COMMON and not (args.command == "stationary-check"):
                raise CliError(f"missing required option --{key.replace('_', '-')}")
            out[key] = default
            continue
        try:
            out[key] = kind(raw)
        except ValueError:
            raise CliError(f"invalid value for --{key.replace('_', '-')}: {raw}") from None
    if out["format"] not in ("csv", "json"):
        raise CliError("format must be csv or json")
    return out


def _emit(cfg, columns, rows, meta, plot_fn, title):
    if cfg["format"] == "json":
        text = io.json_text(columns, rows, meta)
    else:
        text = io.csv_text(columns, rows)
    if cfg["output"] == "-":
        sys.stdout.write(text)
    else:
        with open(cfg["output"], "w") as fh:
            fh.write(text)
    if cfg["plot"]:
        if cfg["output"] == "-" or cfg["format"] != "csv":
            raise CliError("--plot needs --output with csv format")
        with open(cfg["plot"], "w") as fh:
            fh.write(plot_fn(cfg["output"], title))


def cmd_front(cfg):
    a = check_source_distance(cfg["a"])
    t = check_positive("t", cfg["t"], allow_zero=True)
    n = cfg["n_alpha"]
    if n < 1:
        raise CliError("n-alpha must be at least 1")
    alphas = TWO_PI * np.arange(n) / n
    x, y, _, _, k = flow(a, alphas, t)
    rows = zip(alphas.tolist(), x.tolist(), y.tolist(), (k + 1).tolist())
    _emit(cfg, ["alpha", "x", "y", "reflections"], rows, {"command": "front", "a": a, "t": t,
          "n_alpha": n}, io.gnuplot_front, f"front a={a} t={t}")


def cmd_series(cfg):
    a = check_source_distance(cfg["a"])
    series = build_series(a, cfg["t_min"], cfg["t_max"], cfg["dt"], cfg["terms"],
                          cfg["quad_tol"])
    cols = [series.t_values, series.sim, series.model, series.lambda_line, series.residual]
    rows = zip(*(c.tolist() for c in cols))
    meta = {"command": "series", "a": a, "t_min": cfg["t_min"], "t_max": cfg["t_max"],
            "dt": cfg["dt"], "N": cfg["terms"], "quad_tol": cfg["quad_tol"]}
    _emit(cfg, ["t", "sim", "model", "lambda_t", "residual"], rows, meta,
          io.gnuplot_series, f"front length a={a}")
    report = io.report_text(analysis_report(series))
    (sys.stderr if cfg["output"] == "-" else sys.stdout).write(report)


def cmd_model(cfg):
    a = check_source_distance(cfg["a"])
    t = time_grid(cfg["t_min"], cfg["t_max"], cfg["dt"])
    if t[0] <= 0:
        raise CliError("t must be positive")
    series = length_model_series(ModelParams(a, cfg["terms"]), t)
    xi = [length_model_integral_xi(a, x, cfg["quad_tol"]) for x in t]
    alpha = [length_model_integral_alpha(a, x, cfg["quad_tol"]) for x in t]
    rows = zip(t.tolist(), (lambda_slope(a) * t).tolist(), np.atleast_1d(series).tolist(),
               xi, alpha)
    meta = {"command": "model", "a": a, "t_min": cfg["t_min"], "t_max": cfg["t_max"],
            "dt": cfg["dt"], "N": cfg["terms"], "quad_tol": cfg["quad_tol"]}
    _emit(cfg, ["t", "lambda_t", "series", "integral_xi", "integral_alpha"], rows, meta,
          io.gnuplot_series, f"length models a={a}")


def cmd_density(cfg):
    a = check_source_distance(cfg["a"])
    t = check_positive("t", cfg["t"])
    rows = [(r.r_lo, r.r_hi, r.simulated, r.model, r.rel_err)
            for r in density_report(a, t, cfg["width"], cfg["quad_tol"])]
    meta = {"command": "density", "a": a, "t": t, "width": cfg["width"],
            "quad_tol": cfg["quad_tol"]}
    _emit(cfg, ["r_lo", "r_hi", "simulated", "model", "rel_err"], rows, meta,
          io.gnuplot_density, f"front length per annulus a={a} t={t}")


def cmd_stationary_check(cfg):
    family = cfg["family"]
    fields = {"family": family}
    ok = True
    if cfg["t"] is not None:
        t = check_positive("t", cfg["t"])
        if family == "front-phase":
            problem = front_phase_family(check_source_distance(cfg["a"]))(1.0 / t)
        elif family == "linear":
            problem = linear_family(0.05)
        else:
            problem = bessel_problem()
        lead = leading_term(problem, t, critical_points(problem))
        fields.update(t=t, brute_force=abs(brute_force(problem, t)),
                      leading_error=abs(brute_force(problem, t) - lead))
    elif family == "bessel":
        slope = bessel_suite()
        fresnel = fresnel_suite()
        bslope, exact = boundary_suite()
        checks = {"bessel_slope": (slope, -1.7 <= slope <= -1.3),
                  "fresnel_slope": (fresnel, -1.7 <= fresnel <= -1.3),
                  "boundary_slope": (bslope, -2.2 <= bslope <= -1.8),
                  "linear_exact_error": (exact, exact <= 1e-12)}
        for key, (value, passed) in checks.items():
            fields[key] = value
            fields[key + "_pass"] = passed
            ok &= passed
    elif family in ("front-phase", "linear"):
        t_grid = np.geomspace(10.0, 200.0, 12)
        if family == "front-phase":
            a = check_source_distance(cfg["a"])
            if a == 0.0:
                raise CliError("front-phase family needs a > 0")
            fields["a"] = a
            scan = uniform_remainder_scan(front_phase_family(a), t_grid, lambda t: [1.0 / t])
        else:
            scan = uniform_remainder_scan(linear_family, t_grid, np.linspace(0.0, 0.1, 5))
        fields.update(max_scaled=float(scan.scaled.max()),
                      median_scaled=float(np.median(scan.scaled)),
                      ratio=scan.ratio, bounded=scan.bounded)
        ok = scan.bounded
    else:
        raise CliError("family must be bessel, front-phase or linear")
    fields["result"] = "pass" if ok else "fail"
    text = io.report_text({k: (str(v).lower() if isinstance(v, bool) else v)
                           for k, v in fields.items()})
    if cfg["output"] == "-":
        sys.stdout.write(text)
    else:
        with open(cfg["output"], "w") as fh:
            fh.write(text)
    return 0 if ok else 1


COMMANDS = {"front": cmd_front, "series": cmd_series, "model": cmd_model,
            "density": cmd_density, "stationary-check": cmd_stationary_check}


def main(argv=None):
    try:
        args = build_parser().parse_args(argv)
        cfg = resolve(args)
        threads = os.environ.get(THREADS_ENV)
        if threads is not None and not (threads.isdigit() and int(threads) > 0):
            raise CliError(f"{THREADS_ENV} must be a positive integer")
        return COMMANDS[args.command](cfg) or 0
    except (CliError, DiskFrontsError, ValueError, TypeError, OSError) as exc:
        msg = " ".join(str(exc).split())
        sys.stderr.write(f"disk-fronts: error: {msg}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
