"""Command-line front end.

Every subcommand writes plot-ready data (CSV or JSON) to ``--out`` or to
standard output.  Runs are deterministic: the same flags give byte-identical
output.  Numeric warnings go to standard error as one JSON object per line.

Exit codes: 0 success, 1 invalid input, 2 a verification check failed.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import platform
import sys
import warnings
from concurrent.futures import ProcessPoolExecutor
from datetime import datetime, timezone
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from . import __version__
from .baselines import (MODEL_NAMES, DirectedModel, baseline_height_profile, baseline_partition,
                        fit_sqrt_amplitude)
from .errors import PruwalkError
from .kernel import (KernelContext, full_solution, two_sided_residuals, verify_functional_equations,
                     w_series)
from .phase import (CRITICAL_POLYNOMIALS, MODELS, bivariate_in_z, critical_point, free_energy,
                    get_model, isolate_real_roots, ratio_estimate, surface_density,
                    transition_height_report)
from .series import Series
from .walks import DFS_LIMIT, WalkFamily, count_walks_dp, enumerate_walks, height_statistics

EXIT_OK, EXIT_INVALID, EXIT_CHECK = 0, 1, 2
PRUDENT_MODELS = ("prudent_tails", "prudent_loops")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """argparse reports usage errors with status 2; ours is 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


# ---------------------------------------------------------------------------
# output
# ---------------------------------------------------------------------------

def _fmt(x) -> str:
    if isinstance(x, float):
        return format(x, ".17g")
    if x is None:
        return ""
    return str(x)


def _jsonable(x):
    if isinstance(x, float):
        return None if math.isnan(x) else x
    if isinstance(x, (np.floating,)):
        return _jsonable(float(x))
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return x


def _meta(args) -> dict:
    flags = {k: v for k, v in sorted(vars(args).items())
             if k not in ("func", "out", "timestamp") and not callable(v)}
    return {
        "command": args.command,
        "flags": flags,
        "versions": {"pruwalk": __version__, "numpy": np.__version__,
                     "python": platform.python_version()},
        "timestamp": datetime.now(timezone.utc).isoformat() if args.timestamp else None,
    }


def _output_format(args) -> str:
    if args.format:
        return args.format
    if args.out and args.out.endswith(".csv"):
        return "csv"
    return "json"


def _emit(args, rows: list[dict], columns: Sequence[str], extra_meta: Optional[dict] = None) -> None:
    """Write ``rows`` as CSV (``columns`` in order) or as a JSON document."""
    if _output_format(args) == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(columns)
        for r in rows:
            w.writerow([_fmt(r.get(c)) for c in columns])
        text = buf.getvalue()
    else:
        meta = _meta(args)
        if extra_meta:
            meta.update(extra_meta)
        text = json.dumps(_jsonable({"meta": meta, "data": rows}), indent=1, sort_keys=False) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _log(level: str, message: str, **fields) -> None:
    sys.stderr.write(json.dumps({"level": level, "message": message, **_jsonable(fields)}) + "\n")


def _showwarning(message, category, filename, lineno, file=None, line=None):
    _log("warning", str(message), category=category.__name__)


def _threads() -> int:
    raw = os.environ.get("PRUWALK_THREADS", "1")
    try:
        n = int(raw)
    except ValueError:
        raise UsageError(f"PRUWALK_THREADS must be an integer, got {raw!r}") from None
    return max(1, n)


# ---------------------------------------------------------------------------
# argument helpers
# ---------------------------------------------------------------------------

def _rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"expected a rational number, got {text!r}") from None


def _coeff_list(text: str) -> list[Fraction]:
    try:
        return [Fraction(t) for t in text.split(",")]
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"expected comma-separated rationals, got {text!r}") from None


def _directed(label: str, weighting: Optional[str]) -> DirectedModel:
    """``dyck_loops`` and similar labels to a DirectedModel."""
    for name in MODEL_NAMES:
        for endpoint in ("tail", "loop"):
            if label == f"{name}_{endpoint}s":
                w = weighting or ("vertex" if name == "dyck" else "edge")
                return DirectedModel(name, w, endpoint)
    raise UsageError(f"--model: unknown model {label!r}")


def _all_model_labels() -> list[str]:
    return list(PRUDENT_MODELS) + [f"{m}_{e}s" for m in MODEL_NAMES for e in ("tail", "loop")]


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_enumerate(args) -> int:
    fam = WalkFamily(args.family, args.endpoint)
    method = args.method or ("dfs" if args.max_n <= DFS_LIMIT else "dp")
    if method == "dp":
        if fam.sides != "two_sided":
            raise UsageError("--method dp is available for --family 2sided only")
        table = count_walks_dp(args.max_n, endpoint=args.endpoint)
    else:
        table = enumerate_walks(fam, args.max_n)
    if _output_format(args) == "csv":
        rows = [{"n": n, "nu": e[0], "count": c}
                for n, p in enumerate(table.totals) for e, c in sorted(p.terms().items())]
        _emit(args, rows, ("n", "nu", "count"))
        return EXIT_OK
    rows = []
    for n, p in enumerate(table.totals):
        deg = p.degree("a") if p else -1
        coeffs = [str(p.terms().get((k, 0, 0, 0), 0)) for k in range(deg + 1)]
        rows.append({"n": n, "coefficients": coeffs, "Z": p.to_json()})
    _emit(args, rows, (), {"coefficient_order": "ascending powers of a", "method": method})
    return EXIT_OK


def cmd_series(args) -> int:
    ctx = KernelContext(args.order, a=args.a)
    sol = full_solution(ctx, args.u, args.v)
    parts = {"R": sol.R, "T": sol.T, "W": sol.W}
    if _output_format(args) == "csv":
        rows = []
        for name, s in parts.items():
            for n, p in enumerate(s.coeffs):
                for (ea, eu, ev, ew), c in sorted(p.terms().items()):
                    rows.append({"series": name, "n": n, "a": ea, "u": eu, "v": ev, "w": ew,
                                 "coefficient": str(c)})
        _emit(args, rows, ("series", "n", "a", "u", "v", "w", "coefficient"))
        return EXIT_OK
    rows = [{"name": name, "series": s.to_json()} for name, s in parts.items()]
    _emit(args, rows, (), {"monomial_key": "exponents of a,u,v,w"})
    return EXIT_OK


def _read_series(path: str) -> dict[str, Series]:
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
        return {row["name"]: Series.from_json(row["series"]) for row in doc["data"]}
    except (OSError, KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"--input: cannot read series from {path!r}: {exc}") from None


def cmd_verify(args) -> int:
    perturb = None
    if args.perturb:
        which, _, k = args.perturb.partition(":")
        if which not in ("R", "T") or not k.isdigit():
            raise UsageError("--perturb: expected R:<order> or T:<order>")
        perturb = (which, int(k))
    if args.input:
        if WalkFamily(args.family).sides != "two_sided":
            raise UsageError("--input is supported for --family 2sided only")
        parts = _read_series(args.input)
        if "R" not in parts or "T" not in parts:
            raise UsageError("--input: file must contain R and T")
        R, T = parts["R"], parts["T"]
        order = args.order if args.order is not None else min(R.order, T.order)
        if perturb:
            bump = Series.from_dict({perturb[1]: 1}, order)
            R, T = (R + bump, T) if perturb[0] == "R" else (R, T + bump)
        reports = two_sided_residuals(R, T, order)
    else:
        order = 20 if args.order is None else args.order
        reports = verify_functional_equations(args.family, order, args.source, perturb)
    rows = [{**r.to_json(), "report": r.describe()} for r in reports]
    _emit(args, rows, ("equation", "max_order", "passed", "first_failing_order", "report"))
    for r in reports:
        _log("info" if r.passed else "error", r.describe())
    return EXIT_OK if all(r.passed for r in reports) else EXIT_CHECK


_NAMED_POLYS = ("tails_desorbed", "loops_desorbed", "loops_critical_a", "adsorbed")


def cmd_roots(args) -> int:
    if args.coeffs is not None:
        poly, label = args.coeffs, "custom"
    else:
        label = args.poly
        if label == "adsorbed":
            if args.a is None:
                raise UsageError("--poly adsorbed needs --a")
            poly = bivariate_in_z(CRITICAL_POLYNOMIALS.adsorbed, args.a)
        else:
            poly = getattr(CRITICAL_POLYNOMIALS, label)
    lo = float(args.lo) if args.lo is not None else -math.inf
    hi = float(args.hi) if args.hi is not None else math.inf
    lo_v = args.lo if args.lo is not None else lo
    hi_v = args.hi if args.hi is not None else hi
    roots = isolate_real_roots(poly, (lo_v, hi_v))
    rows = [{"polynomial": label, "root": r.value, "lo": float(r.lo), "hi": float(r.hi),
             "multiplicity": r.multiplicity} for r in roots]
    _emit(args, rows, ("polynomial", "root", "lo", "hi", "multiplicity"))
    return EXIT_OK


def _phase_row(task):
    model, alpha = task
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        a = math.exp(alpha)
        row = {"alpha": alpha, "f": free_energy(model, a), "rho": surface_density(model, a)}
    return row, [(w.category.__name__, str(w.message)) for w in caught]


def cmd_phase(args) -> int:
    model = get_model(args.model).name
    if args.steps < 1:
        raise UsageError("--steps must be >= 1")
    if args.alpha_max < args.alpha_min:
        raise UsageError("--alpha-max must not be below --alpha-min")
    alphas = (np.linspace(args.alpha_min, args.alpha_max, args.steps + 1) if args.steps
              else np.array([args.alpha_min]))
    tasks = [(model, float(al)) for al in alphas]
    threads = _threads()
    if threads > 1:
        with ProcessPoolExecutor(threads) as pool:
            results = list(pool.map(_phase_row, tasks))
    else:
        results = [_phase_row(t) for t in tasks]
    rows = []
    for row, caught in results:
        for category, message in caught:
            _log("warning", message, category=category, alpha=row["alpha"])
        rows.append(row)
    cp = critical_point(model)
    _emit(args, rows, ("alpha", "f", "rho"),
          {"a_c": cp.a_c, "alpha_c": math.log(cp.a_c) if cp.a_c else None,
           "rho_jump": cp.jump, "transition": cp.order, "crossover_exponent": cp.crossover})
    return EXIT_OK


def cmd_estimate(args) -> int:
    if args.a <= 0:
        raise UsageError("--a must be positive")
    if args.model in PRUDENT_MODELS:
        coeffs = w_series(args.order, a=args.a, v=1 if args.model == "prudent_tails" else 0).numbers()
        key = args.model
    else:
        dm = _directed(args.model, args.weighting)
        coeffs = baseline_partition(dm, args.order, args.a).at(args.a)
        key = dm.phase_key
    est = ratio_estimate(coeffs, tail=args.tail)
    row = {"model": args.model, "a": float(args.a), "z_c": est.z_c, "uncertainty": est.uncertainty,
           "method": est.method, "n_terms": est.n_terms, "z_c_conjectured": None, "relative_error": None}
    if key is not None and key in MODELS:
        z_exact = MODELS[key].z_c(float(args.a))
        row["z_c_conjectured"] = z_exact
        row["relative_error"] = est.z_c / z_exact - 1
    _emit(args, [row], ("model", "a", "z_c", "uncertainty", "method", "n_terms",
                        "z_c_conjectured", "relative_error"))
    return EXIT_OK


def cmd_heights(args) -> int:
    if args.model in PRUDENT_MODELS:
        endpoint = "tail" if args.model == "prudent_tails" else "loop"
        table = height_statistics(WalkFamily("two_sided", endpoint), args.max_n)
    else:
        dm = _directed(args.model, args.weighting)
        exact = {"exact": True, "float": False}.get(args.arithmetic)
        table = baseline_height_profile(dm, args.max_n, exact=exact)
    ns, es, hs = table.float_means()
    rows = [{"n": int(n), "mean_endpoint": float(e), "mean_max": float(h)}
            for n, e, h in zip(ns, es, hs)]
    extra = {"exact": table.exact}
    if args.fit and args.max_n >= 8:
        fit = fit_sqrt_amplitude(table)
        extra["fit"] = {"amplitude": fit.amplitude, "constant": fit.constant,
                        "correction": fit.correction, "window": list(fit.window),
                        "residual_norm": fit.residual_norm}
    _emit(args, rows, ("n", "mean_endpoint", "mean_max"), extra)
    return EXIT_OK


def cmd_report(args) -> int:
    rows = [vars(r).copy() for r in transition_height_report(args.n_prudent, args.n_baseline)]
    _emit(args, rows, ("model", "gamma", "transition", "jump", "consistent", "n_max"))
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="pruwalk", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"pruwalk {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="output file (default: standard output)")
    common.add_argument("--format", choices=("csv", "json"),
                        help="output format (default: from the --out suffix, else json)")
    common.add_argument("--timestamp", action="store_true",
                        help="record the run time in the JSON metadata")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("enumerate", parents=[common], help="exact weighted walk counts")
    s.add_argument("--family", default="2sided", choices=("1sided", "2sided", "3sided"))
    s.add_argument("--endpoint", default="tail", choices=("tail", "loop"))
    s.add_argument("--max-n", type=int, required=True)
    s.add_argument("--method", choices=("dfs", "dp"))
    s.set_defaults(func=cmd_enumerate)

    s = sub.add_parser("series", parents=[common], help="closed-form R, T, W coefficients")
    s.add_argument("--order", type=int, default=30)
    s.add_argument("--a", type=_rational, help="fix the fugacity (default symbolic)")
    s.add_argument("--u", type=_rational, help="fix u (default symbolic)")
    s.add_argument("--v", type=_rational, help="fix v (default symbolic)")
    s.set_defaults(func=cmd_series)

    s = sub.add_parser("verify", parents=[common], help="functional-equation residuals")
    s.add_argument("--family", default="2sided", choices=("2sided", "3sided"))
    s.add_argument("--order", type=int)
    s.add_argument("--source", default="solution", choices=("solution", "enumeration"))
    s.add_argument("--input", help="series JSON written by the series subcommand")
    s.add_argument("--perturb", help="add 1 to R or T at an order, e.g. T:7")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("roots", parents=[common], help="real roots of the critical polynomials")
    g = s.add_mutually_exclusive_group(required=True)
    g.add_argument("--poly", choices=_NAMED_POLYS)
    g.add_argument("--coeffs", type=_coeff_list, help="coefficients, lowest degree first")
    s.add_argument("--a", type=_rational, help="fugacity for --poly adsorbed")
    s.add_argument("--lo", type=_rational)
    s.add_argument("--hi", type=_rational)
    s.set_defaults(func=cmd_roots)

    s = sub.add_parser("phase", parents=[common], help="free energy and density over an alpha grid")
    s.add_argument("--model", default="tails")
    s.add_argument("--alpha-min", type=float, default=0.0)
    s.add_argument("--alpha-max", type=float, default=1.6)
    s.add_argument("--steps", type=int, default=200)
    s.set_defaults(func=cmd_phase)

    s = sub.add_parser("estimate", parents=[common], help="ratio-method singularity estimate")
    s.add_argument("--model", default="prudent_tails", choices=_all_model_labels())
    s.add_argument("--weighting", choices=("edge", "vertex"))
    s.add_argument("--a", type=_rational, default=Fraction(1))
    s.add_argument("--order", type=int, default=50)
    s.add_argument("--tail", type=int, default=6)
    s.set_defaults(func=cmd_estimate)

    s = sub.add_parser("heights", parents=[common], help="mean endpoint and maximum heights")
    s.add_argument("--model", required=True, choices=_all_model_labels())
    s.add_argument("--weighting", choices=("edge", "vertex"))
    s.add_argument("--max-n", type=int, required=True)
    s.add_argument("--arithmetic", default="auto", choices=("auto", "exact", "float"))
    s.add_argument("--fit", action="store_true", help="fit A n^(1/2) + B + C n^(-1/2)")
    s.set_defaults(func=cmd_heights)

    s = sub.add_parser("report", parents=[common], help="height exponent against transition order")
    s.add_argument("--n-prudent", type=int, default=200)
    s.add_argument("--n-baseline", type=int, default=1000)
    s.set_defaults(func=cmd_report)
    return p


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse has already printed usage or help; hand back its status
        return exc.code if isinstance(exc.code, int) else EXIT_INVALID
    previous = warnings.showwarning
    warnings.showwarning = _showwarning
    try:
        return args.func(args)
    except (UsageError, PruwalkError, ValueError) as exc:
        _log("error", str(exc), category=type(exc).__name__)
        return EXIT_INVALID
    finally:
        warnings.showwarning = previous


def main(argv: Optional[Sequence[str]] = None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
