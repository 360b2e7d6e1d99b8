"""Command line interface ``bw``.

Exit codes: 0 success, 1 usage or input error, 2 numerical non-convergence
(or, for ``--paper-check``, a reproduction check that failed).
"""

import argparse
import csv
import json
import math
import re
import sys
from importlib import resources

import numpy as np

from . import __version__
from ._backend import BACKEND
from .core import BwParams, SpecialCase, cdf, logpdf, quantile, sample, survival
from .errors import ConvergenceError, DivergenceError, DomainError
from .inference import (Dataset, FitOptions, fisher_info, fit_bw, fit_submodel,
                        log_likelihood, lr_test, wald_test)
from .moments import kurtosis, mean, moment, skewness, variance

__all__ = ["DatasetError", "load_dataset", "bundled_dataset", "main", "paper_check"]

MODELS = {
    "bw": SpecialCase.BETA_WEIBULL,
    "weibull": SpecialCase.STANDARD_WEIBULL,
    "exp-weibull": SpecialCase.EXPONENTIATED_WEIBULL,
    "beta-exp": SpecialCase.BETA_EXPONENTIAL,
}
# parameters a sub-model pins, used as the Wald null
_NULLS = {
    SpecialCase.STANDARD_WEIBULL: {"a": 1.0, "b": 1.0},
    SpecialCase.EXPONENTIATED_WEIBULL: {"b": 1.0},
    SpecialCase.BETA_EXPONENTIAL: {"c": 1.0},
}

EXIT_OK, EXIT_USAGE, EXIT_NONCONV = 0, 1, 2

# published values for the device data (Meeker and Escobar)
PAPER = {
    "bw_params": (0.0785, 0.0659, 7.9355, 0.004987),
    "bw_loglik": -169.919,
    "w_params": (1.2650, 0.005318),
    "w_loglik": -184.3138,
    "lr": 28.7896,
    "wald": 38.4498,
    "cov_1e7": (
        (8699.35364, 4743.69977, -488130.870, 87.9136383),
        (4743.69977, 13079.4394, -4009.69885, -135.603333),
        (-488130.870, -4009.69885, 58517447.8, -16222.8149),
        (87.9136383, -135.603333, -16222.8149, 6.19530131),
    ),
}


class DatasetError(DomainError):
    """Malformed dataset file; ``line`` is the 1-based offending line."""

    def __init__(self, msg, line=None):
        super().__init__(msg)
        self.line = line


_SPLIT = re.compile(r"[,\s]+")


def _parse_text(text, label):
    values = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].strip()
        if not body:
            continue
        for tok in _SPLIT.split(body):
            if not tok:
                continue
            try:
                v = float(tok)
            except ValueError:
                raise DatasetError(f"line {lineno}: cannot parse {tok!r} as a number", lineno) from None
            if not (math.isfinite(v) and v > 0):
                raise DatasetError(f"line {lineno}: value {tok} is not positive", lineno)
            values.append(v)
    if not values:
        raise DatasetError("empty dataset")
    return Dataset(tuple(values), label)


def load_dataset(path):
    """Read positive reals separated by whitespace or commas; ``#`` starts
    a comment."""
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    return _parse_text(text, str(path))


def bundled_dataset():
    """The 30 device failure and running times shipped with the package."""
    text = resources.files("betaweibull").joinpath("data/meeker.txt").read_text("utf-8")
    return _parse_text(text, "meeker")


# output


def _clean(v):
    if isinstance(v, dict):
        return {k: _clean(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_clean(x) for x in v]
    if isinstance(v, np.ndarray):
        return _clean(v.tolist())
    if isinstance(v, (np.floating, float)):
        v = float(v)
        return v if math.isfinite(v) else None
    if isinstance(v, np.integer):
        return int(v)
    return v


def _emit(obj, fmt, out, rows_key=None):
    """Write ``obj`` as JSON, or its ``rows_key`` table (or flat fields) as CSV."""
    if fmt == "json":
        out.write(json.dumps(_clean(obj), indent=2, allow_nan=False))
        out.write("\n")
        return
    if rows_key is not None:
        rows = obj[rows_key]
        header = list(rows[0].keys()) if rows else list(obj.get("columns", []))
        w = csv.writer(out, lineterminator="\n")
        w.writerow(header)
        for r in rows:
            w.writerow(["" if r[h] is None else repr(float(r[h])) if isinstance(r[h], float) else r[h]
                        for h in header])
        return
    flat = {}
    _flatten(obj, "", flat)
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["field", "value"])
    for k, x in flat.items():
        w.writerow([k, "" if x is None else repr(x) if isinstance(x, float) else x])


def _flatten(obj, prefix, flat):
    for k, v in obj.items():
        key = prefix + k
        if isinstance(v, dict):
            _flatten(v, key + ".", flat)
            continue
        v = _clean(v)
        flat[key] = json.dumps(v) if isinstance(v, list) else v


def _fit_dict(res):
    p = res.params
    se = res.standard_errors()
    return {
        "model": res.model.value,
        "params": {"a": p.a, "b": p.b, "c": p.c, "lambda": p.lam},
        "free": [("lambda" if f == "lam" else f) for f in res.free],
        "log_likelihood": res.log_likelihood,
        "converged": res.converged,
        "iterations": res.iterations,
        "gradient_norm": res.gradient_norm,
        "boundary": res.boundary,
        "message": res.message,
        "n": res.n,
        "covariance": None if res.covariance is None else res.covariance,
        "standard_errors": None if se is None else se,
        "trace": [{"iteration": i, "log_likelihood": ll, "gradient_norm": g}
                  for i, ll, g in res.trace],
    }


# commands


def _dataset(args):
    return load_dataset(args.input) if args.input else bundled_dataset()


def _params(args, defaults=None):
    vals = {}
    defaults = defaults or {}
    for name, attr in (("a", "a"), ("b", "b"), ("c", "c"), ("lambda", "lam")):
        v = getattr(args, attr)
        if v is None:
            v = defaults.get(attr)
        if v is None:
            raise DomainError(f"--{name} is required for '{args.command}'")
        vals[attr] = v
    return BwParams(**vals)


def _fit_opts(args):
    opts = FitOptions()
    if args.tol is not None:
        opts.gtol = args.tol
    return opts


def _fit(data, model, opts):
    if model is SpecialCase.BETA_WEIBULL:
        return fit_bw(data, opts=opts)
    return fit_submodel(data, model, opts=opts)


def cmd_fit(args, out):
    data = _dataset(args)
    res = _fit(data, MODELS[args.model], _fit_opts(args))
    obj = _fit_dict(res)
    obj["dataset"] = data.label
    _emit(obj, args.format, out)
    return EXIT_OK if res.converged else EXIT_NONCONV


def cmd_test(args, out):
    data = _dataset(args)
    restricted_model = MODELS[args.model]
    opts = _fit_opts(args)
    full = fit_bw(data, opts=opts)
    if restricted_model is SpecialCase.BETA_WEIBULL:
        restricted = full
        null = {}
    else:
        restricted = _fit(data, restricted_model, opts)
        null = _NULLS[restricted_model]
    df = max(1, len(full.free) - len(restricted.free))
    obj = {
        "dataset": data.label,
        "full": {"model": full.model.value, "log_likelihood": full.log_likelihood,
                 "converged": full.converged, "boundary": full.boundary},
        "restricted": {"model": restricted.model.value,
                       "log_likelihood": restricted.log_likelihood,
                       "converged": restricted.converged},
    }
    lr = lr_test(full, restricted, df)
    obj["lr"] = {"statistic": lr.statistic, "df": lr.df, "p_value": lr.p_value}
    if null and full.covariance is not None:
        wt = wald_test(full, null)
        obj["wald"] = {"statistic": wt.statistic, "df": wt.df, "p_value": wt.p_value,
                       "null": null}
    else:
        obj["wald"] = None
        obj["wald_note"] = ("no null restriction" if not null
                            else "full fit has no covariance (boundary or non-converged)")
    _emit(obj, args.format, out)
    return EXIT_OK if full.converged and restricted.converged else EXIT_NONCONV


def _r_list(text):
    try:
        return [float(t) for t in _SPLIT.split(text.strip()) if t]
    except ValueError:
        raise DomainError(f"--r must be a comma-separated list of numbers, got {text!r}") from None


def _sweep_values(args):
    lo = 0.5 if args.xmin is None else args.xmin
    hi = 5.0 if args.xmax is None else args.xmax
    n = 46 if args.points is None else args.points
    if not (0 < lo < hi) or n < 2:
        raise DomainError("sweep range needs 0 < xmin < xmax and at least 2 points")
    grid = np.linspace(lo, hi, n)
    # the a = 1 (or b = 1) crossing is always sampled exactly
    if lo <= 1.0 <= hi:
        grid = np.union1d(grid, [1.0])
    return grid


def cmd_moments(args, out):
    if args.sweep:
        c = 3.0 if args.c is None else args.c
        lam = 1.0 if args.lam is None else args.lam
        others = (0.5, 1.0, 2.0)
        rows = []
        for other in others:
            for v in _sweep_values(args):
                if args.sweep == "a":
                    p = BwParams(float(v), other, c, lam)
                else:
                    p = BwParams(other, float(v), c, lam)
                rows.append({"a": p.a, "b": p.b, "c": c, "lambda": lam,
                             "skewness": skewness(p), "kurtosis": kurtosis(p)})
        _emit({"sweep": args.sweep, "rows": rows}, args.format, out, rows_key="rows")
        return EXIT_OK
    p = _params(args)
    rs = _r_list(args.r) if args.r else [1.0, 2.0, 3.0, 4.0]
    tol = 1e-12 if args.tol is None else args.tol
    rows = []
    for r in rs:
        try:
            rows.append({"r": r, "moment": moment(p, r, tol=tol), "error": None})
        except (DomainError, DivergenceError, ConvergenceError) as exc:
            rows.append({"r": r, "moment": None, "error": str(exc)})
    obj = {"params": {"a": p.a, "b": p.b, "c": p.c, "lambda": p.lam},
           "rows": rows, "mean": mean(p), "variance": variance(p),
           "skewness": skewness(p), "kurtosis": kurtosis(p)}
    _emit(obj, args.format, out, rows_key="rows" if args.format == "csv" else None)
    return EXIT_OK


def cmd_curve(args, out):
    p = _params(args)
    n = 200 if args.points is None else args.points
    if n < 2:
        raise DomainError("--points must be at least 2")
    lo = float(quantile(p, 0.001)) if args.xmin is None else args.xmin
    hi = float(quantile(p, 0.999)) if args.xmax is None else args.xmax
    if not (0 < lo < hi):
        raise DomainError("curve grid needs 0 < xmin < xmax")
    xs = np.linspace(lo, hi, n)
    dens = np.exp(logpdf(p, xs))
    cd = cdf(p, xs)
    sv = survival(p, xs)
    rows = []
    for x, f, F, S in zip(xs, dens, cd, sv):
        h = float(f / S) if S >= 1e-300 else None
        rows.append({"x": float(x), "pdf": float(f), "cdf": float(F), "hazard": h})
    _emit({"params": {"a": p.a, "b": p.b, "c": p.c, "lambda": p.lam}, "rows": rows},
          args.format, out, rows_key="rows")
    return EXIT_OK


def cmd_simulate(args, out):
    p = _params(args)
    n = 0 if args.n is None else args.n
    if n < 0:
        raise DomainError("--n must be non-negative")
    xs = sample(p, np.random.default_rng(args.seed), n)
    if args.format == "json":
        _emit({"params": {"a": p.a, "b": p.b, "c": p.c, "lambda": p.lam},
               "seed": args.seed, "values": xs}, "json", out)
    else:
        out.write("x\n")
        for v in xs:
            out.write(repr(float(v)) + "\n")
    return EXIT_OK


def cmd_info(args, out):
    obj = {"version": __version__, "backend": BACKEND}
    if any(getattr(args, k) is not None for k in ("a", "b", "c", "lam")):
        p = _params(args)
        K = fisher_info(p)
        obj["params"] = {"a": p.a, "b": p.b, "c": p.c, "lambda": p.lam}
        obj["information"] = K.entries
        if args.n:
            obj["covariance"] = K.covariance(args.n)
    _emit(obj, args.format, out)
    return EXIT_OK


# reproduction of the published device-data analysis


def _rel(x, ref):
    return abs(x - ref) / abs(ref)


def paper_check(out=None):
    """Re-run the device-data analysis and compare with published values.

    Returns ``(rows, all_passed)`` where each row is
    ``(name, computed, expected, tolerance, passed)``.
    """
    data = bundled_dataset()
    rows = []

    def add(name, got, want, tol, ok):
        rows.append((name, got, want, tol, bool(ok)))

    w = fit_submodel(data, SpecialCase.STANDARD_WEIBULL)
    add("weibull loglik", w.log_likelihood, PAPER["w_loglik"], "abs 0.001",
        abs(w.log_likelihood - PAPER["w_loglik"]) <= 0.001)
    add("weibull c", w.params.c, PAPER["w_params"][0], "rel 0.5%",
        _rel(w.params.c, PAPER["w_params"][0]) <= 0.005)
    add("weibull lambda", w.params.lam, PAPER["w_params"][1], "rel 0.5%",
        _rel(w.params.lam, PAPER["w_params"][1]) <= 0.005)

    bw = fit_bw(data)
    add("bw fit converged", float(bw.converged), 1.0, "interior maximum", bw.converged)
    add("bw loglik", bw.log_likelihood, PAPER["bw_loglik"], "abs 0.01",
        abs(bw.log_likelihood - PAPER["bw_loglik"]) <= 0.01)
    for name, got, want in zip(("a", "b", "c", "lambda"), bw.params.as_tuple(), PAPER["bw_params"]):
        add(f"bw {name}", got, want, "rel 2%", _rel(got, want) <= 0.02)
    p_paper = BwParams(*PAPER["bw_params"])
    ll_paper = log_likelihood(p_paper, data)
    add("loglik at published bw estimates", ll_paper, PAPER["bw_loglik"], "abs 0.01",
        abs(ll_paper - PAPER["bw_loglik"]) <= 0.01)

    lr_fit = 2.0 * (bw.log_likelihood - w.log_likelihood)
    add("LR from fits", lr_fit, PAPER["lr"], "abs 0.02", abs(lr_fit - PAPER["lr"]) <= 0.02)
    lr_pub = 2.0 * (PAPER["bw_loglik"] - PAPER["w_loglik"])
    add("LR from published logliks", lr_pub, PAPER["lr"], "abs 0.02",
        abs(lr_pub - PAPER["lr"]) <= 0.02)

    from .inference import FitResult
    cov_pub = np.array(PAPER["cov_1e7"]) * 1e-7
    K = fisher_info(p_paper)
    cov = K.covariance(len(data))
    fr = FitResult(p_paper, PAPER["bw_loglik"], 0, True, 0.0, cov, n=len(data))
    w_pub = wald_test(fr, {"a": 1, "b": 1}, covariance=cov_pub).statistic
    add("Wald, published covariance", w_pub, PAPER["wald"], "abs 5e-5",
        abs(w_pub - PAPER["wald"]) <= 5e-5)
    w_ours = wald_test(fr, {"a": 1, "b": 1}).statistic
    add("Wald, our covariance", w_ours, PAPER["wald"], "rel 5%", _rel(w_ours, PAPER["wald"]) <= 0.05)
    add("Wald, published cov x n (diagnostic)", w_pub / len(data), PAPER["wald"], "rel 5%",
        _rel(w_pub / len(data), PAPER["wald"]) <= 0.05)
    names = ("a", "b", "c", "lambda")
    for i in range(4):
        for j in range(i, 4):
            pub = PAPER["cov_1e7"][i][j]
            if abs(pub) < 100:
                continue
            got = cov[i, j] * 1e7
            add(f"cov[{names[i]},{names[j]}] x 1e7", got, pub, "rel 5%", _rel(got, pub) <= 0.05)

    ok = all(r[4] for r in rows)
    if out is not None:
        out.write(f"{'check':40s} {'computed':>16s} {'published':>14s} {'tolerance':>18s}  result\n")
        for name, got, want, tol, passed in rows:
            out.write(f"{name:40s} {got:16.8g} {want:14.8g} {tol:>18s}  {'PASS' if passed else 'FAIL'}\n")
        out.write(f"\n{sum(r[4] for r in rows)}/{len(rows)} checks passed\n")
    return rows, ok


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _count(text):
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError("must be non-negative")
    return v


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--model", choices=sorted(MODELS), default=None)
    common.add_argument("--input", metavar="PATH")
    common.add_argument("--a", type=float)
    common.add_argument("--b", type=float)
    common.add_argument("--c", type=float)
    common.add_argument("--lambda", dest="lam", type=float)
    common.add_argument("--r", metavar="LIST", help="comma-separated moment orders")
    common.add_argument("--sweep", choices=("a", "b"))
    common.add_argument("--n", type=_count)
    common.add_argument("--seed", type=int)
    common.add_argument("--tol", type=float)
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--xmin", type=float)
    common.add_argument("--xmax", type=float)
    common.add_argument("--points", type=int)
    common.add_argument("--paper-check", action="store_true",
                        help="reproduce the published device-data analysis")

    parser = _Parser(prog="bw", description="Beta Weibull distribution toolkit",
                     parents=[common])
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    helps = {
        "fit": "maximum likelihood fit of a dataset",
        "test": "LR and Wald tests of a sub-model against the full model",
        "moments": "moments, shape measures and skewness/kurtosis sweeps",
        "curve": "pdf, cdf and hazard on a grid",
        "simulate": "draw a seeded random sample",
        "info": "expected information matrix and build details",
    }
    for name, text in helps.items():
        sub.add_parser(name, help=text, parents=[common])
    return parser


_COMMANDS = {
    "fit": cmd_fit,
    "test": cmd_test,
    "moments": cmd_moments,
    "curve": cmd_curve,
    "simulate": cmd_simulate,
    "info": cmd_info,
}


def main(argv=None, out=None):
    out = sys.stdout if out is None else out
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.paper_check:
        _, ok = paper_check(out)
        return EXIT_OK if ok else EXIT_NONCONV
    if args.command is None:
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    if args.model is None:
        args.model = "bw" if args.command == "fit" else "weibull"
    try:
        return _COMMANDS[args.command](args, out)
    except (OSError, DomainError) as exc:
        sys.stderr.write(f"bw: error: {exc}\n")
        return EXIT_USAGE
    except (ConvergenceError, DivergenceError) as exc:
        sys.stderr.write(f"bw: numerical failure: {exc}\n")
        return EXIT_NONCONV


if __name__ == "__main__":
    sys.exit(main())
