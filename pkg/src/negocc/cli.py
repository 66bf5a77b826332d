"""Command-line interface.

Every subcommand writes CSV (default) or JSON to stdout or ``--out`` and
exits 0; usage and domain violations print a one-line diagnostic to
stderr and exit 2; a refused block computation exits 3.  Numeric output
carries 17 significant digits.  The literal ``inf`` spells an infinite
space parameter.
"""

import argparse
import json
import math
import sys

import numpy as np

from . import accuracy, exact, gamma_approx, moments, representations, sampler
from .errors import DomainError, WorkBudgetError
from .params import INFINITE, OccupancyParams

__all__ = ["execute", "main"]


class _CliError(Exception):
    """Usage or parse failure; rendered as a one-line diagnostic."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _CliError(message)


def _space_arg(text: str):
    if text == "inf":
        return INFINITE
    try:
        return int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"m must be a positive integer or 'inf', got {text!r}"
        ) from None


def _fmt(value) -> str:
    if isinstance(value, bool):
        return str(value)
    if isinstance(value, (int,)):
        return str(value)
    if isinstance(value, complex):
        return f"{value.real:.17g}{value.imag:+.17g}j"
    return f"{float(value):.17g}"


def _params_from(ns) -> OccupancyParams:
    return OccupancyParams(ns.m, ns.k, ns.theta)


def _effective_params(ns) -> OccupancyParams:
    """Apply the conditional-start transform when --r is given."""
    r = getattr(ns, "r", 0)
    if r == 0:
        return _params_from(ns)
    if ns.m == INFINITE:
        raise DomainError("conditioning (--r > 0) requires finite m")
    return representations.conditional_params(ns.m, ns.k, ns.theta, r)


def _default_tmax(ns, params: OccupancyParams) -> int:
    if ns.tmax is not None:
        if ns.tmax < 0:
            raise DomainError("tmax must satisfy tmax >= 0")
        return ns.tmax
    return accuracy.truncation_point(params)


class _Output:
    """Line sink for one invocation: stdout or --out FILE."""

    def __init__(self, path):
        self._close = path is not None
        self._stream = open(path, "w") if path is not None else sys.stdout

    def line(self, text: str):
        self._stream.write(text + "\n")

    def done(self):
        if self._close:
            self._stream.close()
        else:
            self._stream.flush()


def _json_safe(value):
    """Strict JSON has no infinities; log-space zeros become the string '-inf'."""
    if isinstance(value, dict):
        return {key: _json_safe(v) for key, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_json_safe(v) for v in value]
    if isinstance(value, float) and math.isinf(value):
        return "-inf" if value < 0 else "inf"
    return value


def _emit_json(out: _Output, params: dict, method: str, values):
    payload = {"params": params, "method": method, "values": _json_safe(values)}
    out.line(json.dumps(payload))


def _emit_rows(out: _Output, ns, params_desc, method, header, rows):
    if ns.format == "json":
        _emit_json(out, params_desc, method, [list(row) for row in rows])
    else:
        out.line(header)
        for row in rows:
            out.line(",".join(_fmt(v) for v in row))


def _describe(ns, **extra) -> dict:
    desc = {
        "m": "inf" if ns.m == INFINITE else ns.m,
        "k": ns.k,
        "theta": ns.theta,
    }
    if getattr(ns, "r", 0):
        desc["r"] = ns.r
    desc.update(extra)
    return desc


# -- subcommand handlers ------------------------------------------------------


def _run_pmf(ns, out: _Output) -> None:
    params = _effective_params(ns)
    tmax = _default_tmax(ns, params)
    if ns.block:
        if ns.method != "exact":
            raise DomainError("--block output requires --method exact")
        if params.is_infinite:
            raise DomainError("--block output requires finite m")
        block = exact.log_pmf_block(int(params.m), params.theta, params.k, tmax)
        grid = block.values if ns.log else np.exp(block.values)
        rows = [
            (t, r, grid[t, r - 1])
            for t in range(tmax + 1)
            for r in range(1, block.k + 1)
        ]
        _emit_rows(out, ns, _describe(ns), "exact", "t,r,value", rows)
        return
    if ns.method == "exact":
        values = exact.pmf_vector(params, tmax, log_output=ns.log)
        method = "exact"
    elif ns.method == "gamma":
        logs = gamma_approx.approx_log_pmf(params, tmax)
        values = logs if ns.log else np.exp(logs)
        method = "gamma"
    else:
        values, method = gamma_approx.auto_method_pmf(
            params, tmax, switch_threshold=ns.threshold, log_output=ns.log
        )
    rows = [(t, values[t]) for t in range(tmax + 1)]
    _emit_rows(out, ns, _describe(ns), method, "t,value", rows)


def _run_cdf(ns, out: _Output) -> None:
    params = _effective_params(ns)
    tmax = _default_tmax(ns, params)
    values = exact.cdf_vector(params, tmax)
    rows = [(t, values[t]) for t in range(tmax + 1)]
    _emit_rows(out, ns, _describe(ns), "exact", "t,value", rows)


def _run_quantile(ns, out: _Output) -> None:
    params = _effective_params(ns)
    t = exact.quantile(params, ns.p)
    _emit_rows(out, ns, _describe(ns, p=ns.p), "exact", "p,value", [(ns.p, t)])


def _run_sample(ns, out: _Output) -> None:
    config = sampler.SampleConfig(
        params=_params_from(ns), n=ns.n, seed=ns.seed, conditional_r=ns.r
    )
    draws = sampler.sample_negocc(config)
    desc = _describe(ns, n=ns.n, seed=ns.seed)
    if ns.format == "json":
        _emit_json(out, desc, "simulation", [int(d) for d in draws])
    else:
        out.line("value")
        for d in draws:
            out.line(str(int(d)))


def _run_moments(ns, out: _Output) -> None:
    params = _effective_params(ns)
    summary = moments.moment_summary(params)
    desc = _describe(ns)
    if ns.format == "json":
        values = {"mean": summary.mean, "variance": summary.variance}
        values["skewness"] = summary.skewness
        values["kurtosis"] = summary.kurtosis
        _emit_json(out, desc, "analytic", values)
        return
    out.line("stat,value")
    out.line(f"mean,{_fmt(summary.mean)}")
    out.line(f"variance,{_fmt(summary.variance)}")
    if not summary.is_degenerate:
        out.line(f"skewness,{_fmt(summary.skewness)}")
        out.line(f"kurtosis,{_fmt(summary.kurtosis)}")


def _run_gfun(ns, out: _Output) -> None:
    params = _effective_params(ns)
    value = moments.generating_function(params, ns.kind, ns.arg)
    desc = _describe(ns, kind=ns.kind, arg=ns.arg)
    if ns.format == "json":
        if isinstance(value, complex):
            payload = {"real": value.real, "imag": value.imag}
        else:
            payload = value
        _emit_json(out, desc, "analytic", payload)
        return
    out.line("kind,arg,value")
    out.line(f"{ns.kind},{_fmt(ns.arg)},{_fmt(value)}")


def _run_approx(ns, out: _Output) -> None:
    params = _effective_params(ns)
    tmax = _default_tmax(ns, params)
    logs = gamma_approx.approx_log_pmf(params, tmax)
    values = logs if ns.log else np.exp(logs)
    rows = [(t, values[t]) for t in range(tmax + 1)]
    _emit_rows(out, ns, _describe(ns), "gamma", "t,value", rows)


def _run_rse_block(ns, out: _Output) -> None:
    desc = {"M": ns.m, "theta": ns.theta}
    if ns.summaries:
        reports = accuracy.rse_block(ns.m, ns.theta, budget=ns.budget)
        rows = [
            (s.m, s.max_rse, s.mean_rse, s.diag_rse)
            for s in accuracy.rse_summaries(reports)
        ]
        _emit_rows(out, ns, desc, "rse-block", "m,max_rse,mean_rse,diag_rse", rows)
        return
    if ns.format == "json":
        reports = accuracy.rse_block(ns.m, ns.theta, budget=ns.budget)
        rows = [[r.m, r.k, r.truncation, r.rse] for r in reports]
        _emit_json(out, desc, "rse-block", rows)
        return
    # stream CSV rows per m so partial progress survives interruption;
    # the header waits for the first row so a refused request emits nothing
    started = False

    def sink(rows):
        nonlocal started
        if not started:
            out.line("m,k,truncation,rse")
            started = True
        for r in rows:
            out.line(f"{r.m},{r.k},{r.truncation},{_fmt(r.rse)}")

    accuracy.rse_block(ns.m, ns.theta, budget=ns.budget, sink=sink)


# -- parser -------------------------------------------------------------------


def _add_common(sp, *, with_r=True):
    sp.add_argument("--m", type=_space_arg, required=True,
                    help="space parameter (positive integer or 'inf')")
    sp.add_argument("--k", type=int, required=True, help="occupancy parameter")
    sp.add_argument("--theta", type=float, required=True,
                    help="occupation probability in (0, 1]")
    if with_r:
        sp.add_argument("--r", type=int, default=0,
                        help="conditional start: occupancy already reached")


def _add_output(sp):
    sp.add_argument("--format", choices=("csv", "json"), default="csv")
    sp.add_argument("--out", default=None, metavar="FILE",
                    help="output file (default: standard output)")


def _build_parser() -> _Parser:
    parser = _Parser(prog="negocc", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    pmf = sub.add_parser("pmf", help="probability mass function")
    _add_common(pmf)
    pmf.add_argument("--tmax", type=int, default=None,
                     help="largest argument (default: truncation point)")
    pmf.add_argument("--method", choices=("exact", "gamma", "auto"), default="exact")
    pmf.add_argument("--threshold", type=int,
                     default=gamma_approx.DEFAULT_SWITCH_THRESHOLD,
                     help="auto mode switches to gamma above this m")
    pmf.add_argument("--log", action="store_true", help="emit log-probabilities")
    pmf.add_argument("--block", action="store_true",
                     help="emit the full (t, r) matrix of intermediate columns")
    _add_output(pmf)
    pmf.set_defaults(handler=_run_pmf)

    cdf = sub.add_parser("cdf", help="cumulative distribution function")
    _add_common(cdf)
    cdf.add_argument("--tmax", type=int, default=None)
    _add_output(cdf)
    cdf.set_defaults(handler=_run_cdf)

    quantile = sub.add_parser("quantile", help="smallest t with cdf(t) >= p")
    _add_common(quantile)
    quantile.add_argument("--p", type=float, required=True)
    _add_output(quantile)
    quantile.set_defaults(handler=_run_quantile)

    sample = sub.add_parser("sample", help="random draws")
    _add_common(sample)
    sample.add_argument("--n", type=int, required=True, help="number of draws")
    sample.add_argument("--seed", type=int, default=0)
    _add_output(sample)
    sample.set_defaults(handler=_run_sample)

    mom = sub.add_parser("moments", help="mean/variance/skewness/kurtosis")
    _add_common(mom)
    _add_output(mom)
    mom.set_defaults(handler=_run_moments)

    gfun = sub.add_parser("gfun", help="generating functions")
    _add_common(gfun)
    gfun.add_argument("--kind", choices=moments.GENERATING_FUNCTION_KINDS,
                      required=True)
    gfun.add_argument("--arg", type=float, required=True,
                      help="z for pgf, s for cf/mgf/cgf")
    _add_output(gfun)
    gfun.set_defaults(handler=_run_gfun)

    approx = sub.add_parser("approx", help="gamma approximation of the pmf")
    _add_common(approx)
    approx.add_argument("--tmax", type=int, default=None)
    approx.add_argument("--log", action="store_true")
    _add_output(approx)
    approx.set_defaults(handler=_run_approx)

    rse = sub.add_parser("rse-block",
                         help="approximation accuracy over 0 < k <= m <= M")
    rse.add_argument("--m", type=int, required=True, metavar="M",
                     help="block bound M")
    rse.add_argument("--theta", type=float, default=1.0)
    rse.add_argument("--summaries", action="store_true",
                     help="emit per-m max/mean/diagonal reductions")
    rse.add_argument("--budget", type=float,
                     default=accuracy.DEFAULT_WORK_BUDGET,
                     help="work-unit ceiling before the request is refused")
    _add_output(rse)
    rse.set_defaults(handler=_run_rse_block)

    return parser


def execute(args) -> int:
    """Run one invocation; returns the process exit code."""
    parser = _build_parser()
    try:
        ns = parser.parse_args(list(args))
    except SystemExit as stop:  # --help and friends
        return int(stop.code or 0)
    except _CliError as err:
        print(f"negocc: error: {err}", file=sys.stderr)
        return 2
    out = None
    try:
        out = _Output(ns.out)
        ns.handler(ns, out)
        out.done()
        return 0
    except WorkBudgetError as err:
        print(f"negocc: refused: {err}", file=sys.stderr)
        return 3
    except (ValueError, ArithmeticError, OSError) as err:
        print(f"negocc: error: {err}", file=sys.stderr)
        return 2
    finally:
        if out is not None and out._close:
            try:
                out._stream.close()
            except OSError:
                pass


def main() -> None:
    sys.exit(execute(sys.argv[1:]))
