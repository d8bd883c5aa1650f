"""Command-line sweeps of fluid antenna outage probability.

SNRs and thresholds are given in dB and converted once here; the library is
linear throughout. Exit codes: 0 ok, 2 bad arguments, 3 numerical failure,
4 validation gate failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

import numpy as np

from fasop.analysis import (
    FasConfig,
    Method,
    approx_op,
    asymptotic_op,
    exact_op,
    gamma_fit,
    snr_threshold_linear,
)
from fasop.correlation import CorrelationModel, build_profile
from fasop.curves import db_grid, map_ordered, point_evaluator
from fasop.errors import ConvergenceError, DomainError
from fasop.metrics import benchmark_methods
from fasop.montecarlo import empirical_op
from fasop.specfun import reg_lower_gamma

EXIT_OK, EXIT_ARGS, EXIT_NUMERIC, EXIT_GATE = 0, 2, 3, 4

# figure parameterisations; every value can be overridden by a flag
DEFAULTS = {
    "curve": dict(N=10, W=0.3, m=1, gamma_th_db=1.0, grid="-10:40:1", methods="exact,approx,asymptotic"),
    "sweep-ports": dict(W_list="0.5,1,2", m=1, gamma_th_db=1.0, gamma_bar_db=5.0, ports="1:100:1", methods="exact,approx"),
    "sweep-threshold": dict(W=2.0, m=1, gamma_bar_db=0.0, grid="-10:10:1", ports_list="10,50,100", methods="exact,approx"),
    "severity": dict(W=0.6, m_list="1,3,5", gamma_th_db=1.0, gamma_bar_db=3.0, ports="1:60:1", methods="exact,approx"),
    "table": dict(W=0.3, m=1, gamma_th_db=1.0, grid="-10:40:1", ports_list="10,100,300", format="json"),
    "validate": dict(samples=200_000),
}


class UsageError(Exception):
    pass


def parse_range(text: str) -> np.ndarray:
    try:
        start, stop, step = (float(part) for part in text.split(":"))
        return db_grid(start, stop, step)
    except ValueError as exc:
        raise UsageError(f"bad range {text!r}; expected start:stop:step ({exc})") from None


def parse_list(text: str, kind=float) -> list:
    try:
        return [kind(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise UsageError(f"bad list {text!r}") from None


def parse_methods(text: str) -> list:
    try:
        methods = [Method(name.strip()) for name in text.split(",") if name.strip()]
    except ValueError:
        known = ", ".join(m.value for m in Method)
        raise UsageError(f"unknown method in {text!r}; choose from {known}") from None
    if not methods:
        raise UsageError("at least one method is required")
    return methods


def fmt(value) -> str:
    if isinstance(value, str):
        return value
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return format(float(value), ".15g")


def write_rows(rows, columns, args):
    if args.format == "json":
        text = json.dumps([{c: row[c] for c in columns} for row in rows], indent=2) + "\n"
    else:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([fmt(row[c]) for c in columns])
        text = buf.getvalue()
    emit(text, args.out)


def emit(text, out):
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(out, "w", newline="") as handle:
            handle.write(text)


def method_columns(methods):
    columns = []
    for method in methods:
        columns.append(method.value)
        if method is Method.ASYMPTOTIC:
            columns.append("asymptotic_clipped")
    return columns


def evaluate_methods(methods, cfg, prof, gamma_th, gamma_bar, args):
    """One row's worth of OP values for every requested method."""
    row = {}
    for method in methods:
        evaluate = point_evaluator(
            method, cfg, prof, branches=args.branches, samples=args.samples, seed=args.seed
        )
        value = evaluate(gamma_th, gamma_bar)
        row[method.value] = value
        if method is Method.ASYMPTOTIC:
            row["asymptotic_clipped"] = min(value, 1.0)
    return row


def make_config(args, n, w, m):
    return FasConfig(n, w, m), build_profile(CorrelationModel(args.corr), n, w)


def maybe_plot(args, rows, x, methods, group=None, xlabel=None, title=None):
    if not args.plot:
        return
    from fasop.plotting import plot_rows

    plot_rows(rows, x, [m.value for m in methods], args.plot, group=group, xlabel=xlabel, title=title)


# --- commands --------------------------------------------------------------------


def cmd_curve(args):
    methods = parse_methods(args.methods)
    grid = parse_range(args.grid)
    cfg, prof = make_config(args, args.N, args.W, args.m)
    gamma_th = snr_threshold_linear(args.gamma_th_db)
    evaluators = {
        m: point_evaluator(m, cfg, prof, branches=args.branches, samples=args.samples, seed=args.seed)
        for m in methods
    }

    def row_for(g):
        row = {"gamma_bar_db": float(g)}
        for method, evaluate in evaluators.items():
            row[method.value] = evaluate(gamma_th, snr_threshold_linear(g))
            if method is Method.ASYMPTOTIC:
                row["asymptotic_clipped"] = min(row[method.value], 1.0)
        return row

    rows = map_ordered(row_for, grid)
    write_rows(rows, ["gamma_bar_db"] + method_columns(methods), args)
    maybe_plot(args, rows, "gamma_bar_db", methods, xlabel="average SNR (dB)",
               title=f"N={args.N}, W={args.W}, m={args.m}")
    return EXIT_OK


def cmd_sweep_ports(args):
    methods = parse_methods(args.methods)
    ports = [int(n) for n in parse_range(args.ports)]
    sizes = parse_list(args.W_list)
    gamma_th = snr_threshold_linear(args.gamma_th_db)
    gamma_bar = snr_threshold_linear(args.gamma_bar_db)
    jobs = [(w, n) for w in sizes for n in ports]

    def row_for(job):
        w, n = job
        cfg, prof = make_config(args, n, w, args.m)
        return {"N": n, "W": w, **evaluate_methods(methods, cfg, prof, gamma_th, gamma_bar, args)}

    rows = map_ordered(row_for, jobs)
    write_rows(rows, ["N", "W"] + method_columns(methods), args)
    maybe_plot(args, rows, "N", methods, group="W", xlabel="number of ports")
    return EXIT_OK


def cmd_sweep_threshold(args):
    methods = parse_methods(args.methods)
    thresholds = parse_range(args.grid)
    ports = parse_list(args.ports_list, int)
    gamma_bar = snr_threshold_linear(args.gamma_bar_db)
    jobs = [(n, t) for n in ports for t in thresholds]

    def row_for(job):
        n, t = job
        cfg, prof = make_config(args, n, args.W, args.m)
        return {"N": n, "gamma_th_db": float(t),
                **evaluate_methods(methods, cfg, prof, snr_threshold_linear(t), gamma_bar, args)}

    rows = map_ordered(row_for, jobs)
    write_rows(rows, ["N", "gamma_th_db"] + method_columns(methods), args)
    maybe_plot(args, rows, "gamma_th_db", methods, group="N", xlabel="threshold (dB)")
    return EXIT_OK


def cmd_severity(args):
    methods = parse_methods(args.methods)
    ports = [int(n) for n in parse_range(args.ports)]
    severities = parse_list(args.m_list, int)
    gamma_th = snr_threshold_linear(args.gamma_th_db)
    gamma_bar = snr_threshold_linear(args.gamma_bar_db)
    jobs = [(m, n) for m in severities for n in ports]

    def row_for(job):
        m, n = job
        cfg, prof = make_config(args, n, args.W, m)
        return {"N": n, "m": m, **evaluate_methods(methods, cfg, prof, gamma_th, gamma_bar, args)}

    rows = map_ordered(row_for, jobs)
    write_rows(rows, ["N", "m"] + method_columns(methods), args)
    maybe_plot(args, rows, "N", methods, group="m", xlabel="number of ports")
    return EXIT_OK


def cmd_table(args):
    grid_db = parse_range(args.grid)
    gamma_th = snr_threshold_linear(args.gamma_th_db)
    pairs = [(gamma_th, snr_threshold_linear(g)) for g in grid_db]
    records = []
    for n in parse_list(args.ports_list, int):
        cfg, prof = make_config(args, n, args.W, args.m)
        record = benchmark_methods(cfg, prof, pairs, repetitions=args.repetitions, label=f"N={n}",
                                   measure_memory=args.memory)
        records.append(record.to_dict())
    if args.format == "json":
        emit(json.dumps(records, indent=2) + "\n", args.out)
    else:
        rows = [
            {"label": r["label"], **{f"t_{k}": v for k, v in r["wall_time_seconds"].items()},
             "time_reduction_percent": r["time_reduction_percent"], "nmse": r["nmse"]}
            for r in records
        ]
        write_rows(rows, list(rows[0]), args)
    return EXIT_OK


def _slope(xs, ys):
    return float(np.polyfit(np.log10(xs), np.log10(ys), 1)[0])


def run_gates(samples: int, seed: int):
    """Self-check suite: N=1 exactness, Monte Carlo agreement, diversity slope."""
    gates = []

    worst = 0.0
    for m in (1, 2, 3):
        cfg, prof = FasConfig(1, 1.0, m), build_profile("uniform", 1, 1.0)
        fit = gamma_fit(cfg, prof)
        for th_db, bar_db in ((0.0, 10.0), (1.0, 0.0), (5.0, 3.0)):
            th, bar = snr_threshold_linear(th_db), snr_threshold_linear(bar_db)
            ref = reg_lower_gamma(m, m * th / bar)
            ex = exact_op(cfg, prof, th, bar)
            worst = max(worst, abs(ex - ref), abs(approx_op(fit, th, bar) - ex))
    gates.append({"gate": "single-port exactness", "passed": worst <= 1e-9, "detail": f"max deviation {worst:.3g} (limit 1e-9)"})

    cases = [(3, 0.5, 2, "uniform", 2.0), (5, 1.0, 1, "reference", 3.0), (4, 0.3, 3, "uniform", 6.0)]
    for n, w, m, model, bar_db in cases:
        cfg, prof = FasConfig(n, w, m), build_profile(model, n, w)
        th, bar = snr_threshold_linear(1.0), snr_threshold_linear(bar_db)
        ex = exact_op(cfg, prof, th, bar)
        est = empirical_op(cfg, prof, th, bar, samples, seed)
        z = abs(est.op_hat - ex) / est.std_err if est.std_err > 0 else math.inf
        gates.append({"gate": f"monte carlo N={n} W={w} m={m} {model}", "passed": z <= 3.0,
                      "detail": f"exact {ex:.6g}, mc {est.op_hat:.6g} +/- {est.std_err:.2g} ({z:.2f} sigma)"})

    for n, m in ((10, 1), (5, 3), (2, 5)):
        cfg, prof = FasConfig(n, 0.3, m), build_profile("uniform", n, 0.3)
        fit = gamma_fit(cfg, prof)
        bars = np.logspace(2, 4, 9)
        slope = _slope(bars, [asymptotic_op(fit, 1.0, b) for b in bars])
        gates.append({"gate": f"diversity slope N={n} m={m}", "passed": abs(slope + m * n) <= 0.01 * m * n,
                      "detail": f"slope {slope:.6f}, expected {-m * n}"})
    return gates


def cmd_validate(args):
    gates = run_gates(args.samples, args.seed)
    ok = all(g["passed"] for g in gates)
    report = {"passed": ok, "gates": gates}
    if args.format == "json":
        emit(json.dumps(report, indent=2) + "\n", args.out)
    else:
        lines = [f"{'PASS' if g['passed'] else 'FAIL'}  {g['gate']}: {g['detail']}" for g in gates]
        lines.append("all gates passed" if ok else "validation FAILED")
        sys.stdout.write("\n".join(lines) + "\n")
        if args.out not in (None, "-"):
            emit(json.dumps(report, indent=2) + "\n", args.out)
    return EXIT_OK if ok else EXIT_GATE


COMMANDS = {
    "curve": (cmd_curve, "OP against average SNR for one port count"),
    "sweep-ports": (cmd_sweep_ports, "OP against number of ports for several antenna sizes"),
    "sweep-threshold": (cmd_sweep_threshold, "OP against outage threshold for several port counts"),
    "severity": (cmd_severity, "OP against number of ports for several fading severities"),
    "table": (cmd_table, "timing and NMSE of exact vs approximate OP"),
    "validate": (cmd_validate, "run the built-in tolerance gates"),
}


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--N", type=int, help="number of ports")
    common.add_argument("--W", type=float, help="antenna size in wavelengths")
    common.add_argument("--m", type=int, help="Nakagami fading severity")
    common.add_argument("--corr", choices=[CorrelationModel.UNIFORM.value, CorrelationModel.REFERENCE.value],
                        default="uniform", help="port correlation model (default: uniform)")
    common.add_argument("--gamma-th-db", type=float, help="outage threshold in dB")
    common.add_argument("--gamma-bar-db", type=float, help="average SNR in dB (sweeps at fixed SNR)")
    common.add_argument("--grid", help="start:stop:step in dB; write --grid=-10:40:1 for a negative start")
    common.add_argument("--ports", help="port range start:stop:step")
    common.add_argument("--ports-list", help="comma separated port counts")
    common.add_argument("--W-list", dest="W_list", help="comma separated antenna sizes")
    common.add_argument("--m-list", dest="m_list", help="comma separated severities")
    common.add_argument("--methods", help="comma separated: " + ",".join(m.value for m in Method))
    common.add_argument("--branches", type=int, default=2, help="MRC branch count (default: 2)")
    common.add_argument("--samples", type=int, default=100_000, help="Monte Carlo trials per point")
    common.add_argument("--seed", type=int, default=0, help="Monte Carlo seed")
    common.add_argument("--repetitions", type=int, default=3, help="timing repetitions (table)")
    common.add_argument("--memory", action="store_true", help="also record peak allocations (table)")
    common.add_argument("--format", choices=["csv", "json"], help="output format (default: csv)")
    common.add_argument("--out", help="output path, '-' or omitted for stdout")
    common.add_argument("--plot", help="also render a figure to this path")

    parser = argparse.ArgumentParser(prog="fasop", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_text) in COMMANDS.items():
        sub.add_parser(name, parents=[common], help=help_text, description=help_text)
    return parser


def resolve(args):
    defaults = {"format": "csv", "N": 10, "W": 0.3, "m": 1, "gamma_th_db": 1.0, "gamma_bar_db": 0.0,
                "grid": "-10:40:1", "ports": "1:100:1", "ports_list": "10", "W_list": "0.3",
                "m_list": "1", "methods": "approx"}
    defaults.update(DEFAULTS[args.command])
    for key, value in defaults.items():
        if getattr(args, key, None) is None:
            setattr(args, key, value)
    if args.samples < 1:
        raise UsageError("--samples must be >= 1")
    if args.branches < 1:
        raise UsageError("--branches must be >= 1")
    return args


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        resolve(args)
        return COMMANDS[args.command][0](args)
    except (UsageError, DomainError, ValueError) as exc:
        print(f"fasop {args.command}: {exc}", file=sys.stderr)
        return EXIT_ARGS
    except (ConvergenceError, OverflowError, FloatingPointError) as exc:
        print(f"fasop {args.command}: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
