"""Command-line entry point: ``adiasearch <subcommand> ...``.

Exit codes: 0 success, 1 verification (or sweep row) failure, 2 invalid input.
"""
from __future__ import annotations

import argparse
import csv
import json
import sys
import warnings
from pathlib import Path

import numpy as np

from . import baseline, dynamics, experiments, model, schedule as sched, spectral

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


def _resolve_a_m(args) -> float:
    """a_m from --a-m, else from --partition/--marked-subset, else uniform over --n."""
    if args.a_m is not None:
        return args.a_m
    if getattr(args, "partition", None):
        part = model.parse_partition(args.partition)
        if part.n_total != args.n:
            raise ValueError(f"partition covers {part.n_total} items, not --n {args.n}")
        subset = args.marked_subset
        return model.build_prior_state(part, part.block(subset)[0], subset).a_m
    return model.uniform_state(args.n, 1).a_m


def _open_out(path: str | None):
    return open(path, "w", newline="") if path else sys.stdout


def cmd_spectrum(args) -> int:
    h = spectral.EffectiveHamiltonian(_resolve_a_m(args), args.scale)
    rows = spectral.spectrum(h, args.samples)
    out = _open_out(args.out)
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["s", "lambda1", "lambda2", "gap"])
    for r in rows:
        writer.writerow([repr(r.s), repr(r.lambda1), repr(r.lambda2), repr(r.gap)])
    if out is not sys.stdout:
        out.close()
    return EXIT_OK


def _build_schedule(args, a_m: float) -> sched.Schedule:
    if args.kind == "local":
        return sched.Schedule.local(a_m, args.eps, args.scale)
    return sched.Schedule.linear(a_m, args.eps, args.scale, getattr(args, "time", None))


def cmd_schedule(args) -> int:
    a_m = _resolve_a_m(args)
    s = _build_schedule(args, a_m)
    h = s.hamiltonian()
    out = _open_out(args.out)
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["t", "s", "gap", "ds_dt"])
    for t in np.linspace(0.0, s.total_time, args.samples):
        t = float(min(t, s.total_time))
        x = s.s_of_t(t)
        writer.writerow([repr(t), repr(x), repr(spectral.gap(h, x)), repr(s.ds_dt(t))])
    if out is not sys.stdout:
        out.close()
    return EXIT_OK


def cmd_run(args) -> int:
    a_m = _resolve_a_m(args)
    s = _build_schedule(args, a_m)
    result = dynamics.evolve(s.hamiltonian(), s, trace_samples=args.trace_samples)
    payload = {
        "n": args.n,
        "eps": args.eps,
        "a_m": a_m,
        "scale": args.scale,
        "kind": args.kind,
        "T": s.total_time,
        "fidelity": result.fidelity,
        "norm_drift": result.norm_drift,
        "min_overlap": result.min_overlap,
    }
    print(json.dumps(payload))
    if args.trace:
        with open(args.trace, "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["t", "s", "overlap"])
            for t, x, o in result.trace:
                writer.writerow([repr(t), repr(x), repr(o)])
    return EXIT_OK


def _parse_values(text: str) -> tuple[float, ...]:
    vals = []
    for tok in text.split(","):
        tok = tok.strip()
        if tok:
            vals.append(float(tok))
    return tuple(vals)


def cmd_sweep(args) -> int:
    base = {}
    if args.spec:
        base = json.loads(Path(args.spec).read_text())
    overrides = {
        "variable": args.variable,
        "values": _parse_values(args.values) if args.values else None,
        "n": args.n,
        "eps": args.eps,
        "scale": args.scale,
        "kind": args.kind,
        "partition": args.partition,
        "marked_subset": args.marked_subset,
        "output": args.out,
        "workers": args.workers,
    }
    if args.no_fidelity:
        overrides["fidelity"] = False
    base.update({k: v for k, v in overrides.items() if v is not None})
    if "variable" not in base or "values" not in base:
        raise ValueError("sweep needs a variable and values (flags or --spec)")
    spec = experiments.ExperimentSpec.from_dict(base)
    rows = experiments.sweep(spec)
    if not spec.output:
        sys.stdout.write(experiments.rows_to_csv(rows))
    failed = [r for r in rows if not r.ok]
    for r in failed:
        print(f"row {r.variable}={r.value}: {r.error}", file=sys.stderr)
    return EXIT_FAIL if failed else EXIT_OK


def cmd_grover(args) -> int:
    k = baseline.grover_optimal_iterations(args.n) if args.k is None else args.k
    run = baseline.grover_simulate(args.n, k)
    print(json.dumps({"n": run.n_total, "k": run.iterations, "success_prob": run.success_prob}))
    return EXIT_OK


def cmd_verify(args) -> int:
    report = experiments.verify(args.suite)
    for line in report.lines():
        print(line)
    n_fail = sum(not c.passed for c in report.checks)
    print(f"{len(report.checks) - n_fail}/{len(report.checks)} checks passed")
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_reproduce(args) -> int:
    rows = experiments.reproduce_paper(args.eps)
    print(experiments.format_table(rows))
    if args.out:
        Path(args.out).write_text(experiments.table_to_csv(rows))
    return EXIT_OK


def _add_problem_args(p: argparse.ArgumentParser, defaults: bool = True) -> None:
    d = (lambda v: v) if defaults else (lambda v: None)
    p.add_argument("--n", type=int, default=d(64), help="database size N")
    p.add_argument("--eps", type=float, default=d(0.05), help="adiabatic tolerance epsilon")
    p.add_argument("--scale", type=float, default=d(1.0), help="Hamiltonian prefactor c")
    p.add_argument("--kind", choices=("local", "linear"), default=d("local"))
    p.add_argument("--partition", help="prior as p:n pairs, e.g. 0.8:500,0.2:500")
    p.add_argument("--marked-subset", type=int, default=d(1))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="adiasearch", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("spectrum", help="CSV of s, lambda1, lambda2, gap")
    p.add_argument("--n", type=int, default=64)
    p.add_argument("--a-m", type=float, help="marked amplitude (overrides uniform 1/sqrt(N))")
    p.add_argument("--scale", type=float, default=1.0)
    p.add_argument("--samples", type=int, default=101)
    p.add_argument("--out")
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("schedule", help="CSV of t, s, gap, ds_dt")
    _add_problem_args(p)
    p.add_argument("--a-m", type=float)
    p.add_argument("--time", type=float, help="total time for the linear ramp")
    p.add_argument("--samples", type=int, default=101)
    p.add_argument("--out")
    p.set_defaults(func=cmd_schedule)

    p = sub.add_parser("run", help="evolve and report fidelity as JSON")
    _add_problem_args(p)
    p.add_argument("--a-m", type=float)
    p.add_argument("--time", type=float, help="total time for the linear ramp")
    p.add_argument("--trace", help="write t, s, overlap CSV here")
    p.add_argument("--trace-samples", type=int, default=dynamics.TRACE_SAMPLES)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("sweep", help="parameter sweep to CSV")
    p.add_argument("--spec", help="JSON experiment spec; flags override it")
    p.add_argument("--variable", choices=experiments.SWEEP_VARIABLES)
    p.add_argument("--values", help="comma-separated sweep values")
    _add_problem_args(p, defaults=False)
    p.add_argument("--workers", type=int)
    p.add_argument("--no-fidelity", action="store_true", help="skip the dynamics")
    p.add_argument("--out")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("grover", help="discrete Grover baseline")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, help="iterations (default: optimal)")
    p.set_defaults(func=cmd_grover)

    p = sub.add_parser("verify", help="run invariant suites")
    p.add_argument("suite", nargs="?", default="all",
                   choices=("spectral", "schedule", "dynamics", "theorems", "all"))
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("reproduce-paper", help="table of the headline running times")
    p.add_argument("--eps", type=float, default=0.05)
    p.add_argument("--out", help="also write the table as CSV")
    p.set_defaults(func=cmd_reproduce)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("default")
            return args.func(args)
    except (ValueError, json.JSONDecodeError, OSError) as exc:
        print(f"adiasearch: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except dynamics.ConvergenceError as exc:
        print(f"adiasearch: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
