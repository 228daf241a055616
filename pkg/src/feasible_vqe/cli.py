"""Command-line harness.

Subcommands: gen-instances (write a JSON instance file), run (full
experiment: proposed method vs layered penalty baselines), cost-table
(measured resource counts beside closed forms), report (re-emit files from
a saved report). All randomness is governed by --seed; failures exit
nonzero with a JSON error record on stderr.
"""

import argparse
import json
import sys
from pathlib import Path

from . import experiment
from .problems import generate_instances, save_instances

DEFAULT_FAMILIES = ("tsp", "assignment", "shift", "facility", "product_chain")


def _parse_floats(text: str) -> tuple:
    return tuple(float(v) for v in text.split(",") if v.strip())


def _parse_ints(text: str) -> tuple:
    return tuple(int(v) for v in text.split(",") if v.strip())


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="feasible-vqe",
        description="Feasibility-preserving VQE experiments on constrained problems.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen-instances", help="generate facility instances as JSON")
    gen.add_argument("--count", type=int, default=20)
    gen.add_argument("--seed", type=int, default=7)
    gen.add_argument("--n", type=int, default=3, help="facilities")
    gen.add_argument("--m", type=int, default=3, help="customers")
    gen.add_argument("--out", type=Path, required=True)

    run = sub.add_parser("run", help="run the experiment and emit the report")
    run.add_argument("--family", default="facility", choices=("facility",))
    run.add_argument("--n", type=int, default=3, help="facilities")
    run.add_argument("--m", type=int, default=3, help="customers")
    run.add_argument("--instances", type=int, default=20)
    run.add_argument("--seed", type=int, default=7)
    run.add_argument("--shots", type=int, default=2000)
    run.add_argument("--max-iter", type=int, default=300)
    run.add_argument("--lambda", dest="lambdas", type=_parse_floats, default=experiment.DEFAULT_LAMBDAS)
    run.add_argument("--layers", type=_parse_ints, default=experiment.DEFAULT_LAYERS)
    run.add_argument("--optimizer", default="cobyla", choices=("cobyla", "nelder_mead"))
    run.add_argument("--workers", type=int, default=1)
    run.add_argument("--no-proposed", action="store_true")
    run.add_argument("--no-figures", action="store_true")
    run.add_argument("--format", default="both", choices=("json", "csv", "both"))
    run.add_argument("--out", type=Path, required=True, help="output directory")

    cost = sub.add_parser("cost-table", help="resource counts vs closed forms")
    cost.add_argument("--families", type=lambda s: tuple(s.split(",")), default=DEFAULT_FAMILIES)
    cost.add_argument("--n-max", type=int, default=5)
    cost.add_argument("--layers", type=_parse_ints, default=experiment.DEFAULT_LAYERS)
    cost.add_argument("--format", default="table", choices=("table", "csv"))
    cost.add_argument("--out", type=Path, default=None)

    rep = sub.add_parser("report", help="re-emit files from a saved report.json")
    rep.add_argument("--report", type=Path, required=True)
    rep.add_argument("--format", default="both", choices=("json", "csv", "both"))
    rep.add_argument("--no-figures", action="store_true")
    rep.add_argument("--out", type=Path, required=True, help="output directory")
    return parser


def _cmd_gen_instances(args) -> int:
    instances = generate_instances(args.count, args.seed, n=args.n, m=args.m)
    args.out.parent.mkdir(parents=True, exist_ok=True)
    save_instances(instances, args.out)
    print(f"wrote {len(instances)} instances to {args.out}")
    return 0


def _cmd_run(args) -> int:
    plan = experiment.ExperimentPlan(
        family=args.family,
        n=args.n,
        m=args.m,
        instance_count=args.instances,
        seed=args.seed,
        shots=args.shots,
        max_iterations=args.max_iter,
        lambdas=args.lambdas,
        layers=args.layers,
        optimizer=args.optimizer,
        proposed=not args.no_proposed,
        workers=args.workers,
    )
    report = experiment.run_experiment(plan)
    paths = experiment.emit_report(
        report, args.out, fmt=args.format, figures=not args.no_figures
    )
    print(experiment.summary_csv(report), end="")
    for path in paths:
        print(f"wrote {path}")
    return 0


def _cmd_cost_table(args) -> int:
    rows = experiment.cost_table(args.families, n_max=args.n_max, layers=args.layers)
    text = (
        experiment.cost_table_csv(rows)
        if args.format == "csv"
        else experiment.format_cost_table(rows)
    )
    if args.out is not None:
        args.out.parent.mkdir(parents=True, exist_ok=True)
        args.out.write_text(text)
        print(f"wrote {args.out}")
    else:
        print(text, end="")
    return 0


def _cmd_report(args) -> int:
    report = experiment.ExperimentReport.load(args.report)
    paths = experiment.emit_report(report, args.out, fmt=args.format, figures=not args.no_figures)
    for path in paths:
        print(f"wrote {path}")
    return 0


_COMMANDS = {
    "gen-instances": _cmd_gen_instances,
    "run": _cmd_run,
    "cost-table": _cmd_cost_table,
    "report": _cmd_report,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except Exception as exc:  # surface a machine-readable error record
        record = {"error": {"type": type(exc).__name__, "message": str(exc)}}
        print(json.dumps(record), file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
