"""Experiment harness: run the feasibility-preserving ansatz against
penalty-method layered baselines over a grid of penalty coefficients,
aggregate rates and normalized convergence traces, and emit reports.

Per-instance protocol: one optimization run per method from one random
initialization, metrics from a fresh sample at the best-seen parameters.
Rates are averaged per instance, then across instances. Every trace is
normalized by the penalized-spectrum extrema of its own penalty
coefficient, so the penalty-free method gets one normalized trace per
coefficient.
"""

import csv
import io
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import circuit as circuit_mod
from .ansatz import QubitLayout, build_facility_ansatz, build_layered_ansatz
from .errors import CapacityError
from .problems import (
    ConstraintSpec,
    FacilityInstance,
    brute_force_extrema,
    cost_hamiltonian,
    generate_instances,
    penalized_hamiltonian,
)
from .sim import DEFAULT_MAX_QUBITS
from .vqe import VqeConfig, normalize, optimize

DEFAULT_LAMBDAS = (5.0, 10.0, 15.0, 20.0)
DEFAULT_LAYERS = (1, 2, 3)


def method_key(layers=None, lam=None) -> str:
    if layers is None:
        return "proposed"
    return f"layered_l{layers}_lam{lam:g}"


@dataclass
class ExperimentPlan:
    family: str = "facility"
    n: int = 3
    m: int = 3
    instance_count: int = 20
    seed: int = 7
    shots: int = 2000
    max_iterations: int = 300
    lambdas: tuple = DEFAULT_LAMBDAS
    layers: tuple = DEFAULT_LAYERS
    optimizer: str = "cobyla"
    proposed: bool = True
    workers: int = 1

    def __post_init__(self):
        self.lambdas = tuple(float(v) for v in self.lambdas)
        self.layers = tuple(int(v) for v in self.layers)
        if self.family != "facility":
            raise ValueError("the experiment objective is defined for the facility family")
        if self.instance_count < 1:
            raise ValueError("instance_count must be >= 1")
        if any(lam <= 0 for lam in self.lambdas):
            raise ValueError("penalty coefficients must be > 0")
        if self.n * self.m + self.n + self.m > DEFAULT_MAX_QUBITS:
            raise CapacityError("register exceeds the simulator cap")
        if not self.proposed and not self.layers:
            raise ValueError("plan contains no methods")

    def methods(self) -> list:
        """(key, layers, lambda) tuples; layers is None for the proposed method."""
        out = []
        if self.proposed:
            out.append((method_key(), None, None))
        for l in self.layers:
            for lam in self.lambdas:
                out.append((method_key(l, lam), l, lam))
        return out

    def to_dict(self) -> dict:
        return {
            "family": self.family,
            "n": self.n,
            "m": self.m,
            "instance_count": self.instance_count,
            "seed": self.seed,
            "shots": self.shots,
            "max_iterations": self.max_iterations,
            "lambdas": list(self.lambdas),
            "layers": list(self.layers),
            "optimizer": self.optimizer,
            "proposed": self.proposed,
            "workers": self.workers,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentPlan":
        return cls(**data)


@dataclass
class ExperimentReport:
    plan: ExperimentPlan
    records: list  # one dict per instance
    summary: dict  # method key -> {"feasible_pct", "optimal_pct"}
    trace_stats: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "plan": self.plan.to_dict(),
            "records": self.records,
            "summary": self.summary,
            "trace_stats": self.trace_stats,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentReport":
        return cls(
            plan=ExperimentPlan.from_dict(data["plan"]),
            records=data["records"],
            summary=data["summary"],
            trace_stats=data["trace_stats"],
        )

    def save(self, path) -> None:
        Path(path).write_text(to_canonical_json(self.to_dict()))

    @classmethod
    def load(cls, path) -> "ExperimentReport":
        return cls.from_dict(json.loads(Path(path).read_text()))


def to_canonical_json(data) -> str:
    return json.dumps(data, indent=2, sort_keys=True) + "\n"


def _instance_seed(plan_seed: int) -> int:
    return int(np.random.SeedSequence(entropy=plan_seed, spawn_key=(0,)).generate_state(1)[0])


def _run_seed(plan_seed: int, instance_idx: int, method_idx: int) -> int:
    ss = np.random.SeedSequence(entropy=plan_seed, spawn_key=(1, instance_idx, method_idx))
    return int(ss.generate_state(1)[0])


def _run_task(args) -> tuple:
    """One (instance, method) optimization; top-level for process pools."""
    plan_dict, instance_dict, instance_idx, method_idx, key, layers, lam = args
    plan = ExperimentPlan.from_dict(plan_dict)
    instance = FacilityInstance.from_dict(instance_dict)
    spec = ConstraintSpec("facility", plan.n, plan.m)
    config = VqeConfig(
        shots=plan.shots,
        max_iterations=plan.max_iterations,
        optimizer=plan.optimizer,
        init_seed=_run_seed(plan.seed, instance_idx, method_idx),
    )
    optimal = brute_force_extrema(instance, 1.0).optimal
    if layers is None:
        bundle = build_facility_ansatz(plan.n, plan.m)
        hamiltonian = cost_hamiltonian(instance, bundle.layout)
        extrema = None
    else:
        layout = QubitLayout(rows=plan.n, cols=plan.m, y_count=plan.n)
        bundle = build_layered_ansatz(layout.total_qubits, layers, layout)
        hamiltonian = penalized_hamiltonian(instance, layout, lam)
        ext = brute_force_extrema(instance, lam)
        extrema = (ext.e_min, ext.e_max)
    result = optimize(
        bundle, hamiltonian, config, constraint=spec, optimal_set=optimal, extrema=extrema
    )
    run = {
        "feasible_rate": result.feasible_rate,
        "optimal_rate": result.optimal_rate,
        "energy_trace": [float(e) for e in result.energy_trace],
        "best_energy": float(result.best_energy),
        "n_evaluations": result.n_evaluations,
    }
    return instance_idx, key, run


def _padded(trace, length: int) -> np.ndarray:
    """Pad a trace to `length` by repeating its last value."""
    arr = np.asarray(trace, dtype=float)
    if len(arr) >= length:
        return arr[:length]
    return np.concatenate([arr, np.full(length - len(arr), arr[-1])])


def _aggregate(plan: ExperimentPlan, records: list) -> tuple:
    summary = {}
    for key, _, _ in plan.methods():
        feas = [rec["runs"][key]["feasible_rate"] for rec in records]
        opt = [rec["runs"][key]["optimal_rate"] for rec in records]
        summary[key] = {
            "feasible_pct": 100.0 * float(np.mean(feas)),
            "optimal_pct": 100.0 * float(np.mean(opt)),
        }

    trace_stats = []
    for key, layers, lam in plan.methods():
        lams = plan.lambdas if layers is None else (lam,)
        for cur in lams:
            rows = []
            for rec in records:
                e_min = rec["extrema"][f"{cur:g}"]["e_min"]
                e_max = rec["extrema"][f"{cur:g}"]["e_max"]
                raw = _padded(rec["runs"][key]["energy_trace"], plan.max_iterations)
                rows.append([normalize(e, e_min, e_max) for e in raw])
            rows = np.asarray(rows)
            trace_stats.append(
                {
                    "method": key,
                    "layers": layers,
                    "lambda": cur,
                    "mean": [float(v) for v in rows.mean(axis=0)],
                    "std": [float(v) for v in rows.std(axis=0)],
                }
            )
    return summary, trace_stats


def run_experiment(plan: ExperimentPlan) -> ExperimentReport:
    """Optimize every instance with every method and aggregate the report.

    Deterministic for a fixed plan: instance generation and every per-run
    seed derive from plan.seed; parallel results are merged by
    (instance, method) index regardless of completion order.
    """
    instances = generate_instances(
        plan.instance_count, _instance_seed(plan.seed), n=plan.n, m=plan.m
    )
    methods = plan.methods()
    records = []
    for idx, instance in enumerate(instances):
        extrema = {
            f"{lam:g}": {
                "e_min": brute_force_extrema(instance, lam).e_min,
                "e_max": brute_force_extrema(instance, lam).e_max,
            }
            for lam in plan.lambdas
        }
        base = brute_force_extrema(instance, 1.0)
        records.append(
            {
                "instance": instance.to_dict(),
                "optimal_energy": base.optimal_energy,
                "extrema": extrema,
                "runs": {},
            }
        )

    tasks = [
        (plan.to_dict(), instances[i].to_dict(), i, j, key, layers, lam)
        for i in range(len(instances))
        for j, (key, layers, lam) in enumerate(methods)
    ]
    if plan.workers > 1:
        with ProcessPoolExecutor(max_workers=plan.workers) as pool:
            results = list(pool.map(_run_task, tasks))
    else:
        results = [_run_task(t) for t in tasks]
    for instance_idx, key, run in results:
        records[instance_idx]["runs"][key] = run

    summary, trace_stats = _aggregate(plan, records)
    return ExperimentReport(plan=plan, records=records, summary=summary, trace_stats=trace_stats)


def summary_csv(report: ExperimentReport) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["method", "layers", "lambda", "feasible_pct", "optimal_pct"])
    for key, layers, lam in report.plan.methods():
        row = report.summary[key]
        writer.writerow(
            [
                key,
                "" if layers is None else layers,
                "" if lam is None else f"{lam:g}",
                f"{row['feasible_pct']:.2f}",
                f"{row['optimal_pct']:.2f}",
            ]
        )
    return buf.getvalue()


def traces_csv(report: ExperimentReport) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["method", "layers", "lambda", "iteration", "mean_eps", "std_eps"])
    for stat in report.trace_stats:
        layers = "" if stat["layers"] is None else stat["layers"]
        for it, (mean, std) in enumerate(zip(stat["mean"], stat["std"]), start=1):
            writer.writerow(
                [stat["method"], layers, f"{stat['lambda']:g}", it, repr(mean), repr(std)]
            )
    return buf.getvalue()


def emit_report(report: ExperimentReport, out_dir, fmt: str = "both", figures: bool = True) -> list:
    """Write the report files into `out_dir`; returns the written paths.

    json: the full report (report.json). csv: Table-style summary
    (summary.csv) and per-iteration normalized traces (traces.csv).
    Figures (convergence per penalty coefficient, rate summary) are PNG
    files rendered next to the delimited output.
    """
    if fmt not in ("json", "csv", "both"):
        raise ValueError(f"format must be json, csv, or both, got {fmt!r}")
    out_dir = Path(out_dir)
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
        paths = []
        if fmt in ("json", "both"):
            path = out_dir / "report.json"
            path.write_text(to_canonical_json(report.to_dict()))
            paths.append(path)
        if fmt in ("csv", "both"):
            for name, text in (("summary.csv", summary_csv(report)), ("traces.csv", traces_csv(report))):
                path = out_dir / name
                path.write_text(text)
                paths.append(path)
        if figures:
            from . import plots  # deferred: pulls in matplotlib

            paths.extend(plots.render_report_figures(report, out_dir))
        return paths
    except OSError as exc:
        raise OSError(f"failed writing report files under {out_dir}: {exc}") from exc


def cost_table(families, n_max: int = 5, layers=DEFAULT_LAYERS) -> list:
    """Measured-versus-closed-form resource rows for every family and all
    dims with m <= n <= n_max, plus layered-baseline rows on the matching
    problem registers."""
    rows = []
    for family in families:
        for n in range(1, n_max + 1):
            m_values = [None] if family in ("tsp", "product_chain") else range(1, n + 1)
            for m in m_values:
                summary = circuit_mod.cost_report(family, n, 0 if m is None else m)
                rows.append(
                    {
                        "family": family,
                        "n": n,
                        "m": summary.m,
                        "layers": None,
                        "qubits": summary.measured.num_qubits,
                        "qubits_expected": summary.expected_qubits,
                        "parameters": summary.measured.num_parameters,
                        "parameters_expected": summary.expected_parameters,
                        "cnots": summary.measured.cnot_count,
                        "cnot_bound": summary.cnot_bound,
                        "parameters_match": summary.parameters_match,
                        "cnot_within_bound": summary.cnot_within_bound,
                        "bound_attained": summary.bound_attained,
                    }
                )
                register = ConstraintSpec(family, n, summary.m).problem_bits
                for l in layers:
                    bundle = build_layered_ansatz(register, l)
                    rows.append(
                        {
                            "family": f"layered[{family}]",
                            "n": n,
                            "m": summary.m,
                            "layers": l,
                            "qubits": register,
                            "qubits_expected": register,
                            "parameters": bundle.circuit.num_parameters,
                            "parameters_expected": circuit_mod.layered_parameters(register, l),
                            "cnots": circuit_mod.cnot_cost(bundle.circuit),
                            "cnot_bound": circuit_mod.layered_cnot_count(register, l),
                            "parameters_match": bundle.circuit.num_parameters
                            == circuit_mod.layered_parameters(register, l),
                            "cnot_within_bound": circuit_mod.cnot_cost(bundle.circuit)
                            <= circuit_mod.layered_cnot_count(register, l),
                            "bound_attained": True,
                        }
                    )
    return rows


def format_cost_table(rows) -> str:
    header = [
        "family",
        "n",
        "m",
        "l",
        "qubits",
        "params",
        "params(form)",
        "cnots",
        "cnot bound",
        "flag",
    ]
    table = [header]
    for r in rows:
        flag = "match" if r["parameters_match"] and r["cnot_within_bound"] else "MISMATCH"
        if r["bound_attained"] and flag == "match":
            flag = "match=bound"
        table.append(
            [
                r["family"],
                str(r["n"]),
                "-" if r["m"] in (None, 0) else str(r["m"]),
                "-" if r["layers"] is None else str(r["layers"]),
                str(r["qubits"]),
                str(r["parameters"]),
                str(r["parameters_expected"]),
                str(r["cnots"]),
                str(r["cnot_bound"]),
                flag,
            ]
        )
    widths = [max(len(row[c]) for row in table) for c in range(len(header))]
    lines = []
    for i, row in enumerate(table):
        lines.append("  ".join(cell.ljust(widths[c]) for c, cell in enumerate(row)).rstrip())
        if i == 0:
            lines.append("  ".join("-" * widths[c] for c in range(len(header))))
    return "\n".join(lines) + "\n"


def cost_table_csv(rows) -> str:
    buf = io.StringIO()
    fieldnames = [
        "family",
        "n",
        "m",
        "layers",
        "qubits",
        "qubits_expected",
        "parameters",
        "parameters_expected",
        "cnots",
        "cnot_bound",
        "parameters_match",
        "cnot_within_bound",
        "bound_attained",
    ]
    writer = csv.DictWriter(buf, fieldnames=fieldnames, lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    return buf.getvalue()
