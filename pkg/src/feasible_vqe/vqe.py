"""Variational loop: energy estimation (exact or sampled), derivative-free
optimization, min-max energy normalization, and feasible/optimal-rate
metrics.

The iteration cap counts objective evaluations. With shots > 0 the
objective is stochastic; each evaluation draws from a seed stream derived
deterministically from (init_seed, evaluation index), so a fixed seed gives
a bit-identical result.
"""

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import optimize as sp_optimize

from . import sim
from .ansatz import AnsatzBundle
from .errors import DegenerateSpectrumError
from .problems import ConstraintSpec, DiagonalHamiltonian, feasible_mask

OPTIMIZERS = ("cobyla", "nelder_mead")


@dataclass
class VqeConfig:
    shots: int = 2000  # 0 = exact expectation
    max_iterations: int = 300
    optimizer: str = "cobyla"
    init_seed: int = 0
    param_init_range: tuple = (0.0, 2.0 * math.pi)
    restarts: int = 1
    final_shots: int = 2000  # fresh sample behind the reported metrics

    def __post_init__(self):
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")
        if self.shots < 0:
            raise ValueError("shots must be >= 0")
        if self.optimizer not in OPTIMIZERS:
            raise ValueError(f"optimizer must be one of {OPTIMIZERS}")
        if self.restarts < 1:
            raise ValueError("restarts must be >= 1")


@dataclass
class VqeResult:
    best_params: np.ndarray
    best_energy: float
    energy_trace: list
    final_histogram: dict
    feasible_rate: float = None
    optimal_rate: float = None
    normalized_trace: list = None
    n_evaluations: int = 0

    def to_dict(self) -> dict:
        return {
            "best_params": [float(p) for p in self.best_params],
            "best_energy": float(self.best_energy),
            "energy_trace": [float(e) for e in self.energy_trace],
            "final_histogram": {str(k): int(v) for k, v in self.final_histogram.items()},
            "feasible_rate": None if self.feasible_rate is None else float(self.feasible_rate),
            "optimal_rate": None if self.optimal_rate is None else float(self.optimal_rate),
            "normalized_trace": (
                None
                if self.normalized_trace is None
                else [float(e) for e in self.normalized_trace]
            ),
            "n_evaluations": int(self.n_evaluations),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "VqeResult":
        return cls(
            best_params=np.asarray(data["best_params"], dtype=float),
            best_energy=data["best_energy"],
            energy_trace=list(data["energy_trace"]),
            final_histogram={int(k): int(v) for k, v in data["final_histogram"].items()},
            feasible_rate=data.get("feasible_rate"),
            optimal_rate=data.get("optimal_rate"),
            normalized_trace=data.get("normalized_trace"),
            n_evaluations=data.get("n_evaluations", 0),
        )


def _eval_seed(init_seed: int, restart: int, stream: int, index: int):
    return np.random.SeedSequence(entropy=init_seed, spawn_key=(restart, stream, index))


def estimate_energy(
    bundle: AnsatzBundle, params, hamiltonian: DiagonalHamiltonian, shots: int, seed=0
) -> float:
    """<H> at the given parameters: exact for shots == 0, otherwise the mean
    over a fresh `shots`-shot sample."""
    state = sim.simulate(bundle.circuit, params)
    diag = hamiltonian.diagonal()
    if shots == 0:
        return sim.expectation_diagonal(state, diag)
    counts = sim.sample_counts(state, shots, seed)
    return float(counts @ diag) / shots


def normalize(h_expect: float, e_min: float, e_max: float) -> float:
    """Min-max normalized energy (h - e_min) / (e_max - e_min)."""
    if e_max <= e_min:
        raise DegenerateSpectrumError(f"degenerate spectrum: e_min={e_min}, e_max={e_max}")
    return (h_expect - e_min) / (e_max - e_min)


def metrics(histogram: dict, spec: ConstraintSpec, optimal_set, layout=None):
    """(feasible_rate, optimal_rate) of a measurement histogram.

    `layout` projects full-register keys to problem variables; pass None if
    keys are already canonical problem indices. Optimal solutions are
    members of `optimal_set` (feasible by construction).
    """
    if not histogram:
        raise ValueError("histogram is empty")
    keys = np.fromiter(histogram.keys(), dtype=np.int64, count=len(histogram))
    counts = np.fromiter(histogram.values(), dtype=np.int64, count=len(histogram))
    projected = layout.project(keys) if layout is not None else keys
    mask = feasible_mask(spec)
    total = counts.sum()
    feasible = counts[mask[projected]].sum()
    optimal_keys = np.fromiter(sorted(optimal_set), dtype=np.int64, count=len(optimal_set))
    optimal = counts[np.isin(projected, optimal_keys)].sum()
    return float(feasible / total), float(optimal / total)


class _BudgetExhausted(Exception):
    pass


@dataclass
class _Tracker:
    trace: list = field(default_factory=list)
    best_energy: float = math.inf
    best_params: np.ndarray = None


def _run_one_start(bundle, hamiltonian, config, restart: int) -> _Tracker:
    num_params = bundle.circuit.num_parameters
    rng = np.random.default_rng(_eval_seed(config.init_seed, restart, 0, 0))
    lo, hi = config.param_init_range
    x0 = rng.uniform(lo, hi, size=num_params)
    tracker = _Tracker()

    def objective(x):
        k = len(tracker.trace)
        if k >= config.max_iterations:
            raise _BudgetExhausted
        seed = _eval_seed(config.init_seed, restart, 1, k)
        e = estimate_energy(bundle, x, hamiltonian, config.shots, seed)
        tracker.trace.append(e)
        if e < tracker.best_energy:
            tracker.best_energy = e
            tracker.best_params = np.array(x, dtype=float)
        return e

    if num_params == 0:
        objective(np.zeros(0))
        return tracker

    try:
        if config.optimizer == "cobyla":
            sp_optimize.minimize(
                objective, x0, method="COBYLA", options={"maxiter": config.max_iterations}
            )
        else:
            sp_optimize.minimize(
                objective,
                x0,
                method="Nelder-Mead",
                options={"maxfev": config.max_iterations, "maxiter": config.max_iterations},
            )
    except _BudgetExhausted:
        pass
    return tracker


def optimize(
    bundle: AnsatzBundle,
    hamiltonian: DiagonalHamiltonian,
    config: VqeConfig,
    constraint: ConstraintSpec = None,
    optimal_set=None,
    extrema=None,
) -> VqeResult:
    """Minimize <H> over the ansatz parameters.

    Initial parameters are uniform on `param_init_range`; the energy of
    every objective evaluation is recorded (trace length <= cap). Reported
    metrics come from a fresh `final_shots`-shot sample at the best-seen
    parameters. `extrema = (e_min, e_max)` attaches a normalized trace.
    """
    best = None
    best_restart = 0
    for restart in range(config.restarts):
        tracker = _run_one_start(bundle, hamiltonian, config, restart)
        if best is None or tracker.best_energy < best.best_energy:
            best = tracker
            best_restart = restart
    state = sim.simulate(bundle.circuit, best.best_params)
    histogram = sim.sample(
        state, config.final_shots, _eval_seed(config.init_seed, best_restart, 2, 0)
    )
    feasible_rate = optimal_rate = None
    if constraint is not None and optimal_set is not None:
        feasible_rate, optimal_rate = metrics(histogram, constraint, optimal_set, bundle.layout)
    normalized = None
    if extrema is not None:
        e_min, e_max = extrema
        normalized = [normalize(e, e_min, e_max) for e in best.trace]
    return VqeResult(
        best_params=best.best_params,
        best_energy=float(best.best_energy),
        energy_trace=list(best.trace),
        final_histogram=histogram,
        feasible_rate=feasible_rate,
        optimal_rate=optimal_rate,
        normalized_trace=normalized,
        n_evaluations=len(best.trace),
    )
