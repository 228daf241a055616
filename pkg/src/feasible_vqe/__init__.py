"""Feasibility-preserving variational quantum circuits for constrained
combinatorial optimization: inductive ansatz builders, a dense statevector
simulator, penalty-method baselines, and a derivative-free VQE loop."""

from .ansatz import (
    AnsatzBundle,
    QubitLayout,
    build_assignment_ansatz,
    build_facility_ansatz,
    build_layered_ansatz,
    build_parameterized_w,
    build_product_chain_ansatz,
    build_shift_ansatz,
    build_tsp_ansatz,
)
from .circuit import (
    Circuit,
    CostReport,
    FamilyCostSummary,
    GateInstance,
    ParameterRef,
    bind,
    cnot_cost,
    cost_report,
)
from .errors import CapacityError, DegenerateSpectrumError, DimensionError
from .experiment import ExperimentPlan, ExperimentReport, emit_report, run_experiment
from .problems import (
    ConstraintSpec,
    DiagonalHamiltonian,
    FacilityInstance,
    PenaltyConfig,
    brute_force_extrema,
    check_feasible,
    cost_hamiltonian,
    energy,
    enumerate_feasible,
    generate_instances,
    penalized_energy,
    penalized_hamiltonian,
)
from .sim import Statevector, apply_gate, expectation_diagonal, init_zero, sample, simulate
from .vqe import VqeConfig, VqeResult, estimate_energy, metrics, normalize, optimize

__version__ = "0.1.0"

__all__ = [
    "AnsatzBundle",
    "CapacityError",
    "Circuit",
    "ConstraintSpec",
    "CostReport",
    "DegenerateSpectrumError",
    "DiagonalHamiltonian",
    "DimensionError",
    "ExperimentPlan",
    "ExperimentReport",
    "FacilityInstance",
    "FamilyCostSummary",
    "GateInstance",
    "ParameterRef",
    "PenaltyConfig",
    "QubitLayout",
    "Statevector",
    "VqeConfig",
    "VqeResult",
    "apply_gate",
    "bind",
    "brute_force_extrema",
    "build_assignment_ansatz",
    "build_facility_ansatz",
    "build_layered_ansatz",
    "build_parameterized_w",
    "build_product_chain_ansatz",
    "build_shift_ansatz",
    "build_tsp_ansatz",
    "check_feasible",
    "cnot_cost",
    "cost_hamiltonian",
    "cost_report",
    "emit_report",
    "energy",
    "enumerate_feasible",
    "estimate_energy",
    "expectation_diagonal",
    "generate_instances",
    "init_zero",
    "metrics",
    "normalize",
    "optimize",
    "penalized_energy",
    "penalized_hamiltonian",
    "run_experiment",
    "sample",
    "simulate",
]
