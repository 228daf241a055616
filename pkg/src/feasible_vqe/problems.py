"""Problem instances, constraint checkers, diagonal Hamiltonians, and
brute-force oracles.

Canonical problem bitstring: the x block column-major (x[i, j] at bit
j * n + i, row index i fastest) followed by the y block (y[i] at bit
n * m + i). All checkers, energies, and oracles use this order; extraction
from a circuit register goes through ``QubitLayout.project``.
"""

import json
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .ansatz import QubitLayout
from .errors import CapacityError, DimensionError

ENUMERATION_BIT_CAP = 24
_CHUNK_BITS = 18

FAMILIES = ("tsp", "assignment", "shift", "facility", "product_chain")


@dataclass(frozen=True)
class FacilityInstance:
    """Cost data: A[i] to open facility i, B[i][j] to send customer j there.

    Coefficients are small exact integers, so energies stay exact until
    normalization.
    """

    n: int
    m: int
    A: tuple
    B: tuple

    def __post_init__(self):
        if len(self.A) != self.n:
            raise DimensionError(f"A must have {self.n} entries, got {len(self.A)}")
        if len(self.B) != self.n or any(len(row) != self.m for row in self.B):
            raise DimensionError(f"B must be {self.n}x{self.m}")

    def to_dict(self) -> dict:
        return {"n": self.n, "m": self.m, "A": list(self.A), "B": [list(r) for r in self.B]}

    @classmethod
    def from_dict(cls, data: dict) -> "FacilityInstance":
        return cls(
            n=int(data["n"]),
            m=int(data["m"]),
            A=tuple(int(a) for a in data["A"]),
            B=tuple(tuple(int(b) for b in row) for row in data["B"]),
        )


def save_instances(instances, path) -> None:
    with open(path, "w") as fh:
        json.dump([inst.to_dict() for inst in instances], fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_instances(path) -> list:
    with open(path) as fh:
        return [FacilityInstance.from_dict(d) for d in json.load(fh)]


def generate_instances(count: int, seed: int, n: int = 3, m: int = 3) -> list:
    """Instances with A[i] uniform on {1..5} and B[i][j] uniform on {0,1,2}.

    Reproducible: a fixed seed yields the same list (A drawn before B,
    instances in order).
    """
    if count < 1:
        raise ValueError(f"count must be >= 1, got {count}")
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        A = tuple(int(a) for a in rng.integers(1, 6, size=n))
        B = tuple(tuple(int(b) for b in row) for row in rng.integers(0, 3, size=(n, m)))
        out.append(FacilityInstance(n=n, m=m, A=A, B=B))
    return out


@dataclass(frozen=True)
class ConstraintSpec:
    """A constraint family plus its dimensions; total over every bitstring
    of the problem-variable register."""

    family: str
    n: int
    m: int = 0

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}")

    @property
    def problem_bits(self) -> int:
        if self.family == "tsp":
            return self.n * self.n
        if self.family == "assignment":
            return self.n * self.m
        if self.family == "shift":
            return self.n * self.m + self.n
        if self.family == "facility":
            return self.n * self.m + self.n
        return self.n + 1  # product_chain: x_1..x_n, y


def _bit_table(indices: np.ndarray, num_bits: int) -> np.ndarray:
    """(len(indices), num_bits) 0/1 table, bit 0 first."""
    return (indices[:, None] >> np.arange(num_bits)[None, :]) & 1


def _feasible_chunk(spec: ConstraintSpec, indices: np.ndarray) -> np.ndarray:
    n, m = spec.n, spec.m
    bits = _bit_table(indices, spec.problem_bits)
    if spec.family == "product_chain":
        x = bits[:, : spec.n]
        y = bits[:, spec.n]
        return y == x.min(axis=1)
    if spec.family == "tsp":
        m = n
    x = bits[:, : n * m].reshape(len(indices), m, n)  # [state, column j, row i]
    col_ok = (x.sum(axis=2) == 1).all(axis=1)
    if spec.family == "tsp":
        return col_ok & (x.sum(axis=1) == 1).all(axis=1)
    if spec.family == "assignment":
        return col_ok & (x.sum(axis=1) <= 1).all(axis=1)
    y = bits[:, n * m :]
    if spec.family == "shift":
        return col_ok & (x.sum(axis=1) <= y).all(axis=1)
    # facility: x[i, j] <= y[i] for every customer j
    return col_ok & (x.max(axis=1) <= y).all(axis=1)


@lru_cache(maxsize=None)
def feasible_mask(spec: ConstraintSpec) -> np.ndarray:
    """Boolean feasibility over all 2^problem_bits canonical indices."""
    bits = spec.problem_bits
    if bits > ENUMERATION_BIT_CAP:
        raise CapacityError(f"{bits}-bit register exceeds the {ENUMERATION_BIT_CAP}-bit cap")
    total = 1 << bits
    if bits <= _CHUNK_BITS:
        return _feasible_chunk(spec, np.arange(total, dtype=np.int64))
    mask = np.empty(total, dtype=bool)
    step = 1 << _CHUNK_BITS
    for start in range(0, total, step):
        idx = np.arange(start, min(start + step, total), dtype=np.int64)
        mask[start : start + len(idx)] = _feasible_chunk(spec, idx)
    return mask


def check_feasible(spec: ConstraintSpec, bits) -> bool:
    """True iff the problem-variable bitstring satisfies every family
    constraint. `bits` is a 0/1 sequence in canonical order."""
    bits = list(bits)
    if len(bits) != spec.problem_bits:
        raise DimensionError(f"expected {spec.problem_bits} bits, got {len(bits)}")
    index = index_of_bits(bits)
    return bool(_feasible_chunk(spec, np.array([index], dtype=np.int64))[0])


def enumerate_feasible(spec: ConstraintSpec) -> frozenset:
    """Exact feasible set (canonical indices) by exhaustive scan; the
    independent oracle for every support test."""
    return frozenset(int(i) for i in np.flatnonzero(feasible_mask(spec)))


def closed_form_count(spec: ConstraintSpec):
    """Known feasible-set sizes; None where enumeration is the only oracle."""
    n, m = spec.n, spec.m
    if spec.family == "tsp":
        return math.factorial(n)
    if spec.family == "assignment":
        return math.perm(n, m)
    if spec.family == "shift":
        return math.perm(n, m) * 2 ** (n - m)
    if spec.family == "product_chain":
        return 2**n
    return None


def index_of_bits(bits) -> int:
    return int(sum(int(b) << k for k, b in enumerate(bits)))


def bits_of_index(index: int, num_bits: int) -> tuple:
    return tuple((index >> k) & 1 for k in range(num_bits))


def _split_xy(instance: FacilityInstance, bits):
    n, m = instance.n, instance.m
    bits = list(bits)
    if len(bits) != n * m + n:
        raise DimensionError(f"expected {n * m + n} bits, got {len(bits)}")
    x = [[bits[j * n + i] for j in range(m)] for i in range(n)]
    y = bits[n * m :]
    return x, y


def energy(instance: FacilityInstance, bits):
    """Opening costs plus assignment costs: sum A_i y_i + sum B_ij x_ij."""
    x, y = _split_xy(instance, bits)
    n, m = instance.n, instance.m
    total = sum(instance.A[i] * y[i] for i in range(n))
    total += sum(instance.B[i][j] * x[i][j] for i in range(n) for j in range(m))
    return total


@dataclass(frozen=True)
class PenaltyConfig:
    lam: float

    def __post_init__(self):
        if self.lam < 0:
            raise ValueError(f"penalty coefficient must be >= 0, got {self.lam}")


def _as_lambda(penalty) -> float:
    return penalty.lam if isinstance(penalty, PenaltyConfig) else float(penalty)


def penalized_energy(instance: FacilityInstance, bits, penalty):
    """energy + lam * [sum_j (sum_i x_ij - 1)^2 + sum_ij x_ij (1 - y_i)].

    Both penalty terms vanish exactly on feasible bitstrings.
    """
    lam = _as_lambda(penalty)
    x, y = _split_xy(instance, bits)
    n, m = instance.n, instance.m
    one_hot = sum((sum(x[i][j] for i in range(n)) - 1) ** 2 for j in range(m))
    coupling = sum(x[i][j] * (1 - y[i]) for i in range(n) for j in range(m))
    return energy(instance, bits) + lam * (one_hot + coupling)


def energy_array(instance: FacilityInstance) -> np.ndarray:
    """Vector of energies over every canonical problem index."""
    n, m = instance.n, instance.m
    bits = _bit_table(np.arange(1 << (n * m + n), dtype=np.int64), n * m + n)
    weights = np.empty(n * m + n)
    for j in range(m):
        for i in range(n):
            weights[j * n + i] = instance.B[i][j]
    weights[n * m :] = instance.A
    return bits @ weights


def penalty_array(instance: FacilityInstance) -> np.ndarray:
    """Vector of constraint-violation units (penalty at lam = 1)."""
    n, m = instance.n, instance.m
    bits = _bit_table(np.arange(1 << (n * m + n), dtype=np.int64), n * m + n)
    x = bits[:, : n * m].reshape(-1, m, n)
    y = bits[:, n * m :]
    one_hot = ((x.sum(axis=2) - 1) ** 2).sum(axis=1)
    coupling = (x * (1 - y[:, None, :])).sum(axis=(1, 2))
    return (one_hot + coupling).astype(float)


def penalized_array(instance: FacilityInstance, penalty) -> np.ndarray:
    return energy_array(instance) + _as_lambda(penalty) * penalty_array(instance)


@dataclass(frozen=True)
class Extrema:
    """Spectrum extrema of the penalized energy plus the constrained optimum."""

    e_min: float
    e_max: float
    optimal: frozenset
    optimal_energy: float


def brute_force_extrema(instance: FacilityInstance, penalty) -> Extrema:
    """Exact extrema of the penalized energy over all bitstrings; the
    optimal set is the energy argmin over feasible bitstrings only."""
    if instance.n * instance.m + instance.n > ENUMERATION_BIT_CAP:
        raise CapacityError("register exceeds the brute-force cap")
    spec = ConstraintSpec("facility", instance.n, instance.m)
    pen = penalized_array(instance, penalty)
    energies = energy_array(instance)
    mask = feasible_mask(spec)
    feasible_energies = energies[mask]
    opt = feasible_energies.min()
    optimal = frozenset(int(i) for i in np.flatnonzero(mask & (energies == opt)))
    return Extrema(
        e_min=float(pen.min()),
        e_max=float(pen.max()),
        optimal=optimal,
        optimal_energy=float(opt),
    )


class DiagonalHamiltonian:
    """Diagonal observable defined on the problem variables of a layout.

    `problem_values[p]` is the energy of canonical problem index p; the
    full-register diagonal replicates it over scratch-bit values.
    """

    def __init__(self, layout: QubitLayout, problem_values):
        problem_values = np.asarray(problem_values, dtype=float)
        if problem_values.shape != (1 << layout.problem_bits,):
            raise DimensionError(
                f"need {1 << layout.problem_bits} values for {layout.problem_bits} "
                f"problem bits, got {problem_values.shape}"
            )
        self.layout = layout
        self.problem_values = problem_values
        self._diagonal = None

    def value(self, problem_index: int) -> float:
        return float(self.problem_values[problem_index])

    def diagonal(self) -> np.ndarray:
        """Per-basis-state values over the full register (cached)."""
        if self._diagonal is None:
            basis = np.arange(1 << self.layout.total_qubits, dtype=np.int64)
            self._diagonal = self.problem_values[self.layout.project(basis)]
        return self._diagonal


def cost_hamiltonian(instance: FacilityInstance, layout: QubitLayout) -> DiagonalHamiltonian:
    return DiagonalHamiltonian(layout, energy_array(instance))


def penalized_hamiltonian(
    instance: FacilityInstance, layout: QubitLayout, penalty
) -> DiagonalHamiltonian:
    return DiagonalHamiltonian(layout, penalized_array(instance, penalty))
