"""Gate-level circuit IR: shared variational parameters, parameter binding,
and CNOT-cost / parameter-count accounting.

Supported gate kinds: X, H, Ry, CNOT, CRy, CSWAP. Qubit lists are ordered
controls-first. Only Ry/CRy carry an angle, which is either a literal float
or a ParameterRef resolving to ``multiplier * params[index]`` at bind time.
"""

import json
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import DimensionError

GATE_ARITY = {"X": 1, "H": 1, "Ry": 1, "CNOT": 2, "CRy": 2, "CSWAP": 3}
ROTATION_KINDS = ("Ry", "CRy")

# CNOT-equivalents after decomposition: a CSWAP decomposes into seven CNOTs
# plus single-qubit gates, a controlled rotation into two CNOTs plus two
# rotations. Single-qubit gates are free.
CNOT_COST = {"X": 0, "H": 0, "Ry": 0, "CNOT": 1, "CRy": 2, "CSWAP": 7}


@dataclass(frozen=True)
class ParameterRef:
    """Reference into the parameter vector; resolves to multiplier * value.

    Negated pairs (same index, multipliers +1/-1) implement the zero-sum
    rotation registers used by the one-hot chain fragments.
    """

    index: int
    multiplier: float = 1.0


@dataclass(frozen=True)
class GateInstance:
    kind: str
    qubits: tuple
    angle: "float | ParameterRef | None" = None

    def is_bound(self) -> bool:
        return not isinstance(self.angle, ParameterRef)


class Circuit:
    """Append-only gate list over a fixed qubit register.

    Parameters are allocated with :meth:`add_parameter` before gates
    reference them; ``bind`` resolves every reference into a literal angle
    and returns a new circuit, leaving this one untouched.
    """

    def __init__(self, num_qubits: int):
        if num_qubits < 1:
            raise ValueError(f"num_qubits must be >= 1, got {num_qubits}")
        self.num_qubits = num_qubits
        self._gates: list[GateInstance] = []
        self._num_parameters = 0

    @property
    def gates(self) -> tuple:
        return tuple(self._gates)

    @property
    def num_parameters(self) -> int:
        return self._num_parameters

    def add_parameter(self, count: int = 1) -> int:
        """Allocate `count` new parameters; returns the first new index."""
        if count < 0:
            raise ValueError("count must be >= 0")
        first = self._num_parameters
        self._num_parameters += count
        return first

    def append(self, kind: str, qubits, angle=None) -> None:
        qubits = tuple(int(q) for q in qubits)
        if kind not in GATE_ARITY:
            raise ValueError(f"unknown gate kind {kind!r}")
        if len(qubits) != GATE_ARITY[kind]:
            raise ValueError(f"{kind} expects {GATE_ARITY[kind]} qubits, got {len(qubits)}")
        if len(set(qubits)) != len(qubits):
            raise ValueError(f"{kind} qubit roles must be distinct, got {qubits}")
        for q in qubits:
            if not 0 <= q < self.num_qubits:
                raise IndexError(f"qubit {q} out of range for {self.num_qubits}-qubit circuit")
        if kind in ROTATION_KINDS:
            if angle is None:
                raise ValueError(f"{kind} requires an angle")
            if isinstance(angle, ParameterRef):
                if not 0 <= angle.index < self._num_parameters:
                    raise ValueError(
                        f"parameter index {angle.index} not allocated "
                        f"(have {self._num_parameters})"
                    )
            else:
                angle = float(angle)
        elif angle is not None:
            raise ValueError(f"{kind} does not take an angle")
        self._gates.append(GateInstance(kind, qubits, angle))

    def x(self, q):
        self.append("X", (q,))

    def h(self, q):
        self.append("H", (q,))

    def ry(self, q, angle):
        self.append("Ry", (q,), angle)

    def cnot(self, control, target):
        self.append("CNOT", (control, target))

    def cry(self, control, target, angle):
        self.append("CRy", (control, target), angle)

    def cswap(self, control, target_a, target_b):
        self.append("CSWAP", (control, target_a, target_b))

    def bind(self, params) -> "Circuit":
        """Resolve every ParameterRef into a literal angle (pure)."""
        params = np.asarray(params, dtype=float)
        if params.shape != (self._num_parameters,):
            raise DimensionError(
                f"expected {self._num_parameters} parameters, got shape {params.shape}"
            )
        bound = Circuit(self.num_qubits)
        for g in self._gates:
            angle = g.angle
            if isinstance(angle, ParameterRef):
                angle = angle.multiplier * float(params[angle.index])
            bound._gates.append(GateInstance(g.kind, g.qubits, angle))
        return bound

    def to_dict(self) -> dict:
        gates = []
        for g in self._gates:
            entry: dict = {"kind": g.kind, "qubits": list(g.qubits)}
            if g.angle is not None:
                if isinstance(g.angle, ParameterRef):
                    entry["angle"] = {"index": g.angle.index, "multiplier": g.angle.multiplier}
                else:
                    entry["angle"] = g.angle
            gates.append(entry)
        return {
            "num_qubits": self.num_qubits,
            "num_parameters": self._num_parameters,
            "gates": gates,
        }

    def to_json(self, **kwargs) -> str:
        kwargs.setdefault("sort_keys", True)
        return json.dumps(self.to_dict(), **kwargs)

    @classmethod
    def from_dict(cls, data: dict) -> "Circuit":
        circ = cls(int(data["num_qubits"]))
        circ.add_parameter(int(data["num_parameters"]))
        for entry in data["gates"]:
            angle = entry.get("angle")
            if isinstance(angle, dict):
                angle = ParameterRef(int(angle["index"]), float(angle["multiplier"]))
            circ.append(entry["kind"], entry["qubits"], angle)
        return circ

    @classmethod
    def from_json(cls, text: str) -> "Circuit":
        return cls.from_dict(json.loads(text))

    def __repr__(self):
        return (
            f"Circuit(num_qubits={self.num_qubits}, gates={len(self._gates)}, "
            f"num_parameters={self._num_parameters})"
        )


def bind(circuit: Circuit, params) -> Circuit:
    return circuit.bind(params)


def gate_counts(circuit: Circuit) -> dict:
    counts: dict = {}
    for g in circuit.gates:
        counts[g.kind] = counts.get(g.kind, 0) + 1
    return counts


def cnot_cost(circuit: Circuit) -> int:
    """Total CNOT-equivalents of the circuit under the decomposition rules."""
    return sum(CNOT_COST[g.kind] for g in circuit.gates)


@dataclass(frozen=True)
class CostReport:
    """Measured resource counts of a concrete circuit."""

    num_qubits: int
    num_parameters: int
    cnot_count: int
    raw_gate_counts: dict


@dataclass(frozen=True)
class FamilyCostSummary:
    """Measured counts of a family ansatz next to its closed-form predictions.

    ``cnot_bound`` is an upper bound; the builders in this package emit the
    maximal gate pattern, so ``bound_attained`` is True for every family.
    """

    family: str
    n: int
    m: int
    measured: CostReport
    expected_qubits: int
    expected_parameters: int
    cnot_bound: int
    parameters_match: bool
    cnot_within_bound: bool
    bound_attained: bool


def measure(circuit: Circuit) -> CostReport:
    return CostReport(
        num_qubits=circuit.num_qubits,
        num_parameters=circuit.num_parameters,
        cnot_count=cnot_cost(circuit),
        raw_gate_counts=gate_counts(circuit),
    )


def _as_int(x: Fraction) -> int:
    if x.denominator != 1:
        raise ValueError(f"closed form is not integral: {x}")
    return int(x)


def expected_qubits(family: str, n: int, m: int = 0) -> int:
    if family == "tsp":
        return n * n
    if family == "assignment":
        return n * m
    if family == "shift":
        return n * m + n
    if family == "facility":
        return n * m + n + m
    if family == "product_chain":
        return 2 * n  # y + x_1..x_n + n-1 swap scratch qubits
    raise ValueError(f"unknown family {family!r}")


def expected_parameters(family: str, n: int, m: int = 0) -> int:
    if family == "tsp":
        return n * (n - 1) // 2
    if family == "assignment":
        return n * m - m * (m + 1) // 2
    if family == "shift":
        return n * m - m * (m + 1) // 2 + n - m
    if family == "facility":
        return n * m + n - m
    if family == "product_chain":
        return n
    raise ValueError(f"unknown family {family!r}")


def expected_cnot_bound(family: str, n: int, m: int = 0) -> int:
    """Closed-form CNOT-count bound for each family ansatz.

    The shift formula carries -9m^2/2: summing the one-hot fragment cost
    2mn - m^2 - m and the swap-cascade cost 7m^2n/2 - 7m^3/6 + 7mn/2
    - 7m^2/2 - 7m/3 gives that coefficient exactly (checked against
    measured counts for all m <= n <= 5).
    """
    if family == "tsp":
        return expected_cnot_bound("assignment", n, n)
    if family == "assignment":
        total = (
            Fraction(7 * m * m * n, 2)
            - Fraction(7 * m**3, 6)
            - Fraction(3 * m * n, 2)
            - m * m
            + Fraction(m, 6)
        )
        return _as_int(total)
    if family == "shift":
        total = (
            Fraction(7 * m * m * n, 2)
            - Fraction(7 * m**3, 6)
            + Fraction(11 * m * n, 2)
            - Fraction(9 * m * m, 2)
            - Fraction(10 * m, 3)
        )
        return _as_int(total)
    if family == "facility":
        return 9 * n * m - 2 * m
    if family == "product_chain":
        return 1 + 7 * (n - 1)
    raise ValueError(f"unknown family {family!r}")


def layered_parameters(num_qubits: int, layers: int) -> int:
    return (layers + 1) * num_qubits


def layered_cnot_count(num_qubits: int, layers: int) -> int:
    return layers * (num_qubits - 1)


def cost_report(family: str, n: int, m: int = 0, table1_roles: bool = False) -> FamilyCostSummary:
    """Build the family ansatz, measure it, and compare with closed forms.

    For the facility family the default roles are n facilities and m
    customers (the layout convention of the builder). ``table1_roles=True``
    swaps them (n customers, m facilities).
    """
    from . import ansatz  # deferred: ansatz imports this module

    if family == "facility" and table1_roles:
        n, m = m, n
    if family in ("tsp", "product_chain"):
        m = 0
    bundle = ansatz.build_family_ansatz(family, n, m)
    report = measure(bundle.circuit)
    exp_q = expected_qubits(family, n, m)
    exp_p = expected_parameters(family, n, m)
    bound = expected_cnot_bound(family, n, m)
    return FamilyCostSummary(
        family=family,
        n=n,
        m=m,
        measured=report,
        expected_qubits=exp_q,
        expected_parameters=exp_p,
        cnot_bound=bound,
        parameters_match=(report.num_parameters == exp_p and report.num_qubits == exp_q),
        cnot_within_bound=(report.cnot_count <= bound),
        bound_attained=(report.cnot_count == bound),
    )
