"""Dense statevector simulation: preparation, gate application, exact
expectation of diagonal observables, and shot sampling.

Conventions used throughout the package:
  * qubit 0 is the least-significant bit of the basis-state index, so basis
    state ``b`` assigns qubit ``q`` the bit ``(b >> q) & 1``;
  * Ry(theta) = [[cos(theta/2), -sin(theta/2)], [sin(theta/2), cos(theta/2)]].

CSWAP is applied natively as a three-qubit permutation kernel; its
seven-CNOT decomposition exists only in the cost accounting.
"""

from dataclasses import dataclass, field

import numpy as np

from .circuit import Circuit, GateInstance, ParameterRef
from .errors import CapacityError, DimensionError

DEFAULT_MAX_QUBITS = 24

_INV_SQRT2 = 1.0 / np.sqrt(2.0)


@dataclass(frozen=True, eq=False)
class Statevector:
    num_qubits: int
    amplitudes: np.ndarray = field(repr=False)

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def support(self, threshold: float = 1e-12) -> np.ndarray:
        """Basis indices whose probability exceeds `threshold`."""
        return np.flatnonzero(self.probabilities() > threshold)


def init_zero(num_qubits: int, max_qubits: int = DEFAULT_MAX_QUBITS) -> Statevector:
    """All-zeros computational basis state on `num_qubits` qubits."""
    if not 1 <= num_qubits <= max_qubits:
        raise CapacityError(f"num_qubits must be in [1, {max_qubits}], got {num_qubits}")
    amps = np.zeros(1 << num_qubits, dtype=np.complex128)
    amps[0] = 1.0
    return Statevector(num_qubits, amps)


def _halves(tensor: np.ndarray, axis: int):
    """Views of the axis=0 and axis=1 sub-blocks along one qubit axis."""
    lo = [slice(None)] * tensor.ndim
    hi = [slice(None)] * tensor.ndim
    lo[axis] = 0
    hi[axis] = 1
    return tensor[tuple(lo)], tensor[tuple(hi)]


def _swap_blocks(a: np.ndarray, b: np.ndarray) -> None:
    tmp = a.copy()
    a[...] = b
    b[...] = tmp


def _rotate_blocks(a: np.ndarray, b: np.ndarray, theta: float) -> None:
    c, s = np.cos(theta / 2.0), np.sin(theta / 2.0)
    new_a = c * a - s * b
    new_b = s * a + c * b
    a[...] = new_a
    b[...] = new_b


def _apply_inplace(amps: np.ndarray, num_qubits: int, gate: GateInstance) -> None:
    """Apply one bound gate to the flat amplitude buffer, in place."""
    kind = gate.kind
    qubits = gate.qubits
    # leading dummy axis keeps every indexed sub-block a writable view
    tensor = amps.reshape((1,) + (2,) * num_qubits)
    axes = [num_qubits - q for q in qubits]

    if kind == "X":
        a, b = _halves(tensor, axes[0])
        _swap_blocks(a, b)
    elif kind == "H":
        a, b = _halves(tensor, axes[0])
        new_a = (a + b) * _INV_SQRT2
        new_b = (a - b) * _INV_SQRT2
        a[...] = new_a
        b[...] = new_b
    elif kind == "Ry":
        a, b = _halves(tensor, axes[0])
        _rotate_blocks(a, b, gate.angle)
    elif kind in ("CNOT", "CRy"):
        c_ax, t_ax = axes
        sel = [slice(None)] * tensor.ndim
        sel[c_ax] = 1
        sub = tensor[tuple(sel)]
        t_ax -= t_ax > c_ax
        a, b = _halves(sub, t_ax)
        if kind == "CNOT":
            _swap_blocks(a, b)
        else:
            _rotate_blocks(a, b, gate.angle)
    elif kind == "CSWAP":
        c_ax, a_ax, b_ax = axes
        sel = [slice(None)] * tensor.ndim
        sel[c_ax] = 1
        sub = tensor[tuple(sel)]
        a_ax -= a_ax > c_ax
        b_ax -= b_ax > c_ax
        lo = [slice(None)] * sub.ndim
        hi = [slice(None)] * sub.ndim
        lo[a_ax], lo[b_ax] = 0, 1
        hi[a_ax], hi[b_ax] = 1, 0
        _swap_blocks(sub[tuple(lo)], sub[tuple(hi)])
    else:  # pragma: no cover - append() rejects unknown kinds
        raise ValueError(f"unknown gate kind {kind!r}")


def _validate_gate(gate: GateInstance, num_qubits: int) -> None:
    for q in gate.qubits:
        if not 0 <= q < num_qubits:
            raise IndexError(f"qubit {q} out of range for {num_qubits}-qubit state")
    if len(set(gate.qubits)) != len(gate.qubits):
        raise ValueError(f"{gate.kind} qubit roles must be distinct, got {gate.qubits}")
    if isinstance(gate.angle, ParameterRef):
        raise ValueError("gate angle is an unbound ParameterRef; bind the circuit first")


def apply_gate(state: Statevector, gate: GateInstance) -> Statevector:
    """Apply one bound gate to `state`, returning a new statevector."""
    _validate_gate(gate, state.num_qubits)
    amps = state.amplitudes.copy()
    _apply_inplace(amps, state.num_qubits, gate)
    return Statevector(state.num_qubits, amps)


def simulate(circuit: Circuit, params=None, max_qubits: int = DEFAULT_MAX_QUBITS) -> Statevector:
    """Run a circuit on |0...0>. `params` binds a parameterized circuit."""
    if params is not None:
        circuit = circuit.bind(params)
    state = init_zero(circuit.num_qubits, max_qubits=max_qubits)
    amps = state.amplitudes
    for gate in circuit.gates:
        _validate_gate(gate, circuit.num_qubits)
        _apply_inplace(amps, circuit.num_qubits, gate)
    return state


def expectation_diagonal(state: Statevector, values) -> float:
    """Exact <H> for a diagonal observable given as per-basis-state values."""
    values = np.asarray(values, dtype=float)
    if values.shape != state.amplitudes.shape:
        raise DimensionError(
            f"observable has {values.shape} entries, state has {state.amplitudes.shape}"
        )
    return float(state.probabilities() @ values)


def sample_counts(state: Statevector, shots: int, rng_seed) -> np.ndarray:
    """Dense per-basis-state shot counts (multinomial draw)."""
    if shots < 1:
        raise ValueError(f"shots must be >= 1, got {shots}")
    probs = state.probabilities()
    probs = probs / probs.sum()
    rng = np.random.default_rng(rng_seed)
    return rng.multinomial(shots, probs)


def sample(state: Statevector, shots: int, rng_seed) -> dict:
    """Histogram of `shots` measurements: basis index -> count.

    Reproducible for a fixed seed; the sampling distribution is
    |amplitude|^2.
    """
    counts = sample_counts(state, shots, rng_seed)
    hit = np.flatnonzero(counts)
    return {int(b): int(counts[b]) for b in hit}
