"""Ansatz builders.

The constraint-family builders grow a feasible circuit inductively: each
step prepares a parameterized one-hot superposition (a W-type fragment) on
a fresh column of variables and then repairs the constraints with CSWAP
cascades, so every output basis state is feasible by construction and every
feasible assignment is reachable for generic parameters.

Qubit layout convention (matches the 15-qubit picture for the facility
problem with n = m = 3): open/employment bits y first, then the assignment
block x in column-major order (row index fastest), then scratch qubits.
"""

from dataclasses import dataclass

import numpy as np

from .circuit import Circuit, ParameterRef


@dataclass(frozen=True)
class QubitLayout:
    """Bijection between problem variables and qubit indices.

    Qubit order: ``y_0 .. y_{y_count-1}``, then ``x`` column-major
    (``x[i, j]`` at offset ``j * rows + i``), then ``aux_count`` scratch
    qubits. The canonical *problem bitstring* used by the constraint and
    energy code is x column-major followed by y, with scratch bits dropped.
    """

    rows: int
    cols: int
    y_count: int = 0
    aux_count: int = 0

    @property
    def total_qubits(self) -> int:
        return self.y_count + self.rows * self.cols + self.aux_count

    @property
    def problem_bits(self) -> int:
        return self.rows * self.cols + self.y_count

    def x_index(self, i: int, j: int) -> int:
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError(f"x[{i},{j}] outside {self.rows}x{self.cols} block")
        return self.y_count + j * self.rows + i

    def y_index(self, i: int) -> int:
        if not 0 <= i < self.y_count:
            raise IndexError(f"y[{i}] outside {self.y_count} y qubits")
        return i

    def aux_index(self, k: int) -> int:
        if not 0 <= k < self.aux_count:
            raise IndexError(f"aux[{k}] outside {self.aux_count} scratch qubits")
        return self.y_count + self.rows * self.cols + k

    def project(self, basis):
        """Map full-register basis indices to canonical problem indices.

        Accepts an int or an integer ndarray; scratch bits are discarded and
        the y block is moved above the x block.
        """
        rc = self.rows * self.cols
        x_bits = (basis >> self.y_count) & ((1 << rc) - 1)
        y_bits = basis & ((1 << self.y_count) - 1)
        return x_bits | (y_bits << rc)


@dataclass(frozen=True)
class AnsatzBundle:
    circuit: Circuit
    layout: QubitLayout
    family: str
    dims: tuple


def _append_one_hot_chain(circuit: Circuit, qubits) -> None:
    """One-hot superposition over `qubits` with d-1 fresh parameters.

    X on the first qubit, then per link: Ry(+t), H, CNOT, H, Ry(-t), CNOT
    (two CNOTs per link). Acting on |0...0> this yields amplitudes
    cos t1, -sin t1 cos t2, +sin t1 sin t2 cos t3, ... with alternating
    signs, supported exactly on the one-hot strings.
    """
    qubits = list(qubits)
    circuit.x(qubits[0])
    for j in range(len(qubits) - 1):
        p = circuit.add_parameter()
        prev, new = qubits[j], qubits[j + 1]
        circuit.ry(new, ParameterRef(p, +1.0))
        circuit.h(new)
        circuit.cnot(prev, new)
        circuit.h(new)
        circuit.ry(new, ParameterRef(p, -1.0))
        circuit.cnot(new, prev)


def build_parameterized_w(d: int, first_param_index: int = 0) -> Circuit:
    """One-hot chain fragment on d qubits consuming parameters
    [first_param_index, first_param_index + d - 1)."""
    if d < 1:
        raise ValueError(f"d must be >= 1, got {d}")
    circ = Circuit(d)
    circ.add_parameter(first_param_index)
    _append_one_hot_chain(circ, range(d))
    return circ


def build_assignment_ansatz(n: int, m: int) -> AnsatzBundle:
    """Each of m columns one-hot over its rows, each row used at most once.

    Column k spans rows 0..n-m+k; the CSWAP cascade moves a clashing
    existing row into the freshly added row.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if not 1 <= m <= n:
        raise ValueError(f"m must satisfy 1 <= m <= n, got n={n}, m={m}")
    layout = QubitLayout(rows=n, cols=m)
    circ = Circuit(layout.total_qubits)
    for k in range(m):
        rows_k = n - m + k + 1  # rows spanned by column k
        _append_one_hot_chain(circ, [layout.x_index(i, k) for i in range(rows_k)])
        new_row = rows_k - 1
        for u in range(rows_k - 1):
            control = layout.x_index(u, k)
            for v in range(k):
                circ.cswap(control, layout.x_index(u, v), layout.x_index(new_row, v))
    return AnsatzBundle(circ, layout, "assignment", (n, m))


def build_tsp_ansatz(n: int) -> AnsatzBundle:
    """Permutation-matrix states: the square assignment case."""
    bundle = build_assignment_ansatz(n, n)
    return AnsatzBundle(bundle.circuit, bundle.layout, "tsp", (n, n))


def build_shift_ansatz(n: int, m: int) -> AnsatzBundle:
    """Assignment columns plus per-row employment bits y.

    Unconstrained y bits start in free Ry(phi) superpositions; each
    forwarding step marks the freshly added row employed and the CSWAP
    cascade relabels a clashing row together with its y bit. m = 0 is
    allowed and yields the bare y layer.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if not 0 <= m <= n:
        raise ValueError(f"m must satisfy 0 <= m <= n, got n={n}, m={m}")
    layout = QubitLayout(rows=n, cols=m, y_count=n)
    circ = Circuit(layout.total_qubits)
    for i in range(n - m):
        p = circ.add_parameter()
        circ.ry(layout.y_index(i), ParameterRef(p))
    for k in range(m):
        rows_k = n - m + k + 1
        _append_one_hot_chain(circ, [layout.x_index(i, k) for i in range(rows_k)])
        new_row = rows_k - 1
        circ.x(layout.y_index(new_row))
        for u in range(rows_k - 1):
            control = layout.x_index(u, k)
            for v in range(k):
                circ.cswap(control, layout.x_index(u, v), layout.x_index(new_row, v))
            circ.cswap(control, layout.y_index(u), layout.y_index(new_row))
    return AnsatzBundle(circ, layout, "shift", (n, m))


def build_facility_ansatz(n: int, m: int) -> AnsatzBundle:
    """n facilities, m customers: every customer column one-hot, open bits
    forced to cover the used facilities.

    Each step parks a fresh |1> on a scratch qubit and CSWAPs it into the
    chosen facility's open bit; scratch bits end in either value and are
    excluded from the constraints.
    """
    if n < 1 or m < 1:
        raise ValueError(f"dims must be >= 1, got n={n}, m={m}")
    layout = QubitLayout(rows=n, cols=m, y_count=n, aux_count=m)
    circ = Circuit(layout.total_qubits)
    for i in range(n):
        p = circ.add_parameter()
        circ.ry(layout.y_index(i), ParameterRef(p))
    for k in range(m):
        _append_one_hot_chain(circ, [layout.x_index(i, k) for i in range(n)])
        circ.x(layout.aux_index(k))
        for u in range(n):
            circ.cswap(layout.x_index(u, k), layout.y_index(u), layout.aux_index(k))
    return AnsatzBundle(circ, layout, "facility", (n, m))


def build_product_chain_ansatz(n: int) -> AnsatzBundle:
    """States with y equal to the product (AND) of x_1..x_n.

    y tracks x_1 via a CNOT; each later x_k, when 0, swaps y into a fresh
    scratch qubit, clearing it. The support covers all 2^n x-assignments.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    layout = QubitLayout(rows=n, cols=1, y_count=1, aux_count=n - 1)
    circ = Circuit(layout.total_qubits)
    p = circ.add_parameter()
    first = layout.x_index(0, 0)
    circ.ry(first, ParameterRef(p))
    circ.cnot(first, layout.y_index(0))
    for k in range(1, n):
        p = circ.add_parameter()
        xk = layout.x_index(k, 0)
        circ.ry(xk, ParameterRef(p))
        circ.x(xk)
        circ.cswap(xk, layout.y_index(0), layout.aux_index(k - 1))
        circ.x(xk)
    return AnsatzBundle(circ, layout, "product_chain", (n, 1))


def build_layered_ansatz(num_qubits: int, layers: int, layout: QubitLayout = None) -> AnsatzBundle:
    """Hardware-efficient baseline: an Ry layer, then `layers` repetitions
    of a linear-chain CNOT layer followed by an Ry layer.

    (layers + 1) * num_qubits parameters. `layout` optionally attaches
    problem-variable roles to the register (defaults to a bare register).
    """
    if num_qubits < 1:
        raise ValueError(f"num_qubits must be >= 1, got {num_qubits}")
    if layers < 0:
        raise ValueError(f"layers must be >= 0, got {layers}")
    if layout is None:
        layout = QubitLayout(rows=num_qubits, cols=1)
    if layout.total_qubits != num_qubits:
        raise ValueError(
            f"layout covers {layout.total_qubits} qubits, circuit has {num_qubits}"
        )
    circ = Circuit(num_qubits)

    def ry_layer():
        for q in range(num_qubits):
            circ.ry(q, ParameterRef(circ.add_parameter()))

    ry_layer()
    for _ in range(layers):
        for q in range(num_qubits - 1):
            circ.cnot(q, q + 1)
        ry_layer()
    return AnsatzBundle(circ, layout, "layered", (num_qubits, layers))


def build_family_ansatz(family: str, n: int, m: int = 0) -> AnsatzBundle:
    if family == "tsp":
        return build_tsp_ansatz(n)
    if family == "assignment":
        return build_assignment_ansatz(n, m)
    if family == "shift":
        return build_shift_ansatz(n, m)
    if family == "facility":
        return build_facility_ansatz(n, m)
    if family == "product_chain":
        return build_product_chain_ansatz(n)
    raise ValueError(f"unknown family {family!r}")


def random_parameters(bundle_or_count, rng) -> np.ndarray:
    """Uniform [0, 2*pi) parameter vector for a bundle or a plain count."""
    count = (
        bundle_or_count
        if isinstance(bundle_or_count, int)
        else bundle_or_count.circuit.num_parameters
    )
    return rng.uniform(0.0, 2.0 * np.pi, size=count)
