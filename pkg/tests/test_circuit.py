"""Circuit IR: binding, cost accounting, closed forms, serialization."""

import numpy as np
import pytest

from feasible_vqe.ansatz import build_family_ansatz
from feasible_vqe.circuit import (
    Circuit,
    ParameterRef,
    cnot_cost,
    cost_report,
    expected_cnot_bound,
    expected_parameters,
    expected_qubits,
    gate_counts,
    layered_cnot_count,
    layered_parameters,
)
from feasible_vqe.errors import DimensionError


def _zero_sum_pair_circuit():
    circ = Circuit(1)
    p = circ.add_parameter()
    circ.ry(0, ParameterRef(p, +1.0))
    circ.ry(0, ParameterRef(p, -1.0))
    return circ


def test_bind_zero_sum_pair():
    bound = _zero_sum_pair_circuit().bind([0.7])
    assert [g.angle for g in bound.gates] == [0.7, -0.7]


def test_bind_parameterless_circuit():
    circ = Circuit(2)
    circ.x(0)
    circ.cnot(0, 1)
    bound = circ.bind([])
    assert bound.gates == circ.gates


def test_bind_length_mismatch():
    with pytest.raises(DimensionError):
        _zero_sum_pair_circuit().bind([0.1, 0.2])


def test_bind_is_pure_and_repeatable():
    circ = _zero_sum_pair_circuit()
    first = circ.bind([1.5]).gates
    second = circ.bind([1.5]).gates
    assert first == second
    assert isinstance(circ.gates[0].angle, ParameterRef)  # original untouched


def test_bind_preserves_gate_order():
    bundle = build_family_ansatz("facility", 3, 3)
    params = np.linspace(0.1, 0.9, bundle.circuit.num_parameters)
    bound = bundle.circuit.bind(params)
    assert [g.kind for g in bound.gates] == [g.kind for g in bundle.circuit.gates]
    assert [g.qubits for g in bound.gates] == [g.qubits for g in bundle.circuit.gates]


def test_cnot_cost_cswaps():
    circ = Circuit(5)
    circ.cswap(0, 1, 2)
    circ.cswap(1, 2, 3)
    circ.cswap(2, 3, 4)
    assert cnot_cost(circ) == 21


def test_cnot_cost_single_cnot():
    circ = Circuit(2)
    circ.cnot(0, 1)
    assert cnot_cost(circ) == 1


def test_cnot_cost_empty():
    assert cnot_cost(Circuit(1)) == 0


def test_cnot_cost_cry_and_singles():
    circ = Circuit(2)
    circ.cry(0, 1, 0.3)
    circ.h(0)
    circ.x(1)
    circ.ry(0, 0.1)
    assert cnot_cost(circ) == 2


def test_append_validation():
    circ = Circuit(2)
    with pytest.raises(ValueError):
        circ.append("CNOT", (0, 0))
    with pytest.raises(IndexError):
        circ.append("X", (5,))
    with pytest.raises(ValueError):
        circ.append("X", (0,), 0.5)
    with pytest.raises(ValueError):
        circ.append("Ry", (0,))
    with pytest.raises(ValueError):
        circ.ry(0, ParameterRef(0))  # not allocated yet
    with pytest.raises(ValueError):
        circ.append("SWAP", (0, 1))


def test_json_roundtrip():
    bundle = build_family_ansatz("shift", 3, 2)
    text = bundle.circuit.to_json()
    restored = Circuit.from_json(text)
    assert restored.to_dict() == bundle.circuit.to_dict()
    assert restored.num_parameters == bundle.circuit.num_parameters


def test_json_golden_shape():
    circ = Circuit(2)
    p = circ.add_parameter()
    circ.ry(0, ParameterRef(p, -1.0))
    circ.cnot(0, 1)
    assert circ.to_dict() == {
        "num_qubits": 2,
        "num_parameters": 1,
        "gates": [
            {"kind": "Ry", "qubits": [0], "angle": {"index": 0, "multiplier": -1.0}},
            {"kind": "CNOT", "qubits": [0, 1]},
        ],
    }


def test_zero_sum_pairs_in_family_circuits():
    """Every chain link carries a +t/-t rotation pair on the same qubit."""
    bundle = build_family_ansatz("facility", 3, 3)
    refs = {}
    for g in bundle.circuit.gates:
        if g.kind == "Ry" and isinstance(g.angle, ParameterRef):
            refs.setdefault((g.qubits[0], g.angle.index), []).append(g.angle.multiplier)
    pairs = [ms for ms in refs.values() if len(ms) == 2]
    assert pairs, "expected shared-parameter rotation pairs"
    assert all(sum(ms) == 0.0 for ms in pairs)


def test_cost_report_assignment_example():
    summary = cost_report("assignment", 3, 2)
    assert summary.measured.num_parameters == 3  # 6 - 2 - 1
    assert summary.expected_parameters == 3


def test_cost_report_facility_fig_counts():
    summary = cost_report("facility", 3, 3)
    assert summary.measured.num_qubits == 15
    assert summary.measured.num_parameters == 9
    assert summary.cnot_bound == 9 * 3 * 3 - 2 * 3
    assert summary.parameters_match and summary.cnot_within_bound


def test_cost_report_table1_roles_swap():
    swapped = cost_report("facility", 2, 4, table1_roles=True)  # 2 customers, 4 facilities
    direct = cost_report("facility", 4, 2)
    assert swapped.measured == direct.measured


def test_cost_report_invalid_dims():
    with pytest.raises(ValueError):
        cost_report("assignment", 2, 3)
    with pytest.raises(ValueError):
        cost_report("nonsense", 2, 2)


@pytest.mark.parametrize("family", ["assignment", "shift", "facility", "tsp"])
def test_closed_forms_sweep(family):
    """Measured parameter counts equal the closed forms exactly and CNOT
    counts attain the bounds for every m <= n <= 5."""
    for n in range(1, 6):
        m_values = [0] if family == "tsp" else range(1, n + 1)
        for m in m_values:
            summary = cost_report(family, n, m)
            assert summary.measured.num_qubits == summary.expected_qubits
            assert summary.measured.num_parameters == summary.expected_parameters
            assert summary.measured.cnot_count <= summary.cnot_bound
            assert summary.bound_attained  # this builder emits the maximal pattern


def test_product_chain_closed_forms():
    for n in range(1, 6):
        summary = cost_report("product_chain", n)
        assert summary.measured.num_parameters == n
        assert summary.measured.cnot_count == 1 + 7 * (n - 1)
        assert summary.measured.num_qubits == 2 * n


def test_shift_bound_is_integral_and_positive():
    for n in range(1, 8):
        for m in range(1, n + 1):
            bound = expected_cnot_bound("shift", n, m)
            assert bound >= 0


def test_layered_formulas():
    assert layered_parameters(15, 1) == 30
    assert layered_parameters(4, 3) == 16
    assert layered_cnot_count(4, 3) == 9  # 3 chain layers of 3 CNOTs


def test_expected_qubits_table():
    assert expected_qubits("assignment", 4, 2) == 8
    assert expected_qubits("shift", 4, 2) == 12
    assert expected_qubits("facility", 3, 3) == 15
    assert expected_parameters("facility", 3, 3) == 9


def test_gate_counts_shape():
    bundle = build_family_ansatz("assignment", 3, 2)
    counts = gate_counts(bundle.circuit)
    assert counts["CSWAP"] == 2
    assert counts["CNOT"] == 2 * ((2 - 1) + (3 - 1))  # two chain fragments
