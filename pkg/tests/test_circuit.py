"""Parser, metrics and emission round-trip."""

import math

import pytest
from hypothesis import given, settings, strategies as st

from qpart import (Circuit, Gate, GateKind, QasmError, QubitRef, emit_qasm,
                   gate_layers, generate, make_circuit, parse_qasm)

from conftest import fixture_names, load_fixture


def test_ghz4_metrics(ghz4):
    assert (ghz4.width, ghz4.size, ghz4.depth) == (4, 4, 4)


def test_qft4_metrics(qft4):
    assert (qft4.width, qft4.size, qft4.depth) == (4, 10, 7)
    kinds = [g.kind for g in qft4.gates]
    assert kinds.count(GateKind.H) == 4
    assert kinds.count(GateKind.CP) == 6


def test_qft_angles(qft4):
    # cp(pi / 2**(j - i)) with the control on the later qubit
    cps = [g for g in qft4.gates if g.kind is GateKind.CP]
    for g in cps:
        j, i = g.operands[0].index, g.operands[1].index
        assert j > i
        assert g.params[0] == pytest.approx(math.pi / 2 ** (j - i))


def test_parse_minimal():
    c = parse_qasm("""OPENQASM 2.0;
include "qelib1.inc";
qreg q[2];
h q[0];
cx q[0],q[1];
""")
    assert c.width == 2 and c.size == 2 and c.depth == 2
    assert [g.kind for g in c.gates] == [GateKind.H, GateKind.CX]
    assert c.gates[1].operands == (QubitRef("q", 0), QubitRef("q", 1))
    assert [g.seq for g in c.gates] == [0, 1]


def test_comments_skipped():
    c = parse_qasm("""OPENQASM 2.0;
// leading comment
qreg q[1];
h q[0];  // trailing comment
""")
    assert c.size == 1


def test_single_qubit_broadcast():
    c = parse_qasm("OPENQASM 2.0; qreg q[3]; h q;")
    assert [g.operands[0] for g in c.gates] == [QubitRef("q", i) for i in range(3)]


def test_measure_register_broadcast():
    c = parse_qasm("OPENQASM 2.0; qreg q[2]; creg c[2]; measure q -> c;")
    assert [g.kind for g in c.gates] == [GateKind.MEASURE] * 2
    assert [g.cbit for g in c.gates] == [("c", 0), ("c", 1)]


def test_measure_single_bit():
    c = parse_qasm("OPENQASM 2.0; qreg q[2]; creg c[2]; measure q[1] -> c[0];")
    assert c.gates[0].operands == (QubitRef("q", 1),)
    assert c.gates[0].cbit == ("c", 0)


def test_param_expressions():
    c = parse_qasm("""OPENQASM 2.0;
qreg q[2];
rz(pi/2) q[0];
cp(-pi/4) q[0],q[1];
rx(0.5) q[1];
ry(2*pi) q[0];
""")
    vals = [g.params[0] for g in c.gates]
    assert vals[0] == pytest.approx(math.pi / 2)
    assert vals[1] == pytest.approx(-math.pi / 4)
    assert vals[2] == 0.5
    assert vals[3] == pytest.approx(2 * math.pi)


def test_cu1_is_cp():
    c = parse_qasm("OPENQASM 2.0; qreg q[2]; cu1(pi/2) q[0],q[1];")
    assert c.gates[0].kind is GateKind.CP
    assert c.gates[0].params[0] == pytest.approx(math.pi / 2)


def test_opaque_roundtrip():
    text = """OPENQASM 2.0;
opaque mystery a,b;
qreg q[3];
mystery q[0],q[2];
"""
    c = parse_qasm(text)
    g = c.gates[0]
    assert g.kind is GateKind.OPAQUE and g.label == "mystery"
    assert g.operands == (QubitRef("q", 0), QubitRef("q", 2))
    again = parse_qasm(emit_qasm(c))
    assert again.gates == c.gates


@pytest.mark.parametrize("text,fragment", [
    ("qreg q[1]; h q[0];", "OPENQASM"),
    ("OPENQASM 3.0; qreg q[1];", "version"),
    ("OPENQASM 2.0; qreg q[1]; qreg q[2];", "already declared"),
    ("OPENQASM 2.0; qreg q[1]; h q[3];", "out of range"),
    ("OPENQASM 2.0; qreg q[1]; h r[0];", "not declared"),
    ("OPENQASM 2.0; qreg q[1]; bogus q[0];", "unknown gate"),
    ("OPENQASM 2.0; qreg q[2]; cx q[0],q[0];", "distinct"),
    ("OPENQASM 2.0; qreg q[1]; reset q[0];", "not supported"),
    ("OPENQASM 2.0; qreg q[1]; rz(q) q[0];", "parameter"),
    ("OPENQASM 2.0; qreg q[2]; measure q[0] -> c[0];", "not declared"),
    ("OPENQASM 2.0;", "no quantum register"),
], ids=["header", "version", "dup-reg", "range", "undeclared", "unknown",
        "repeat-operand", "reset", "param", "no-creg", "empty"])
def test_parse_errors(text, fragment):
    with pytest.raises(QasmError, match=fragment):
        parse_qasm(text)


def test_parse_error_position():
    try:
        parse_qasm("OPENQASM 2.0;\nqreg q[1];\nbogus q[0];\n")
    except QasmError as exc:
        assert exc.line == 3
        assert "line 3" in str(exc)
    else:
        pytest.fail("expected a parse error")


def test_barrier_synchronises_without_depth():
    c = parse_qasm("OPENQASM 2.0; qreg q[2]; h q[0]; barrier q; h q[1];")
    assert gate_layers(c) == [0, 1, 1]
    assert c.depth == 2        # the barrier itself occupies no layer
    assert c.size == 2


def test_make_circuit_validation():
    with pytest.raises(ValueError, match="duplicate register"):
        make_circuit("bad", [("q", 2), ("q", 3)], [])
    with pytest.raises(ValueError, match="positive"):
        make_circuit("bad", [("q", 0)], [])
    with pytest.raises(QasmError, match="not declared"):
        make_circuit("bad", [("q", 1)], [Gate(GateKind.H, (QubitRef("r", 0),))])


def test_emit_parse_exact(ghz4, qft4):
    for c in (ghz4, qft4):
        again = parse_qasm(emit_qasm(c), name=c.name)
        assert again.gates == c.gates
        assert again.registers == c.registers
        # a second emission is byte-identical
        assert emit_qasm(again) == emit_qasm(c)


def test_emit_synthesises_creg():
    c = make_circuit("m", [("q", 2)],
                     [Gate(GateKind.MEASURE, (QubitRef("q", 1),))])
    text = emit_qasm(c)
    assert "creg c[2];" in text
    assert "measure q[1] -> c[1];" in text
    parse_qasm(text)


@pytest.mark.parametrize("name", fixture_names())
def test_fixture_roundtrip(name):
    c = load_fixture(name)
    again = parse_qasm(emit_qasm(c), name=c.name)
    assert again.gates == c.gates
    assert again.registers == c.registers


_KINDS = st.sampled_from([GateKind.H, GateKind.T, GateKind.CX, GateKind.CZ,
                          GateKind.CP, GateKind.CCX, GateKind.RZ])


@st.composite
def random_circuits(draw):
    n = draw(st.integers(3, 6))
    qs = [QubitRef("q", i) for i in range(n)]
    gates = []
    for _ in range(draw(st.integers(1, 12))):
        kind = draw(_KINDS)
        ops = draw(st.permutations(qs).map(lambda p: tuple(p[:kind.n_qubits])))
        params = tuple(draw(st.floats(-6.3, 6.3, allow_nan=False))
                       for _ in range(kind.n_params))
        gates.append(Gate(kind, ops, params))
    return make_circuit("rand", [("q", n)], gates)


@settings(max_examples=60, deadline=None)
@given(random_circuits())
def test_roundtrip_property(c: Circuit):
    again = parse_qasm(emit_qasm(c), name="rand")
    assert again.gates == c.gates
