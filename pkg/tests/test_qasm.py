import math

import numpy as np
import pytest

from qlbmsim.circuit import build_kernel, kernel_unitary, run
from qlbmsim.qasm import EMIT_NAMES, QasmError, UnsupportedGateError, emit_qasm, parse_qasm
from qlbmsim.stateprep import encode_amplitudes
from qlbmsim.statevector import gate, new_state

from conftest import random_instruction

EMIT_KINDS = sorted(EMIT_NAMES)

# (program, expected error line)
MALFORMED = [
    ('OPENQASM 2.0;\ninclude "qelib1.inc";\nqreg q[2];\nx q[0]\nh q[1];\n', 4),
    ('include "qelib1.inc";\nqreg q[1];\n', 1),
    ('OPENQASM 3.0;\nqreg q[1];\n', 1),
    ('OPENQASM 2.0;\ninclude "qelib1.inc";\nqreg q[2];\nfoo q[0];\n', 4),
    ('OPENQASM 2.0;\nqreg q[2];\n\nx q[2];\n', 4),
    ('OPENQASM 2.0;\nqreg q[2];\ncx q[0];\n', 3),
    ('OPENQASM 2.0;\nqreg q[2];\nqreg r[2];\n', 3),
    ('OPENQASM 2.0;\nqreg q[2];\nx r[0];\n', 3),
    ('OPENQASM 2.0;\nqreg q[1];\n// comment\nry(0.5 *) q[0];\n', 4),
    ('OPENQASM 2.0;\nqreg q[1];\ncreg c[1];\nmeasure q[0] -> c[0];\n', 3),
]


def test_emit_header_and_statements():
    text = emit_qasm(build_kernel("h", 1, [gate("H", 0)]))
    lines = text.splitlines()
    assert lines[0] == "OPENQASM 2.0;"
    assert lines[1] == 'include "qelib1.inc";'
    assert lines[2] == "qreg q[1];"
    assert "h q[0];" in lines


def test_emit_angle_format():
    text = emit_qasm(build_kernel("ry", 3, [gate("RY", 2, theta=0.5)]))
    assert "ry(0.5) q[2];" in text
    text = emit_qasm(build_kernel("ry", 1, [gate("RY", 0, theta=math.pi / 3)]))
    assert f"ry({math.pi / 3:.17g}) q[0];" in text


def test_emit_uses_qelib_names():
    k = build_kernel(
        "mix",
        3,
        [gate("Phase", 0, theta=0.1), gate("CPhase", 0, 1, theta=0.2), gate("Toffoli", 0, 1, 2),
         gate("SWAP", 0, 2)],
    )
    text = emit_qasm(k)
    assert "u1(0.10000000000000001) q[0];" in text
    assert "cu1(0.20000000000000001) q[0],q[1];" in text
    assert "ccx q[0],q[1],q[2];" in text
    assert "swap q[0],q[2];" in text


@pytest.mark.parametrize("kind", ["Y", "Z", "S", "T", "RX", "CZ"])
def test_emit_rejects_gates_outside_subset(kind):
    from qlbmsim.statevector import GATE_ARITY

    nc, nt, has_angle = GATE_ARITY[kind]
    inst = gate(kind, *range(nc + nt), theta=0.3 if has_angle else None)
    with pytest.raises(UnsupportedGateError, match=kind):
        emit_qasm(build_kernel("k", 2, [inst]))


def test_parse_minimal():
    k = parse_qasm('OPENQASM 2.0;\ninclude "qelib1.inc";\nqreg q[1];\nx q[0];\n')
    assert k.num_qubits == 1 and len(k) == 1 and k.instructions[0].kind == "X"


def test_parse_expressions_comments_barrier():
    src = """OPENQASM 2.0;
include "qelib1.inc";  // standard library
qreg q[3];
ry(pi/2) q[0];
rz(-3*pi/4 + 0.25) q[1];
barrier q[0],q[1];
barrier q;
u1(2^-1) q[2];
cu1(-(pi)) q[2],q[0];
"""
    k = parse_qasm(src)
    kinds = [i.kind for i in k.instructions]
    assert kinds == ["RY", "RZ", "Phase", "CPhase"]
    assert k.instructions[0].theta == pytest.approx(math.pi / 2, abs=0)
    assert k.instructions[1].theta == pytest.approx(-3 * math.pi / 4 + 0.25, abs=1e-15)
    assert k.instructions[2].theta == 0.5
    assert k.instructions[3].theta == -math.pi
    assert k.instructions[3].qubits == (2, 0)


def test_parse_accepts_other_qelib_spellings():
    k = parse_qasm("OPENQASM 2.0;\nqreg r[2];\ny r[0];\nz r[1];\ns r[0];\nt r[1];\nrx(1) r[0];\ncz r[0],r[1];\n")
    assert [i.kind for i in k.instructions] == ["Y", "Z", "S", "T", "RX", "CZ"]


@pytest.mark.parametrize("program,line", MALFORMED)
def test_malformed_programs_report_line(program, line):
    with pytest.raises(QasmError) as err:
        parse_qasm(program)
    assert err.value.line == line
    assert f"line {line}," in str(err.value)


def test_missing_semicolon_points_at_end_of_statement():
    with pytest.raises(QasmError) as err:
        parse_qasm("OPENQASM 2.0;\nqreg q[2];\nx q[0]\n")
    assert (err.value.line, err.value.col) == (3, 7)
    assert "';'" in err.value.reason


def test_round_trip_random_kernels(rng):
    for _ in range(100):
        n = int(rng.integers(1, 7))
        kinds = [k for k in EMIT_KINDS if {"SWAP": 2, "CX": 2, "CPhase": 2, "Toffoli": 3}.get(k, 1) <= n]
        k = build_kernel("r", n, [random_instruction(rng, n, kinds) for _ in range(int(rng.integers(0, 30)))])
        back = parse_qasm(emit_qasm(k))
        assert back.num_qubits == n
        # 17 significant digits reproduce the doubles exactly
        assert back.instructions == k.instructions
        assert np.max(np.abs(kernel_unitary(back) - kernel_unitary(k)), initial=0) <= 1e-12


def test_stateprep_circuit_survives_qasm(rng):
    t = rng.random(16)
    t /= np.linalg.norm(t)
    k = parse_qasm(emit_qasm(encode_amplitudes(t)))
    s = run(k, new_state(4))
    assert np.max(np.abs(s.amps - t)) <= 1e-10
