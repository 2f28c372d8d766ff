import math

import numpy as np
import pytest

from qlbmsim.circuit import (
    Kernel,
    KernelError,
    build_kernel,
    compose,
    embed,
    instruction_unitary,
    kernel_unitary,
    run,
)
from qlbmsim.statevector import StateVector, gate, new_state

from conftest import random_instruction, random_state


def random_kernel(rng, n, length):
    return build_kernel("rand", n, [random_instruction(rng, n) for _ in range(length)])


def test_build_kernel_basic():
    k = build_kernel("h0", 1, [gate("H", 0)])
    assert len(k) == 1 and k.name == "h0"
    assert len(build_kernel("id", 3, [])) == 0


def test_build_kernel_reports_offending_index():
    with pytest.raises(KernelError) as err:
        build_kernel("bad", 3, [gate("X", 5)])
    assert err.value.index == 0
    with pytest.raises(KernelError) as err:
        build_kernel("bad", 3, [gate("X", 0), gate("H", 1), gate("CX", 0, 3)])
    assert err.value.index == 2
    assert "instruction 2" in str(err.value)


def test_kernel_is_immutable():
    k = build_kernel("h", 1, [gate("H", 0)])
    with pytest.raises(AttributeError):
        k.name = "other"
    assert isinstance(k.instructions, tuple)


def test_compose_order_and_width():
    a = build_kernel("a", 2, [gate("H", 0)])
    b = build_kernel("b", 2, [gate("CX", 0, 1)])
    ab = compose([a, b])
    assert ab.instructions == a.instructions + b.instructions
    assert compose([a]).instructions == a.instructions
    with pytest.raises(KernelError):
        compose([a, build_kernel("c", 3, [])])


def test_compose_involution_runs_to_zero():
    x = build_kernel("x", 1, [gate("X", 0)])
    s = run(compose([x, x]), new_state(1))
    assert np.array_equal(s.amps, [1, 0])


def test_run_identity_and_h(rng):
    psi = random_state(rng, 3)
    before = psi.amps.copy()
    run(build_kernel("id", 3, []), psi)
    assert np.array_equal(psi.amps, before)
    s = run(build_kernel("h", 1, [gate("H", 0)]), new_state(1))
    assert np.allclose(s.amps, [1 / math.sqrt(2)] * 2, atol=1e-15)


def test_run_width_mismatch():
    with pytest.raises(KernelError):
        run(build_kernel("h", 1, [gate("H", 0)]), new_state(2))


def test_compose_matches_sequential_run_exactly(rng):
    a, b = random_kernel(rng, 4, 15), random_kernel(rng, 4, 15)
    psi = random_state(rng, 4)
    one = run(compose([a, b]), psi.copy())
    two = run(b, run(a, psi.copy()))
    assert np.array_equal(one.amps, two.amps)


def test_kernel_unitary_small_cases():
    assert np.array_equal(kernel_unitary(build_kernel("id", 2, [])), np.eye(4))
    assert np.array_equal(kernel_unitary(build_kernel("x", 1, [gate("X", 0)])), [[0, 1], [1, 0]])
    with pytest.raises(KernelError):
        kernel_unitary(build_kernel("big", 11, []))


def test_instruction_unitary_cx_little_endian():
    u = instruction_unitary(gate("CX", 0, 1), 2)
    # control qubit 0 (bit 0), target qubit 1 (bit 1): |01> (idx 1) <-> |11> (idx 3)
    perm = np.zeros((4, 4))
    perm[0, 0] = perm[2, 2] = perm[3, 1] = perm[1, 3] = 1
    assert np.array_equal(u, perm)


@pytest.mark.parametrize("n", [1, 3, 6, 10])
def test_simulator_matches_dense_unitary(rng, n):
    k = random_kernel(rng, n, 40)
    u = kernel_unitary(k)
    assert np.max(np.abs(u.conj().T @ u - np.eye(1 << n))) <= 1e-12
    for _ in range(3):
        psi = random_state(rng, n)
        expected = u @ psi.amps
        run(k, psi)
        assert np.max(np.abs(psi.amps - expected)) <= 1e-12


def test_unitary_of_composition(rng):
    a, b = random_kernel(rng, 5, 20), random_kernel(rng, 5, 20)
    lhs = kernel_unitary(compose([a, b]))
    rhs = kernel_unitary(b) @ kernel_unitary(a)
    assert np.max(np.abs(lhs - rhs)) <= 1e-12


def test_embed_relabels():
    k = build_kernel("cx", 2, [gate("CX", 0, 1)])
    e = embed(k, 4, {0: 3, 1: 1})
    assert e.num_qubits == 4 and e.instructions[0].qubits == (3, 1)
    assert embed(k, 3).instructions == k.instructions
