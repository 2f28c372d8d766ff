import numpy as np
import pytest

from qlbmsim.statevector import GATE_ARITY, GateInstruction, StateVector


def random_state(rng, n):
    v = rng.normal(size=1 << n) + 1j * rng.normal(size=1 << n)
    return StateVector(n, v / np.linalg.norm(v))


def random_instruction(rng, n, kinds=None):
    kinds = kinds or [k for k, (nc, nt, _) in GATE_ARITY.items() if nc + nt <= n]
    kind = kinds[rng.integers(len(kinds))]
    nc, nt, has_angle = GATE_ARITY[kind]
    qubits = tuple(int(q) for q in rng.choice(n, size=nc + nt, replace=False))
    theta = float(rng.uniform(-2 * np.pi, 2 * np.pi)) if has_angle else None
    return GateInstruction(kind, qubits, theta)


@pytest.fixture
def rng():
    return np.random.default_rng(20240917)
