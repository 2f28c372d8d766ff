"""State-vector simulator and modular D1Q2 quantum lattice Boltzmann solver."""

from .circuit import Kernel, build_kernel, compose, embed, kernel_unitary, run
from .qasm import QasmError, emit_qasm, parse_qasm
from .qlbm import (
    CollisionAngles,
    ConcentrationField,
    LatticeConfig,
    collision_angles,
    run_simulation,
    step,
)
from .statevector import GateInstruction, StateVector, gate, new_state

__all__ = [
    "CollisionAngles",
    "ConcentrationField",
    "GateInstruction",
    "Kernel",
    "LatticeConfig",
    "QasmError",
    "StateVector",
    "build_kernel",
    "collision_angles",
    "compose",
    "embed",
    "emit_qasm",
    "gate",
    "kernel_unitary",
    "new_state",
    "parse_qasm",
    "run",
    "run_simulation",
    "step",
]
