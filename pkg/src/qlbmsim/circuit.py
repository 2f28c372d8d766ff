"""Kernels: immutable, named gate sequences over a fixed register width."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np
import scipy.sparse as sp

from .statevector import GateError, GateInstruction, StateVector

MAX_UNITARY_QUBITS = 10


class KernelError(ValueError):
    def __init__(self, message: str, index: int | None = None):
        super().__init__(message)
        self.index = index


@dataclass(frozen=True)
class Kernel:
    name: str
    num_qubits: int
    instructions: tuple[GateInstruction, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "instructions", tuple(self.instructions))
        if self.num_qubits < 1:
            raise KernelError(f"kernel {self.name!r}: num_qubits must be positive")
        for i, inst in enumerate(self.instructions):
            if not isinstance(inst, GateInstruction):
                raise KernelError(
                    f"kernel {self.name!r}: instruction {i} is not a GateInstruction",
                    index=i,
                )
            bad = [q for q in inst.qubits if q >= self.num_qubits]
            if bad:
                raise KernelError(
                    f"kernel {self.name!r}: instruction {i} ({inst}) references "
                    f"qubit {bad[0]} but the kernel has {self.num_qubits} qubits",
                    index=i,
                )

    def __len__(self) -> int:
        return len(self.instructions)

    def __iter__(self):
        return iter(self.instructions)

    def gate_counts(self) -> dict[str, int]:
        counts: dict[str, int] = {}
        for inst in self.instructions:
            counts[inst.kind] = counts.get(inst.kind, 0) + 1
        return counts


def build_kernel(
    name: str, num_qubits: int, instructions: Iterable[GateInstruction]
) -> Kernel:
    return Kernel(name, num_qubits, tuple(instructions))


def compose(parts: Sequence[Kernel], name: str | None = None) -> Kernel:
    if not parts:
        raise KernelError("compose needs at least one kernel")
    width = parts[0].num_qubits
    for k in parts[1:]:
        if k.num_qubits != width:
            raise KernelError(
                f"cannot compose {k.name!r} ({k.num_qubits} qubits) with "
                f"{parts[0].name!r} ({width} qubits)"
            )
    if name is None:
        name = parts[0].name if len(parts) == 1 else "+".join(k.name for k in parts)
    insts: list[GateInstruction] = []
    for k in parts:
        insts.extend(k.instructions)
    return Kernel(name, width, tuple(insts))


def embed(
    kernel: Kernel, num_qubits: int, qubit_map: Mapping[int, int] | None = None
) -> Kernel:
    """Re-target ``kernel`` onto a wider register, optionally relabelling qubits."""
    if qubit_map is None:
        qubit_map = {q: q for q in range(kernel.num_qubits)}
    insts = tuple(
        GateInstruction(inst.kind, tuple(qubit_map[q] for q in inst.qubits), inst.theta)
        for inst in kernel.instructions
    )
    return Kernel(kernel.name, num_qubits, insts)


def run(kernel: Kernel, state: StateVector) -> StateVector:
    if kernel.num_qubits != state.num_qubits:
        raise KernelError(
            f"kernel {kernel.name!r} has {kernel.num_qubits} qubits, "
            f"state has {state.num_qubits}"
        )
    for inst in kernel.instructions:
        state.apply(inst)
    return state


def _full_operator(inst: GateInstruction, num_qubits: int) -> sp.csr_matrix:
    """Sparse 2^n x 2^n operator of one instruction, built by basis-index
    arithmetic (independent of the simulator's tensor slicing)."""
    dim = 1 << num_qubits
    cols = np.arange(dim)
    ctrl_mask = 0
    for c in inst.controls:
        ctrl_mask |= 1 << c
    targets = inst.targets
    u = inst.matrix()
    active = (cols & ctrl_mask) == ctrl_mask

    local_in = np.zeros(dim, dtype=np.int64)
    clear = np.zeros(dim, dtype=np.int64) + cols
    for j, t in enumerate(targets):
        local_in |= ((cols >> t) & 1) << j
        clear &= ~(1 << t)

    rows_l, cols_l, vals_l = [], [], []
    # inactive columns map to themselves
    idle = cols[~active]
    rows_l.append(idle)
    cols_l.append(idle)
    vals_l.append(np.ones(idle.size, dtype=complex))
    act = cols[active]
    for out in range(1 << len(targets)):
        dest = clear[active].copy()
        for j, t in enumerate(targets):
            dest |= ((out >> j) & 1) << t
        vals = u[out, local_in[active]]
        keep = vals != 0
        rows_l.append(dest[keep])
        cols_l.append(act[keep])
        vals_l.append(vals[keep])
    return sp.csr_matrix(
        (np.concatenate(vals_l), (np.concatenate(rows_l), np.concatenate(cols_l))),
        shape=(dim, dim),
    )


def instruction_unitary(inst: GateInstruction, num_qubits: int) -> np.ndarray:
    for q in inst.qubits:
        if q >= num_qubits:
            raise GateError(f"qubit index {q} out of range for {num_qubits} qubits")
    return _full_operator(inst, num_qubits).toarray()


def kernel_unitary(kernel: Kernel) -> np.ndarray:
    """Dense unitary of the whole kernel (last instruction leftmost)."""
    n = kernel.num_qubits
    if n > MAX_UNITARY_QUBITS:
        raise KernelError(
            f"kernel_unitary is limited to {MAX_UNITARY_QUBITS} qubits, got {n}"
        )
    u = np.eye(1 << n, dtype=np.complex128)
    for inst in kernel.instructions:
        u = _full_operator(inst, n) @ u
    return np.asarray(u)
