"""Full-state simulator over a little-endian qubit register.

Qubit ``i`` is bit ``i`` of the basis index, so qubit 0 is the least
significant bit.  Gates mutate the amplitude array in place.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

MAX_QUBITS = 30

_SQ2 = 1.0 / math.sqrt(2.0)

# Gate kind -> (number of control qubits, number of target qubits, takes angle)
GATE_ARITY: dict[str, tuple[int, int, bool]] = {
    "X": (0, 1, False),
    "Y": (0, 1, False),
    "Z": (0, 1, False),
    "H": (0, 1, False),
    "S": (0, 1, False),
    "T": (0, 1, False),
    "Phase": (0, 1, True),
    "RX": (0, 1, True),
    "RY": (0, 1, True),
    "RZ": (0, 1, True),
    "CX": (1, 1, False),
    "CZ": (1, 1, False),
    "CPhase": (1, 1, True),
    "SWAP": (0, 2, False),
    "Toffoli": (2, 1, False),
}


class RegisterTooLargeError(ValueError):
    pass


class GateError(ValueError):
    """Malformed gate instruction: wrong arity, bad index, missing angle."""


def base_matrix(kind: str, theta: float | None = None) -> np.ndarray:
    """Unitary acting on the target qubit(s) once all controls are set.

    For SWAP the 4x4 matrix is indexed little-endian over (q0, q1).
    """
    if kind in ("X", "CX", "Toffoli"):
        return np.array([[0, 1], [1, 0]], dtype=complex)
    if kind == "Y":
        return np.array([[0, -1j], [1j, 0]], dtype=complex)
    if kind in ("Z", "CZ"):
        return np.array([[1, 0], [0, -1]], dtype=complex)
    if kind == "H":
        return np.array([[_SQ2, _SQ2], [_SQ2, -_SQ2]], dtype=complex)
    if kind == "S":
        return np.array([[1, 0], [0, 1j]], dtype=complex)
    if kind == "T":
        return np.array([[1, 0], [0, cmath.exp(1j * math.pi / 4)]], dtype=complex)
    if kind in ("Phase", "CPhase"):
        return np.array([[1, 0], [0, cmath.exp(1j * theta)]], dtype=complex)
    if kind == "RX":
        c, s = math.cos(theta / 2), math.sin(theta / 2)
        return np.array([[c, -1j * s], [-1j * s, c]], dtype=complex)
    if kind == "RY":
        c, s = math.cos(theta / 2), math.sin(theta / 2)
        return np.array([[c, -s], [s, c]], dtype=complex)
    if kind == "RZ":
        return np.array(
            [[cmath.exp(-0.5j * theta), 0], [0, cmath.exp(0.5j * theta)]], dtype=complex
        )
    if kind == "SWAP":
        return np.array(
            [[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex
        )
    raise GateError(f"unknown gate kind {kind!r}")


@dataclass(frozen=True)
class GateInstruction:
    """One gate application.  For controlled gates the controls come first
    in ``qubits`` and the target last (``CX(c, t)``, ``Toffoli(c1, c2, t)``)."""

    kind: str
    qubits: tuple[int, ...]
    theta: float | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "qubits", tuple(int(q) for q in self.qubits))
        if self.kind not in GATE_ARITY:
            raise GateError(f"unknown gate kind {self.kind!r}")
        nc, nt, has_angle = GATE_ARITY[self.kind]
        if len(self.qubits) != nc + nt:
            raise GateError(
                f"{self.kind} expects {nc + nt} qubit(s), got {len(self.qubits)}"
            )
        if len(set(self.qubits)) != len(self.qubits):
            raise GateError(f"{self.kind} operands must be distinct: {self.qubits}")
        if any(q < 0 for q in self.qubits):
            raise GateError(f"negative qubit index in {self.qubits}")
        if has_angle:
            if self.theta is None:
                raise GateError(f"{self.kind} requires an angle")
            object.__setattr__(self, "theta", float(self.theta))
        elif self.theta is not None:
            raise GateError(f"{self.kind} takes no angle")

    @property
    def controls(self) -> tuple[int, ...]:
        return self.qubits[: GATE_ARITY[self.kind][0]]

    @property
    def targets(self) -> tuple[int, ...]:
        return self.qubits[GATE_ARITY[self.kind][0] :]

    def matrix(self) -> np.ndarray:
        return base_matrix(self.kind, self.theta)

    def __str__(self) -> str:
        args = ", ".join(f"q{q}" for q in self.qubits)
        if self.theta is None:
            return f"{self.kind}({args})"
        return f"{self.kind}[{self.theta!r}]({args})"


def gate(kind: str, *qubits: int, theta: float | None = None) -> GateInstruction:
    return GateInstruction(kind, tuple(qubits), theta)


class StateVector:
    def __init__(self, num_qubits: int, amps: np.ndarray | None = None):
        if not 1 <= num_qubits <= MAX_QUBITS:
            raise RegisterTooLargeError(
                f"num_qubits must be in [1, {MAX_QUBITS}], got {num_qubits}"
            )
        self.num_qubits = num_qubits
        if amps is None:
            amps = np.zeros(1 << num_qubits, dtype=np.complex128)
            amps[0] = 1.0
        else:
            amps = np.ascontiguousarray(amps, dtype=np.complex128)
            if amps.shape != (1 << num_qubits,):
                raise ValueError(
                    f"expected {1 << num_qubits} amplitudes, got shape {amps.shape}"
                )
        self.amps = amps

    def copy(self) -> StateVector:
        return StateVector(self.num_qubits, self.amps.copy())

    def norm(self) -> float:
        return float(np.linalg.norm(self.amps))

    def _tensor(self) -> np.ndarray:
        # axis k of the tensor view is qubit n-1-k
        return self.amps.reshape((2,) * self.num_qubits)

    def apply(self, inst: GateInstruction) -> StateVector:
        n = self.num_qubits
        for q in inst.qubits:
            if q >= n:
                raise GateError(f"qubit index {q} out of range for {n} qubits")
        psi = self._tensor()
        index: list = [slice(None)] * n
        for c in inst.controls:
            index[n - 1 - c] = 1
        targets = inst.targets
        u = inst.matrix()
        if len(targets) == 1:
            ax = n - 1 - targets[0]
            i0 = list(index)
            i1 = list(index)
            i0[ax] = 0
            i1[ax] = 1
            i0, i1 = tuple(i0), tuple(i1)
            a = psi[i0].copy()
            b = psi[i1]
            if u[0, 1] == 0 and u[1, 0] == 0:
                if u[0, 0] != 1:
                    psi[i0] = u[0, 0] * a
                psi[i1] = u[1, 1] * b
            else:
                b = b.copy()
                psi[i0] = u[0, 0] * a + u[0, 1] * b
                psi[i1] = u[1, 0] * a + u[1, 1] * b
        else:
            # two-qubit target block, local index = bit(t0) + 2*bit(t1)
            t0, t1 = n - 1 - targets[0], n - 1 - targets[1]
            slots = []
            for local in range(4):
                idx = list(index)
                idx[t0] = local & 1
                idx[t1] = (local >> 1) & 1
                slots.append(tuple(idx))
            old = [psi[s].copy() for s in slots]
            for row, s in enumerate(slots):
                acc = None
                for col in range(4):
                    coef = u[row, col]
                    if coef != 0:
                        term = coef * old[col]
                        acc = term if acc is None else acc + term
                psi[s] = 0 if acc is None else acc
        return self

    def amplitude(self, basis_index: int) -> complex:
        if not 0 <= basis_index < self.amps.size:
            raise IndexError(
                f"basis index {basis_index} out of range for {self.num_qubits} qubits"
            )
        return complex(self.amps[basis_index])

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amps) ** 2

    def subspace_amplitudes(
        self, fixed_bits: Mapping[int, int] | Iterable[tuple[int, int]]
    ) -> np.ndarray:
        """Amplitudes of basis states whose ``fixed_bits`` qubits hold the given
        values, ordered by the little-endian index of the remaining qubits."""
        n = self.num_qubits
        pairs = fixed_bits.items() if isinstance(fixed_bits, Mapping) else fixed_bits
        index: list = [slice(None)] * n
        seen: set[int] = set()
        for q, bit in pairs:
            if q in seen:
                raise ValueError(f"qubit {q} fixed more than once")
            seen.add(q)
            if not 0 <= q < n:
                raise IndexError(f"qubit index {q} out of range for {n} qubits")
            if bit not in (0, 1):
                raise ValueError(f"bit value for qubit {q} must be 0 or 1, got {bit}")
            index[n - 1 - q] = bit
        sub = self._tensor()[tuple(index)]
        return np.array(sub, dtype=np.complex128).reshape(-1)

    def __repr__(self) -> str:
        return f"StateVector(num_qubits={self.num_qubits})"


def new_state(num_qubits: int) -> StateVector:
    return StateVector(num_qubits)


def apply(state: StateVector, inst: GateInstruction) -> StateVector:
    return state.apply(inst)


def amplitude(state: StateVector, basis_index: int) -> complex:
    return state.amplitude(basis_index)


def probabilities(state: StateVector) -> np.ndarray:
    return state.probabilities()


def subspace_amplitudes(state: StateVector, fixed_bits) -> np.ndarray:
    return state.subspace_amplitudes(fixed_bits)


def from_amplitudes(amps: Sequence[complex]) -> StateVector:
    amps = np.asarray(amps, dtype=np.complex128)
    n = int(amps.size).bit_length() - 1
    if amps.size != 1 << n:
        raise ValueError(f"amplitude count {amps.size} is not a power of two")
    return StateVector(n, amps.copy())
