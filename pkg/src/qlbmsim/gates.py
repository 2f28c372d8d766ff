"""Multi-qubit custom gates lowered to the basic gate set, and the
modular shift subcircuits built from them."""

from __future__ import annotations

import math
from typing import Sequence

from .circuit import Kernel, compose
from .statevector import GateInstruction, gate


class InsufficientAncillasError(ValueError):
    pass


def _width(num_qubits: int | None, *groups) -> int:
    used = []
    for g in groups:
        if isinstance(g, int):
            used.append(g)
        else:
            used.extend(g)
    need = max(used) + 1
    if num_qubits is None:
        return need
    if num_qubits < need:
        raise ValueError(f"register of {num_qubits} qubits cannot hold qubit {need - 1}")
    return num_qubits


def _distinct(*groups) -> None:
    flat: list[int] = []
    for g in groups:
        flat.extend([g] if isinstance(g, int) else g)
    if len(set(flat)) != len(flat):
        raise ValueError(f"qubit indices must be distinct, got {flat}")


def ccphase(c1: int, c2: int, target: int, lam: float, num_qubits: int | None = None) -> Kernel:
    """Doubly-controlled phase: e^{i lam} on |c1=1, c2=1, target=1>, else identity."""
    _distinct(c1, c2, target)
    n = _width(num_qubits, c1, c2, target)
    return Kernel(
        "ccphase",
        n,
        (
            gate("CPhase", c2, target, theta=lam / 2),
            gate("CX", c1, c2),
            gate("CPhase", c2, target, theta=-lam / 2),
            gate("CX", c1, c2),
            gate("CPhase", c1, target, theta=lam / 2),
        ),
    )


def cc_subspace_phase(
    c1: int, c2: int, target: int, lam: float, num_qubits: int | None = None
) -> Kernel:
    """Phase e^{i lam} on both target values when c1 = c2 = 1.

    Phase on |1>, flip, phase on the (former) |0>, flip back.
    """
    _distinct(c1, c2, target)
    n = _width(num_qubits, c1, c2, target)
    flip = Kernel("toffoli", n, (gate("Toffoli", c1, c2, target),))
    half = ccphase(c1, c2, target, lam, n)
    return compose([half, flip, half, flip], name="cc_subspace_phase")


def mcx(
    controls: Sequence[int],
    target: int,
    ancillas: Sequence[int] = (),
    num_qubits: int | None = None,
) -> Kernel:
    """Multi-controlled X through a V-shaped Toffoli cascade.

    With at least k-1 ancillas the AND of all k controls lands on the last
    used ancilla and a CX copies it to the target.  With exactly k-2 the
    last cascade Toffoli writes straight onto the target.  Ancillas are
    returned to their input values.
    """
    controls = list(controls)
    ancillas = list(ancillas)
    k = len(controls)
    if k < 1:
        raise ValueError("mcx needs at least one control")
    _distinct(controls, target, ancillas)
    n = _width(num_qubits, controls, target, ancillas)
    if k == 1:
        return Kernel("cx", n, (gate("CX", controls[0], target),))
    if k == 2:
        return Kernel("toffoli", n, (gate("Toffoli", controls[0], controls[1], target),))
    if len(ancillas) < k - 2:
        raise InsufficientAncillasError(
            f"{k}-control X needs at least {k - 2} ancillas, got {len(ancillas)}"
        )

    if len(ancillas) >= k - 1:
        anc = ancillas[: k - 1]
        compute = [gate("Toffoli", controls[0], controls[1], anc[0])]
        for i in range(2, k):
            compute.append(gate("Toffoli", controls[i], anc[i - 2], anc[i - 1]))
        middle = [gate("CX", anc[-1], target)]
    else:
        anc = ancillas[: k - 2]
        compute = [gate("Toffoli", controls[0], controls[1], anc[0])]
        for i in range(2, k - 1):
            compute.append(gate("Toffoli", controls[i], anc[i - 2], anc[i - 1]))
        middle = [gate("Toffoli", controls[k - 1], anc[-1], target)]
    return Kernel(f"mcx{k}", n, tuple(compute + middle + compute[::-1]))


def _shift_steps(position_qubits, selector, ancillas, n) -> list[Kernel]:
    # highest bit first: bit j flips when every lower bit (and the selector) is 1
    steps = []
    for j in range(len(position_qubits) - 1, -1, -1):
        controls = list(position_qubits[:j]) + [selector]
        steps.append(mcx(controls, position_qubits[j], ancillas, n))
    return steps


def right_shift(
    position_qubits: Sequence[int],
    selector: int,
    ancillas: Sequence[int] = (),
    num_qubits: int | None = None,
) -> Kernel:
    """|x> -> |x+1 mod M> where the selector is |0>, identity where it is |1>."""
    position_qubits = list(position_qubits)
    _distinct(position_qubits, selector, ancillas)
    n = _width(num_qubits, position_qubits, selector, ancillas)
    flip = Kernel("x", n, (gate("X", selector),))
    steps = _shift_steps(position_qubits, selector, ancillas, n)
    return compose([flip, *steps, flip], name="right_shift")


def left_shift(
    position_qubits: Sequence[int],
    selector: int,
    ancillas: Sequence[int] = (),
    num_qubits: int | None = None,
) -> Kernel:
    """|x> -> |x-1 mod M> where the selector is |1>, identity where it is |0>."""
    position_qubits = list(position_qubits)
    _distinct(position_qubits, selector, ancillas)
    n = _width(num_qubits, position_qubits, selector, ancillas)
    # decrement is the increment run backwards
    steps = _shift_steps(position_qubits, selector, ancillas, n)[::-1]
    return compose(steps, name="left_shift")


def adjoint(kernel: Kernel) -> Kernel:
    """Inverse kernel: reversed order, angles negated."""
    inv = []
    for inst in reversed(kernel.instructions):
        if inst.kind == "S":
            inv.append(gate("Phase", *inst.qubits, theta=-math.pi / 2))
        elif inst.kind == "T":
            inv.append(gate("Phase", *inst.qubits, theta=-math.pi / 4))
        elif inst.theta is not None:
            inv.append(GateInstruction(inst.kind, inst.qubits, -inst.theta))
        else:
            inv.append(inst)
    return Kernel(kernel.name + "_dg", kernel.num_qubits, tuple(inv))
