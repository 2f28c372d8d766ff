"""Amplitude encoding of real non-negative unit vectors.

The target is split recursively on its most significant qubit: each node
of the binary tree gets an RY angle whose cosine of half equals the norm
of its left (bit = 0) half over the node's norm.  Level ``k`` is a
rotation on qubit ``n-1-k`` multiplexed over the ``k`` qubits above it,
lowered to alternating RY and CX gates along a Gray code.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .circuit import Kernel
from .statevector import GateInstruction, gate

NORM_TOL = 1e-10


class EncodingError(ValueError):
    pass


@dataclass(frozen=True)
class AngleTree:
    levels: tuple[tuple[float, ...], ...]

    @property
    def num_qubits(self) -> int:
        return len(self.levels)


def _check_target(target) -> np.ndarray:
    t = np.asarray(target, dtype=float).reshape(-1)
    n = t.size.bit_length() - 1
    if t.size < 2 or t.size != 1 << n:
        raise EncodingError(f"target length must be a power of two >= 2, got {t.size}")
    if not np.all(np.isfinite(t)):
        raise EncodingError("target contains non-finite entries")
    if np.any(t < 0):
        i = int(np.argmin(t))
        raise EncodingError(f"target entry {i} is negative ({t[i]!r})")
    norm = math.sqrt(float(np.dot(t, t)))
    if abs(norm - 1.0) > NORM_TOL:
        raise EncodingError(f"target must have unit norm, got {norm!r}")
    return t


def rotation_angles(target: Sequence[float]) -> AngleTree:
    t = _check_target(target)
    n = t.size.bit_length() - 1
    # norms[k] holds the 2^k subtree norms at depth k (prefix = top k bits)
    norms = [None] * (n + 1)
    norms[n] = t
    for k in range(n - 1, -1, -1):
        child = norms[k + 1].reshape(-1, 2)
        norms[k] = np.sqrt(child[:, 0] ** 2 + child[:, 1] ** 2)
    levels = []
    for k in range(n):
        # children of node j at depth k: index 2j (bit 0) and 2j+1 (bit 1)
        child = norms[k + 1].reshape(-1, 2)
        theta = 2.0 * np.arctan2(child[:, 1], child[:, 0])
        levels.append(tuple(float(a) for a in theta))
    return AngleTree(tuple(levels))


def _gray(i: int) -> int:
    return i ^ (i >> 1)


def multiplexed_ry(
    angles: Sequence[float], controls: Sequence[int], target: int
) -> list[GateInstruction]:
    """Uniformly controlled RY: rotate ``target`` by ``angles[j]`` when the
    controls spell ``j`` (controls[0] is the least significant bit)."""
    k = len(controls)
    if len(angles) != 1 << k:
        raise ValueError(f"{k} controls need {1 << k} angles, got {len(angles)}")
    if k == 0:
        return [gate("RY", target, theta=float(angles[0]))]
    size = 1 << k
    # sign of step i's rotation seen by control value j: (-1)^popcount(j & gray(i))
    signs = np.array(
        [[(-1) ** bin(j & _gray(i)).count("1") for i in range(size)] for j in range(size)],
        dtype=float,
    )
    thetas = signs.T @ np.asarray(angles, dtype=float) / size
    out: list[GateInstruction] = []
    for i in range(size):
        out.append(gate("RY", target, theta=float(thetas[i])))
        changed = _gray(i) ^ _gray((i + 1) % size)
        out.append(gate("CX", controls[changed.bit_length() - 1], target))
    return out


def encode_amplitudes(target: Sequence[float], name: str = "encoding") -> Kernel:
    tree = rotation_angles(target)
    n = tree.num_qubits
    insts: list[GateInstruction] = []
    for k, level in enumerate(tree.levels):
        tgt = n - 1 - k
        # node index bit b is qubit (n - k) + b
        controls = [n - k + b for b in range(k)]
        insts.extend(multiplexed_ry(level, controls, tgt))
    return Kernel(name, n, tuple(insts))
