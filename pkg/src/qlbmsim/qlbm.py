"""D1Q2 quantum lattice Boltzmann solver for 1D advection-diffusion.

Register layout (little-endian): position qubits ``0..n-1`` with
``n = log2(M)``, the direction selector at ``n``, the collision ancilla at
``n+1`` and the multi-controlled-X ancilla pool after it.  Each time step
re-encodes the concentration on a fresh register, runs encoding,
collision, propagation and macroscopic kernels, and reads the
post-selected amplitudes back out.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from functools import lru_cache
from typing import Sequence

import numpy as np

from . import gates
from .circuit import Kernel, compose, embed, run
from .reference import VelocityRangeError, classical_trajectory
from .stateprep import encode_amplitudes
from .statevector import gate, new_state

DEFAULT_CS2 = 1.0
MIN_SITES = 16
NEGATIVE_GUARD = 1e-9


class ConfigError(ValueError):
    pass


class CircuitReadoutError(RuntimeError):
    """Post-selected amplitudes are not what a correct circuit produces."""


@dataclass(frozen=True)
class LatticeConfig:
    M: int
    u: float = 0.0
    cs2: float = DEFAULT_CS2
    mcx_ancillas: int | None = None

    def __post_init__(self) -> None:
        M = self.M
        if not isinstance(M, (int, np.integer)) or M < 1 or M & (M - 1):
            raise ConfigError(f"sites must be a power of two, got {M}")
        if M < MIN_SITES:
            raise ConfigError(f"sites must be at least {MIN_SITES}, got {M}")
        if self.cs2 <= 0:
            raise ConfigError(f"cs2 must be positive, got {self.cs2}")
        need = max(self.position_bits - 2, 0)
        if self.mcx_ancillas is None:
            object.__setattr__(self, "mcx_ancillas", max(self.position_bits - 1, 0))
        elif self.mcx_ancillas < need:
            raise ConfigError(
                f"{self.position_bits} position qubits need at least {need} mcx ancillas"
            )

    @property
    def position_bits(self) -> int:
        return int(self.M).bit_length() - 1

    @property
    def position_qubits(self) -> tuple[int, ...]:
        return tuple(range(self.position_bits))

    @property
    def selector(self) -> int:
        return self.position_bits

    @property
    def ancilla(self) -> int:
        return self.position_bits + 1

    @property
    def mcx_pool(self) -> tuple[int, ...]:
        start = self.position_bits + 2
        return tuple(range(start, start + self.mcx_ancillas))

    @property
    def working_qubits(self) -> int:
        return self.position_bits + 1

    @property
    def num_qubits(self) -> int:
        return self.position_bits + 2 + self.mcx_ancillas


@dataclass(frozen=True)
class ConcentrationField:
    values: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        v = np.array(self.values, dtype=float).reshape(-1)
        if not np.all(np.isfinite(v)):
            raise ValueError("concentration contains non-finite values")
        if np.any(v < 0):
            raise ValueError(f"concentration must be non-negative, min is {v.min()!r}")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.values))

    @property
    def mass(self) -> float:
        return float(self.values.sum())

    def __len__(self) -> int:
        return self.values.size


@dataclass(frozen=True)
class CollisionAngles:
    lam1: float
    lam2: float
    d1: float
    d2: float


def collision_angles(u: float, cs2: float = DEFAULT_CS2) -> CollisionAngles:
    if cs2 <= 0:
        raise VelocityRangeError(f"cs2 must be positive, got {cs2}")
    d1 = (1.0 + u / cs2) / 2.0
    d2 = (1.0 - u / cs2) / 2.0
    if abs(d1) > 1.0 or abs(d2) > 1.0:
        raise VelocityRangeError(
            f"velocity out of range: u={u}, cs2={cs2} gives collision factors "
            f"({d1}, {d2}); need |u/cs2| <= 1"
        )
    return CollisionAngles(math.acos(d1), math.acos(d2), d1, d2)


def build_collision(cfg: LatticeConfig, angles: CollisionAngles) -> Kernel:
    """Ancilla-0 block = diag(cos lam1 on selector 0, cos lam2 on selector 1)."""
    n = cfg.num_qubits
    anc, sel, tgt = cfg.ancilla, cfg.selector, cfg.position_qubits[0]
    parts = [Kernel("h", n, (gate("H", anc),))]
    # (ancilla value, selector value, angle)
    blocks = [
        (0, 0, angles.lam1),
        (0, 1, angles.lam2),
        (1, 0, -angles.lam1),
        (1, 1, -angles.lam2),
    ]
    flipped = {anc: False, sel: False}
    for anc_val, sel_val, lam in blocks:
        flips = []
        for q, val in ((anc, anc_val), (sel, sel_val)):
            want = val == 0
            if flipped[q] != want:
                flips.append(gate("X", q))
                flipped[q] = want
        if flips:
            parts.append(Kernel("x", n, tuple(flips)))
        parts.append(gates.cc_subspace_phase(anc, sel, tgt, lam, n))
    restore = tuple(gate("X", q) for q in (anc, sel) if flipped[q])
    if restore:
        parts.append(Kernel("x", n, restore))
    parts.append(Kernel("h", n, (gate("H", anc),)))
    return compose(parts, name="collision")


def build_propagation(cfg: LatticeConfig) -> Kernel:
    n = cfg.num_qubits
    pos, sel, pool = cfg.position_qubits, cfg.selector, cfg.mcx_pool
    return compose(
        [gates.right_shift(pos, sel, pool, n), gates.left_shift(pos, sel, pool, n)],
        name="propagation",
    )


def build_macroscopic(cfg: LatticeConfig) -> Kernel:
    return Kernel(
        "macroscopic",
        cfg.num_qubits,
        (gate("SWAP", cfg.selector, cfg.ancilla), gate("H", cfg.ancilla)),
    )


@lru_cache(maxsize=64)
def _solver_kernel(cfg: LatticeConfig, angles: CollisionAngles) -> Kernel:
    split = Kernel("selector_split", cfg.num_qubits, (gate("H", cfg.selector),))
    return compose(
        [split, build_collision(cfg, angles), build_propagation(cfg), build_macroscopic(cfg)],
        name="solver",
    )


def step_kernel(C: ConcentrationField | Sequence[float], cfg: LatticeConfig,
                angles: CollisionAngles | None = None) -> Kernel:
    """Full single-step circuit, encoding of ``C`` included."""
    values = C.values if isinstance(C, ConcentrationField) else np.asarray(C, dtype=float)
    if values.size != cfg.M:
        raise ConfigError(f"field has {values.size} sites, lattice has {cfg.M}")
    norm = float(np.linalg.norm(values))
    if norm == 0.0:
        raise ValueError("cannot encode an all-zero concentration field")
    if angles is None:
        angles = collision_angles(cfg.u, cfg.cs2)
    enc = embed(encode_amplitudes(values / norm), cfg.num_qubits)
    return compose([enc, _solver_kernel(cfg, angles)], name="qlbm_step")


def readout_amplitudes(state, cfg: LatticeConfig) -> np.ndarray:
    """Amplitudes over position with selector, ancilla and mcx pool all |0>."""
    fixed = {cfg.selector: 0, cfg.ancilla: 0}
    fixed.update({q: 0 for q in cfg.mcx_pool})
    return state.subspace_amplitudes(fixed)


def step(C_t: ConcentrationField, cfg: LatticeConfig,
         angles: CollisionAngles | None = None) -> ConcentrationField:
    if not isinstance(C_t, ConcentrationField):
        C_t = ConcentrationField(C_t)
    kernel = step_kernel(C_t, cfg, angles)
    state = run(kernel, new_state(cfg.num_qubits))
    a = readout_amplitudes(state, cfg)
    worst_imag = float(np.max(np.abs(a.imag)))
    if worst_imag > NEGATIVE_GUARD:
        raise CircuitReadoutError(f"readout has imaginary residue {worst_imag:.3e}")
    re = a.real
    if np.any(re < -NEGATIVE_GUARD):
        raise CircuitReadoutError(f"readout amplitude {re.min():.3e} is negative")
    # amplitude factors: 1/|C| encoding, 1/sqrt2 selector split, 1/sqrt2 final H
    scale = 2.0 * C_t.norm
    return ConcentrationField(np.clip(re, 0.0, None) * scale)


def run_simulation(C_0: ConcentrationField | Sequence[float], steps: int, cfg: LatticeConfig,
                   angles: CollisionAngles | None = None) -> list[ConcentrationField]:
    if steps < 0:
        raise ValueError(f"steps must be non-negative, got {steps}")
    if not isinstance(C_0, ConcentrationField):
        C_0 = ConcentrationField(C_0)
    out = [C_0]
    for _ in range(steps):
        out.append(step(out[-1], cfg, angles))
    return out


@dataclass(frozen=True)
class ValidationResult:
    per_step: tuple[float, ...]
    quantum: tuple[np.ndarray, ...] = field(repr=False)
    classical: tuple[np.ndarray, ...] = field(repr=False)

    @property
    def global_max(self) -> float:
        return max(self.per_step) if self.per_step else 0.0


def validate_against_classical(C_0, steps: int, cfg: LatticeConfig,
                               angles: CollisionAngles | None = None) -> ValidationResult:
    quantum = [c.values for c in run_simulation(C_0, steps, cfg, angles)]
    classical = classical_trajectory(quantum[0], steps, cfg.u, cfg.cs2)
    diffs = tuple(float(np.max(np.abs(q - c))) for q, c in zip(quantum, classical))
    return ValidationResult(diffs, tuple(quantum), tuple(classical))


def perturbed(angles: CollisionAngles, delta: float) -> CollisionAngles:
    """Shift lam1 by ``delta`` (fault injection for validation tests)."""
    return replace(angles, lam1=angles.lam1 + delta)
