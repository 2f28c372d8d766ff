"""Classical ground truth: D1Q2 lattice Boltzmann stepping, moment-based
analytical checks, and a plain linear-combination-of-unitaries combiner."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np


class VelocityRangeError(ValueError):
    pass


def equilibrium_weights(u: float, cs2: float) -> tuple[float, float]:
    """Per-direction equilibrium factors (rightward, leftward): f_i = w_i * C."""
    if cs2 <= 0:
        raise VelocityRangeError(f"cs2 must be positive, got {cs2}")
    ratio = u / cs2
    w1 = 0.5 * (1.0 + ratio)
    w2 = 0.5 * (1.0 - ratio)
    if abs(w1) > 1.0 or abs(w2) > 1.0:
        raise VelocityRangeError(
            f"|u/cs2| must not exceed 1 (u={u}, cs2={cs2}); collision factors "
            f"({w1}, {w2}) fall outside [-1, 1]"
        )
    return w1, w2


def classical_lbm_step(C: Sequence[float], u: float, cs2: float) -> np.ndarray:
    """One collide-and-stream step with periodic boundaries (tau = 1)."""
    C = np.asarray(C, dtype=float)
    w1, w2 = equilibrium_weights(u, cs2)
    f1 = w1 * C
    f2 = w2 * C
    return np.roll(f1, 1) + np.roll(f2, -1)


def classical_trajectory(C0: Sequence[float], steps: int, u: float, cs2: float) -> list[np.ndarray]:
    out = [np.asarray(C0, dtype=float).copy()]
    for _ in range(steps):
        out.append(classical_lbm_step(out[-1], u, cs2))
    return out


@dataclass(frozen=True)
class AnalyticalReport:
    drift_rate: float
    expected_drift: float
    variance_slope: float
    expected_variance_slope: float
    mass_deviation: float
    centers: tuple[float, ...]
    variances: tuple[float, ...]

    @property
    def drift_error(self) -> float:
        return abs(self.drift_rate - self.expected_drift)

    @property
    def variance_rel_error(self) -> float:
        return abs(self.variance_slope - self.expected_variance_slope) / abs(
            self.expected_variance_slope
        )


def circular_moments(C: Sequence[float]) -> tuple[float, float]:
    """Center and variance on a periodic lattice, from the first Fourier mode.

    Exact for a wrapped normal profile: variance = -2 ln|z| / k^2.
    """
    C = np.asarray(C, dtype=float)
    M = C.size
    k = 2.0 * math.pi / M
    z = np.sum(C * np.exp(1j * k * np.arange(M))) / np.sum(C)
    center = (math.atan2(z.imag, z.real) / k) % M
    var = -2.0 * math.log(abs(z)) / k**2
    return center, var


def analytical_checks(
    trajectory: Sequence[Sequence[float]], u: float, cs2: float, transient: int | None = None
) -> AnalyticalReport:
    """Fit drift and variance growth per step and measure mass drift.

    Expected values are the continuum advection-diffusion ones: the center
    moves at ``u`` and the variance grows by ``2 * D = cs2`` per step.
    """
    if len(trajectory) < 3:
        raise ValueError("analytical_checks needs at least 3 snapshots")
    traj = [np.asarray(c, dtype=float) for c in trajectory]
    M = traj[0].size
    centers, variances = [], []
    for c in traj:
        m, v = circular_moments(c)
        centers.append(m)
        variances.append(v)
    # unwrap the center across the periodic boundary
    unwrapped = np.unwrap(np.array(centers) * 2 * math.pi / M) * M / (2 * math.pi)
    t = np.arange(len(traj), dtype=float)
    if transient is None:
        transient = min(5, len(traj) // 4)
    drift = float(np.polyfit(t, unwrapped, 1)[0])
    var_slope = float(np.polyfit(t[transient:], np.array(variances)[transient:], 1)[0])
    mass = np.array([c.sum() for c in traj])
    return AnalyticalReport(
        drift_rate=drift,
        expected_drift=float(u),
        variance_slope=var_slope,
        expected_variance_slope=float(cs2),
        mass_deviation=float(np.max(np.abs(mass - mass[0]))),
        centers=tuple(float(x) for x in unwrapped),
        variances=tuple(variances),
    )


def lcu_combine(coeffs: Sequence[complex], matrices: Sequence[np.ndarray]) -> np.ndarray:
    if len(coeffs) != len(matrices):
        raise ValueError(f"{len(coeffs)} coefficients for {len(matrices)} matrices")
    if not matrices:
        raise ValueError("lcu_combine needs at least one term")
    mats = [np.asarray(m, dtype=complex) for m in matrices]
    shape = mats[0].shape
    if len(shape) != 2 or shape[0] != shape[1]:
        raise ValueError(f"matrices must be square, got shape {shape}")
    for i, m in enumerate(mats):
        if m.shape != shape:
            raise ValueError(f"matrix {i} has shape {m.shape}, expected {shape}")
    out = np.zeros(shape, dtype=complex)
    for c, m in zip(coeffs, mats):
        out += c * m
    return out
