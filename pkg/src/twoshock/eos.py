"""Gamma-law pressure model and the relative quantities used by the energy method.

All functions accept floats or numpy arrays for the volume arguments and are
pure, so they can be evaluated concurrently.  The gas is barotropic with
p(v) = v**-gamma (pressure coefficient and viscosity normalized to 1).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "GasLaw",
    "StatePoint",
    "pressure",
    "dpressure",
    "d2pressure",
    "sound_speed",
    "volume_from_pressure",
    "internal_energy",
    "rel_pressure",
    "rel_internal",
    "rel_entropy",
]


@dataclass(frozen=True)
class GasLaw:
    """Barotropic gamma-law gas: p(v) = b * v**-gamma, with b = mu = 1."""

    gamma: float
    b: float = 1.0
    mu: float = 1.0

    def __post_init__(self):
        if not self.gamma > 1.0:
            raise ValueError(f"gamma must be > 1, got {self.gamma}")
        if self.b != 1.0 or self.mu != 1.0:
            raise ValueError("b and mu are normalized to 1")


@dataclass(frozen=True)
class StatePoint:
    """A fluid state (specific volume, velocity)."""

    v: float
    u: float

    def __post_init__(self):
        if not self.v > 0.0:
            raise ValueError(f"specific volume must be positive, got {self.v}")


def _check_volume(v):
    arr = np.asarray(v, dtype=float)
    if arr.size == 0 or np.any(arr <= 0.0) or not np.all(np.isfinite(arr)):
        raise ValueError("specific volume must be positive and finite")


def pressure(law: GasLaw, v):
    """p(v) = v**-gamma; strictly decreasing and convex on v > 0."""
    _check_volume(v)
    return v ** (-law.gamma)


def dpressure(law: GasLaw, v):
    """dp/dv = -gamma * v**-(gamma+1)."""
    _check_volume(v)
    return -law.gamma * v ** (-law.gamma - 1.0)


def d2pressure(law: GasLaw, v):
    """d2p/dv2 = gamma*(gamma+1) * v**-(gamma+2)."""
    _check_volume(v)
    return law.gamma * (law.gamma + 1.0) * v ** (-law.gamma - 2.0)


def sound_speed(law: GasLaw, v):
    """Lagrangian sound speed sqrt(-p'(v))."""
    _check_volume(v)
    return np.sqrt(law.gamma) * v ** (-(law.gamma + 1.0) / 2.0)


def volume_from_pressure(law: GasLaw, p):
    """Invert the pressure law: v = p**(-1/gamma)."""
    arr = np.asarray(p, dtype=float)
    if np.any(arr <= 0.0) or not np.all(np.isfinite(arr)):
        raise ValueError("pressure must be positive and finite")
    return p ** (-1.0 / law.gamma)


def internal_energy(law: GasLaw, v):
    """Internal energy Q(v) = v**(1-gamma) / (gamma-1); satisfies Q'(v) = -p(v)."""
    _check_volume(v)
    return v ** (1.0 - law.gamma) / (law.gamma - 1.0)


def rel_pressure(law: GasLaw, v, w):
    """Relative pressure p(v|w) = p(v) - p(w) - p'(w) (v-w).

    Nonnegative by convexity of p, and zero iff v == w.
    """
    _check_volume(v)
    _check_volume(w)
    return pressure(law, v) - pressure(law, w) - dpressure(law, w) * (v - w)


def rel_internal(law: GasLaw, v, w):
    """Relative internal energy Q(v|w) = Q(v) - Q(w) - Q'(w) (v-w), with Q' = -p."""
    _check_volume(v)
    _check_volume(w)
    return internal_energy(law, v) - internal_energy(law, w) + pressure(law, w) * (v - w)


def rel_entropy(law: GasLaw, state: StatePoint, ref: StatePoint):
    """Relative entropy eta(U|Ubar) = |u - ubar|**2 / 2 + Q(v|vbar).

    Locally quadratic distance between states; zero iff the states coincide.
    """
    du = state.u - ref.u
    return 0.5 * du * du + rel_internal(law, state.v, ref.v)
