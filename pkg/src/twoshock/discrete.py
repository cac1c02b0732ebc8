"""Shared discrete operators.

The solver and every diagnostic functional must differentiate solution fields
with the same stencils and integrate with the same quadrature, so the energy
identity audits see a consistent discretization.  All operators act on
1D float arrays with one ghost value on each side where indicated.
"""

from __future__ import annotations

import numpy as np

__all__ = ["d0", "d2c", "trapz_uniform", "l2_norm", "h1_norm", "linf_norm"]


def d0(padded: np.ndarray, dx: float) -> np.ndarray:
    """Second-order central first derivative of a (n+2,) padded array -> (n,)."""
    return (padded[2:] - padded[:-2]) / (2.0 * dx)


def d2c(padded: np.ndarray, dx: float) -> np.ndarray:
    """Standard 3-point second derivative of a (n+2,) padded array -> (n,)."""
    return (padded[2:] - 2.0 * padded[1:-1] + padded[:-2]) / (dx * dx)


def trapz_uniform(values: np.ndarray, dx: float) -> float:
    """Trapezoid rule on a uniform grid (numpy pairwise summation order)."""
    v = np.asarray(values, dtype=float)
    if v.size < 2:
        return 0.0
    return float(dx * (v.sum() - 0.5 * (v[0] + v[-1])))


def l2_norm(values: np.ndarray, dx: float) -> float:
    """Discrete L2 norm via the midpoint rule on cell centers."""
    v = np.asarray(values, dtype=float)
    return float(np.sqrt(dx * np.sum(v * v)))


def h1_norm(values: np.ndarray, dx: float) -> float:
    """Discrete H1 norm: L2 plus the forward-difference derivative L2."""
    v = np.asarray(values, dtype=float)
    dvf = np.diff(v) / dx
    return float(np.sqrt(dx * np.sum(v * v) + dx * np.sum(dvf * dvf)))


def linf_norm(values: np.ndarray) -> float:
    v = np.asarray(values, dtype=float)
    return float(np.max(np.abs(v))) if v.size else 0.0
