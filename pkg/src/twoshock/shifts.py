"""Shift dynamics: rate evaluation, the shared Runge-Kutta update, and the
separation monitor.

The shift rates are weighted integrals of the pressure and volume
perturbations against each shock's pressure-profile derivative,

    Xdot_i = -(M / delta_i) * (Y_i1 + Y_i2),
    Y_i1 = (1 / sigma_i**2) * integral a (p(v_i))_x (p(v) - p(vref)) dx,
    Y_i2 = -integral a (p(v_i))_x (v - vref) dx,

using the exact relation (h_i)_x = (p(v_i))_x / sigma_i to avoid
differentiating the effective velocity numerically.  The integrands vanish
identically outside the profile support windows, so the quadrature is
restricted to them without changing its value.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .composite import CompositeWave
from .discrete import trapz_uniform
from .eos import dpressure, pressure
from .waves import TwoShockConfig

__all__ = ["ShiftConstants", "ShiftRates", "shift_rhs", "rk4_update",
           "SeparationStatus", "separation_monitor"]


@dataclass(frozen=True)
class ShiftConstants:
    """Drift gain M and the intermediate-state scales it is built from."""

    M: float
    sigma_m: float
    alpha_m: float

    @classmethod
    def from_config(cls, config: TwoShockConfig) -> "ShiftConstants":
        law = config.law
        gamma = law.gamma
        p_m = pressure(law, config.v_m)
        sigma_m = float(np.sqrt(-dpressure(law, config.v_m)))
        alpha_m = (gamma + 1.0) / (2.0 * gamma * sigma_m * p_m)
        M = 5.0 * (gamma + 1.0) / (8.0 * gamma * p_m) * (-dpressure(law, config.v_m)) ** 1.5
        return cls(M=float(M), sigma_m=sigma_m, alpha_m=float(alpha_m))


@dataclass
class ShiftRates:
    """Shift rates and the two integrals each one is assembled from."""

    Xdot1: float
    Xdot2: float
    Y11: float
    Y12: float
    Y21: float
    Y22: float


def shift_rhs(cw: CompositeWave, consts: ShiftConstants, x: np.ndarray,
              dx: float, v: np.ndarray, t: float, X1: float, X2: float
              ) -> ShiftRates:
    """Evaluate the shift rates for solution volume samples v at cell centers x.

    The integrands vanish bitwise for v equal to the composite reference
    sampled on the same centers, so the zero-perturbation state is an exact
    fixed point including quadrature.
    """
    gamma = cw.law.gamma
    cfg = cw.config
    lam = cw.weight_spec.lam
    prof1, prof2 = cw.profiles
    n = v.shape[0]
    ys = []
    for family in (1, 2):
        X = X1 if family == 1 else X2
        sl = cw.support_window(family, t, X, float(x[0]), dx, n)
        if sl.stop - sl.start < 2:
            ys.extend([0.0, 0.0])
            continue
        xw = x[sl]
        xi1 = xw - cfg.sigma1 * t - X1
        xi2 = xw - cfg.sigma2 * t - X2
        v1, v2 = prof1.v(xi1), prof2.v(xi2)
        p1, p2 = v1 ** -gamma, v2 ** -gamma
        a = (1.0 - lam * (p1 - prof1.p_left) / cfg.delta1) \
            + (1.0 - lam * (p2 - prof2.p_right) / cfg.delta2) - 1.0
        prof = prof1 if family == 1 else prof2
        vt, xi = (v1, xi1) if family == 1 else (v2, xi2)
        pvt = p1 if family == 1 else p2
        sigma = cfg.sigma(family)
        g_first = sigma * sigma * (vt - prof.left.v) + pvt - prof.p_left
        dvt = np.where((xi >= prof.xi_min) & (xi <= prof.xi_max),
                       -(vt / sigma) * g_first, 0.0)
        dpw = (-gamma * vt ** (-gamma - 1.0)) * dvt
        v_ref = v1 + v2 - cfg.v_m
        vw = v[sl]
        p_pert = vw ** -gamma - v_ref ** -gamma
        y1 = trapz_uniform(a * dpw * p_pert, dx) / (sigma * sigma)
        y2 = -trapz_uniform(a * dpw * (vw - v_ref), dx)
        ys.extend([y1, y2])
    y11, y12, y21, y22 = ys
    return ShiftRates(
        Xdot1=-(consts.M / cfg.delta1) * (y11 + y12),
        Xdot2=-(consts.M / cfg.delta2) * (y21 + y22),
        Y11=y11, Y12=y12, Y21=y21, Y22=y22)


def rk4_update(y, k1, k2, k3, k4, dt):
    """Classical 4-stage Runge-Kutta combination, shared by fields and shifts."""
    return y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


@dataclass
class SeparationStatus:
    """Margins of the well-separation property of the two shifted waves."""

    margin1: float
    margin2: float
    ok: bool


def separation_monitor(t: float, X1: float, X2: float,
                       config: TwoShockConfig) -> SeparationStatus:
    """Check X1 + sigma1 t <= sigma1 t / 2 and X2 + sigma2 t >= sigma2 t / 2.

    Returns the two margins (nonnegative when separation holds); flags a
    violation without aborting anything.
    """
    if t <= 0.0:
        raise ValueError("separation is monitored for t > 0")
    m1 = -0.5 * config.sigma1 * t - X1
    m2 = X2 + 0.5 * config.sigma2 * t
    return SeparationStatus(margin1=float(m1), margin2=float(m2),
                            ok=bool(m1 >= 0.0 and m2 >= 0.0))
