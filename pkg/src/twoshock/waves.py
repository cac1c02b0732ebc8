"""Two-shock Riemann configurations and viscous shock profiles.

A two-shock configuration holds the far-field states, the intermediate state,
and the shock speeds satisfying the Rankine-Hugoniot relations with the Lax
ordering (v_minus > v_m < v_plus, u_minus > u_m > u_plus, sigma1 < 0 < sigma2).
Shock strengths are measured as pressure gaps.

Each viscous shock profile solves the scalar autonomous ODE obtained from the
first integral of the traveling-wave system,

    dv/dxi = -(v / sigma) * (sigma**2 * (v - v_left) + p(v) - p(v_left)),

anchored at the midpoint value v(0) = (v_left + v_right) / 2.  Profiles are
tabulated by an adaptive integrator and interpolated monotonically; all
derivatives are evaluated from the closed-form right-hand side, never from the
interpolant.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp
from scipy.interpolate import PchipInterpolator
from scipy.optimize import brentq

from .eos import GasLaw, StatePoint, dpressure, pressure, volume_from_pressure

__all__ = [
    "TwoShockConfig",
    "ShockProfile",
    "NoIntersectionError",
    "shock_speed",
    "construct_states",
    "intermediate_state",
    "profile_rhs",
    "profile_rhs_derivative",
    "solve_profile",
    "profile_second_derivative",
]

RH_TOL = 1e-12


class NoIntersectionError(ValueError):
    """The shock curves of the two end states do not meet with Lax ordering."""


@dataclass(frozen=True)
class TwoShockConfig:
    """End states, intermediate state, speeds and strengths of a two-shock pattern."""

    law: GasLaw
    v_minus: float
    u_minus: float
    v_m: float
    u_m: float
    v_plus: float
    u_plus: float
    sigma1: float
    sigma2: float
    delta1: float
    delta2: float

    def __post_init__(self):
        if not (self.v_minus > self.v_m and self.v_m < self.v_plus):
            raise ValueError("Lax ordering violated: need v_minus > v_m < v_plus")
        if not (self.u_minus > self.u_m > self.u_plus):
            raise ValueError("Lax ordering violated: need u_minus > u_m > u_plus")
        if not (self.sigma1 < 0.0 < self.sigma2):
            raise ValueError("shock speeds must satisfy sigma1 < 0 < sigma2")
        r = self.rh_residuals()
        if max(r) > RH_TOL:
            raise ValueError(f"Rankine-Hugoniot residuals too large: {r}")

    def rh_residuals(self):
        """Scaled Rankine-Hugoniot residuals (volume and momentum jump, per shock)."""
        law = self.law
        out = []
        for sigma, (vl, ul), (vr, ur) in (
            (self.sigma1, (self.v_minus, self.u_minus), (self.v_m, self.u_m)),
            (self.sigma2, (self.v_m, self.u_m), (self.v_plus, self.u_plus)),
        ):
            dv, du = vr - vl, ur - ul
            dp = pressure(law, vr) - pressure(law, vl)
            scale = max(1.0, abs(sigma), abs(dv), abs(du), abs(dp))
            out.append(abs(-sigma * dv - du) / scale)
            out.append(abs(-sigma * du + dp) / scale)
        return tuple(out)

    def sigma(self, family: int) -> float:
        _check_family(family)
        return self.sigma1 if family == 1 else self.sigma2

    def delta(self, family: int) -> float:
        _check_family(family)
        return self.delta1 if family == 1 else self.delta2

    def left_state(self, family: int) -> StatePoint:
        _check_family(family)
        if family == 1:
            return StatePoint(self.v_minus, self.u_minus)
        return StatePoint(self.v_m, self.u_m)

    def right_state(self, family: int) -> StatePoint:
        _check_family(family)
        if family == 1:
            return StatePoint(self.v_m, self.u_m)
        return StatePoint(self.v_plus, self.u_plus)


def _check_family(family):
    if family not in (1, 2):
        raise ValueError(f"shock family must be 1 or 2, got {family}")


def shock_speed(law: GasLaw, v_left, v_right, family: int) -> float:
    """Shock speed -(family 1) or +(family 2) sqrt(-(p(vR)-p(vL)) / (vR-vL))."""
    _check_family(family)
    if v_left == v_right:
        raise ValueError("shock must connect distinct volumes")
    ratio = -(pressure(law, v_right) - pressure(law, v_left)) / (v_right - v_left)
    if ratio <= 0.0:
        raise ValueError("states are not connected by a compressive shock")
    s = np.sqrt(ratio)
    return -s if family == 1 else s


def construct_states(law: GasLaw, v_plus: float, u_plus: float,
                     delta1: float, delta2: float) -> TwoShockConfig:
    """Build a two-shock configuration from (v_plus, u_plus) and pressure gaps.

    The intermediate pressure is p(v_m) = p(v_plus) + delta2 and the left
    pressure is p(v_minus) = p(v_m) - delta1 (the middle state carries the
    highest pressure, consistent with the Lax ordering).  Velocities follow
    from the Hugoniot relations.
    """
    if delta1 <= 0.0 or delta2 <= 0.0:
        raise ValueError("zero-strength shock: delta1 and delta2 must be positive")
    p_plus = pressure(law, v_plus)
    p_m = p_plus + delta2
    if p_m - delta1 <= 0.0:
        raise ValueError("delta1 pushes the left pressure out of positivity")
    v_m = volume_from_pressure(law, p_m)
    v_minus = volume_from_pressure(law, p_m - delta1)
    u_m = u_plus + np.sqrt(delta2 * (v_plus - v_m))
    u_minus = u_m + np.sqrt(delta1 * (v_minus - v_m))
    sigma1 = shock_speed(law, v_minus, v_m, 1)
    sigma2 = shock_speed(law, v_m, v_plus, 2)
    return TwoShockConfig(law, v_minus, u_minus, v_m, u_m, v_plus, u_plus,
                          sigma1, sigma2, delta1, delta2)


def intermediate_state(law: GasLaw, u_minus_state: StatePoint,
                       u_plus_state: StatePoint):
    """Intersect the 1-shock curve from the left state with the backward
    2-shock curve from the right state.

    Returns (v_m, u_m).  Raises NoIntersectionError when the curves do not
    meet with the strict Lax ordering.
    """
    vm_hi = min(u_minus_state.v, u_plus_state.v)
    p_minus = pressure(law, u_minus_state.v)
    p_plus = pressure(law, u_plus_state.v)

    def residual(vm):
        p_m = pressure(law, vm)
        u_from_left = u_minus_state.u - np.sqrt(
            max((p_m - p_minus) * (u_minus_state.v - vm), 0.0))
        u_from_right = u_plus_state.u + np.sqrt(
            max((p_m - p_plus) * (u_plus_state.v - vm), 0.0))
        return u_from_left - u_from_right

    hi = vm_hi * (1.0 - 1e-13)
    if residual(hi) <= 0.0:
        raise NoIntersectionError(
            "no two-shock solution: the shock curves do not intersect below "
            "the smaller end-state volume")
    lo = 0.9 * vm_hi
    while residual(lo) > 0.0:
        lo *= 0.5
        if lo < 1e-8 * vm_hi:
            raise NoIntersectionError("no sign change found on the Hugoniot curves")
    # bracket endpoints now have opposite residual signs
    v_m = brentq(residual, lo, hi, xtol=1e-15, rtol=8.9e-16, maxiter=200)
    u_m = u_minus_state.u - np.sqrt(
        (pressure(law, v_m) - p_minus) * (u_minus_state.v - v_m))
    return float(v_m), float(u_m)


def profile_rhs(law: GasLaw, v, sigma: float, v_left: float):
    """Closed-form dv/dxi of the traveling-wave first integral.

    Vanishes at both endpoint volumes; negative strictly between the endpoints
    for family 1 (sigma < 0), positive for family 2.
    """
    g = sigma * sigma * (v - v_left) + pressure(law, v) - pressure(law, v_left)
    return -(v / sigma) * g


def profile_rhs_derivative(law: GasLaw, v, sigma: float, v_left: float):
    """d/dv of profile_rhs, used for the chain-rule second derivative."""
    g = sigma * sigma * (v - v_left) + pressure(law, v) - pressure(law, v_left)
    dg = sigma * sigma + dpressure(law, v)
    return -(g + v * dg) / sigma


class ShockProfile:
    """Tabulated viscous shock profile with closed-form derivative evaluators.

    Outside the tabulated range the profile is truncated to its endpoint
    values, where the first and second derivatives are set to exactly zero so
    that profile-localized integrands vanish identically off the table.
    """

    def __init__(self, law: GasLaw, family: int, sigma: float,
                 left: StatePoint, right: StatePoint, delta: float,
                 xi_table: np.ndarray, v_table: np.ndarray):
        _check_family(family)
        self.law = law
        self.family = family
        self.sigma = float(sigma)
        self.left = left
        self.right = right
        self.delta = float(delta)
        self.xi_table = np.asarray(xi_table, dtype=float)
        self.v_table = np.asarray(v_table, dtype=float)
        if self.xi_table.ndim != 1 or np.any(np.diff(self.xi_table) <= 0.0):
            raise ValueError("xi_table must be strictly increasing")
        self.xi_min = float(self.xi_table[0])
        self.xi_max = float(self.xi_table[-1])
        self.p_left = float(pressure(law, left.v))
        self.p_right = float(pressure(law, right.v))
        self._interp = PchipInterpolator(self.xi_table, self.v_table)

    def _inside(self, xi):
        xi = np.asarray(xi, dtype=float)
        return (xi >= self.xi_min) & (xi <= self.xi_max)

    def v(self, xi):
        xi = np.asarray(xi, dtype=float)
        return self._interp(np.clip(xi, self.xi_min, self.xi_max))

    def dv(self, xi):
        return np.where(self._inside(xi),
                        profile_rhs(self.law, self.v(xi), self.sigma, self.left.v),
                        0.0)

    def d2v(self, xi):
        val = self.v(xi)
        f = profile_rhs(self.law, val, self.sigma, self.left.v)
        fp = profile_rhs_derivative(self.law, val, self.sigma, self.left.v)
        return np.where(self._inside(xi), fp * f, 0.0)

    def u(self, xi):
        return self.left.u - self.sigma * (self.v(xi) - self.left.v)

    def du(self, xi):
        return -self.sigma * self.dv(xi)

    def d2u(self, xi):
        return -self.sigma * self.d2v(xi)

    def h(self, xi):
        """Effective velocity of the profile, u - (ln v)_xi = u - v'/v."""
        return self.u(xi) - self.dv(xi) / self.v(xi)

    def p(self, xi):
        return pressure(self.law, self.v(xi))

    def dp(self, xi):
        """(p(v))_xi in closed form."""
        return dpressure(self.law, self.v(xi)) * self.dv(xi)

    def dh(self, xi):
        """(h)_xi = (p(v))_xi / sigma, the exact traveling-wave relation."""
        return self.dp(xi) / self.sigma

    def endpoint_rates(self):
        """Exponential approach rates |f'(v)| at the left and right endpoints."""
        rates = []
        for s in (self.left, self.right):
            rates.append(abs(profile_rhs_derivative(self.law, s.v, self.sigma,
                                                    self.left.v)))
        return tuple(rates)


def _family_endpoints(config: TwoShockConfig, family: int):
    return (config.left_state(family), config.right_state(family),
            config.sigma(family), config.delta(family))


def solve_profile(law: GasLaw, config: TwoShockConfig, family: int,
                  xi_max: float | None = None, tol: float = 1e-6,
                  rtol: float = 1e-10, anchor_value: float | None = None,
                  ) -> ShockProfile:
    """Integrate the profile ODE outward from the anchor until both endpoint
    values are approached within tol * delta (delta in pressure units).

    The anchor defaults to the midpoint value of the endpoint volumes, which
    fixes the translation of the heteroclinic orbit.  If xi_max is hit before
    the endpoint proximity event fires, a truncation warning reports the
    achieved distance.
    """
    if config.law != law:
        raise ValueError("gas law does not match the configuration")
    left, right, sigma, delta = _family_endpoints(config, family)
    v_lo, v_hi = min(left.v, right.v), max(left.v, right.v)
    anchor = 0.5 * (left.v + right.v) if anchor_value is None else float(anchor_value)
    if not (v_lo < anchor < v_hi):
        raise ValueError("anchor value must lie strictly between the endpoints")
    tol_v = tol * delta
    if tol_v >= min(anchor - v_lo, v_hi - anchor):
        raise ValueError("tolerance is too loose for this shock strength")

    rate_left = abs(profile_rhs_derivative(law, left.v, sigma, left.v))
    rate_right = abs(profile_rhs_derivative(law, right.v, sigma, left.v))
    if xi_max is None:
        span = abs(right.v - left.v)
        xi_max = 2.5 * np.log(span / tol_v) / min(rate_left, rate_right) + 20.0

    def odefun(_xi, y):
        return [profile_rhs(law, y[0], sigma, left.v)]

    sides = {}
    for direction, target in ((+1.0, right.v), (-1.0, left.v)):
        def close_to_endpoint(_xi, y, target=target):
            return abs(y[0] - target) - tol_v

        close_to_endpoint.terminal = True
        sol = solve_ivp(odefun, (0.0, direction * xi_max), [anchor],
                        method="RK45", rtol=rtol, atol=1e-14,
                        events=close_to_endpoint, dense_output=True)
        if not sol.success:
            raise RuntimeError(f"profile integration failed: {sol.message}")
        if sol.status != 1:
            achieved = abs(sol.y[0, -1] - target)
            warnings.warn(
                f"profile family {family} truncated at xi = {sol.t[-1]:.3g}; "
                f"|v - endpoint| = {achieved:.3e} (target {tol_v:.3e})",
                RuntimeWarning)
        sides[direction] = sol

    rate = max(rate_left, rate_right)
    xi_fwd, xi_bwd = sides[1.0].t[-1], sides[-1.0].t[-1]
    table_xi = []
    table_v = []
    for direction, end in ((-1.0, xi_bwd), (+1.0, xi_fwd)):
        n = int(np.clip(np.ceil(abs(end) * rate * 24.0), 64, 20000)) + 1
        xs = np.linspace(0.0, end, n)
        vs = sides[direction].sol(xs)[0]
        if direction < 0:
            xs, vs = xs[::-1][:-1], vs[::-1][:-1]  # drop duplicate anchor knot
        table_xi.append(xs)
        table_v.append(vs)
    xi_table = np.concatenate(table_xi)
    v_table = np.clip(np.concatenate(table_v), v_lo, v_hi)

    return ShockProfile(law, family, sigma, left, right, delta, xi_table, v_table)


def profile_second_derivative(profile: ShockProfile, xi):
    """Chain-rule second derivative of the profile; errors outside the table."""
    xi_arr = np.asarray(xi, dtype=float)
    if np.any(xi_arr < profile.xi_min) or np.any(xi_arr > profile.xi_max):
        raise ValueError("xi outside the tabulated profile range")
    return profile.d2v(xi_arr)
