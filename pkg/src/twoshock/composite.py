"""Shifted composite wave, weight functions, cutoffs, and interaction fields.

The composite wave superposes the two shifted viscous shocks minus the
intermediate state.  The weight is a = a1 + a2 - 1 built from the shock
pressure profiles, normalized so each factor lies in (1 - lam, 1] and
sigma_i * (a_i)_x > 0.  Cutoff functions phi_i form a partition of unity whose
ramp spans the gap between the half-way points of the two shifted shocks.
All evaluators are pure functions of (t, x, X1, X2) given immutable profiles.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .eos import dpressure, pressure
from .waves import ShockProfile, TwoShockConfig

__all__ = [
    "ShiftPair",
    "WeightSpec",
    "default_lambda",
    "cutoff_pair",
    "ReferenceFields",
    "CompositeWave",
]


@dataclass
class ShiftPair:
    """Spatial shifts of the two waves and their current rates."""

    X1: float = 0.0
    X2: float = 0.0
    Xdot1: float = 0.0
    Xdot2: float = 0.0


def default_lambda(delta1: float, delta2: float) -> float:
    """Default weight amplitude min(sqrt(delta1), sqrt(delta2)) / 2."""
    return 0.5 * min(np.sqrt(delta1), np.sqrt(delta2))


@dataclass(frozen=True)
class WeightSpec:
    """Weight amplitude lam; the composite weight then lies in (1-2*lam, 1]."""

    lam: float

    def validate(self, delta1: float, delta2: float, strength_ratio: float = 1.0,
                 sqrt_coeff: float = 1.0) -> None:
        if not 0.0 <= self.lam < 0.25:
            raise ValueError(
                f"weight amplitude must lie in [0, 1/4), got {self.lam}")
        if self.lam == 0.0:
            return  # unweighted relative entropy, a == 1
        lo = strength_ratio * max(delta1, delta2)
        hi = sqrt_coeff * min(np.sqrt(delta1), np.sqrt(delta2))
        if not lo <= self.lam <= hi:
            # the asymptotic window delta << lam < sqrt(delta) cannot be met
            # for moderate strengths; identities hold for any lam in [0, 1/4)
            warnings.warn(
                f"weight amplitude {self.lam:.4g} outside the asymptotic "
                f"window [{lo:.4g}, {hi:.4g}]", RuntimeWarning)


def cutoff_pair(t: float, x, X1: float, X2: float,
                sigma1: float, sigma2: float):
    """Partition of unity localizing near each wave.

    phi1 is 1 left of (X1 + sigma1*t)/2, 0 right of (X2 + sigma2*t)/2 and
    linear in between; phi2 = 1 - phi1.  When the two knots coincide or cross
    (degenerate ramp, e.g. t = 0) phi1 steps at their midpoint.
    """
    x = np.asarray(x, dtype=float)
    k1 = 0.5 * (X1 + sigma1 * t)
    k2 = 0.5 * (X2 + sigma2 * t)
    if k2 > k1:
        phi1 = np.clip((k2 - x) / (k2 - k1), 0.0, 1.0)
    else:
        phi1 = np.where(x < 0.5 * (k1 + k2), 1.0, 0.0)
    return phi1, 1.0 - phi1


@dataclass
class ReferenceFields:
    """Closed-form reference-wave arrays sampled on a grid at one (t, X1, X2).

    Solution-independent: everything here comes from the two profiles, the
    weight, and the cutoffs.  Derivatives are exact (profile ODE chain rule).
    """

    t: float
    X1: float
    X2: float
    v1: np.ndarray          # shifted 1-shock volume
    v2: np.ndarray
    dv1: np.ndarray         # d/dx of each shifted shock volume
    dv2: np.ndarray
    d2v1: np.ndarray
    d2v2: np.ndarray
    v: np.ndarray           # composite volume v1 + v2 - v_m
    u: np.ndarray           # composite velocity
    h: np.ndarray           # composite effective velocity
    du: np.ndarray          # (composite u)_x
    d2u: np.ndarray
    p: np.ndarray           # p(composite v)
    dp: np.ndarray          # (p(composite v))_x, closed form
    p1: np.ndarray          # p(v1), p(v2)
    p2: np.ndarray
    dp1: np.ndarray         # (p(v_i))_x
    dp2: np.ndarray
    dh1: np.ndarray         # (h_i)_x = (p(v_i))_x / sigma_i
    dh2: np.ndarray
    a1: np.ndarray
    a2: np.ndarray
    a: np.ndarray
    da1: np.ndarray         # (a_i)_x = -(lam/delta_i) (p(v_i))_x
    da2: np.ndarray
    phi1: np.ndarray
    phi2: np.ndarray
    E1: np.ndarray
    E2: np.ndarray
    E3: np.ndarray


class CompositeWave:
    """The two profiles plus weight/cutoff machinery, evaluated anywhere.

    Immutable after construction; safe to share across concurrent readers.
    """

    def __init__(self, profile1: ShockProfile, profile2: ShockProfile,
                 weight: WeightSpec, config: TwoShockConfig):
        if profile1.family != 1 or profile2.family != 2:
            raise ValueError("profiles must be the 1- and 2-family waves")
        for prof in (profile1, profile2):
            if prof.law != config.law:
                raise ValueError("profile gas law does not match configuration")
        if not np.isclose(profile1.sigma, config.sigma1, rtol=1e-12) or \
           not np.isclose(profile2.sigma, config.sigma2, rtol=1e-12):
            raise ValueError("profiles do not share this configuration's speeds")
        weight.validate(config.delta1, config.delta2)
        self.profiles = (profile1, profile2)
        self.weight_spec = weight
        self.config = config
        self.law = config.law
        # outer-state pressures anchor each weight factor at 1 on its far side
        self._p_outer = (pressure(self.law, config.v_minus),
                         pressure(self.law, config.v_plus))

    def profile(self, family: int) -> ShockProfile:
        return self.profiles[family - 1]

    def xi(self, family: int, t: float, x, X: float):
        """Traveling-frame coordinate of one shifted wave."""
        return np.asarray(x, dtype=float) - self.config.sigma(family) * t - X

    # -- composite state -------------------------------------------------

    def eval_vu(self, t: float, x, X1: float = 0.0, X2: float = 0.0):
        p1, p2 = self.profiles
        xi1, xi2 = self.xi(1, t, x, X1), self.xi(2, t, x, X2)
        v = p1.v(xi1) + p2.v(xi2) - self.config.v_m
        u = p1.u(xi1) + p2.u(xi2) - self.config.u_m
        return v, u

    def eval_vh(self, t: float, x, X1: float = 0.0, X2: float = 0.0):
        p1, p2 = self.profiles
        xi1, xi2 = self.xi(1, t, x, X1), self.xi(2, t, x, X2)
        v = p1.v(xi1) + p2.v(xi2) - self.config.v_m
        h = p1.h(xi1) + p2.h(xi2) - self.config.u_m
        return v, h

    # -- weight ----------------------------------------------------------

    def weight_factor(self, family: int, t: float, x, X: float):
        prof = self.profile(family)
        lam = self.weight_spec.lam
        p_val = prof.p(self.xi(family, t, x, X))
        return 1.0 - lam * (p_val - self._p_outer[family - 1]) / prof.delta

    def weight(self, t: float, x, X1: float = 0.0, X2: float = 0.0):
        return (self.weight_factor(1, t, x, X1)
                + self.weight_factor(2, t, x, X2) - 1.0)

    def weight_factor_derivative(self, family: int, t: float, x, X: float):
        prof = self.profile(family)
        return -(self.weight_spec.lam / prof.delta) * prof.dp(self.xi(family, t, x, X))

    # -- cutoffs ----------------------------------------------------------

    def cutoffs(self, t: float, x, X1: float = 0.0, X2: float = 0.0):
        return cutoff_pair(t, x, X1, X2, self.config.sigma1, self.config.sigma2)

    # -- interaction error fields -----------------------------------------

    def interaction_errors(self, t: float, x, X1: float = 0.0, X2: float = 0.0):
        """Fields measuring how far the composite is from an exact solution.

        E1 = -(ln v)_xx + sum_i (ln v_i)_xx
        E2 = p(v)_x - sum_i p(v_i)_x
        E3 = -(u_x / v)_x + sum_i ((u_i)_x / v_i)_x
        with v, u the composite and v_i, u_i the shifted single waves; all
        derivatives in closed form.  Each field vanishes identically once the
        wave supports separate.
        """
        r = self.reference_fields(t, x, X1, X2)
        return r.E1, r.E2, r.E3

    # -- everything at once ------------------------------------------------

    def reference_fields(self, t: float, x, X1: float = 0.0, X2: float = 0.0
                         ) -> ReferenceFields:
        cfg = self.config
        law = self.law
        lam = self.weight_spec.lam
        prof1, prof2 = self.profiles
        xi1, xi2 = self.xi(1, t, x, X1), self.xi(2, t, x, X2)

        v1, v2 = prof1.v(xi1), prof2.v(xi2)
        dv1, dv2 = prof1.dv(xi1), prof2.dv(xi2)
        d2v1, d2v2 = prof1.d2v(xi1), prof2.d2v(xi2)
        v = v1 + v2 - cfg.v_m
        u = prof1.u(xi1) + prof2.u(xi2) - cfg.u_m
        h = prof1.h(xi1) + prof2.h(xi2) - cfg.u_m
        du = -cfg.sigma1 * dv1 - cfg.sigma2 * dv2
        d2u = -cfg.sigma1 * d2v1 - cfg.sigma2 * d2v2

        p1v, p2v = pressure(law, v1), pressure(law, v2)
        dp1 = dpressure(law, v1) * dv1
        dp2 = dpressure(law, v2) * dv2
        pv = pressure(law, v)
        dvc = dv1 + dv2
        dp = dpressure(law, v) * dvc

        a1 = 1.0 - lam * (p1v - self._p_outer[0]) / cfg.delta1
        a2 = 1.0 - lam * (p2v - self._p_outer[1]) / cfg.delta2
        da1 = -(lam / cfg.delta1) * dp1
        da2 = -(lam / cfg.delta2) * dp2

        phi1, phi2 = self.cutoffs(t, x, X1, X2)

        # E1: -(ln v)_xx + sum (ln v_i)_xx, all chain-rule exact
        ln_xx = (d2v1 + d2v2) / v - (dvc / v) ** 2
        ln1_xx = d2v1 / v1 - (dv1 / v1) ** 2
        ln2_xx = d2v2 / v2 - (dv2 / v2) ** 2
        E1 = -ln_xx + ln1_xx + ln2_xx
        E2 = dp - dp1 - dp2
        # E3: -(u_x / v)_x + sum ((u_i)_x / v_i)_x
        flux_c = (d2u * v - du * dvc) / (v * v)
        flux_1 = (-cfg.sigma1) * (d2v1 * v1 - dv1 * dv1) / (v1 * v1)
        flux_2 = (-cfg.sigma2) * (d2v2 * v2 - dv2 * dv2) / (v2 * v2)
        E3 = -flux_c + flux_1 + flux_2

        return ReferenceFields(
            t=t, X1=X1, X2=X2,
            v1=v1, v2=v2, dv1=dv1, dv2=dv2, d2v1=d2v1, d2v2=d2v2,
            v=v, u=u, h=h, du=du, d2u=d2u,
            p=pv, dp=dp, p1=p1v, p2=p2v, dp1=dp1, dp2=dp2,
            dh1=dp1 / cfg.sigma1, dh2=dp2 / cfg.sigma2,
            a1=a1, a2=a2, a=a1 + a2 - 1.0, da1=da1, da2=da2,
            phi1=phi1, phi2=phi2, E1=E1, E2=E2, E3=E3)

    # -- support windows ---------------------------------------------------

    def support_window(self, family: int, t: float, X: float,
                       x0: float, dx: float, n: int):
        """Index slice of the cell-center grid covering one profile's table.

        x0 is the first cell-center coordinate.  Profile derivatives vanish
        identically outside the returned slice, so profile-localized integrals
        restricted to it equal full-grid ones.
        """
        prof = self.profile(family)
        center = self.config.sigma(family) * t + X
        lo = center + prof.xi_min - dx
        hi = center + prof.xi_max + dx
        j_lo = int(np.clip(np.floor((lo - x0) / dx), 0, n))
        j_hi = int(np.clip(np.ceil((hi - x0) / dx) + 1, 0, n))
        return slice(j_lo, j_hi)
