"""Energy-method functionals: weighted relative entropy, good terms, the full
term-by-term decomposition of its time derivative, localized variables, and
the weighted Poincare inequality check.

Solution fields are differentiated with the solver's stencils and reference
waves with closed forms, so the only inconsistency between the evolution and
the diagnostics is the solver's own truncation error.  The decomposition
satisfies three exact algebraic identities at quadrature precision:

  * Y_i equals the sum of its six parts,
  * the shift rates equal -(M/delta_i) (Y_i1 + Y_i2) with the same quadrature,
  * completing the square in the (h, p) coupling turns the raw bad/good split
    into the B/G split without residual.

The audited evolution identity is

  d/dt int a eta(U|Uref) dx = sum_i Xdot_i Y_i + B - G,
  B = B1 + ... + B5 + S1 + S2,   G = Gcal1 + Gcal2 + Dcal,

for the (v, h) form of the system, exact in the continuum; its discrete
residual shrinks at the solver's order.
"""

from __future__ import annotations

import copy
from dataclasses import dataclass, fields as dataclass_fields

import numpy as np

from .discrete import d0, d2c, h1_norm, l2_norm, linf_norm, trapz_uniform
from .eos import dpressure, internal_energy, pressure
from .pde import FieldState, Simulator

__all__ = [
    "GoodTerms",
    "Decomposition",
    "DiagnosticsFrame",
    "LocalizedPerturbation",
    "FRAME_COLUMNS",
    "weighted_rel_entropy",
    "good_terms",
    "decomposition",
    "compute_frame",
    "identity_audit",
    "AuditResult",
    "localize",
    "poincare_check",
    "zeroth_order_terms",
    "write_frames_csv",
    "read_frames_csv",
]


class _Context:
    """Shared per-frame arrays (reference fields plus discrete solution fields).

    Perturbation derivatives apply the solver's stencils to the difference
    between the solution and the sampled reference, so every perturbation
    array is exactly zero when the state equals the composite wave.  The
    reference-only weight fields ((v_i)_x, (a_i)_x, (h_i)_x, interaction
    fields) keep their closed forms.
    """

    def __init__(self, sim: Simulator, state: FieldState):
        cw, grid = sim.cw, sim.grid
        law = cw.law
        self.sim = sim
        self.state = state
        self.dx = grid.dx
        self.x = grid.centers
        xg_left, xg_right = grid.ghost_centers()
        x_pad = np.concatenate(([xg_left], self.x, [xg_right]))
        r_pad = cw.reference_fields(state.t, x_pad, state.X1, state.X2)
        self.r_pad = r_pad
        self.r = r = _interior_view(r_pad)
        vp = np.concatenate(([r_pad.v[0]], state.v, [r_pad.v[-1]]))
        up = np.concatenate(([r_pad.u[0]], state.u, [r_pad.u[-1]]))
        p_pad = pressure(law, vp)
        p_ref_pad = pressure(law, r_pad.v)
        self.p_sol = p_pad[1:-1]
        self.dv = state.v - r.v
        self.du = state.u - r.u
        self.dp = self.p_sol - r.p
        # h-perturbation against the discrete image of the reference
        # h = h_1 + h_2 - u_m (NOT u_ref - (ln v_ref)_x: the superposed waves
        # do not commute with the logarithm, the gap is the interaction field)
        self.dh = self.du - d0(np.log(vp) - np.log(r_pad.v1) - np.log(r_pad.v2),
                               grid.dx)
        self.dpdx = d0(p_pad - p_ref_pad, grid.dx)
        self.dudx = d0(up - r_pad.u, grid.dx)
        self.duxx = d2c(up - r_pad.u, grid.dx)
        dp_ref = dpressure(law, r.v)
        self.p_rel = self.p_sol - r.p - dp_ref * self.dv
        self.q_rel = internal_energy(law, state.v) - internal_energy(law, r.v) \
            + r.p * self.dv
        self.eta = 0.5 * self.dh * self.dh + self.q_rel
        self.gamma = law.gamma
        self.rates = sim.shift_rates(state)

    def trapz(self, values):
        return trapz_uniform(values, self.dx)


def _interior_view(r_pad):
    """Reference fields restricted to the interior cells of a padded sample."""
    r = copy.copy(r_pad)
    for name in ("v1", "v2", "dv1", "dv2", "d2v1", "d2v2", "v", "u", "h",
                 "du", "d2u", "p", "dp", "p1", "p2", "dp1", "dp2", "dh1",
                 "dh2", "a1", "a2", "a", "da1", "da2", "phi1", "phi2",
                 "E1", "E2", "E3"):
        setattr(r, name, getattr(r_pad, name)[1:-1])
    return r


@dataclass
class GoodTerms:
    """Sign-definite functionals; every field is nonnegative."""

    g1: float        # sum_i int |(a_i)_x| |h-pert - p-pert/sigma_i|^2
    gs_vol: float    # sum_i int |(v_i)_x| |phi_i (v - vref)|^2
    gs_press: float  # sum_i int |(v_i)_x| |phi_i (p(v) - p(vref))|^2
    d: float         # int |d/dx (p(v) - p(vref))|^2
    d1: float        # int |(u - uref)_x|^2
    d2: float        # int |(u - uref)_xx|^2
    gcal1: float     # sum_i (sigma_i/2) int (a_i)_x |h-pert - p-pert/sigma_i|^2
    gcal2: float     # sum_i sigma_i int (a_i)_x Q(v|vref)
    dcal: float      # int (a / (gamma p(v))) |d/dx (p(v)-p(vref))|^2


@dataclass
class Decomposition:
    """Every named term of the decomposed entropy production."""

    y11: float
    y12: float
    y13: float
    y14: float
    y15: float
    y16: float
    y21: float
    y22: float
    y23: float
    y24: float
    y25: float
    y26: float
    y1: float              # definitional Y_1 (weight-flux + linearized drift)
    y2: float
    b1: float
    b2: float
    b3: float
    b4: float
    b5: float
    s1: float
    s2: float
    gcal1: float
    gcal2: float
    dcal: float
    ysum_residual1: float  # Y_i - sum_j Y_ij (algebraic, ~1e-16)
    ysum_residual2: float
    recomb_residual: float  # (Jbad - Jgood) - (B - G) after completing the square
    xdot1: float
    xdot2: float
    y11_shift: float       # the shift module's own quadrature of Y_11, Y_12 ...
    y12_shift: float
    y21_shift: float
    y22_shift: float

    @property
    def bad_total(self) -> float:
        return self.b1 + self.b2 + self.b3 + self.b4 + self.b5 + self.s1 + self.s2

    @property
    def good_total(self) -> float:
        return self.gcal1 + self.gcal2 + self.dcal

    @property
    def production(self) -> float:
        """Right-hand side of the audited identity."""
        return self.xdot1 * self.y1 + self.xdot2 * self.y2 \
            + self.bad_total - self.good_total


def weighted_rel_entropy(sim: Simulator, state: FieldState) -> float:
    """Trapezoid integral of a * (|h - href|^2 / 2 + Q(v|vref))."""
    ctx = _Context(sim, state)
    return ctx.trapz(ctx.r.a * ctx.eta)


def composite_fixed_point(sim: Simulator) -> FieldState:
    """State whose (v, h) image equals the composite reference exactly.

    v is the sampled composite volume; u is adjusted by the discrete
    interaction gap so the derived effective velocity reproduces the
    superposed reference h_1 + h_2 - u_m on the grid.  Every functional of
    this state vanishes identically.
    """
    grid = sim.grid
    xg_left, xg_right = grid.ghost_centers()
    x_pad = np.concatenate(([xg_left], grid.centers, [xg_right]))
    r_pad = sim.cw.reference_fields(0.0, x_pad, 0.0, 0.0)
    gap = d0(np.log(r_pad.v) - np.log(r_pad.v1) - np.log(r_pad.v2), grid.dx)
    return FieldState(t=0.0, v=r_pad.v[1:-1].copy(), u=r_pad.u[1:-1] + gap)


def good_terms(sim: Simulator, state: FieldState, ctx: _Context | None = None
               ) -> GoodTerms:
    ctx = ctx or _Context(sim, state)
    r = ctx.r
    cfg = sim.cw.config
    g1 = gs_vol = gs_press = gcal1 = gcal2 = 0.0
    for sigma, da, dvt, phi in ((cfg.sigma1, r.da1, r.dv1, r.phi1),
                                (cfg.sigma2, r.da2, r.dv2, r.phi2)):
        z = ctx.dh - ctx.dp / sigma
        g1 += ctx.trapz(np.abs(da) * z * z)
        gcal1 += 0.5 * sigma * ctx.trapz(da * z * z)
        gcal2 += sigma * ctx.trapz(da * ctx.q_rel)
        gs_vol += ctx.trapz(np.abs(dvt) * (phi * ctx.dv) ** 2)
        gs_press += ctx.trapz(np.abs(dvt) * (phi * ctx.dp) ** 2)
    d = ctx.trapz(ctx.dpdx * ctx.dpdx)
    d1 = ctx.trapz(ctx.dudx * ctx.dudx)
    d2 = ctx.trapz(ctx.duxx * ctx.duxx)
    dcal = ctx.trapz(r.a / (ctx.gamma * ctx.p_sol) * ctx.dpdx * ctx.dpdx)
    return GoodTerms(g1=g1, gs_vol=gs_vol, gs_press=gs_press, d=d, d1=d1, d2=d2,
                     gcal1=gcal1, gcal2=gcal2, dcal=dcal)


def decomposition(sim: Simulator, state: FieldState, ctx: _Context | None = None
                  ) -> Decomposition:
    ctx = ctx or _Context(sim, state)
    r = ctx.r
    cfg = sim.cw.config
    law = sim.cw.law
    gp = ctx.gamma * ctx.p_sol

    terms = {}
    jbad_coupling = 0.0
    jgood_quadratic = 0.0
    b1 = b2 = b3 = b4 = 0.0
    gcal1 = gcal2 = 0.0
    for i, (sigma, da, dvt, vt, dh_ref) in enumerate(
            ((cfg.sigma1, r.da1, r.dv1, r.v1, r.dh1),
             (cfg.sigma2, r.da2, r.dv2, r.v2, r.dh2)), start=1):
        z_minus = ctx.dh - ctx.dp / sigma
        z_plus = ctx.dh + ctx.dp / sigma
        y1 = ctx.trapz(r.a * dh_ref * ctx.dp) / sigma
        y2 = -ctx.trapz(r.a * dpressure(law, vt) * dvt * ctx.dv)
        y3 = ctx.trapz(r.a * dh_ref * z_minus)
        y4 = -ctx.trapz(r.a * (dpressure(law, r.v) - dpressure(law, vt))
                        * dvt * ctx.dv)
        y5 = -0.5 * ctx.trapz(da * z_minus * z_plus)
        y6 = -ctx.trapz(da * ctx.q_rel) \
            - ctx.trapz(da * ctx.dp * ctx.dp) / (2.0 * sigma * sigma)
        ydef = -ctx.trapz(da * ctx.eta) \
            + ctx.trapz(r.a * (dh_ref * ctx.dh
                               - dpressure(law, r.v) * dvt * ctx.dv))
        terms[f"y{i}1"] = y1
        terms[f"y{i}2"] = y2
        terms[f"y{i}3"] = y3
        terms[f"y{i}4"] = y4
        terms[f"y{i}5"] = y5
        terms[f"y{i}6"] = y6
        terms[f"y{i}"] = ydef
        terms[f"ysum_residual{i}"] = ydef - (y1 + y2 + y3 + y4 + y5 + y6)

        jbad_coupling += ctx.trapz(da * ctx.dp * ctx.dh)
        jgood_quadratic += 0.5 * sigma * ctx.trapz(da * ctx.dh * ctx.dh)
        b1 += ctx.trapz(da * ctx.dp * ctx.dp) / (2.0 * sigma)
        b2 += sigma * ctx.trapz(r.a * dvt * ctx.p_rel)
        b3 += -ctx.trapz(da * (ctx.dp / gp) * ctx.dpdx)
        b4 += ctx.trapz(da * ctx.dp * ctx.dp * r.dp / (gp * r.p))
        gcal1 += 0.5 * sigma * ctx.trapz(da * z_minus * z_minus)
        gcal2 += sigma * ctx.trapz(da * ctx.q_rel)

    b5 = ctx.trapz(r.a * ctx.dpdx * (ctx.dp / (gp * r.p)) * r.dp)
    s1 = ctx.trapz(r.a * ctx.dp * r.E1)
    s2 = -ctx.trapz(r.a * ctx.dh * r.E2)
    dcal = ctx.trapz(r.a / gp * ctx.dpdx * ctx.dpdx)

    jbad = jbad_coupling + b2 + b3 + b4 + b5 + s1 + s2
    jgood = jgood_quadratic + gcal2 + dcal
    recomb = (jbad - jgood) - ((b1 + b2 + b3 + b4 + b5 + s1 + s2)
                               - (gcal1 + gcal2 + dcal))

    rates = ctx.rates
    return Decomposition(
        y11=terms["y11"], y12=terms["y12"], y13=terms["y13"], y14=terms["y14"],
        y15=terms["y15"], y16=terms["y16"],
        y21=terms["y21"], y22=terms["y22"], y23=terms["y23"], y24=terms["y24"],
        y25=terms["y25"], y26=terms["y26"],
        y1=terms["y1"], y2=terms["y2"],
        b1=b1, b2=b2, b3=b3, b4=b4, b5=b5, s1=s1, s2=s2,
        gcal1=gcal1, gcal2=gcal2, dcal=dcal,
        ysum_residual1=terms["ysum_residual1"],
        ysum_residual2=terms["ysum_residual2"],
        recomb_residual=recomb,
        xdot1=rates.Xdot1, xdot2=rates.Xdot2,
        y11_shift=rates.Y11, y12_shift=rates.Y12,
        y21_shift=rates.Y21, y22_shift=rates.Y22)


@dataclass
class DiagnosticsFrame:
    """One time record of norms, shifts, and every energy functional."""

    t: float
    X1: float
    X2: float
    Xdot1: float
    Xdot2: float
    l2_v: float
    l2_u: float
    l2_h: float
    h1_v: float
    h1_u: float
    h1_h: float
    linf_v: float
    linf_u: float
    linf_h: float
    weighted_entropy: float
    entropy: float
    g1: float
    gs_vol: float
    gs_press: float
    d: float
    d1: float
    d2: float
    gcal1: float
    gcal2: float
    dcal: float
    y11: float
    y12: float
    y13: float
    y14: float
    y15: float
    y16: float
    y21: float
    y22: float
    y23: float
    y24: float
    y25: float
    y26: float
    y1: float
    y2: float
    b1: float
    b2: float
    b3: float
    b4: float
    b5: float
    s1: float
    s2: float
    ysum_residual1: float
    ysum_residual2: float
    recomb_residual: float
    sep_margin1: float
    sep_margin2: float
    ia_sup1: float
    ia_sup2: float
    ia_int1: float
    ia_int2: float
    ia_cross: float
    ib_sup1: float
    ib_sup2: float
    ib_int1: float
    ib_int2: float
    min_v: float
    max_v: float
    audit_lhs: float = np.nan
    audit_rhs: float = np.nan
    audit_residual: float = np.nan
    audit_rel: float = np.nan

    @property
    def production(self) -> float:
        return self.Xdot1 * self.y1 + self.Xdot2 * self.y2 \
            + (self.b1 + self.b2 + self.b3 + self.b4 + self.b5
               + self.s1 + self.s2) \
            - (self.gcal1 + self.gcal2 + self.dcal)


FRAME_COLUMNS = tuple(f.name for f in dataclass_fields(DiagnosticsFrame))


def compute_frame(sim: Simulator, state: FieldState) -> DiagnosticsFrame:
    ctx = _Context(sim, state)
    r = ctx.r
    cfg = sim.cw.config
    gt = good_terms(sim, state, ctx)
    dec = decomposition(sim, state, ctx)

    dx = ctx.dx
    wre = ctx.trapz(r.a * ctx.eta)
    re = ctx.trapz(ctx.eta)

    abs_dv1, abs_dv2 = np.abs(r.dv1), np.abs(r.dv2)
    gap1 = np.abs(r.v2 - cfg.v_m)   # |vref - v1| for the 1-wave
    gap2 = np.abs(r.v1 - cfg.v_m)
    cross = abs_dv1 * abs_dv2

    return DiagnosticsFrame(
        t=state.t, X1=state.X1, X2=state.X2,
        Xdot1=dec.xdot1, Xdot2=dec.xdot2,
        l2_v=l2_norm(ctx.dv, dx), l2_u=l2_norm(ctx.du, dx),
        l2_h=l2_norm(ctx.dh, dx),
        h1_v=h1_norm(ctx.dv, dx), h1_u=h1_norm(ctx.du, dx),
        h1_h=h1_norm(ctx.dh, dx),
        linf_v=linf_norm(ctx.dv), linf_u=linf_norm(ctx.du),
        linf_h=linf_norm(ctx.dh),
        weighted_entropy=wre, entropy=re,
        g1=gt.g1, gs_vol=gt.gs_vol, gs_press=gt.gs_press,
        d=gt.d, d1=gt.d1, d2=gt.d2,
        gcal1=gt.gcal1, gcal2=gt.gcal2, dcal=gt.dcal,
        y11=dec.y11, y12=dec.y12, y13=dec.y13, y14=dec.y14, y15=dec.y15,
        y16=dec.y16,
        y21=dec.y21, y22=dec.y22, y23=dec.y23, y24=dec.y24, y25=dec.y25,
        y26=dec.y26,
        y1=dec.y1, y2=dec.y2,
        b1=dec.b1, b2=dec.b2, b3=dec.b3, b4=dec.b4, b5=dec.b5,
        s1=dec.s1, s2=dec.s2,
        ysum_residual1=dec.ysum_residual1, ysum_residual2=dec.ysum_residual2,
        recomb_residual=dec.recomb_residual,
        sep_margin1=-0.5 * cfg.sigma1 * state.t - state.X1,
        sep_margin2=state.X2 + 0.5 * cfg.sigma2 * state.t,
        ia_sup1=float(np.max(abs_dv1 * gap1)),
        ia_sup2=float(np.max(abs_dv2 * gap2)),
        ia_int1=trapz_uniform(abs_dv1 * gap1, dx),
        ia_int2=trapz_uniform(abs_dv2 * gap2, dx),
        ia_cross=trapz_uniform(cross, dx),
        ib_sup1=float(np.max(r.phi2 * abs_dv1)),
        ib_sup2=float(np.max(r.phi1 * abs_dv2)),
        ib_int1=trapz_uniform(r.phi2 * abs_dv1, dx),
        ib_int2=trapz_uniform(r.phi1 * abs_dv2, dx),
        min_v=float(np.min(state.v)), max_v=float(np.max(state.v)))


@dataclass
class AuditResult:
    """Per-frame residuals of the entropy-production identity."""

    times: np.ndarray
    lhs: np.ndarray       # centered d/dt of the weighted relative entropy
    rhs: np.ndarray       # shift production + B - G
    residual: np.ndarray
    rel: np.ndarray
    rel_l1: float         # sum |residual| / sum max(|lhs|, |rhs|)
    rel_max: float


def identity_audit(frames, frame_dt: float, fill: bool = True) -> AuditResult:
    """Audit d/dt int a eta dx against the decomposed production.

    frames must be uniformly spaced in time by frame_dt; needs at least three.
    When fill is true the interior frames' audit_* fields are populated.
    """
    if len(frames) < 3:
        raise ValueError("identity audit needs at least three frames")
    t = np.array([f.t for f in frames])
    if not np.allclose(np.diff(t), frame_dt, rtol=1e-9, atol=1e-12):
        raise ValueError("frames are not uniformly spaced")
    s = np.array([f.weighted_entropy for f in frames])
    prod = np.array([f.production for f in frames])
    lhs = (s[2:] - s[:-2]) / (2.0 * frame_dt)
    rhs = prod[1:-1]
    residual = lhs - rhs
    denom = np.maximum(np.abs(lhs), np.abs(rhs))
    rel = np.abs(residual) / np.where(denom > 0.0, denom, 1.0)
    rel_l1 = float(np.sum(np.abs(residual)) / max(np.sum(denom), 1e-300))
    if fill:
        for k, frame in enumerate(frames[1:-1]):
            frame.audit_lhs = float(lhs[k])
            frame.audit_rhs = float(rhs[k])
            frame.audit_residual = float(residual[k])
            frame.audit_rel = float(rel[k])
    return AuditResult(times=t[1:-1], lhs=lhs, rhs=rhs, residual=residual,
                       rel=rel, rel_l1=rel_l1, rel_max=float(np.max(rel)))


@dataclass
class LocalizedPerturbation:
    """Cutoff pressure perturbation of one wave in its unit-interval variable."""

    family: int
    y: np.ndarray
    w: np.ndarray
    jacobian: np.ndarray   # dy/dxi > 0 at the retained samples


def localize(sim: Simulator, state: FieldState, family: int
             ) -> LocalizedPerturbation:
    """Change of variables mapping the wave's profile coordinate to (0, 1).

    y runs from 0 (left far field of the wave) to 1 (right) through the
    normalized pressure drop; w is the cutoff pressure perturbation sampled
    at the grid points that fall inside the profile table.
    """
    if family not in (1, 2):
        raise ValueError("family must be 1 or 2")
    cw, grid = sim.cw, sim.grid
    cfg = cw.config
    prof = cw.profile(family)
    X = state.X1 if family == 1 else state.X2
    x = grid.centers
    xi = x - cfg.sigma(family) * state.t - X
    inside = (xi > prof.xi_min) & (xi < prof.xi_max)
    if not np.any(inside):
        return LocalizedPerturbation(family, np.empty(0), np.empty(0),
                                     np.empty(0))
    xi = xi[inside]
    p_m = pressure(cw.law, cfg.v_m)
    gap = (p_m - prof.p(xi)) / prof.delta
    y = 1.0 - gap if family == 1 else gap
    jac = np.abs(prof.dp(xi)) / prof.delta
    v_ref, _ = cw.eval_vu(state.t, x[inside], state.X1, state.X2)
    dp = pressure(cw.law, state.v[inside]) - pressure(cw.law, v_ref)
    phi = cw.cutoffs(state.t, x[inside], state.X1, state.X2)[family - 1]
    w = phi * dp
    keep = np.concatenate(([True], np.diff(y) > 0.0))
    return LocalizedPerturbation(family, y[keep], w[keep], jac[keep])


def poincare_check(y, f):
    """Weighted Poincare inequality for the piecewise-linear interpolant of f.

    Returns (lhs, rhs, slack) with
       lhs = int_0^1 |f - mean(f)|^2 dy,
       rhs = (1/2) int_0^1 y (1-y) |f'|^2 dy,
       slack = rhs - lhs  (nonnegative up to rounding for any H^1 function).

    All integrals are exact for the piecewise-linear extension of the samples
    (constant continuation to y = 0 and y = 1), so the equality case f(y) = y
    comes out exact to rounding.
    """
    y = np.asarray(y, dtype=float)
    f = np.asarray(f, dtype=float)
    if y.ndim != 1 or y.shape != f.shape or y.size < 3:
        raise ValueError("need at least three samples on [0, 1]")
    if np.any(np.diff(y) <= 0.0) or y[0] < 0.0 or y[-1] > 1.0:
        raise ValueError("y must be strictly increasing within [0, 1]")
    if y[0] > 0.0:
        y = np.concatenate(([0.0], y))
        f = np.concatenate(([f[0]], f))
    if y[-1] < 1.0:
        y = np.concatenate((y, [1.0]))
        f = np.concatenate((f, [f[-1]]))
    widths = np.diff(y)
    mean = float(np.sum(0.5 * (f[:-1] + f[1:]) * widths))
    g0, g1 = f[:-1] - mean, f[1:] - mean
    lhs = float(np.sum(widths * (g0 * g0 + g0 * g1 + g1 * g1) / 3.0))
    live = widths > 0.0
    slopes = np.zeros_like(widths)
    slopes[live] = (f[1:] - f[:-1])[live] / widths[live]
    moment = (y**2 / 2.0 - y**3 / 3.0)
    rhs = 0.5 * float(np.sum(slopes * slopes * np.diff(moment)))
    return lhs, rhs, rhs - lhs


def zeroth_order_terms(sim: Simulator, state: FieldState) -> dict:
    """Velocity-variable drift integrals (structure check only).

    cal_Y_i1 = -int p'(vref) (v_i)_x (v - vref) dx,
    cal_Y_i2 =  int (u_i)_x (u - uref) dx.
    """
    ctx = _Context(sim, state)
    r = ctx.r
    cfg = sim.cw.config
    dp_ref = dpressure(sim.cw.law, r.v)
    out = {}
    for i, (sigma, dvt) in enumerate(((cfg.sigma1, r.dv1),
                                      (cfg.sigma2, r.dv2)), start=1):
        out[f"caly{i}1"] = -ctx.trapz(dp_ref * dvt * ctx.dv)
        out[f"caly{i}2"] = ctx.trapz((-sigma) * dvt * ctx.du)
    return out


# -- frame CSV ---------------------------------------------------------------

def write_frames_csv(path, frames, header_lines=()) -> None:
    """One row per frame, fixed column order, 17 significant digits."""
    with open(path, "w") as fh:
        for line in header_lines:
            fh.write(f"# {line}\n")
        fh.write(",".join(FRAME_COLUMNS) + "\n")
        for fr in frames:
            fh.write(",".join(f"{getattr(fr, c):.17g}" for c in FRAME_COLUMNS)
                     + "\n")


def read_frames_csv(path):
    """Returns (header lines, dict of column name -> float array)."""
    header = []
    with open(path) as fh:
        lines = fh.readlines()
    k = 0
    while k < len(lines) and lines[k].startswith("#"):
        header.append(lines[k][1:].strip())
        k += 1
    names = lines[k].strip().split(",")
    data = np.array([[float(tok) for tok in line.strip().split(",")]
                     for line in lines[k + 1:] if line.strip()])
    cols = {name: data[:, j] for j, name in enumerate(names)}
    return header, cols
