"""Finite-difference initial-value solver for the Lagrangian barotropic
Navier-Stokes system on a truncated line, coupled to the shift ODE system.

Spatial discretization on cell centers: central differences for p(v)_x and
u_x, and a conservative flux difference for the viscous term with arithmetic
face means of v.  Boundary ghost values are Dirichlet to the exact shifted
composite wave at the current stage time, which tracks the exponentially
approached far field far better than constant states.  Time integration is
the classical 4-stage Runge-Kutta scheme, advancing fields and shifts with
the same stages.
"""

from __future__ import annotations

import io
from dataclasses import dataclass

import numpy as np

from .composite import CompositeWave
from .discrete import d0, h1_norm, l2_norm, linf_norm
from .eos import pressure, sound_speed
from .shifts import ShiftConstants, ShiftRates, rk4_update, shift_rhs

__all__ = [
    "Grid",
    "ComponentSpec",
    "PerturbationSpec",
    "FieldState",
    "PositivityError",
    "StabilityError",
    "Simulator",
    "RunResult",
    "auto_grid",
    "validate_grid",
    "write_checkpoint",
    "read_checkpoint",
]


class PositivityError(RuntimeError):
    """The specific volume left the positive cone (local existence lost)."""


class StabilityError(RuntimeError):
    """The requested time step exceeds the explicit stability ceiling."""


@dataclass(frozen=True)
class Grid:
    """Uniform cell-centered grid: centers at x_left + (j + 1/2) dx."""

    x_left: float
    dx: float
    n: int

    def __post_init__(self):
        if self.dx <= 0.0:
            raise ValueError("dx must be positive")
        if self.n < 16:
            raise ValueError("need at least 16 cells")

    @property
    def x0(self) -> float:
        return self.x_left + 0.5 * self.dx

    @property
    def x_right(self) -> float:
        return self.x_left + self.n * self.dx

    @property
    def centers(self) -> np.ndarray:
        return self.x_left + (np.arange(self.n) + 0.5) * self.dx

    def ghost_centers(self):
        return self.x_left - 0.5 * self.dx, self.x_right + 0.5 * self.dx


def auto_grid(cw: CompositeWave, T: float, dx: float,
              margin: float | None = None, extra: float = 0.0) -> Grid:
    """Smallest grid containing both wave supports up to time T plus margin."""
    cfg = cw.config
    if margin is None:
        margin = 20.0 / min(cfg.delta1, cfg.delta2)
    lo = cfg.sigma1 * T + cw.profile(1).xi_min - margin - extra
    hi = cfg.sigma2 * T + cw.profile(2).xi_max + margin + extra
    n = int(np.ceil((hi - lo) / dx))
    return Grid(x_left=lo, dx=dx, n=max(n, 16))


def validate_grid(grid: Grid, cw: CompositeWave, T: float) -> None:
    """Check the domain covers the swept wave supports plus the safety margin."""
    cfg = cw.config
    margin = 20.0 / min(cfg.delta1, cfg.delta2)
    lo_needed = cfg.sigma1 * T + cw.profile(1).xi_min - margin
    hi_needed = cfg.sigma2 * T + cw.profile(2).xi_max + margin
    if grid.x_left > lo_needed or grid.x_right < hi_needed:
        raise ValueError(
            f"domain [{grid.x_left:.6g}, {grid.x_right:.6g}] does not cover "
            f"the swept wave supports plus margin "
            f"[{lo_needed:.6g}, {hi_needed:.6g}] for horizon T={T:.6g}")


@dataclass(frozen=True)
class ComponentSpec:
    """Initial perturbation of one field component."""

    shape: str = "zero"  # zero | gaussian | bump
    amplitude: float = 0.0
    center: float = 0.0
    width: float = 1.0

    def __post_init__(self):
        if self.shape not in ("zero", "gaussian", "bump"):
            raise ValueError(f"unknown perturbation shape {self.shape!r}")
        if self.shape != "zero" and self.width <= 0.0:
            raise ValueError("perturbation width must be positive")

    def sample(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if self.shape == "zero" or self.amplitude == 0.0:
            return np.zeros_like(x)
        s = (x - self.center) / self.width
        if self.shape == "gaussian":
            return self.amplitude * np.exp(-0.5 * s * s)
        out = np.zeros_like(x)
        inside = np.abs(s) < 1.0
        out[inside] = self.amplitude * np.exp(1.0 - 1.0 / (1.0 - s[inside] ** 2))
        return out


@dataclass(frozen=True)
class PerturbationSpec:
    v: ComponentSpec = ComponentSpec()
    u: ComponentSpec = ComponentSpec()


@dataclass
class FieldState:
    """Grid-sampled solution and shift positions at one time."""

    t: float
    v: np.ndarray
    u: np.ndarray
    X1: float = 0.0
    X2: float = 0.0

    def copy(self) -> "FieldState":
        return FieldState(self.t, self.v.copy(), self.u.copy(), self.X1, self.X2)


@dataclass
class RunResult:
    state: FieldState
    dt: float
    n_steps: int
    frames_emitted: int
    mass_change: float          # int v dx (final) - (initial)
    mass_flux_integral: float   # time integral of the boundary flux of u
    momentum_change: float
    momentum_flux_integral: float


_RK_TIMES = (0.0, 0.5, 0.5, 1.0)
_RK_WEIGHTS = (1.0 / 6.0, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 6.0)


class Simulator:
    """One composite-wave simulation: state initialization, stepping, running."""

    def __init__(self, cw: CompositeWave, grid: Grid, cfl: float = 0.4,
                 freeze_shifts: bool = False):
        if not 0.0 < cfl <= 0.55:
            raise ValueError("cfl must lie in (0, 0.55]")
        self.cw = cw
        self.grid = grid
        self.cfl = cfl
        self.freeze_shifts = freeze_shifts
        self.consts = ShiftConstants.from_config(cw.config)
        self._x = grid.centers
        self._xg_left, self._xg_right = grid.ghost_centers()
        self._xg = np.array([self._xg_left, self._xg_right])

    # -- state construction -------------------------------------------------

    def initial_state(self, pert: PerturbationSpec | None = None) -> FieldState:
        x = self._x
        v, u = self.cw.eval_vu(0.0, x, 0.0, 0.0)
        if pert is not None:
            v = v + pert.v.sample(x)
            u = u + pert.u.sample(x)
        if np.min(v) <= 0.5 * self.cw.config.v_minus:
            raise PositivityError(
                "initial volume dips below half the left state; reduce the "
                "perturbation amplitude")
        return FieldState(t=0.0, v=np.asarray(v, float), u=np.asarray(u, float))

    def perturbation_norms(self, state: FieldState) -> dict:
        """Discrete L2/H1/Linf norms of (v, u, h) minus the shifted composite.

        The h-perturbation is measured against the discrete image of the
        superposed reference h_1 + h_2 - u_m, matching the diagnostics.
        """
        dx = self.grid.dx
        x_pad = np.concatenate(([self._xg_left], self._x, [self._xg_right]))
        cfg = self.cw.config
        xi1 = x_pad - cfg.sigma1 * state.t - state.X1
        xi2 = x_pad - cfg.sigma2 * state.t - state.X2
        v1 = self.cw.profile(1).v(xi1)
        v2 = self.cw.profile(2).v(xi2)
        v_ref_pad = v1 + v2 - cfg.v_m
        u_ref = self.cw.profile(1).u(xi1[1:-1]) + self.cw.profile(2).u(xi2[1:-1]) \
            - cfg.u_m
        vp = np.concatenate(([v_ref_pad[0]], state.v, [v_ref_pad[-1]]))
        du = state.u - u_ref
        dh = du - d0(np.log(vp) - np.log(v1) - np.log(v2), dx)
        out = {}
        for name, diff in (("v", state.v - v_ref_pad[1:-1]), ("u", du),
                           ("h", dh)):
            out[f"l2_{name}"] = l2_norm(diff, dx)
            out[f"h1_{name}"] = h1_norm(diff, dx)
            out[f"linf_{name}"] = linf_norm(diff)
        return out

    # -- discrete fields -----------------------------------------------------

    def padded_vu(self, t: float, v: np.ndarray, u: np.ndarray,
                  X1: float, X2: float):
        """Arrays with one Dirichlet ghost value per side from the composite."""
        vg, ug = self.cw.eval_vu(t, self._xg, X1, X2)
        vp = np.concatenate(([vg[0]], v, [vg[1]]))
        up = np.concatenate(([ug[0]], u, [ug[1]]))
        return vp, up

    def effective_velocity(self, state: FieldState) -> np.ndarray:
        """h = u - (ln v)_x with the solver's central stencil."""
        vp, _ = self.padded_vu(state.t, state.v, state.u, state.X1, state.X2)
        return state.u - d0(np.log(vp), self.grid.dx)

    # -- semidiscrete right-hand side -----------------------------------------

    def rhs(self, t: float, v: np.ndarray, u: np.ndarray, X1: float, X2: float):
        """Time derivatives of (v, u, X1, X2) plus boundary flux bookkeeping."""
        if np.min(v) <= 0.0 or not np.all(np.isfinite(v)):
            raise PositivityError(f"volume positivity lost at t={t:.6g}")
        dx = self.grid.dx
        vp, up = self.padded_vu(t, v, u, X1, X2)
        p = vp ** (-self.cw.law.gamma)
        dvdt = d0(up, dx)
        faces = np.diff(up) / (dx * 0.5 * (vp[:-1] + vp[1:]))
        dudt = -d0(p, dx) + np.diff(faces) / dx
        if self.freeze_shifts:
            rates = ShiftRates(0.0, 0.0, 0.0, 0.0, 0.0, 0.0)
        else:
            rates = shift_rhs(self.cw, self.consts, self._x, dx, v, t, X1, X2)
        mass_flux = 0.5 * (up[-2] + up[-1]) - 0.5 * (up[0] + up[1])
        mom_flux = -(0.5 * (p[-2] + p[-1]) - 0.5 * (p[0] + p[1])) \
            + (faces[-1] - faces[0])
        return dvdt, dudt, rates, (mass_flux, mom_flux)

    def shift_rates(self, state: FieldState) -> ShiftRates:
        """Shift rates of a state (zero when shifts are frozen)."""
        if self.freeze_shifts:
            return ShiftRates(0.0, 0.0, 0.0, 0.0, 0.0, 0.0)
        return shift_rhs(self.cw, self.consts, self._x, self.grid.dx,
                         state.v, state.t, state.X1, state.X2)

    # -- time stepping ---------------------------------------------------------

    def dt_policy(self, state: FieldState) -> float:
        """dt = cfl * min(dx^2 * min(v), dx / max sound speed)."""
        dx = self.grid.dx
        v_min = float(np.min(state.v))
        c_max = float(sound_speed(self.cw.law, v_min))  # c decreases in v
        return self.cfl * min(dx * dx * v_min, dx / c_max)

    def _stability_ceiling(self, v: np.ndarray) -> float:
        # 0.55 sits between the 0.4 policy factor and the RK4 limit ~0.69,
        # so benign drift of v does not abort an admissible run
        dx = self.grid.dx
        v_min = float(np.min(v))
        c_max = float(sound_speed(self.cw.law, v_min))
        return 0.55 * min(dx * dx * v_min, dx / c_max)

    def step(self, state: FieldState, dt: float) -> FieldState:
        new_state, _ = self._step_fluxes(state, dt)
        return new_state

    def _step_fluxes(self, state: FieldState, dt: float):
        ceiling = self._stability_ceiling(state.v)
        if dt > ceiling:
            raise StabilityError(
                f"dt={dt:.6g} exceeds the stability ceiling {ceiling:.6g}; "
                f"reduce dt to at most {ceiling:.6g}")
        t, v, u, X1, X2 = state.t, state.v, state.u, state.X1, state.X2
        kv, ku, kx1, kx2 = [], [], [], []
        mass = mom = 0.0
        for stage, c in enumerate(_RK_TIMES):
            if stage == 0:
                vs, us, x1s, x2s = v, u, X1, X2
            else:
                s = c * dt
                vs = v + s * kv[stage - 1]
                us = u + s * ku[stage - 1]
                x1s = X1 + s * kx1[stage - 1]
                x2s = X2 + s * kx2[stage - 1]
            dv, du, rates, (mf, pf) = self.rhs(t + c * dt, vs, us, x1s, x2s)
            kv.append(dv)
            ku.append(du)
            kx1.append(rates.Xdot1)
            kx2.append(rates.Xdot2)
            w = _RK_WEIGHTS[stage]
            mass += w * mf
            mom += w * pf
        v_new = rk4_update(v, kv[0], kv[1], kv[2], kv[3], dt)
        u_new = rk4_update(u, ku[0], ku[1], ku[2], ku[3], dt)
        x1_new = rk4_update(X1, kx1[0], kx1[1], kx1[2], kx1[3], dt)
        x2_new = rk4_update(X2, kx2[0], kx2[1], kx2[2], kx2[3], dt)
        if np.min(v_new) <= 0.0 or not np.all(np.isfinite(v_new)):
            raise PositivityError(
                f"volume positivity lost in the step from t={t:.6g}")
        return FieldState(t + dt, v_new, u_new, float(x1_new), float(x2_new)), \
            (dt * mass, dt * mom)

    # -- driver -------------------------------------------------------------

    def run(self, state: FieldState, T: float, stride: int = 1,
            sink=None, dt: float | None = None, start_step: int = 0) -> RunResult:
        """Advance to t = floor(T/dt)*dt, calling sink(state, step) at every
        stride-th step (step counted from 0 at t = 0).

        dt is frozen for the whole run (default: the policy value at the given
        state) so frame times are exact multiples of stride * dt.
        """
        if stride < 1:
            raise ValueError("stride must be a positive integer")
        if dt is None:
            dt = self.dt_policy(state)
        n_total = int(np.floor(T / dt + 1e-12))
        dx = self.grid.dx
        mass0 = dx * float(np.sum(state.v))
        mom0 = dx * float(np.sum(state.u))
        mass_int = mom_int = 0.0
        frames = 0
        step = start_step
        if step % stride == 0 and sink is not None:
            sink(state, step)
            frames += 1
        while step < n_total:
            state, (mf, pf) = self._step_fluxes(state, dt)
            mass_int += mf
            mom_int += pf
            step += 1
            if step % stride == 0 and sink is not None:
                sink(state, step)
                frames += 1
        return RunResult(
            state=state, dt=dt, n_steps=step - start_step, frames_emitted=frames,
            mass_change=dx * float(np.sum(state.v)) - mass0,
            mass_flux_integral=mass_int,
            momentum_change=dx * float(np.sum(state.u)) - mom0,
            momentum_flux_integral=mom_int)


# -- checkpoint files ------------------------------------------------------

def write_checkpoint(path, sim: Simulator, state: FieldState, dt: float,
                     step: int, header: dict | None = None) -> None:
    """Text checkpoint: key = value header plus (x, v, u, h) columns at full
    float64 round-trip precision, so a resumed run is bit-identical."""
    h = sim.effective_velocity(state)
    meta = dict(header or {})
    meta.update({
        "checkpoint_t": repr(state.t), "checkpoint_step": step,
        "checkpoint_dt": repr(dt),
        "checkpoint_X1": repr(state.X1), "checkpoint_X2": repr(state.X2),
        "grid_x_left": repr(sim.grid.x_left), "grid_dx": repr(sim.grid.dx),
        "grid_n": sim.grid.n,
    })
    buf = io.StringIO()
    buf.write("# twoshock checkpoint\n")
    for key in meta:
        buf.write(f"# {key} = {meta[key]}\n")
    buf.write("# columns: x v u h\n")
    x = sim.grid.centers
    for j in range(sim.grid.n):
        buf.write(f"{x[j]:.17g} {state.v[j]:.17g} {state.u[j]:.17g} {h[j]:.17g}\n")
    with open(path, "w") as fh:
        fh.write(buf.getvalue())


def read_checkpoint(path):
    """Returns (meta dict of strings, state FieldState, dt, step)."""
    meta = {}
    rows = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                body = line[1:].strip()
                if "=" in body:
                    key, _, value = body.partition("=")
                    meta[key.strip()] = value.strip()
                continue
            rows.append([float(tok) for tok in line.split()])
    data = np.asarray(rows, dtype=float)
    state = FieldState(
        t=float(meta["checkpoint_t"]), v=data[:, 1].copy(), u=data[:, 2].copy(),
        X1=float(meta["checkpoint_X1"]), X2=float(meta["checkpoint_X2"]))
    return meta, state, float(meta["checkpoint_dt"]), int(meta["checkpoint_step"])
