import numpy as np
import pytest

from twoshock import ComponentSpec, Grid, PerturbationSpec, Simulator
from twoshock.eos import dpressure, pressure
from twoshock.shifts import (ShiftConstants, rk4_update, separation_monitor,
                             shift_rhs)


def test_constants_identity(config):
    c = ShiftConstants.from_config(config)
    law = config.law
    assert abs(c.sigma_m - np.sqrt(-dpressure(law, config.v_m))) < 1e-15
    expect_alpha = (law.gamma + 1.0) / (2.0 * law.gamma * c.sigma_m
                                        * pressure(law, config.v_m))
    assert abs(c.alpha_m - expect_alpha) < 1e-15
    # the drift gain equals (5/4) sigma_m^4 alpha_m
    assert abs(c.M - 1.25 * c.sigma_m**4 * c.alpha_m) < 1e-14 * c.M


def test_zero_perturbation_exact_fixed_point(sim):
    st = sim.initial_state(None)
    r = sim.shift_rates(st)
    assert r.Xdot1 == 0.0 and r.Xdot2 == 0.0
    assert r.Y11 == 0.0 and r.Y12 == 0.0 and r.Y21 == 0.0 and r.Y22 == 0.0


def test_rate_bounded_by_supnorm(law):
    # |Xdot_i| <= C ||v - vref||_inf with C stable across the strength sweep
    from twoshock import CompositeWave, WeightSpec, construct_states, solve_profile
    from twoshock.composite import default_lambda

    ratios = []
    for delta in (0.05, 0.1, 0.2):
        cfg = construct_states(law, 1.0, 0.0, delta, delta)
        p1, p2 = solve_profile(law, cfg, 1), solve_profile(law, cfg, 2)
        cw = CompositeWave(p1, p2, WeightSpec(default_lambda(delta, delta)), cfg)
        grid = Grid(x_left=-400.0, dx=0.25, n=3200)
        s = Simulator(cw, grid)
        st = s.initial_state(PerturbationSpec(
            v=ComponentSpec("gaussian", 0.01, 0.0, 5.0)))
        r = s.shift_rates(st)
        sup = s.perturbation_norms(st)["linf_v"]
        ratios.append(max(abs(r.Xdot1), abs(r.Xdot2)) / sup)
    # the bound's constant is delta-independent; the achieved ratio varies
    # with how much of the weight-localized region the bump covers
    assert max(ratios) < 5.0


def test_rate_bounded_on_random_states(sim):
    rng = np.random.default_rng(5)
    st = sim.initial_state(None)
    worst = 0.0
    for _ in range(10):
        bump = 0.05 * rng.standard_normal(sim.grid.n)
        v = st.v + np.convolve(bump, np.ones(25) / 25.0, mode="same")
        r = shift_rhs(sim.cw, sim.consts, sim.grid.centers, sim.grid.dx,
                      v, 0.0, 0.0, 0.0)
        worst = max(worst, abs(r.Xdot1), abs(r.Xdot2))
    assert np.isfinite(worst)
    assert worst < 1.0


def test_lipschitz_in_shift(sim):
    pert = PerturbationSpec(v=ComponentSpec("gaussian", 0.01, 0.0, 5.0))
    st = sim.initial_state(pert)
    base = shift_rhs(sim.cw, sim.consts, sim.grid.centers, sim.grid.dx,
                     st.v, 1.0, 0.0, 0.0)
    quotients = []
    for dX in (0.01, 0.1, 0.5, 1.0):
        moved = shift_rhs(sim.cw, sim.consts, sim.grid.centers, sim.grid.dx,
                          st.v, 1.0, dX, 0.0)
        quotients.append(abs(moved.Xdot1 - base.Xdot1) / dX)
    assert max(quotients) < 1.0


def test_translation_locking(law):
    # translated single-wave data pulls the shift toward the translation
    import warnings

    from twoshock import CompositeWave, WeightSpec, construct_states, solve_profile

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        cfg = construct_states(law, 1.0, 0.0, 0.1, 1e-6)
        p1 = solve_profile(law, cfg, 1)
        p2 = solve_profile(law, cfg, 2)
        cw = CompositeWave(p1, p2, WeightSpec(5e-4), cfg)
    grid = Grid(x_left=-200.0, dx=0.1, n=4000)
    s = Simulator(cw, grid)
    x = grid.centers
    width = 9.3  # tail e-folding length of the delta = 0.1 wave
    for shift in (-2.0, -1.0, -0.25, 0.25, 1.0, 2.0):
        sx = shift * width
        v = p1.v(x - sx) + p2.v(x) - cfg.v_m
        r = shift_rhs(cw, s.consts, x, grid.dx, np.asarray(v), 0.0, 0.0, 0.0)
        assert np.sign(r.Xdot1) == np.sign(sx), (sx, r.Xdot1)


def test_rk4_update_polynomial_exactness():
    # constant rate integrates exactly: X(t) = c t
    c, dt = 0.37, 0.05
    x = 0.0
    for _ in range(200):
        x = rk4_update(x, c, c, c, c, dt)
    assert abs(x - c * 200 * dt) < 1e-13


def test_rk4_order_four():
    # dy/dt = -y, frozen-field synthetic right-hand side with clean asymptotics
    def f(t, y):
        return -y

    errs = []
    for n in (10, 20, 40):
        dt = 2.0 / n
        y, t = 1.0, 0.0
        for _ in range(n):
            k1 = f(t, y)
            k2 = f(t + dt / 2, y + dt / 2 * k1)
            k3 = f(t + dt / 2, y + dt / 2 * k2)
            k4 = f(t + dt, y + dt * k3)
            y = rk4_update(y, k1, k2, k3, k4, dt)
            t += dt
        errs.append(abs(y - np.exp(-2.0)))
    orders = np.log2(np.array(errs[:-1]) / np.array(errs[1:]))
    assert np.all(np.abs(orders - 4.0) < 0.3)


def test_separation_monitor(config):
    with pytest.raises(ValueError):
        separation_monitor(0.0, 0.0, 0.0, config)
    s = separation_monitor(10.0, 0.0, 0.0, config)
    assert s.ok
    assert abs(s.margin1 - 0.5 * abs(config.sigma1) * 10.0) < 1e-14
    assert abs(s.margin2 - 0.5 * config.sigma2 * 10.0) < 1e-14
    bad = separation_monitor(10.0, 0.6 * abs(config.sigma1) * 10.0, 0.0, config)
    assert not bad.ok and bad.margin1 < 0.0


def test_shifts_move_during_run(sim):
    pert = PerturbationSpec(v=ComponentSpec("gaussian", 0.01, 0.0, 5.0))
    st = sim.initial_state(pert)
    res = sim.run(st, T=5.0)
    assert res.state.X1 != 0.0 and res.state.X2 != 0.0
    assert abs(res.state.X1) < 1.0 and abs(res.state.X2) < 1.0
