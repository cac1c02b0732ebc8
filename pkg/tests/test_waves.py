import numpy as np
import pytest

from twoshock.eos import GasLaw, StatePoint, dpressure, pressure
from twoshock.waves import (NoIntersectionError, TwoShockConfig,
                            construct_states, intermediate_state, profile_rhs,
                            profile_second_derivative, shock_speed,
                            solve_profile)


def test_shock_speed_values(law):
    s2 = shock_speed(law, 0.9444, 1.0, 2)
    assert abs(s2 - 1.341) < 2e-3
    s1 = shock_speed(law, 0.9444, 1.0, 1)
    assert s1 == -s2


def test_shock_speed_errors(law):
    with pytest.raises(ValueError):
        shock_speed(law, 1.0, 1.0, 2)
    with pytest.raises(ValueError):
        shock_speed(law, 1.0, 2.0, 3)


def test_shock_speed_near_sound_speed(law):
    # |sigma_2 - sigma_m| <= C delta_2 across a strength sweep, one fitted C
    ratios = []
    for delta in (0.025, 0.05, 0.1, 0.2):
        cfg = construct_states(law, 1.0, 0.0, delta, delta)
        sigma_m = np.sqrt(-dpressure(law, cfg.v_m))
        ratios.append(abs(cfg.sigma2 - sigma_m) / delta)
    assert max(ratios) < 1.0
    assert max(ratios) / min(ratios) < 3.0


def test_construct_states_basic(law):
    cfg = construct_states(law, 1.0, 0.0, 0.1, 0.1)
    assert abs(cfg.v_m - 0.9444) < 1e-3
    assert cfg.v_minus > cfg.v_m < cfg.v_plus
    assert cfg.u_minus > cfg.u_m > cfg.u_plus
    assert cfg.sigma1 < 0 < cfg.sigma2
    assert max(cfg.rh_residuals()) <= 1e-12


def test_construct_states_rejects_degenerate(law):
    with pytest.raises(ValueError):
        construct_states(law, 1.0, 0.0, 0.0, 0.1)
    with pytest.raises(ValueError):
        construct_states(law, 1.0, 0.0, 0.1, 0.0)
    # delta1 so large the left pressure would go nonpositive
    with pytest.raises(ValueError):
        construct_states(law, 1.0, 0.0, 1.2, 0.1)


def test_config_validation_catches_bad_data(law):
    cfg = construct_states(law, 1.0, 0.0, 0.1, 0.1)
    with pytest.raises(ValueError):
        TwoShockConfig(law, cfg.v_minus, cfg.u_minus, cfg.v_m, cfg.u_m,
                       cfg.v_plus, cfg.u_plus, -cfg.sigma1, cfg.sigma2,
                       cfg.delta1, cfg.delta2)
    with pytest.raises(ValueError):
        TwoShockConfig(law, cfg.v_minus, cfg.u_minus, cfg.v_m, cfg.u_m,
                       cfg.v_plus, cfg.u_plus, cfg.sigma1 * 1.001, cfg.sigma2,
                       cfg.delta1, cfg.delta2)


def test_intermediate_state_roundtrip(law):
    cfg = construct_states(law, 1.0, 0.0, 0.1, 0.1)
    v_m, u_m = intermediate_state(law, StatePoint(cfg.v_minus, cfg.u_minus),
                                  StatePoint(cfg.v_plus, cfg.u_plus))
    assert abs(v_m - cfg.v_m) < 1e-10
    assert abs(u_m - cfg.u_m) < 1e-10


def test_intermediate_state_asymmetric_roundtrip(law):
    cfg = construct_states(law, 1.2, -0.3, 0.23, 0.04)
    v_m, u_m = intermediate_state(law, StatePoint(cfg.v_minus, cfg.u_minus),
                                  StatePoint(cfg.v_plus, cfg.u_plus))
    assert abs(v_m - cfg.v_m) < 1e-10
    assert abs(u_m - cfg.u_m) < 1e-10


def test_intermediate_state_no_solution(law):
    with pytest.raises(NoIntersectionError):
        intermediate_state(law, StatePoint(1.0, 0.0), StatePoint(1.0, 0.0))
    with pytest.raises(NoIntersectionError):
        intermediate_state(law, StatePoint(1.0, 0.0), StatePoint(1.0, 1.0))


def test_profile_rhs_endpoints_and_sign(law, config):
    for family, sgn in ((1, -1.0), (2, +1.0)):
        left = config.left_state(family)
        right = config.right_state(family)
        sigma = config.sigma(family)
        assert abs(profile_rhs(law, left.v, sigma, left.v)) <= 1e-12
        assert abs(profile_rhs(law, right.v, sigma, left.v)) <= 1e-12
        mid = 0.5 * (left.v + right.v)
        assert sgn * profile_rhs(law, mid, sigma, left.v) > 0.0


def test_profile_rhs_consistent_with_table(law, config, profiles):
    # the solved table's finite differences must reproduce the closed form
    for prof in profiles:
        xi = np.linspace(0.5 * prof.xi_min, 0.5 * prof.xi_max, 200)
        h = 1e-4
        fd = (prof.v(xi + h) - prof.v(xi - h)) / (2 * h)
        assert np.max(np.abs(fd - prof.dv(xi))) < 1e-6


def test_profile_rhs_anchor_scaling(law):
    # |dv/dxi| at the anchor is O(delta^2) with a stable constant
    ratios = []
    for delta in (0.05, 0.1, 0.2):
        cfg = construct_states(law, 1.0, 0.0, delta, delta)
        mid = 0.5 * (cfg.v_minus + cfg.v_m)
        val = abs(profile_rhs(law, mid, cfg.sigma1, cfg.v_minus))
        ratios.append(val / delta**2)
    assert max(ratios) / min(ratios) < 2.0


def test_solve_profile_contract(law, config, profiles):
    for prof, family in zip(profiles, (1, 2)):
        left, right = config.left_state(family), config.right_state(family)
        # anchored at the midpoint volume
        assert abs(float(prof.v(0.0)) - 0.5 * (left.v + right.v)) <= 1e-10
        # endpoint approach within tol * delta at the table edges
        assert abs(float(prof.v(prof.xi_min)) - left.v) <= 1e-6 * prof.delta * 1.01
        assert abs(float(prof.v(prof.xi_max)) - right.v) <= 1e-6 * prof.delta * 1.01
        # monotone: decreasing for family 1, increasing for family 2
        diffs = np.diff(prof.v_table)
        assert np.all(diffs <= 0.0) if family == 1 else np.all(diffs >= 0.0)


def test_profile_first_integral_exact(profiles):
    for prof in profiles:
        xi = np.linspace(prof.xi_min, prof.xi_max, 500)
        dv = prof.dv(xi)
        live = dv != 0.0
        assert np.max(np.abs(prof.du(xi)[live] / dv[live] + prof.sigma)) <= 1e-12


def test_profile_exponential_tail(law):
    cfg = construct_states(law, 1.0, 0.0, 0.1, 0.1)
    prof = solve_profile(law, cfg, 1)
    # log |v - v_m| affine in xi on the outer half of the right tail
    xi = np.linspace(0.5 * prof.xi_max, 0.95 * prof.xi_max, 200)
    gap = prof.v(xi) - cfg.v_m
    assert np.all(gap > 0.0)
    slope, _ = np.polyfit(xi, np.log(gap), 1)
    # rate is delta-proportional: within a modest window around kappa * delta
    assert -slope > 0.2 * cfg.delta1
    assert -slope < 5.0 * cfg.delta1


def test_profile_translation_invariance(law, config):
    base = solve_profile(law, config, 2)
    s0 = 7.0
    shifted = solve_profile(law, config, 2, anchor_value=float(base.v(s0)))
    xi = np.linspace(-30.0, 30.0, 101)
    assert np.max(np.abs(shifted.v(xi) - base.v(xi + s0))) < 1e-7


def test_second_derivative_bound_and_sign_change(law, config, profiles):
    for prof in profiles:
        xi = np.linspace(0.98 * prof.xi_min, 0.98 * prof.xi_max, 2000)
        dv, d2v = prof.dv(xi), prof.d2v(xi)
        live = np.abs(dv) > 1e-6 * np.max(np.abs(dv))
        chat = np.max(np.abs(d2v[live]) / (prof.delta * np.abs(dv[live])))
        assert chat < 10.0
        # exactly one sign change of v'' along the profile
        signs = np.sign(d2v[np.abs(d2v) > 1e-2 * np.max(np.abs(d2v))])
        assert np.count_nonzero(np.diff(signs)) == 1


def test_second_derivative_chat_stable(law):
    chats = []
    for delta in (0.05, 0.1, 0.2):
        cfg = construct_states(law, 1.0, 0.0, delta, delta)
        prof = solve_profile(law, cfg, 2)
        xi = np.linspace(0.98 * prof.xi_min, 0.98 * prof.xi_max, 1500)
        dv, d2v = prof.dv(xi), prof.d2v(xi)
        live = np.abs(dv) > 1e-3 * np.max(np.abs(dv))
        chats.append(np.max(np.abs(d2v[live]) / (delta * np.abs(dv[live]))))
    assert max(chats) / min(chats) < 1.4


def test_second_derivative_matches_finite_difference(profiles):
    prof = profiles[1]
    xi = np.linspace(0.4 * prof.xi_min, 0.4 * prof.xi_max, 50)
    h = 1e-4
    fd = (prof.dv(xi + h) - prof.dv(xi - h)) / (2 * h)
    assert np.max(np.abs(fd - prof.d2v(xi))) < 1e-6


def test_profile_second_derivative_range_check(profiles):
    prof = profiles[0]
    profile_second_derivative(prof, 0.0)
    with pytest.raises(ValueError):
        profile_second_derivative(prof, prof.xi_max + 1.0)


def test_profile_truncation_warning(law, config):
    with pytest.warns(RuntimeWarning, match="truncated"):
        solve_profile(law, config, 1, xi_max=20.0)


def test_profile_effective_velocity_relation(profiles):
    # (h)_xi equals (p(v))_xi / sigma by the traveling-wave system
    prof = profiles[0]
    xi = np.linspace(0.6 * prof.xi_min, 0.6 * prof.xi_max, 300)
    h = 1e-4
    fd = (prof.h(xi + h) - prof.h(xi - h)) / (2 * h)
    assert np.max(np.abs(fd - prof.dh(xi))) < 1e-5
