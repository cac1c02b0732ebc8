import numpy as np
import pytest

from twoshock.verify import (Report, Scenario, SweepSpec, check_lemma_profiles,
                             check_separation_lemmas, check_theorem_behavior,
                             loglinear_fit, negative_control, windowed_max)


@pytest.fixture(scope="module")
def short_run():
    # moderate horizon; wide enough for separation fits and trend proxies
    sc = Scenario(delta1=0.1, delta2=0.1, dx=0.25, T=100.0, frame_dt=1.0)
    return sc.run()


def test_sweep_requires_asymmetric_pair():
    with pytest.raises(ValueError):
        SweepSpec(delta_pairs=((0.1, 0.1), (0.1, 0.2)))
    SweepSpec(delta_pairs=((0.1, 0.1), (0.2, 0.02)))


def test_loglinear_fit_recovers_rate():
    t = np.linspace(1.0, 10.0, 40)
    slope, intercept, r2 = loglinear_fit(t, 3.0 * np.exp(-0.7 * t))
    assert abs(slope + 0.7) < 1e-10
    assert abs(np.exp(intercept) - 3.0) < 1e-9
    assert r2 > 1.0 - 1e-12


def test_windowed_max():
    t = np.linspace(0.0, 10.0, 101)
    q = np.exp(-t)
    w = windowed_max(t, q, 5)
    assert w[0] == 1.0
    assert np.all(np.diff(w) < 0.0)


def test_profile_sweep_checks(law):
    sweep = SweepSpec(gammas=(5.0 / 3.0,), delta_pairs=((0.1, 0.1), (0.2, 0.02)))
    report = check_lemma_profiles(sweep, deltas=(0.05, 0.1, 0.2))
    assert report.passed, report.to_text()


def test_separation_checks_on_run(short_run):
    report = check_separation_lemmas(short_run, fit_window=(0.2, 0.8))
    assert report.passed, report.to_text()
    rates = {c.name: c.details.get("rate") for c in report.checks
             if c.name.startswith("decay_")}
    assert all(r > 0.0 for r in rates.values())


def test_theorem_checks_on_run(short_run):
    report = check_theorem_behavior(short_run, drop_factor=2.0)
    assert report.passed, report.to_text()


def test_negative_control_detects_no_decay(short_run):
    report = negative_control(short_run.sim.cw, T=40.0)
    assert report.passed, report.to_text()


def test_reports_deterministic(law):
    sweep = SweepSpec(gammas=(5.0 / 3.0,), delta_pairs=((0.1, 0.1), (0.2, 0.02)))
    a = check_lemma_profiles(sweep, deltas=(0.1, 0.2)).to_json()
    b = check_lemma_profiles(sweep, deltas=(0.1, 0.2)).to_json()
    assert a == b


def test_report_rendering():
    from twoshock.verify import CheckResult

    rep = Report(title="demo", checks=[
        CheckResult("alpha", True, {"value": 1.0}),
        CheckResult("beta", False, {"value": 2.0})])
    assert not rep.passed
    assert "FAIL" in rep.to_text()
    assert '"passed": false' in rep.to_json()


def test_scenario_resolution_defaults():
    sc = Scenario(delta1=0.2, delta2=0.02).resolved()
    assert abs(sc.dx - 0.1) < 1e-15
    assert abs(sc.T - 2500.0) < 1e-12
    assert sc.lam == pytest.approx(0.5 * np.sqrt(0.02))


def test_scenario_run_is_deterministic():
    sc = Scenario(delta1=0.1, delta2=0.1, dx=0.4, T=5.0, frame_dt=0.5)
    r1 = sc.run()
    r2 = sc.run()
    assert [f.weighted_entropy for f in r1.frames] \
        == [f.weighted_entropy for f in r2.frames]
    assert r1.run.state.X1 == r2.run.state.X1
