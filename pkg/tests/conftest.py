import warnings

import pytest

from twoshock import (CompositeWave, GasLaw, Grid, Simulator, WeightSpec,
                      construct_states, default_lambda, solve_profile)


@pytest.fixture(scope="session")
def law():
    return GasLaw(gamma=5.0 / 3.0)


@pytest.fixture(scope="session")
def config(law):
    return construct_states(law, 1.0, 0.0, 0.1, 0.1)


@pytest.fixture(scope="session")
def profiles(law, config):
    return solve_profile(law, config, 1), solve_profile(law, config, 2)


@pytest.fixture(scope="session")
def cw(law, config, profiles):
    return CompositeWave(profiles[0], profiles[1],
                         WeightSpec(default_lambda(0.1, 0.1)), config)


@pytest.fixture(scope="session")
def sim(cw):
    # domain wide enough for short runs (T up to ~40) at moderate resolution
    grid = Grid(x_left=-250.0, dx=0.2, n=2500)
    return Simulator(cw, grid)


@pytest.fixture(autouse=True)
def _quiet_weight_window_warning():
    with warnings.catch_warnings():
        warnings.filterwarnings("ignore", message=".*asymptotic window.*",
                                category=RuntimeWarning)
        yield
