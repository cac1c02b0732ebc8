"""Composite two-shock stability toolkit for 1D barotropic Navier-Stokes.

The package builds two-shock Riemann configurations, integrates the viscous
shock profile ODE, evolves perturbed initial data with a finite-difference
solver coupled to the shift ODE system, and evaluates the weighted relative
entropy machinery (weights, cutoffs, localized variables, term-by-term energy
decomposition) used to audit long-time stability numerically.
"""

from .eos import GasLaw, StatePoint
from .waves import TwoShockConfig, ShockProfile, construct_states, solve_profile
from .composite import CompositeWave, WeightSpec, ShiftPair, default_lambda
from .shifts import ShiftConstants
from .pde import Grid, PerturbationSpec, ComponentSpec, FieldState, Simulator

__all__ = [
    "GasLaw",
    "StatePoint",
    "TwoShockConfig",
    "ShockProfile",
    "construct_states",
    "solve_profile",
    "CompositeWave",
    "WeightSpec",
    "ShiftPair",
    "default_lambda",
    "ShiftConstants",
    "Grid",
    "PerturbationSpec",
    "ComponentSpec",
    "FieldState",
    "Simulator",
]

__version__ = "0.1.0"
