"""Continuous-time adaptive learning with time-varying features.

Thin Python surface over the C++ core: update-law simulation, Lyapunov and
regret diagnostics, feature signals, and the small dense linear algebra the
dynamical error model needs.
"""

from ._core import (
    FeatureSignal,
    LawResult,
    ScenarioConfig,
    ScenarioResult,
    Trajectory,
    builtin_scenario,
    builtin_scenario_names,
    is_hurwitz,
    is_positive_definite,
    matrix_exponential_action,
    min_eigenvalue_symmetric,
    normalizing_signal,
    run_scenario,
    solve_lyapunov,
    wibisono_candidate_lyapunov,
)

__all__ = [
    "FeatureSignal",
    "LawResult",
    "ScenarioConfig",
    "ScenarioResult",
    "Trajectory",
    "builtin_scenario",
    "builtin_scenario_names",
    "is_hurwitz",
    "is_positive_definite",
    "matrix_exponential_action",
    "min_eigenvalue_symmetric",
    "normalizing_signal",
    "run_scenario",
    "solve_lyapunov",
    "wibisono_candidate_lyapunov",
]

__version__ = "0.1.0"
