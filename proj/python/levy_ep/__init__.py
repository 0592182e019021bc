"""Euler-Poisson simulation of Levy-driven SDEs."""

from ._core import (
    CapabilityError,
    Coefficient,
    DomainError,
    Error,
    ExpMixtureJump,
    ExpPhase,
    FactorizationError,
    LevyModel,
    NormalJump,
    NumericalBlowup,
    SolverError,
    TwoPointJump,
    UniformJump,
    UsageError,
    enhanced,
    estimate_mse,
    euler_poisson,
    gamma_hitting_moments,
    gamma_mean_abs_deviation,
    harmonic_gap_mean,
    hitting_error_closed_form,
    largest_gap,
    list_registries,
    make_problem,
    mauldon_target,
    rate_ladder,
    rothe_solve,
    run_experiment,
    sample_resolvent,
    scheme_names,
    wh_factorize,
)

__all__ = [name for name in dir() if not name.startswith("_")]
