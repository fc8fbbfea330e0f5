"""Series solutions of linear operator equations by cyclic operator decomposition."""

from ._core import (
    GridError,
    PropagationError,
    SchemeError,
    asymptotic_exponent,
    exp_potential,
    exp_residual,
    format_double,
    nested_inverse_partial,
    oscillator_solve,
    power_series,
    resolvent_ratio,
    rk4_oscillator,
    run_acceptance,
    stationary_solve,
    tdse_propagate,
    term_bound,
    upper_estimate,
    wave_solve,
)

__all__ = [
    "GridError",
    "PropagationError",
    "SchemeError",
    "asymptotic_exponent",
    "exp_potential",
    "exp_residual",
    "format_double",
    "nested_inverse_partial",
    "oscillator_solve",
    "power_series",
    "resolvent_ratio",
    "rk4_oscillator",
    "run_acceptance",
    "stationary_solve",
    "tdse_propagate",
    "term_bound",
    "upper_estimate",
    "wave_solve",
]
