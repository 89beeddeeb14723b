"""Python bindings for the decay-lab checks."""

from ._core import (
    ConfigError,
    DomainError,
    GridError,
    QuadratureError,
    SolverError,
    certify_convolution_bound,
    convolution_integral,
    convolution_integral_closed_inner,
    fit_decay_exponent,
    heat_kernel,
    heat_lq_norm,
    heat_profile,
    load_config,
    omega,
    omega_derivatives,
    oseen_tensor,
    picard_run,
    representation_residual,
    run_command,
    time_integral,
    time_integral_envelope,
)

__all__ = [
    "ConfigError",
    "DomainError",
    "GridError",
    "QuadratureError",
    "SolverError",
    "certify_convolution_bound",
    "convolution_integral",
    "convolution_integral_closed_inner",
    "fit_decay_exponent",
    "heat_kernel",
    "heat_lq_norm",
    "heat_profile",
    "load_config",
    "omega",
    "omega_derivatives",
    "oseen_tensor",
    "picard_run",
    "representation_residual",
    "run_command",
    "time_integral",
    "time_integral_envelope",
]
