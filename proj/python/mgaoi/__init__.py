"""Age of Information in multi-source FCFS M/GI/1 queues."""

from ._core import (
    ConfigError,
    ConvergenceError,
    DomainError,
    Error,
    NumericError,
    ServiceDistribution,
    SimulationError,
    SystemModel,
    TaggedView,
    ValidationError,
    analyze,
    aoi_cdf,
    invert_cdf,
    invert_pdf,
    numerical_moment,
    parse_scenario,
    parse_scenario_text,
    simulate,
    tagged,
    validate,
    validate_scenario,
)

__all__ = [
    "ConfigError",
    "ConvergenceError",
    "DomainError",
    "Error",
    "NumericError",
    "ServiceDistribution",
    "SimulationError",
    "SystemModel",
    "TaggedView",
    "ValidationError",
    "analyze",
    "aoi_cdf",
    "invert_cdf",
    "invert_pdf",
    "numerical_moment",
    "parse_scenario",
    "parse_scenario_text",
    "simulate",
    "tagged",
    "validate",
    "validate_scenario",
]
