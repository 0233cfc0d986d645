"""Steady states, entanglement and energy currents of two coupled qubits between two reservoirs."""

from ._nesscq import (
    Bath,
    ConfigError,
    Error,
    InvalidParameter,
    QubitPair,
    SteadyState,
    analytic_steady_state,
    concurrence_threshold,
    run_comparison,
    run_selfcheck,
    run_sweep,
    steady_state,
)

__all__ = [
    "Bath",
    "ConfigError",
    "Error",
    "InvalidParameter",
    "QubitPair",
    "SteadyState",
    "analytic_steady_state",
    "concurrence_threshold",
    "run_comparison",
    "run_selfcheck",
    "run_sweep",
    "steady_state",
]
