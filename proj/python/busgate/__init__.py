"""Python bindings for the busgate simulator."""

from ._core import (
    ConfigError,
    NumericalError,
    Optimum,
    __version__,
    average_gate_fidelity,
    concurrence,
    fit_scaling,
    ideal_gate,
    optimal_coupling_estimate,
    optimize,
    reproduce,
    run_gate,
    run_repeated,
    run_scenario,
    transfer_amplitude,
    transfer_time_estimate,
    unitary_channel,
)

__all__ = [
    "ConfigError",
    "NumericalError",
    "Optimum",
    "__version__",
    "average_gate_fidelity",
    "concurrence",
    "fit_scaling",
    "ideal_gate",
    "optimal_coupling_estimate",
    "optimize",
    "reproduce",
    "run_gate",
    "run_repeated",
    "run_scenario",
    "transfer_amplitude",
    "transfer_time_estimate",
    "unitary_channel",
]
