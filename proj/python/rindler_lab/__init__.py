"""Composite clocks in uniformly accelerated frames."""

from ._core import (
    __version__,
    bracket_hamiltonian,
    check_expansion_consistency,
    ConfigError,
    effective_acceleration,
    EquilibriumResult,
    find_equilibrium,
    FrameSpec,
    harmonic_spectrum,
    integrate,
    InterferometerConfig,
    minkowski_to_rindler,
    NumericError,
    observer_four_velocity,
    PhaseState,
    proper_time_rate,
    RedshiftResult,
    rindler_to_minkowski,
    run_redshift_experiment,
    run_scenario,
    selfcheck,
    shift_rindler,
    Spec,
    Spectrum,
    supported_clock,
    total_hamiltonian,
    visibility,
    visibility_oracle,
)

__all__ = [name for name in dir() if not name.startswith("_")] + ["__version__"]
