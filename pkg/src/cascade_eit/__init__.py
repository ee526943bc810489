"""Steady-state Lindblad simulator for multi-window EIT in a cascade atom.

A weak probe and a strong coupling field drive a five-level ladder in which
the coupling addresses three closely spaced upper levels at once. The package
builds the rotating-frame Hamiltonian and the Lindblad generator, solves the
steady-state density matrix, and extracts probe absorption and dispersion
spectra together with their transparency-window structure.
"""

from .model import (
    DriveParams,
    LevelScheme,
    Liouvillian,
    apply_lindblad,
    build_hamiltonian,
    build_liouvillian,
    decay_channels,
    unvectorize,
    vectorize,
)
from .solver import (
    DensityMatrix,
    PositivityWarning,
    SingularSystemError,
    StepTooLargeError,
    default_horizon,
    default_timestep,
    residual,
    steady_state,
    time_evolve,
)
from .spectrum import (
    DipMetrics,
    EmptyReportError,
    GridTooCoarseError,
    PeakReport,
    Spectrum,
    SpectrumMeta,
    SweepEntry,
    broaden,
    deepest_dip_metrics,
    dressed_state_frequencies,
    find_peaks_dips,
    scan_probe,
    slope_profile,
    sweep_coupling,
    weak_probe_susceptibility,
)

__version__ = "0.1.0"

__all__ = [
    "DensityMatrix",
    "DipMetrics",
    "DriveParams",
    "EmptyReportError",
    "GridTooCoarseError",
    "LevelScheme",
    "Liouvillian",
    "PeakReport",
    "PositivityWarning",
    "SingularSystemError",
    "Spectrum",
    "SpectrumMeta",
    "StepTooLargeError",
    "SweepEntry",
    "apply_lindblad",
    "broaden",
    "build_hamiltonian",
    "build_liouvillian",
    "decay_channels",
    "deepest_dip_metrics",
    "default_horizon",
    "default_timestep",
    "dressed_state_frequencies",
    "find_peaks_dips",
    "residual",
    "scan_probe",
    "slope_profile",
    "steady_state",
    "sweep_coupling",
    "time_evolve",
    "unvectorize",
    "vectorize",
    "weak_probe_susceptibility",
]
