"""Detector-qubit simulation of work, heat and internal-energy statistics of a driven dissipative qubit."""

from .errors import AnalysisError, ConfigError, QThermoError, SimulationError
from .protocol import SCHEMES, ExperimentConfig, QcgfTable, SchemeKind, build_scheme_circuit, direct_averages, sweep
from .spectral import (
    PEAK_ENERGIES,
    average_from_derivative,
    average_from_slope,
    conservation_check,
    negativity,
    peak_weights,
    pipeline_averages,
    qpdf,
    renormalize_peaks,
)
from .tmp import initial_weights, tmp_averages, tmp_distribution

__all__ = [
    "AnalysisError",
    "PEAK_ENERGIES",
    "ConfigError",
    "ExperimentConfig",
    "QThermoError",
    "QcgfTable",
    "SCHEMES",
    "SchemeKind",
    "SimulationError",
    "average_from_derivative",
    "average_from_slope",
    "build_scheme_circuit",
    "conservation_check",
    "direct_averages",
    "initial_weights",
    "negativity",
    "peak_weights",
    "pipeline_averages",
    "qpdf",
    "renormalize_peaks",
    "sweep",
    "tmp_averages",
    "tmp_distribution",
]
