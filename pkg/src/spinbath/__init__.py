"""Artificial-relaxation simulator: closed-form, strong-coupling, and
brute-force solvers for a central qubit coupled to structured qubit
environments."""

from .analytic import (
    ModeAmplitude,
    fid_analytic,
    fid_series_analytic,
    mode_amplitude,
    recursion_metric,
)
from .config import ConfigError, parse_config, serialize_config
from .model import (
    FidSeries,
    FullFrameSpec,
    GroupSpec,
    NonRwaSpec,
    SpinSystem,
    hz,
    preset,
    validate,
)
from .nonrwa import PartState, evolve_part, fid_nonrwa, nonrwa_generator
from .oracle import (
    DensityMatrix,
    build_hamiltonian,
    evolve_gksl,
    expectation_sigma_x,
    expectation_sigma_y,
    fid_series_oracle,
    initial_state,
    rwa_discrepancy,
)

__all__ = [
    "ConfigError",
    "DensityMatrix",
    "FidSeries",
    "FullFrameSpec",
    "GroupSpec",
    "ModeAmplitude",
    "NonRwaSpec",
    "PartState",
    "SpinSystem",
    "build_hamiltonian",
    "evolve_gksl",
    "evolve_part",
    "expectation_sigma_x",
    "expectation_sigma_y",
    "fid_analytic",
    "fid_nonrwa",
    "fid_series_analytic",
    "fid_series_oracle",
    "hz",
    "initial_state",
    "mode_amplitude",
    "nonrwa_generator",
    "parse_config",
    "preset",
    "recursion_metric",
    "rwa_discrepancy",
    "serialize_config",
    "validate",
]

__version__ = "0.1.0"
