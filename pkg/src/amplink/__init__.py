"""Gain selection and rate analysis for multi-span amplified fiber links.

The package models a fiber link divided into equally spaced segments with
quantum-limited amplifiers in between, evaluates the spectral efficiency
achievable with per-pulse (heterodyne/homodyne) and joint-detection
receivers, and solves the gain-selection problems that quantify how much
amplifier energy a joint-detection receiver saves while matching the
throughput of a fully amplified per-pulse system.  A continuous-
amplification limit and baud-rate scaling analysis round out the API;
the ``amplink`` command line exposes all of it.
"""

from .baudrate import (
    BaudScan,
    ojdr_rate_limit,
    ossr_rate_limit,
    quantum_limit_crossover,
    rate_hadamard,
    rate_ojdr,
    rate_ojdr_noise_flux,
    rate_ossr,
    scan_baud_rates,
)
from .continuum import (
    OnOffConfig,
    OnOffResult,
    continuous_energy_shannon,
    onoff_coefficients,
    onoff_se_and_energy,
    shannon_se_continuous,
    solve_onoff,
)
from .link import (
    ChannelCoefficients,
    GainProfile,
    LinkConfig,
    check_power_constraint,
    coefficients_for,
    max_gain,
    noise_by_matrix_product,
    propagate,
    swap_gains,
)
from .optimize import (
    EnergyModel,
    GainSearchState,
    OptimizationResult,
    descend_energy_gradient,
    energy,
    energy_gradient,
    energy_relaxed,
    maximize_holevo_se,
    maximize_shannon_se,
    minimize_energy,
    minimize_energy_homodyne,
    run_energy_descent,
    shannon_baseline_energy,
    slide_along_se_surface,
)
from .rates import (
    HETERODYNE,
    HOLEVO,
    HOMODYNE,
    Receiver,
    holevo_gain_gradient,
    holevo_se,
    homodyne_gain_gradient,
    homodyne_se,
    shannon_gain_gradient,
    shannon_se,
    thermal_entropy,
    thermal_entropy_slope,
)
from .sweep import (
    CSV_COLUMNS,
    SweepCell,
    SweepSpec,
    emit,
    find_ae_crossing,
    render,
    run_point,
    run_sweep,
)
from .units import (
    PhysicalParams,
    photon_energy,
    photon_flux,
    photons_per_pulse,
)

__version__ = "0.1.0"

__all__ = [
    "BaudScan",
    "ChannelCoefficients",
    "CSV_COLUMNS",
    "EnergyModel",
    "GainProfile",
    "GainSearchState",
    "HETERODYNE",
    "HOLEVO",
    "HOMODYNE",
    "LinkConfig",
    "OnOffConfig",
    "OnOffResult",
    "OptimizationResult",
    "PhysicalParams",
    "Receiver",
    "SweepCell",
    "SweepSpec",
    "check_power_constraint",
    "coefficients_for",
    "continuous_energy_shannon",
    "descend_energy_gradient",
    "emit",
    "energy",
    "energy_gradient",
    "energy_relaxed",
    "find_ae_crossing",
    "holevo_gain_gradient",
    "holevo_se",
    "homodyne_gain_gradient",
    "homodyne_se",
    "max_gain",
    "maximize_holevo_se",
    "maximize_shannon_se",
    "minimize_energy",
    "minimize_energy_homodyne",
    "noise_by_matrix_product",
    "ojdr_rate_limit",
    "onoff_coefficients",
    "onoff_se_and_energy",
    "ossr_rate_limit",
    "photon_energy",
    "photon_flux",
    "photons_per_pulse",
    "propagate",
    "quantum_limit_crossover",
    "rate_hadamard",
    "rate_ojdr",
    "rate_ojdr_noise_flux",
    "rate_ossr",
    "render",
    "run_energy_descent",
    "run_point",
    "run_sweep",
    "scan_baud_rates",
    "shannon_baseline_energy",
    "shannon_gain_gradient",
    "shannon_se",
    "shannon_se_continuous",
    "slide_along_se_surface",
    "solve_onoff",
    "swap_gains",
    "thermal_entropy",
    "thermal_entropy_slope",
]
