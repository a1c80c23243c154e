"""Numerical laboratory for small-exponent limits of nonlocal energies.

The package computes ladders of nonlocal energies

    E_n(u) = 2 * integral over d(x, y) > 0 of |u(x) - u(y)|^p
             weighted by a radial mollifier rho_n(d(x, y)),

on metric measure spaces (Euclidean, normed, warped line, circle,
Heisenberg), extrapolates the ladder to the vanishing-exponent limit, and
compares the result against the prediction 2 * AVR * ||u||_p^p, where
AVR is the asymptotic volume ratio of the space.
"""

from .asymptotics import (
    AsymptoticReport,
    Assumption1Report,
    Extrapolation,
    HypothesisViolation,
    PredictedLimit,
    check_ms,
    extrapolate,
    predict_limit,
    run_ladder,
    validate_assumption1,
)
from .config import ConfigError, ExperimentConfig, ScenarioError, load_config, parse_config
from .energy import (
    EnergyDecomposition,
    EnergyEstimate,
    TestFunction,
    ball_indicator,
    decompose_energy,
    energy_mc,
    energy_quadrature_1d,
    norm_p_pow,
    smooth_bump,
    tent,
)
from .mollifiers import (
    DivergenceError,
    Generator,
    MollifierFamily,
    MollifierReport,
    default_s_ladder,
    integrate_log_tail,
    make_exp_generator,
    make_family,
    make_log_generator,
    make_power_generator,
    standard_family,
    tail_mass_quadrature,
    verify_family,
)
from .spaces import (
    BallVolume,
    BgiReport,
    CircleSpace,
    EuclideanSpace,
    HeisenbergSpace,
    NormedSpace,
    Space,
    ValueWithError,
    VolumeBoundReport,
    WarpedLine,
    check_bgi,
    check_volume_bound,
    estimate_avr,
    estimate_density,
    make_circle,
    make_euclidean,
    make_heisenberg,
    make_normed,
    make_warped_line,
    mc_ball_volume,
    tail_mollifier_mass,
)
from .volume_profiles import (
    ProfileDiagnostics,
    VolumeProfile,
    check_profile,
    make_custom_profile,
    make_hyperbolic_profile,
    make_power_profile,
)

__all__ = [
    "Assumption1Report",
    "AsymptoticReport",
    "BallVolume",
    "BgiReport",
    "CircleSpace",
    "ConfigError",
    "DivergenceError",
    "EnergyDecomposition",
    "EnergyEstimate",
    "EuclideanSpace",
    "ExperimentConfig",
    "Extrapolation",
    "Generator",
    "HeisenbergSpace",
    "HypothesisViolation",
    "MollifierFamily",
    "MollifierReport",
    "NormedSpace",
    "PredictedLimit",
    "ProfileDiagnostics",
    "ScenarioError",
    "Space",
    "TestFunction",
    "ValueWithError",
    "VolumeBoundReport",
    "VolumeProfile",
    "WarpedLine",
    "ball_indicator",
    "check_bgi",
    "check_ms",
    "check_profile",
    "check_volume_bound",
    "decompose_energy",
    "default_s_ladder",
    "energy_mc",
    "energy_quadrature_1d",
    "estimate_avr",
    "estimate_density",
    "extrapolate",
    "integrate_log_tail",
    "load_config",
    "make_circle",
    "make_custom_profile",
    "make_euclidean",
    "make_exp_generator",
    "make_family",
    "make_heisenberg",
    "make_hyperbolic_profile",
    "make_log_generator",
    "make_normed",
    "make_power_generator",
    "make_power_profile",
    "make_warped_line",
    "mc_ball_volume",
    "norm_p_pow",
    "parse_config",
    "predict_limit",
    "run_ladder",
    "smooth_bump",
    "standard_family",
    "tail_mass_quadrature",
    "tail_mollifier_mass",
    "tent",
    "validate_assumption1",
    "verify_family",
]

__version__ = "0.1.0"
