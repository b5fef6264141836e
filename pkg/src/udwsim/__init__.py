"""Detector response for quantum superpositions of accelerated trajectories.

An Unruh-deWitt detector switched on with a Gaussian window travels in a
superposition of classical uniformly accelerated worldlines. This package
computes its excitation probabilities (closed saddle-point forms and direct
oscillatory quadrature), instantaneous transition rates, and the conditional
detector state after measuring the control degree of freedom, with the
regulated correlators and their pointlike limit handled explicitly.
"""

from .closed_form import (ClosedFormResult, DetectorParams, p_antiparallel,
                          p_differing, p_local, p_parallel, xi_prefactor,
                          zeta_prefactor)
from .config import OutputSpec, ScenarioConfig, validate_config
from .correlators import (Regulator, denominator_factors, scenario_correlator,
                          wightman_antiparallel_cross, wightman_differing_cross,
                          wightman_local, wightman_parallel_cross,
                          wightman_schlicht, wightman_thermal_cross,
                          wightman_thermal_local)
from .errors import (ConfigError, ConvergenceError, IndeterminateRatioError,
                     SingularParameterError, ValidityError)
from .kinematics import (FAMILIES, Event, FourVector, TrajectoryScenario,
                         four_velocity, horizon_crossing_time,
                         minkowski_interval, worldline_event)
from .quadrature import (DEFAULT_EPS_LADDER, EXTRAPOLATION_MODES,
                         QuadratureConfig, RegulatorSchedule, default_schedule,
                         epsilon_extrapolate)
from .response import (KMSReport, ProbabilityResult, RateResult,
                       excitation_probability_quadrature, kappa_scale,
                       kms_check, planck_rate, transition_rate,
                       transition_rate_finite_switching, window_halfwidth)
from .superposition import (ControlState, DetectorDensityMatrix,
                            WightmanIntegrals, compute_wightman_integrals,
                            conditional_density_matrix, conditional_norm,
                            phase_envelope, visibility_scan)
from .validity import (ADVISORY_CONSTRAINTS, ValidityReport, beta_parameter,
                       check_antiparallel_pole, check_beta_bound)

__version__ = "0.1.0"

__all__ = [
    "ADVISORY_CONSTRAINTS",
    "ClosedFormResult",
    "ConfigError",
    "ControlState",
    "ConvergenceError",
    "DEFAULT_EPS_LADDER",
    "DetectorDensityMatrix",
    "DetectorParams",
    "EXTRAPOLATION_MODES",
    "Event",
    "FAMILIES",
    "FourVector",
    "IndeterminateRatioError",
    "KMSReport",
    "OutputSpec",
    "ProbabilityResult",
    "QuadratureConfig",
    "RateResult",
    "Regulator",
    "RegulatorSchedule",
    "ScenarioConfig",
    "SingularParameterError",
    "TrajectoryScenario",
    "ValidityError",
    "ValidityReport",
    "WightmanIntegrals",
    "beta_parameter",
    "check_antiparallel_pole",
    "check_beta_bound",
    "compute_wightman_integrals",
    "conditional_density_matrix",
    "conditional_norm",
    "default_schedule",
    "denominator_factors",
    "epsilon_extrapolate",
    "excitation_probability_quadrature",
    "four_velocity",
    "horizon_crossing_time",
    "kappa_scale",
    "kms_check",
    "minkowski_interval",
    "p_antiparallel",
    "p_differing",
    "p_local",
    "p_parallel",
    "phase_envelope",
    "planck_rate",
    "scenario_correlator",
    "transition_rate",
    "transition_rate_finite_switching",
    "validate_config",
    "visibility_scan",
    "wightman_antiparallel_cross",
    "wightman_differing_cross",
    "wightman_local",
    "wightman_parallel_cross",
    "wightman_schlicht",
    "wightman_thermal_cross",
    "wightman_thermal_local",
    "window_halfwidth",
    "worldline_event",
    "xi_prefactor",
    "zeta_prefactor",
]
