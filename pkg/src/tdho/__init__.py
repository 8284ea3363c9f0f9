"""Exact dynamics and joint (Leipnik) entropy of one-dimensional harmonic
oscillators with time-dependent mass and/or frequency."""

from .entropy import (EntropyRecord, LEIPNIK_MINIMUM, differential_entropy,
                      entropy_sweep, gaussian_joint_entropy,
                      joint_entropy_closed_inverse_square,
                      joint_entropy_closed_pulsating, joint_entropy_gaussian,
                      joint_entropy_numeric, leipnik_bound_margin)
from .ermakov import (RhoSolution, analytic_gamma, analytic_rho,
                      analytic_rho_solution, ermakov_residual, phase_gamma,
                      solve_ermakov)
from .errors import (BoundViolation, CausticError, ConfigError, DivergenceWarning,
                     DomainError, GridTooSmall, IoError, NormalizationError,
                     QuadratureError, SingularityError, TdhoError,
                     UnsupportedScenario)
from .figures import emit_figure_data, figure_params
from .model import (Scenario, ScenarioKind, SpatialGrid, TimeGrid,
                    ensure_valid_span, ensure_valid_time, frequency_at, mass_at,
                    mass_rate_at, scenario_from_json)
from .propagator import (BoundaryData, KernelValue, classical_action,
                         classical_path, kernel, kernel_inverse_square_closed,
                         kernel_pulsating_closed, kernel_static_closed,
                         mehler_check, semigroup_check, spectral_kernel,
                         van_vleck_prefactor)
from .wavefunction import (DensityPair, MomentumState, WaveState, default_grid,
                           density_pair, eigenstate, hermite, hermite_functions,
                           momentum_transform, psi_general, psi_inverse_square,
                           psi_pulsating, psi_static, sigma_p_sq, sigma_x_sq,
                           tdse_residual)

__version__ = "0.1.0"
