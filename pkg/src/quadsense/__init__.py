"""quadsense: force-sensing toolkit for squeezed quadratic cavity optomechanics."""

__version__ = "0.1.0"

from .errors import (MarginalStabilityError, OptimizerError, PhysicsDomainError,
                     PoleError, QuadsenseError, ScenarioError, SingularityError,
                     UndefinedResponseError)
from .system import (HBAR, K_B, C_LIGHT, Scenario, SqueezerParams, SystemParams,
                     cooperativity_sql, derive_params, derive_squeezer,
                     load_scenario, matched_signal_power, scenario_from_dict,
                     steady_state)
from .response import (TransferCoefficients, effective_susceptibility,
                       lorentzian_susceptibility, mechanical_susceptibility,
                       susceptibilities, transfer_coefficients)
from .spectra import (NoiseKernels, SpectrumPoint, added_noise,
                      added_noise_from_kernels, closed_form_standard_phase_n_add,
                      force_psd, linear_baseline_added_noise, linear_baseline_sql,
                      mechanical_response, minimize_added_noise_over_phi,
                      noise_kernels, raw_output_spectra, rotated_spectrum,
                      spectrum_point, sql, squeezing_degree_db, thermal_psd)
from .stability import (DriftModel, characteristic_coefficients, drift_matrix,
                        eigenvalues, is_stable, marching_squares, routh_hurwitz,
                        stability_map, theta_functions)
from .gaussian import (CovarianceState, diffusion_matrix, lyapunov_solve,
                       one_over_e_ellipse, quantum_advantage, steady_covariance,
                       wigner, wigner_marginal)
from .opo import (OpoPoint, ShCorrections, domain_boundary_power, power_curve,
                  power_for_G, pump_amplitude, sh_corrections, squeezing_strength,
                  squeezing_strength_from_amplitude, zero_crossing_pump_amplitude)
from .metrics import (OptimumReport, enhancement_chi, optimize,
                      quadrature_variance, response_enhancement_xi, snr,
                      snr_enhancement, snr_sql)
