"""Fractional-order epidemic modeling toolkit.

Solves Caputo fractional initial value problems with an
Adams-Bashforth-Moulton predictor-corrector, instantiates an
eight-compartment epidemic model with hospital and super-spreader
transmission routes, and provides threshold (R0) and Lyapunov
stability analysis plus scenario/CSV plumbing and a CLI.
"""

from .analysis import (LyapunovCoefficients, LyapunovReport, StabilityClass,
                       StabilityVerdict, basic_reproduction_number,
                       classify_stability, disease_free_equilibrium,
                       lyapunov_coefficients, lyapunov_identity_residuals,
                       lyapunov_value, r0_rewritten, verify_lyapunov_bound)
from .errors import DomainError, NumericalError, ValidationError
from .model import (COMPARTMENTS, CompartmentState, DerivedRates, ModelMatrices,
                    ModelParams, build_matrices, check_population_bounds,
                    derived_rates, force_of_infection, make_field, rhs)
from .scenario import (BUILTIN_NAMES, DFE_SCENARIO_NAME, Scenario,
                       builtin_params, builtin_scenarios, dfe_scenario,
                       get_builtin, iph_total, load_scenario, save_scenario,
                       with_beta, with_order, write_trajectory_csv)
from .simulate import peak_summary, run_scenario
from .solver import (FractionalOrder, SolverConfig, TimeGrid, Trajectory,
                     abm_weights, discrete_caputo_derivative, solve_caputo_ivp)
from .special import gamma_fn, mittag_leffler

__version__ = "0.1.0"

__all__ = [
    "BUILTIN_NAMES", "COMPARTMENTS", "CompartmentState", "DerivedRates",
    "DomainError", "FractionalOrder", "LyapunovCoefficients",
    "LyapunovReport", "ModelMatrices", "ModelParams", "NumericalError",
    "Scenario", "SolverConfig", "StabilityClass", "StabilityVerdict",
    "TimeGrid", "Trajectory", "ValidationError", "abm_weights",
    "DFE_SCENARIO_NAME", "basic_reproduction_number", "build_matrices",
    "builtin_params", "builtin_scenarios", "check_population_bounds",
    "classify_stability", "derived_rates", "dfe_scenario",
    "discrete_caputo_derivative",
    "disease_free_equilibrium", "force_of_infection", "gamma_fn",
    "get_builtin", "iph_total", "load_scenario", "lyapunov_coefficients",
    "lyapunov_identity_residuals", "lyapunov_value", "make_field",
    "mittag_leffler", "peak_summary", "r0_rewritten", "rhs", "run_scenario",
    "save_scenario", "solve_caputo_ivp", "verify_lyapunov_bound",
    "with_beta", "with_order", "write_trajectory_csv",
]
