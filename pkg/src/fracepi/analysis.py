"""Threshold and stability analysis of the epidemic model.

Provides the basic reproduction number R0 in two algebraically
identical forms (next-generation factored form and fully expanded
form), the disease-free equilibrium, and a constructive Lyapunov
certificate: explicit coefficients (a0, a1, a2, a3) such that

    V = a0*E + a1*I + a2*P + a3*H

has Caputo derivative bounded by kappa * a0 * (R0 - 1) * E along
trajectories, which is non-positive whenever R0 <= 1.  The
coefficients satisfy four exact algebraic identities that make the
cross terms in D^alpha V cancel; those identities are exposed for
direct numerical verification, and verify_lyapunov_bound audits a
solved trajectory against the decay bound using the L1 discrete
Caputo derivative.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import DomainError
from .model import (CompartmentState, ModelParams, derived_rates)
from .solver import Trajectory, discrete_caputo_derivative


class StabilityClass(Enum):
    """Outcome of the threshold classification."""

    GLOBALLY_STABLE_DFE = "GloballyStableDFE"
    INDETERMINATE = "Indeterminate"


@dataclass(frozen=True)
class StabilityVerdict:
    r0: float
    classification: StabilityClass


@dataclass(frozen=True)
class LyapunovCoefficients:
    """Weights of the linear Lyapunov function V = a0 E + a1 I + a2 P + a3 H."""

    a0: float
    a1: float
    a2: float
    a3: float


@dataclass(frozen=True, eq=False)
class LyapunovReport:
    """Trajectory audit of the Lyapunov decay bound.

    Attributes:
        v_series: V evaluated at every sample t_0 .. t_N.
        caputo_series: L1 Caputo derivative of V at t_1 .. t_N.
        bound_series: kappa * a0 * (R0 - 1) * E at t_1 .. t_N.
        max_violation: max(caputo_series - bound_series); <= 0 means
            the certificate held at every audited sample.
    """

    v_series: np.ndarray
    caputo_series: np.ndarray
    bound_series: np.ndarray
    max_violation: float


def _removal_rates(params: ModelParams):
    d = derived_rates(params)
    if d.varpi_i <= 0.0 or d.varpi_p <= 0.0 or d.varpi_h <= 0.0:
        raise DomainError(
            "reproduction number is undefined: removal rates "
            f"(varpi_i={d.varpi_i}, varpi_p={d.varpi_p}, varpi_h={d.varpi_h}) "
            "must all be positive")
    return d


def basic_reproduction_number(params: ModelParams) -> float:
    """R0 in the factored next-generation form.

    R0 = beta*rho1*(gamma_a*l + varpi_h) / (varpi_i * varpi_h)
       + (beta*gamma_a*l + beta_prime*varpi_h) * rho2 / (varpi_p * varpi_h)

    Raises:
        DomainError: If any of varpi_i, varpi_p, varpi_h is zero.
    """
    d = _removal_rates(params)
    gl = params.gamma_a * params.l
    term_i = params.beta * params.rho1 * (gl + d.varpi_h) / (d.varpi_i * d.varpi_h)
    term_p = ((params.beta * gl + params.beta_prime * d.varpi_h) * params.rho2
              / (d.varpi_p * d.varpi_h))
    return term_i + term_p


def r0_rewritten(params: ModelParams) -> float:
    """R0 fully expanded into four simple fractions.

    R0 = beta*rho1/varpi_i + beta*gamma_a*l*rho1/(varpi_i*varpi_h)
       + beta_prime*rho2/varpi_p + beta*gamma_a*l*rho2/(varpi_p*varpi_h)

    Algebraically identical to basic_reproduction_number; kept as an
    independent evaluation route for cross-checking.
    """
    d = _removal_rates(params)
    gl = params.gamma_a * params.l
    return (params.beta * params.rho1 / d.varpi_i
            + params.beta * gl * params.rho1 / (d.varpi_i * d.varpi_h)
            + params.beta_prime * params.rho2 / d.varpi_p
            + params.beta * gl * params.rho2 / (d.varpi_p * d.varpi_h))


def disease_free_equilibrium(params: ModelParams) -> CompartmentState:
    """The infection-free fixed point: everyone susceptible."""
    return CompartmentState(S=params.N, E=0.0, I=0.0, P=0.0,
                            A=0.0, H=0.0, R=0.0, F=0.0)


def lyapunov_coefficients(params: ModelParams) -> LyapunovCoefficients:
    """Coefficients of the certificate function V = a0 E + a1 I + a2 P + a3 H.

        a0 = varpi_i * varpi_p * varpi_h
        a1 = beta * varpi_p * (varpi_h + l * gamma_a)
        a2 = varpi_i * (beta_prime * varpi_h + beta * l * gamma_a)
        a3 = beta * l * varpi_i * varpi_p

    All four are non-negative for valid parameters, and they satisfy
    the cancellation identities checked by lyapunov_identity_residuals.

    Raises:
        DomainError: If any of varpi_i, varpi_p, varpi_h is zero (the
            certificate construction needs positive removal rates).
    """
    d = _removal_rates(params)
    gl = params.l * params.gamma_a
    return LyapunovCoefficients(
        a0=d.varpi_i * d.varpi_p * d.varpi_h,
        a1=params.beta * d.varpi_p * (d.varpi_h + gl),
        a2=d.varpi_i * (params.beta_prime * d.varpi_h + params.beta * gl),
        a3=params.beta * params.l * d.varpi_i * d.varpi_p,
    )


def lyapunov_value(state, coeffs: LyapunovCoefficients) -> float:
    """Evaluate V = a0 E + a1 I + a2 P + a3 H at a state."""
    x = state.as_array() if isinstance(state, CompartmentState) else \
        np.asarray(state, dtype=np.float64)
    return float(coeffs.a0 * x[1] + coeffs.a1 * x[2]
                 + coeffs.a2 * x[3] + coeffs.a3 * x[5])


def lyapunov_identity_residuals(params: ModelParams) -> dict[str, float]:
    """Relative residuals of the four cancellation identities.

    Returns a mapping from identity name to |lhs| / scale where lhs
    should vanish and scale is the largest participating term (1.0
    when all terms vanish, making the residual 0 for degenerate
    all-zero cases):

        I_coeff:  a0*beta   + a3*gamma_a - a1*varpi_i   = 0
        H_coeff:  a0*beta*l - a3*varpi_h               = 0
        P_coeff:  a0*beta_prime + a3*gamma_a - a2*varpi_p = 0
        E_coeff:  a1*rho1 + a2*rho2 - a0  =  a0*(R0 - 1)
    """
    c = lyapunov_coefficients(params)
    d = derived_rates(params)
    r0 = basic_reproduction_number(params)

    def rel(residual, *terms):
        scale = max((abs(t) for t in terms), default=0.0)
        if scale == 0.0:
            scale = 1.0
        return abs(residual) / scale

    t_i = (c.a0 * params.beta, c.a3 * params.gamma_a, c.a1 * d.varpi_i)
    t_h = (c.a0 * params.beta * params.l, c.a3 * d.varpi_h)
    t_p = (c.a0 * params.beta_prime, c.a3 * params.gamma_a, c.a2 * d.varpi_p)
    t_e = (c.a1 * params.rho1, c.a2 * params.rho2, c.a0, c.a0 * (r0 - 1.0))
    return {
        "I_coeff": rel(t_i[0] + t_i[1] - t_i[2], *t_i),
        "H_coeff": rel(t_h[0] - t_h[1], *t_h),
        "P_coeff": rel(t_p[0] + t_p[1] - t_p[2], *t_p),
        "E_coeff": rel(t_e[0] + t_e[1] - t_e[2] - t_e[3], *t_e),
    }


def classify_stability(params: ModelParams) -> StabilityVerdict:
    """Threshold classification of the disease-free equilibrium.

    R0 < 1 yields the globally-stable verdict backed by the Lyapunov
    certificate; R0 >= 1 is reported as indeterminate (this analysis
    makes no claim about endemic behaviour).
    """
    r0 = basic_reproduction_number(params)
    if r0 < 1.0:
        cls = StabilityClass.GLOBALLY_STABLE_DFE
    else:
        cls = StabilityClass.INDETERMINATE
    return StabilityVerdict(r0=r0, classification=cls)


def verify_lyapunov_bound(trajectory: Trajectory, params: ModelParams,
                          alpha: float) -> LyapunovReport:
    """Audit a solved trajectory against the Lyapunov decay bound.

    Computes V along the trajectory, its L1 discrete Caputo derivative
    of order alpha, and the certified bound kappa * a0 * (R0 - 1) * E;
    the report's max_violation is the largest amount by which the
    derivative exceeds the bound (negative when the certificate holds
    with margin everywhere).

    Args:
        trajectory: Solution with 8-component states on a uniform grid.
        params: Parameters the trajectory was generated with.
        alpha: Fractional order used for the solve.

    Raises:
        DomainError: If states are not 8-dimensional or the grid is
            not uniform.
    """
    states = trajectory.states
    if states.ndim != 2 or states.shape[1] != 8:
        raise DomainError("verify_lyapunov_bound expects 8-component states")
    times = trajectory.times
    steps = np.diff(times)
    h = float(steps[0])
    if not np.allclose(steps, h, rtol=1e-9, atol=0.0):
        raise DomainError("verify_lyapunov_bound expects a uniform time grid")

    c = lyapunov_coefficients(params)
    r0 = basic_reproduction_number(params)
    v = (c.a0 * states[:, 1] + c.a1 * states[:, 2]
         + c.a2 * states[:, 3] + c.a3 * states[:, 5])
    dv = discrete_caputo_derivative(v, alpha, h)
    bound = params.kappa * c.a0 * (r0 - 1.0) * states[1:, 1]
    return LyapunovReport(
        v_series=v,
        caputo_series=dv,
        bound_series=bound,
        max_violation=float(np.max(dv - bound)),
    )
