"""Eight-compartment epidemic model with hospital and super-spreader routes.

Compartments, in state-vector order:

    S  susceptible            A  asymptomatic infected
    E  exposed                H  hospitalized
    I  symptomatic infected   R  recovered
    P  super-spreader         F  dead

Transmission is driven by contact with I, H and P (the latter two with
their own transmissibilities), normalized by the population size N:

    lambda = (beta*I + l*beta*H + beta_prime*P) / N

The right-hand side conserves S+E+I+P+A+H+R+F exactly in exact
arithmetic (every outflow reappears as an inflow), and the compact form
f(x) = (S/N) * A1 x + A2 x with a constant pair of matrices is exposed
for structural checks.

The same scalar-arithmetic core is used by both solver lanes: once as
plain Python over numpy scalars, once compiled by numba against a
packed parameter vector, so a single compiled dispatcher serves every
parameter set without recompilation.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, fields

import numpy as np

from . import kernels
from .errors import NumericalError, ValidationError

COMPARTMENTS = ("S", "E", "I", "P", "A", "H", "R", "F")
N_COMPARTMENTS = len(COMPARTMENTS)

# Negative components below -warn_fraction * N trigger a warning; below
# -fail_fraction * N the trajectory is rejected as numerically unsound.
# Values are never clipped.
NEGATIVITY_WARN_FRACTION = 1e-6
NEGATIVITY_FAIL_FRACTION = 1e-3

_RATE_FIELDS = ("beta", "beta_prime", "l", "kappa", "rho1", "rho2",
                "gamma_a", "gamma_i", "gamma_r",
                "delta_i", "delta_p", "delta_h")


@dataclass(frozen=True)
class ModelParams:
    """Model rates and population size.

    Attributes:
        beta: Transmission rate from symptomatic infected (per day).
        beta_prime: Transmission rate from super-spreaders (per day).
        l: Relative transmissibility of hospitalized cases
           (dimensionless multiplier on beta).
        kappa: Rate of leaving the exposed class (per day).
        rho1: Fraction of exposed becoming symptomatic infected.
        rho2: Fraction of exposed becoming super-spreaders; the
            remainder 1 - rho1 - rho2 becomes asymptomatic.
        gamma_a: Hospitalization rate of I and P (per day).
        gamma_i: Recovery rate of I and P without hospitalization
            (per day).
        gamma_r: Recovery rate of hospitalized cases (per day).
        delta_i: Disease-induced death rate of I (per day).
        delta_p: Disease-induced death rate of P (per day).
        delta_h: Disease-induced death rate of H (per day).
        N: Population size the incidence is normalized by.
    """

    beta: float
    beta_prime: float
    l: float
    kappa: float
    rho1: float
    rho2: float
    gamma_a: float
    gamma_i: float
    gamma_r: float
    delta_i: float
    delta_p: float
    delta_h: float
    N: float

    def __post_init__(self):
        for name in _RATE_FIELDS:
            value = getattr(self, name)
            if not np.isfinite(value) or value < 0.0:
                raise ValidationError(
                    f"parameter {name} must be a finite non-negative number, "
                    f"got {value!r}", key=name)
            object.__setattr__(self, name, float(value))
        if not np.isfinite(self.N) or self.N <= 0.0:
            raise ValidationError(
                f"population N must be positive, got {self.N!r}", key="N")
        object.__setattr__(self, "N", float(self.N))
        if self.rho1 + self.rho2 > 1.0:
            raise ValidationError(
                f"branching fractions must satisfy rho1 + rho2 <= 1, "
                f"got {self.rho1} + {self.rho2}", key="rho1")


@dataclass(frozen=True)
class DerivedRates:
    """Aggregate removal rates appearing in R0 and the stability analysis.

    varpi_e: outflow of E into I/P/A beyond the tracked branches,
             kappa * (1 - rho1 - rho2).
    varpi_i: total removal rate of I, gamma_a + gamma_i + delta_i.
    varpi_p: total removal rate of P, gamma_a + gamma_i + delta_p.
    varpi_h: total removal rate of H, gamma_r + delta_h.
    """

    varpi_e: float
    varpi_i: float
    varpi_p: float
    varpi_h: float


@dataclass(frozen=True)
class CompartmentState:
    """A single model state; field order matches the state vector."""

    S: float
    E: float
    I: float
    P: float
    A: float
    H: float
    R: float
    F: float

    def __post_init__(self):
        for fld in fields(self):
            value = getattr(self, fld.name)
            if not np.isfinite(value):
                raise ValidationError(
                    f"compartment {fld.name} must be finite, got {value!r}",
                    key=fld.name)
            object.__setattr__(self, fld.name, float(value))

    def as_array(self) -> np.ndarray:
        return np.array([self.S, self.E, self.I, self.P,
                         self.A, self.H, self.R, self.F], dtype=np.float64)

    @classmethod
    def from_array(cls, values) -> "CompartmentState":
        arr = np.asarray(values, dtype=np.float64)
        if arr.shape != (N_COMPARTMENTS,):
            raise ValidationError(
                f"state vector must have {N_COMPARTMENTS} components, "
                f"got shape {arr.shape}")
        return cls(*arr.tolist())

    @property
    def total(self) -> float:
        return (self.S + self.E + self.I + self.P
                + self.A + self.H + self.R + self.F)


@dataclass(frozen=True, eq=False)
class ModelMatrices:
    """Constant matrices of the compact form f(x) = (S/N) A1 x + A2 x."""

    A1: np.ndarray
    A2: np.ndarray


def derived_rates(params: ModelParams) -> DerivedRates:
    """Aggregate removal rates derived from the base parameters."""
    return DerivedRates(
        varpi_e=params.kappa * (1.0 - params.rho1 - params.rho2),
        varpi_i=params.gamma_a + params.gamma_i + params.delta_i,
        varpi_p=params.gamma_a + params.gamma_i + params.delta_p,
        varpi_h=params.gamma_r + params.delta_h,
    )


def pack_params(params: ModelParams) -> np.ndarray:
    """Flatten parameters into the vector layout the kernels expect."""
    return np.array([
        params.beta, params.beta_prime, params.l, params.kappa,
        params.rho1, params.rho2,
        params.gamma_a, params.gamma_i, params.gamma_r,
        params.delta_i, params.delta_p, params.delta_h,
        params.N,
    ], dtype=np.float64)


def _rhs_core(x, p):
    # Shared scalar-arithmetic core; compiled by numba below and also
    # run as-is by the numpy lane.  Outflows reuse the exact same
    # float subexpressions as the matching inflows so the component
    # sum cancels to rounding error.
    beta = p[0]
    beta_prime = p[1]
    l = p[2]
    kappa = p[3]
    rho1 = p[4]
    rho2 = p[5]
    gamma_a = p[6]
    gamma_i = p[7]
    gamma_r = p[8]
    delta_i = p[9]
    delta_p = p[10]
    delta_h = p[11]
    n_pop = p[12]

    lam = (beta * x[2] + l * beta * x[5] + beta_prime * x[3]) / n_pop
    new_inf = lam * x[0]
    e_out = kappa * x[1]
    gi = gamma_a + gamma_i
    ip = x[2] + x[3]
    hosp = x[5]

    out = np.empty(8, dtype=np.float64)
    out[0] = -new_inf
    out[1] = new_inf - e_out
    out[2] = kappa * rho1 * x[1] - gi * x[2] - delta_i * x[2]
    out[3] = kappa * rho2 * x[1] - gi * x[3] - delta_p * x[3]
    out[4] = kappa * (1.0 - rho1 - rho2) * x[1]
    out[5] = gamma_a * ip - gamma_r * hosp - delta_h * hosp
    out[6] = gamma_i * ip + gamma_r * hosp
    out[7] = delta_i * x[2] + delta_p * x[3] + delta_h * hosp
    return out


if kernels.NUMBA_AVAILABLE:
    _RHS_JIT = kernels.njit(cache=False, nogil=True)(_rhs_core)
else:
    _RHS_JIT = None


def force_of_infection(state, params: ModelParams) -> float:
    """Per-capita infection rate lambda for the given state."""
    x = state.as_array() if isinstance(state, CompartmentState) else np.asarray(state)
    return float((params.beta * x[2] + params.l * params.beta * x[5]
                  + params.beta_prime * x[3]) / params.N)


def rhs(state, params: ModelParams) -> np.ndarray:
    """Time derivative of the state under the model equations."""
    x = state.as_array() if isinstance(state, CompartmentState) else \
        np.asarray(state, dtype=np.float64)
    return _rhs_core(x, pack_params(params))


def build_matrices(params: ModelParams) -> ModelMatrices:
    """Matrices A1 (bilinear incidence part) and A2 (linear part).

    They satisfy rhs(x) = (S/N) * A1 @ x + A2 @ x, and every column of
    each matrix sums to zero (mass conservation).
    """
    b = params.beta
    bp = params.beta_prime
    lb = params.l * params.beta
    k = params.kappa
    gi = params.gamma_a + params.gamma_i

    a1 = np.zeros((8, 8), dtype=np.float64)
    a1[0, 2] = -b
    a1[0, 3] = -bp
    a1[0, 5] = -lb
    a1[1, 2] = b
    a1[1, 3] = bp
    a1[1, 5] = lb

    a2 = np.zeros((8, 8), dtype=np.float64)
    a2[1, 1] = -k
    a2[2, 1] = k * params.rho1
    a2[2, 2] = -(gi + params.delta_i)
    a2[3, 1] = k * params.rho2
    a2[3, 3] = -(gi + params.delta_p)
    a2[4, 1] = k * (1.0 - params.rho1 - params.rho2)
    a2[5, 2] = params.gamma_a
    a2[5, 3] = params.gamma_a
    a2[5, 5] = -(params.gamma_r + params.delta_h)
    a2[6, 2] = params.gamma_i
    a2[6, 3] = params.gamma_i
    a2[6, 5] = params.gamma_r
    a2[7, 2] = params.delta_i
    a2[7, 3] = params.delta_p
    a2[7, 5] = params.delta_h
    return ModelMatrices(A1=a1, A2=a2)


def make_field(params: ModelParams):
    """Vector field f(x) for the solver, with a compiled twin attached.

    The returned callable evaluates the model right-hand side on a raw
    state vector.  When numba is enabled it carries a `jit_spec`
    attribute (dispatcher, packed parameters) that lets the solver run
    its whole stepping loop in compiled code.
    """
    packed = pack_params(params)

    def field(x):
        return _rhs_core(np.asarray(x, dtype=np.float64), packed)

    field.params = params
    if kernels.NUMBA_AVAILABLE:
        field.jit_spec = (_RHS_JIT, packed)
    return field


def check_population_bounds(states: np.ndarray, population: float) -> float:
    """Enforce the negativity policy on a solved trajectory.

    The scheme is not positivity-preserving, so small negative
    excursions are tolerated silently, moderate ones warn, and large
    ones indicate the step size is too coarse for the dynamics.

    Args:
        states: Array of shape (n_samples, 8).
        population: Reference population N for the thresholds.

    Returns:
        The most negative component seen (>= 0 if none).

    Raises:
        NumericalError: If any component drops below
            -NEGATIVITY_FAIL_FRACTION * population; carries the first
            offending sample index.
    """
    worst = float(np.min(states))
    fail_level = -NEGATIVITY_FAIL_FRACTION * population
    warn_level = -NEGATIVITY_WARN_FRACTION * population
    if worst < fail_level:
        rows = np.where(np.min(states, axis=1) < fail_level)[0]
        step = int(rows[0])
        raise NumericalError(
            f"compartment reached {worst:.6g} (below {fail_level:.6g}) "
            f"at sample {step}; reduce the step size", step_index=step)
    if worst < warn_level:
        warnings.warn(
            f"trajectory dips to {worst:.6g}, below the advisory bound "
            f"{warn_level:.6g}; results may be inaccurate",
            RuntimeWarning, stacklevel=2)
    return worst
