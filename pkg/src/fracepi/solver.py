"""Fractional-order initial value problem solver.

Solves D^alpha x(t) = f(x(t)), x(0) = x0, where D^alpha is the Caputo
derivative of order alpha in (0, 1], with the Adams-Bashforth-Moulton
predictor-corrector on a uniform grid.  At alpha = 1 the weights
collapse exactly to the classical rectangle-rule predictor and
trapezoid corrector, so the integer-order limit needs no special case.

Also provides the L1 discrete Caputo derivative of a sampled series,
used to audit trajectories (e.g. checking a Lyapunov decay bound)
without re-solving anything.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import DomainError, NumericalError
from .special import gamma_fn


@dataclass(frozen=True)
class FractionalOrder:
    """Caputo derivative order; valid range is (0, 1]."""

    alpha: float

    def __post_init__(self):
        a = self.alpha
        if not isinstance(a, (int, float)) or not np.isfinite(a):
            raise DomainError(f"fractional order must be a finite number, got {a!r}")
        if not 0.0 < a <= 1.0:
            raise DomainError(f"fractional order must lie in (0, 1], got {a}")
        object.__setattr__(self, "alpha", float(a))


@dataclass(frozen=True)
class TimeGrid:
    """Uniform time grid t_0 < t_1 < ... < t_n."""

    t0: float
    t_end: float
    n_steps: int

    def __post_init__(self):
        if not self.t_end > self.t0:
            raise DomainError(
                f"time grid needs t_end > t0, got [{self.t0}, {self.t_end}]")
        if not isinstance(self.n_steps, int) or self.n_steps < 1:
            raise DomainError(f"n_steps must be a positive integer, got {self.n_steps!r}")

    @property
    def spacing(self) -> float:
        return (self.t_end - self.t0) / self.n_steps

    def times(self) -> np.ndarray:
        return np.linspace(self.t0, self.t_end, self.n_steps + 1)


@dataclass(frozen=True)
class SolverConfig:
    """Solver controls.

    Attributes:
        order: Fractional order of the Caputo derivative.
        step_size: Grid spacing h; must match the grid it is used with.
        corrector_iterations: Number of corrector sweeps per step
            (1 is the classical predict-evaluate-correct-evaluate).
        memory_window: Length (in time units) of retained history for
            the convolution sums; None keeps the full history.  A
            finite window trades accuracy for O(n * window) work and is
            off by default.
    """

    order: FractionalOrder
    step_size: float
    corrector_iterations: int = 1
    memory_window: float | None = None

    def __post_init__(self):
        if not (np.isfinite(self.step_size) and self.step_size > 0.0):
            raise DomainError(f"step_size must be positive, got {self.step_size!r}")
        if not isinstance(self.corrector_iterations, int) or self.corrector_iterations < 1:
            raise DomainError(
                f"corrector_iterations must be a positive integer, "
                f"got {self.corrector_iterations!r}")
        if self.memory_window is not None:
            if not (np.isfinite(self.memory_window) and self.memory_window > 0.0):
                raise DomainError(
                    f"memory_window must be positive or None, got {self.memory_window!r}")


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Solution samples: times[i] maps to states[i] (row vector)."""

    times: np.ndarray
    states: np.ndarray

    def __post_init__(self):
        if self.times.shape[0] != self.states.shape[0]:
            raise DomainError("trajectory times and states disagree in length")
        if np.any(np.diff(self.times) <= 0.0):
            raise DomainError("trajectory times must be strictly increasing")

    def component(self, index: int) -> np.ndarray:
        return self.states[:, index]


def abm_weights(alpha: float, n: int, h: float) -> tuple[np.ndarray, np.ndarray]:
    """Quadrature weights for the step from t_n to t_{n+1}.

    Returns the pair (b, a): b has length n+1 (predictor weights for
    f_0 .. f_n) and a has length n+2 (corrector weights for
    f_0 .. f_{n+1}), including the h^alpha/(alpha ...) prefactors but
    not the 1/gamma(alpha) one, matching

        x^P_{n+1} = x_0 + (1/gamma(alpha)) * sum_j b[j] f_j
        x_{n+1}   = x_0 + (1/gamma(alpha)) * sum_j a[j] f_j

    Args:
        alpha: Fractional order in (0, 1].
        n: Index of the step being completed (>= 0).
        h: Grid spacing (> 0).

    Raises:
        DomainError: On out-of-range alpha, negative n, or h <= 0.
    """
    order = FractionalOrder(float(alpha))
    alpha = order.alpha
    if not isinstance(n, int) or n < 0:
        raise DomainError(f"weight index n must be a non-negative integer, got {n!r}")
    if not h > 0.0:
        raise DomainError(f"step size must be positive, got {h}")

    j = np.arange(n + 1, dtype=np.float64)
    ha = h ** alpha
    b = (ha / alpha) * ((n + 1 - j) ** alpha - (n - j) ** alpha)

    a = np.empty(n + 2, dtype=np.float64)
    ca = ha / (alpha * (alpha + 1.0))
    a[0] = ca * (n ** (alpha + 1.0) - (n - alpha) * (n + 1) ** alpha)
    if n >= 1:
        jj = np.arange(1, n + 1, dtype=np.float64)
        m = n - jj
        a[1 : n + 1] = ca * ((m + 2.0) ** (alpha + 1.0) + m ** (alpha + 1.0)
                             - 2.0 * (m + 1.0) ** (alpha + 1.0))
    a[n + 1] = ca
    return b, a


def solve_caputo_ivp(f, x0, grid: TimeGrid, config: SolverConfig) -> Trajectory:
    """Integrate D^alpha x = f(x) on the given grid.

    The field f maps a state vector to a derivative vector of the same
    shape.  If f carries a `jit_spec` attribute -- a pair of a numba
    dispatcher g(x, p) and a packed parameter vector p -- and numba is
    enabled, the whole stepping loop runs compiled; otherwise a numpy
    fallback lane is used.  Both lanes implement the same recurrence.

    Args:
        f: Vector field.
        x0: Initial state (scalar or 1-d array-like).
        grid: Uniform time grid to sample on.
        config: Solver controls; config.step_size must equal
            grid.spacing to within rounding.

    Returns:
        Trajectory whose first row is exactly x0.

    Raises:
        DomainError: Invalid initial state or grid/config mismatch.
        NumericalError: A non-finite state component appeared; carries
            the offending step index.
    """
    x0 = np.atleast_1d(np.asarray(x0, dtype=np.float64))
    if x0.ndim != 1:
        raise DomainError(f"initial state must be a vector, got shape {x0.shape}")
    if not np.all(np.isfinite(x0)):
        raise DomainError("initial state has non-finite components")

    h = grid.spacing
    if not np.isclose(h, config.step_size, rtol=1e-12, atol=0.0):
        raise DomainError(
            f"config.step_size {config.step_size} does not match "
            f"grid spacing {h}")

    alpha = config.order.alpha
    if config.memory_window is None:
        win_steps = 0
    else:
        win_steps = max(1, int(round(config.memory_window / h)))

    c_pred = h ** alpha / gamma_fn(alpha + 1.0)
    c_corr = h ** alpha / gamma_fn(alpha + 2.0)

    jit_spec = getattr(f, "jit_spec", None)
    if kernels.NUMBA_AVAILABLE and jit_spec is not None:
        jit_f, params = jit_spec
        states, bad = kernels.abm_solve_numba(
            jit_f, params, x0, alpha, grid.n_steps, c_pred, c_corr,
            config.corrector_iterations, win_steps)
    else:
        states, bad = kernels.abm_solve_numpy(
            f, x0, alpha, grid.n_steps, c_pred, c_corr,
            config.corrector_iterations, win_steps)
    if bad >= 0:
        raise NumericalError(
            f"non-finite state at step {bad} (t = {grid.t0 + bad * h:.6g})",
            step_index=bad)
    return Trajectory(times=grid.times(), states=states)


def discrete_caputo_derivative(values, alpha: float, h: float) -> np.ndarray:
    """L1 approximation of the Caputo derivative of a sampled series.

    Args:
        values: Samples x(t_0) .. x(t_N) on a uniform grid, N >= 1.
        alpha: Fractional order in (0, 1].
        h: Grid spacing (> 0).

    Returns:
        Array of length N holding D^alpha x at t_1 .. t_N (the scheme
        needs one backward difference, so there is no value at t_0).

    Raises:
        DomainError: Fewer than two samples, bad alpha, or h <= 0.
    """
    x = np.asarray(values, dtype=np.float64)
    if x.ndim != 1 or x.shape[0] < 2:
        raise DomainError("discrete_caputo_derivative needs a 1-d series of >= 2 samples")
    order = FractionalOrder(float(alpha))
    alpha = order.alpha
    if not h > 0.0:
        raise DomainError(f"step size must be positive, got {h}")

    pref = h ** (-alpha) / gamma_fn(2.0 - alpha) if alpha < 1.0 else 1.0 / h
    if kernels.NUMBA_AVAILABLE:
        return kernels.l1_caputo_numba(x, alpha, pref)
    return kernels.l1_caputo_numpy(x, alpha, pref)
