"""High-level entry point: run a scenario end to end."""

from __future__ import annotations

import numpy as np

from .model import check_population_bounds, make_field
from .scenario import Scenario, iph_total
from .solver import (FractionalOrder, SolverConfig, TimeGrid, Trajectory,
                     solve_caputo_ivp)


def run_scenario(scenario: Scenario, *,
                 alpha: float | None = None,
                 t_end: float | None = None,
                 n_steps: int | None = None,
                 corrector_iterations: int = 1,
                 memory_window: float | None = None) -> Trajectory:
    """Solve a scenario, optionally overriding order or horizon.

    Args:
        scenario: The setup to run.
        alpha: Override for the fractional order.
        t_end: Override for the time horizon.
        n_steps: Override for the number of steps.
        corrector_iterations: Corrector sweeps per step.
        memory_window: History window in time units (None = full).

    Returns:
        The solved trajectory, starting exactly at the scenario's
        initial state.

    Raises:
        DomainError: Invalid overrides.
        NumericalError: Non-finite states or a negativity-policy
            failure (step size too coarse).
    """
    order = scenario.order if alpha is None else FractionalOrder(alpha)
    horizon = scenario.t_end if t_end is None else float(t_end)
    steps = scenario.n_steps if n_steps is None else int(n_steps)

    grid = TimeGrid(t0=0.0, t_end=horizon, n_steps=steps)
    config = SolverConfig(order=order, step_size=grid.spacing,
                          corrector_iterations=corrector_iterations,
                          memory_window=memory_window)
    field = make_field(scenario.params)
    trajectory = solve_caputo_ivp(field, scenario.initial_state.as_array(),
                                  grid, config)
    check_population_bounds(trajectory.states, scenario.params.N)
    return trajectory


def peak_summary(trajectory: Trajectory) -> dict[str, float]:
    """Peak and endpoint statistics of the active-case aggregate.

    Returns peak_I, peak_P, peak_H, peak_IPH, t_peak_IPH (time of the
    IPH_total maximum) and final_IPH (its value at the last sample).
    """
    states = trajectory.states
    iph = iph_total(states)
    k = int(np.argmax(iph))
    return {
        "peak_I": float(np.max(states[:, 2])),
        "peak_P": float(np.max(states[:, 3])),
        "peak_H": float(np.max(states[:, 5])),
        "peak_IPH": float(iph[k]),
        "t_peak_IPH": float(trajectory.times[k]),
        "final_IPH": float(iph[-1]),
    }
