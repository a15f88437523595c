"""Timing comparison of the two solver lanes on a built-in scenario.

The numba lane compiles the whole predictor-corrector loop (vector
field included); the numpy lane evaluates the history sums as dot
products and calls the field as ordinary Python.  Both produce the
same trajectory, so the only question is speed.

Usage:
    python3 benchmarks/bench_solver.py [--scenario wuhan] [--steps 12000]
                                       [--repeats 3]
"""

from __future__ import annotations

import argparse
import statistics
import time

import numpy as np

from fracepi import (SolverConfig, TimeGrid, get_builtin, kernels,
                     make_field, rhs, solve_caputo_ivp)


def time_solve(field, x0, grid, config, repeats):
    samples = []
    for _ in range(repeats):
        start = time.perf_counter()
        traj = solve_caputo_ivp(field, x0, grid, config)
        samples.append(time.perf_counter() - start)
    return min(samples), statistics.median(samples), traj


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--scenario", default="wuhan")
    parser.add_argument("--steps", type=int, default=12000)
    parser.add_argument("--repeats", type=int, default=3)
    args = parser.parse_args()

    sc = get_builtin(args.scenario)
    grid = TimeGrid(0.0, sc.t_end, args.steps)
    config = SolverConfig(order=sc.order, step_size=grid.spacing)
    x0 = sc.initial_state.as_array()

    print(f"scenario: {sc.name}  alpha: {sc.order.alpha:g}  "
          f"steps: {args.steps}  repeats: {args.repeats}")

    def plain(x):
        return rhs(x, sc.params)

    numpy_best, numpy_median, traj_np = time_solve(
        plain, x0, grid, config, args.repeats)
    print(f"numpy lane : best {numpy_best:8.3f} s   "
          f"median {numpy_median:8.3f} s")

    if not kernels.NUMBA_AVAILABLE:
        print("numba lane : unavailable (FRACEPI_NO_NUMBA set or numba "
              "missing)")
        return 0

    field = make_field(sc.params)
    # Throwaway short solve so JIT compilation is not billed to the
    # timed runs.
    warm = TimeGrid(0.0, sc.t_end / args.steps * 8, 8)
    solve_caputo_ivp(field, x0, warm,
                     SolverConfig(order=sc.order, step_size=warm.spacing))

    numba_best, numba_median, traj_nb = time_solve(
        field, x0, grid, config, args.repeats)
    print(f"numba lane : best {numba_best:8.3f} s   "
          f"median {numba_median:8.3f} s")
    print(f"speedup    : {numpy_best / numba_best:.1f}x (best over best)")

    gap = float(np.max(np.abs(traj_nb.states - traj_np.states)))
    print(f"lane gap   : {gap:.3e} (max abs state difference)")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
