"""Self-verification harness backing the `verify` subcommand.

Each check returns a CheckResult; the quick level covers the special
functions, the scalar solver against its closed-form oracles, the
estimated convergence order, conservation on one scenario, and fuzzed
algebraic identities.  The full level adds conservation on every
built-in scenario, the disease-free fixed point, and the Lyapunov
decay bound audited along a solved sub-threshold trajectory.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .analysis import (basic_reproduction_number, lyapunov_coefficients,
                       lyapunov_identity_residuals, r0_rewritten,
                       verify_lyapunov_bound)
from .model import ModelParams
from .scenario import dfe_scenario, get_builtin
from .simulate import run_scenario
from .solver import (FractionalOrder, SolverConfig, TimeGrid, solve_caputo_ivp)
from .special import gamma_fn, mittag_leffler

FUZZ_SEED = 20260815
VERIFY_LEVELS = ("quick", "full")


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


def random_params(rng: np.random.Generator) -> ModelParams:
    """A random valid parameter set with strictly positive removal rates."""
    rho1 = rng.uniform(0.0, 0.9)
    return ModelParams(
        beta=rng.uniform(0.0, 5.0),
        beta_prime=rng.uniform(0.0, 10.0),
        l=rng.uniform(0.0, 3.0),
        kappa=rng.uniform(0.01, 1.0),
        rho1=rho1,
        rho2=rng.uniform(0.0, 1.0 - rho1),
        gamma_a=rng.uniform(0.01, 2.0),
        gamma_i=rng.uniform(0.01, 1.0),
        gamma_r=rng.uniform(0.01, 1.0),
        delta_i=rng.uniform(0.0, 0.3),
        delta_p=rng.uniform(0.0, 0.3),
        delta_h=rng.uniform(0.0, 0.3),
        N=rng.uniform(1e3, 1e7),
    )


def _solve_scalar_decay(alpha: float, n_steps: int, t_end: float = 1.0):
    grid = TimeGrid(0.0, t_end, n_steps)
    config = SolverConfig(order=FractionalOrder(alpha), step_size=grid.spacing)
    return solve_caputo_ivp(lambda x: -x, [1.0], grid, config)


def check_gamma_function() -> CheckResult:
    known = {
        0.5: math.sqrt(math.pi),
        1.0: 1.0,
        1.5: 0.5 * math.sqrt(math.pi),
        5.0: 24.0,
        10.0: 362880.0,
    }
    worst = 0.0
    for x, want in known.items():
        worst = max(worst, abs(gamma_fn(x) - want) / want)
    # recurrence gamma(x+1) = x * gamma(x) across the working range
    for x in np.linspace(0.05, 9.0, 200):
        lhs = gamma_fn(x + 1.0)
        rhs = x * gamma_fn(x)
        worst = max(worst, abs(lhs - rhs) / abs(rhs))
    return CheckResult("gamma_function", worst <= 1e-12,
                       f"max rel err {worst:.2e} (tol 1e-12)")


def check_mittag_leffler_exponential() -> CheckResult:
    # Range limited to moderate negative z: the alternating series loses
    # about one digit per unit of |z| there to cancellation.
    worst = 0.0
    for z in np.linspace(-2.0, 4.0, 31):
        want = math.exp(z)
        worst = max(worst, abs(mittag_leffler(1.0, z) - want) / want)
    return CheckResult("mittag_leffler_exponential", worst <= 1e-13,
                       f"max rel err vs exp {worst:.2e} (tol 1e-13)")


def check_solver_integer_order() -> CheckResult:
    got = _solve_scalar_decay(1.0, 1000).states[-1, 0]
    err = abs(got - math.exp(-1.0))
    return CheckResult("solver_integer_order", err <= 1e-6,
                       f"|x(1) - exp(-1)| = {err:.2e} (tol 1e-6)")


def check_solver_fractional_order() -> CheckResult:
    got = _solve_scalar_decay(0.5, 1000).states[-1, 0]
    err = abs(got - mittag_leffler(0.5, -1.0))
    return CheckResult("solver_fractional_order", err <= 1e-4,
                       f"|x(1) - E_0.5(-1)| = {err:.2e} (tol 1e-4)")


def check_convergence_order() -> CheckResult:
    details = []
    ok = True
    for alpha in (0.5, 0.75, 0.85, 1.0):
        ends = [_solve_scalar_decay(alpha, n).states[-1, 0]
                for n in (64, 128, 256)]
        order = math.log2(abs(ends[0] - ends[1]) / abs(ends[1] - ends[2]))
        need = min(2.0, 1.0 + alpha) - 0.2
        ok = ok and order >= need
        details.append(f"alpha={alpha}: {order:.2f} (need {need:.2f})")
    return CheckResult("convergence_order", ok, "; ".join(details))


def check_conservation(names=("wuhan",)) -> CheckResult:
    details = []
    ok = True
    for name in names:
        sc = get_builtin(name)
        traj = run_scenario(sc)
        drift = float(np.max(np.abs(traj.states.sum(axis=1) - sc.params.N)))
        allowed = 1e-9 * sc.params.N
        ok = ok and drift <= allowed
        details.append(f"{name}: |sum-N| <= {drift:.2e} (tol {allowed:.2e})")
    return CheckResult("conservation", ok, "; ".join(details))


def check_r0_equivalence(n_sets: int = 1000) -> CheckResult:
    rng = np.random.default_rng(FUZZ_SEED)
    worst = 0.0
    for _ in range(n_sets):
        params = random_params(rng)
        a = basic_reproduction_number(params)
        b = r0_rewritten(params)
        scale = max(abs(a), abs(b), 1e-300)
        worst = max(worst, abs(a - b) / scale)
    return CheckResult("r0_equivalence", worst <= 1e-12,
                       f"max rel diff {worst:.2e} over {n_sets} sets (tol 1e-12)")


def check_lyapunov_identities(n_sets: int = 1000) -> CheckResult:
    rng = np.random.default_rng(FUZZ_SEED + 1)
    worst = 0.0
    for _ in range(n_sets):
        residuals = lyapunov_identity_residuals(random_params(rng))
        worst = max(worst, max(residuals.values()))
    return CheckResult("lyapunov_identities", worst <= 1e-10,
                       f"max rel residual {worst:.2e} over {n_sets} sets (tol 1e-10)")


def check_dfe_fixed_point() -> CheckResult:
    sc = dfe_scenario()
    traj = run_scenario(sc)
    drift = float(np.max(np.abs(traj.states - traj.states[0])))
    allowed = 1e-12 * sc.params.N
    return CheckResult("dfe_fixed_point", drift <= allowed,
                       f"max drift {drift:.2e} over 120 days (tol {allowed:.2e})")


def check_lyapunov_bound() -> CheckResult:
    sc = get_builtin("wuhan")
    params = replace(sc.params, beta=0.2 * sc.params.beta,
                     beta_prime=0.2 * sc.params.beta_prime)
    sub = replace(sc, params=params)
    r0 = basic_reproduction_number(params)
    if r0 >= 1.0:
        return CheckResult("lyapunov_bound", False,
                           f"scaled R0 = {r0:.4f} is not below threshold")
    traj = run_scenario(sub)
    report = verify_lyapunov_bound(traj, params, sub.order.alpha)
    coeffs = lyapunov_coefficients(params)
    allowed = 1e-6 * coeffs.a0 * params.N
    v = report.v_series
    slack = 1e-6 * v[0]
    monotone = float(np.max(np.diff(v[1:]))) <= slack
    ok = report.max_violation <= allowed and monotone
    return CheckResult(
        "lyapunov_bound", ok,
        f"R0 = {r0:.4f}; max_violation {report.max_violation:.2e} "
        f"(tol {allowed:.2e}); V non-increasing after first step: {monotone}")


def run_checks(level: str = "quick") -> list[CheckResult]:
    """Run the verification battery; `level` is 'quick' or 'full'."""
    if level not in VERIFY_LEVELS:
        raise ValueError(f"unknown verify level {level!r}")
    results = [
        check_gamma_function(),
        check_mittag_leffler_exponential(),
        check_solver_integer_order(),
        check_solver_fractional_order(),
        check_convergence_order(),
        check_r0_equivalence(),
        check_lyapunov_identities(),
    ]
    if level == "quick":
        results.append(check_conservation(("wuhan",)))
    else:
        results.append(check_conservation(("spain", "portugal", "wuhan")))
        results.append(check_dfe_fixed_point())
        results.append(check_lyapunov_bound())
    return results
