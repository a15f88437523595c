"""Solver loop, quadrature weights, and the discrete Caputo derivative.

Weight references were computed independently at 50 significant digits;
closed-form solution references come from the Mittag-Leffler oracle
(itself pinned against frozen values in test_special).
"""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fracepi import (DomainError, FractionalOrder, NumericalError,
                     SolverConfig, TimeGrid, abm_weights,
                     discrete_caputo_derivative, gamma_fn, mittag_leffler,
                     solve_caputo_ivp)

# alpha = 0.5, n = 3, h = 0.1 (50-digit reference)
B_REF = np.array([0.16946594905701950589, 0.20101792401041634835,
                  0.26197165896624001216, 0.6324555320336758664])
A_REF = np.array([0.082705123241744899162, 0.18388529880483021789,
                  0.22738807537667268859, 0.34929554528832001622,
                  0.42163702135578391093])

E_HALF_MINUS_ONE = 0.42758357615580700441  # E_0.5(-1), 50-digit reference


def _decay_config(alpha, n_steps, t_end=1.0):
    grid = TimeGrid(0.0, t_end, n_steps)
    config = SolverConfig(order=FractionalOrder(alpha),
                          step_size=grid.spacing)
    return grid, config


def _solve_decay(alpha, n_steps, t_end=1.0, **kwargs):
    grid = TimeGrid(0.0, t_end, n_steps)
    config = SolverConfig(order=FractionalOrder(alpha),
                          step_size=grid.spacing, **kwargs)
    return solve_caputo_ivp(lambda x: -x, [1.0], grid, config)


class TestTypes:
    def test_order_validation(self):
        assert FractionalOrder(1.0).alpha == 1.0
        assert FractionalOrder(0.5).alpha == 0.5
        for bad in (0.0, -0.1, 1.0001, float("nan")):
            with pytest.raises(DomainError):
                FractionalOrder(bad)

    def test_grid_validation(self):
        grid = TimeGrid(0.0, 1.0, 4)
        assert grid.spacing == 0.25
        assert np.allclose(grid.times(), [0.0, 0.25, 0.5, 0.75, 1.0])
        with pytest.raises(DomainError):
            TimeGrid(1.0, 1.0, 4)
        with pytest.raises(DomainError):
            TimeGrid(0.0, 1.0, 0)

    def test_config_validation(self):
        order = FractionalOrder(0.5)
        with pytest.raises(DomainError):
            SolverConfig(order=order, step_size=0.0)
        with pytest.raises(DomainError):
            SolverConfig(order=order, step_size=0.1, corrector_iterations=0)
        with pytest.raises(DomainError):
            SolverConfig(order=order, step_size=0.1, memory_window=-1.0)

    def test_grid_config_mismatch(self):
        grid, _ = _decay_config(0.5, 10)
        config = SolverConfig(order=FractionalOrder(0.5), step_size=0.3)
        with pytest.raises(DomainError):
            solve_caputo_ivp(lambda x: -x, [1.0], grid, config)

    def test_bad_initial_state(self):
        grid, config = _decay_config(0.5, 10)
        with pytest.raises(DomainError):
            solve_caputo_ivp(lambda x: -x, [float("nan")], grid, config)
        with pytest.raises(DomainError):
            solve_caputo_ivp(lambda x: -x, [[1.0, 2.0], [3.0, 4.0]],
                             grid, config)


class TestWeights:
    def test_reference_values(self):
        b, a = abm_weights(0.5, 3, 0.1)
        np.testing.assert_allclose(b, B_REF, rtol=1e-13)
        np.testing.assert_allclose(a, A_REF, rtol=1e-13)

    def test_integer_order_collapse(self):
        # At alpha = 1 the predictor weights become the rectangle rule
        # and the corrector weights the trapezoid rule, exactly.
        h = 0.125
        for n in (0, 1, 5, 40):
            b, a = abm_weights(1.0, n, h)
            np.testing.assert_array_equal(b, np.full(n + 1, h))
            want = np.full(n + 2, h)
            want[0] = h / 2.0
            want[-1] = h / 2.0
            np.testing.assert_array_equal(a, want)

    @settings(max_examples=60, deadline=None)
    @given(alpha=st.floats(0.05, 1.0), n=st.integers(0, 200),
           h=st.floats(1e-4, 2.0))
    def test_positive_and_telescoping(self, alpha, n, h):
        b, a = abm_weights(alpha, n, h)
        assert np.all(b > 0.0)
        assert np.all(a > 0.0)
        # predictor weights telescope to the full interval power
        total = (h ** alpha / alpha) * (n + 1) ** alpha
        assert np.sum(b) == pytest.approx(total, rel=1e-11)

    def test_domain_errors(self):
        with pytest.raises(DomainError):
            abm_weights(1.5, 3, 0.1)
        with pytest.raises(DomainError):
            abm_weights(0.5, -1, 0.1)
        with pytest.raises(DomainError):
            abm_weights(0.5, 3, 0.0)


class TestScalarDecay:
    def test_integer_order_matches_exponential(self):
        traj = _solve_decay(1.0, 1000)
        assert abs(traj.states[-1, 0] - math.exp(-1.0)) <= 1e-6

    def test_half_order_matches_mittag_leffler(self):
        traj = _solve_decay(0.5, 1000)
        assert abs(traj.states[-1, 0] - E_HALF_MINUS_ONE) <= 1e-4

    @pytest.mark.parametrize("alpha", [0.75, 0.85])
    def test_intermediate_orders(self, alpha):
        traj = _solve_decay(alpha, 1000)
        want = mittag_leffler(alpha, -1.0)
        assert abs(traj.states[-1, 0] - want) <= 1e-4

    def test_whole_trajectory_tracks_oracle(self):
        traj = _solve_decay(0.5, 200)
        for i in (50, 100, 150, 200):
            t = traj.times[i]
            want = mittag_leffler(0.5, -(t ** 0.5))
            assert traj.states[i, 0] == pytest.approx(want, abs=5e-4)

    def test_first_row_is_initial_state(self):
        traj = _solve_decay(0.5, 10)
        assert traj.states[0, 0] == 1.0

    @pytest.mark.parametrize("alpha", [0.5, 0.75, 0.85, 1.0])
    def test_richardson_order(self, alpha):
        ends = [_solve_decay(alpha, n).states[-1, 0] for n in (64, 128, 256)]
        order = math.log2(abs(ends[0] - ends[1]) / abs(ends[1] - ends[2]))
        assert order >= min(2.0, 1.0 + alpha) - 0.2

    def test_corrector_iterations_converge(self):
        # More corrector sweeps stay within the scheme's own error
        # scale and keep the same accuracy against the oracle.
        one = _solve_decay(0.5, 200).states[-1, 0]
        many = _solve_decay(0.5, 200, corrector_iterations=5).states[-1, 0]
        assert abs(one - many) < 5e-5
        assert abs(many - E_HALF_MINUS_ONE) < 5e-5


class TestMemoryWindow:
    def test_full_window_equals_unwindowed(self):
        full = _solve_decay(0.5, 100)
        windowed = _solve_decay(0.5, 100, memory_window=5.0)  # > t_end
        np.testing.assert_array_equal(full.states, windowed.states)

    def test_truncation_changes_and_degrades(self):
        full = _solve_decay(0.5, 400, t_end=4.0)
        short = _solve_decay(0.5, 400, t_end=4.0, memory_window=0.25)
        wide = _solve_decay(0.5, 400, t_end=4.0, memory_window=2.0)
        ref = mittag_leffler(0.5, -(4.0 ** 0.5))
        err_full = abs(full.states[-1, 0] - ref)
        err_wide = abs(wide.states[-1, 0] - ref)
        err_short = abs(short.states[-1, 0] - ref)
        assert err_full < err_wide < err_short
        assert not np.array_equal(full.states, short.states)


class TestFailure:
    def test_blowup_raises_numerical_error(self):
        # Quadratic growth reaches infinity in finite time; the solver
        # must stop with the offending step index.
        grid = TimeGrid(0.0, 5.0, 500)
        config = SolverConfig(order=FractionalOrder(1.0),
                              step_size=grid.spacing)
        with pytest.raises(NumericalError) as info, np.errstate(over="ignore"):
            solve_caputo_ivp(lambda x: x * x, [3.0], grid, config)
        assert info.value.step_index is not None
        assert 0 < info.value.step_index <= 500


class TestDiscreteCaputo:
    def test_constant_is_zero(self):
        out = discrete_caputo_derivative(np.full(50, 3.7), 0.6, 0.1)
        np.testing.assert_array_equal(out, np.zeros(49))

    @pytest.mark.parametrize("alpha", [0.3, 0.5, 0.85])
    def test_linear_is_exact(self, alpha):
        # The scheme integrates piecewise-linear data exactly:
        # D^alpha t = t^(1-alpha) / gamma(2-alpha).
        h = 0.05
        t = np.arange(41) * h
        out = discrete_caputo_derivative(t, alpha, h)
        want = t[1:] ** (1.0 - alpha) / gamma_fn(2.0 - alpha)
        np.testing.assert_allclose(out, want, rtol=1e-12)

    def test_quadratic_converges(self):
        # D^0.5 t^2 = 2 t^1.5 / gamma(2.5); reference coefficient
        # 2/gamma(2.5) = 1.5045055561273500985 (50-digit value).
        coeff = 1.5045055561273500985
        errs = []
        for n in (64, 256):
            h = 1.0 / n
            t = np.arange(n + 1) * h
            out = discrete_caputo_derivative(t * t, 0.5, h)
            want = coeff * t[1:] ** 1.5
            errs.append(np.max(np.abs(out - want)))
        assert errs[1] < errs[0] / 4.0  # order 2 - alpha = 1.5 at least

    def test_integer_order_is_backward_difference(self):
        # At alpha = 1 the kernel must collapse to (x_k - x_{k-1}) / h,
        # which requires treating 0^0 as 0 in the weight table.
        rng = np.random.default_rng(3)
        x = rng.normal(size=20)
        h = 0.25
        out = discrete_caputo_derivative(x, 1.0, h)
        np.testing.assert_allclose(out, np.diff(x) / h, rtol=1e-12)

    def test_validation(self):
        with pytest.raises(DomainError):
            discrete_caputo_derivative([1.0], 0.5, 0.1)
        with pytest.raises(DomainError):
            discrete_caputo_derivative([1.0, 2.0], 1.5, 0.1)
        with pytest.raises(DomainError):
            discrete_caputo_derivative([1.0, 2.0], 0.5, 0.0)
