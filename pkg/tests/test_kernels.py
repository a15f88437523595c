"""Equivalence of the numba and numpy kernel lanes, and the env-flag
switch that forces the numpy lane."""

import math
import os
import subprocess
import sys

import numpy as np
import pytest

from fracepi import (SolverConfig, TimeGrid, get_builtin, kernels,
                     make_field, rhs, run_scenario, solve_caputo_ivp,
                     write_trajectory_csv)
from fracepi.model import _RHS_JIT, _rhs_core, pack_params

requires_numba = pytest.mark.skipif(
    not kernels.NUMBA_AVAILABLE, reason="numba lane unavailable")


def _prefactors(alpha, h):
    return (h ** alpha / math.gamma(alpha + 1.0),
            h ** alpha / math.gamma(alpha + 2.0))


@requires_numba
class TestKernelEquivalence:
    @pytest.mark.parametrize("alpha", [0.6, 0.85, 1.0])
    @pytest.mark.parametrize("win_steps", [0, 25])
    def test_abm_lanes_agree(self, alpha, win_steps):
        sc = get_builtin("wuhan")
        packed = pack_params(sc.params)
        x0 = sc.initial_state.as_array()
        n_steps = 200
        c_pred, c_corr = _prefactors(alpha, 120.0 / 12000.0)

        def f_plain(x):
            return _rhs_core(x, packed)

        states_np, bad_np = kernels.abm_solve_numpy(
            f_plain, x0, alpha, n_steps, c_pred, c_corr, 1, win_steps)
        states_nb, bad_nb = kernels.abm_solve_numba(
            _RHS_JIT, packed, x0, alpha, n_steps, c_pred, c_corr, 1,
            win_steps)
        assert bad_np == bad_nb == -1
        # Lanes sum identical terms in different orders; agreement is
        # limited only by float round-off.
        np.testing.assert_allclose(states_nb, states_np,
                                   rtol=1e-12, atol=1e-9)

    @pytest.mark.parametrize("alpha", [0.5, 0.75, 1.0])
    def test_l1_lanes_agree(self, alpha):
        rng = np.random.default_rng(20260815)
        values = np.cumsum(rng.normal(size=400))
        pref = (0.05 ** -alpha) / math.gamma(2.0 - alpha)
        out_np = kernels.l1_caputo_numpy(values, alpha, pref)
        out_nb = kernels.l1_caputo_numba(values, alpha, pref)
        np.testing.assert_allclose(out_nb, out_np, rtol=1e-10, atol=1e-12)

    def test_blowup_step_index_agrees(self):
        from numba import njit

        packed = np.array([1.0])
        x0 = np.array([2.0])
        c_pred, c_corr = _prefactors(0.8, 0.5)

        def square(x, p):
            return p[0] * x * x

        square_jit = njit(square)
        with np.errstate(over="ignore", invalid="ignore"):
            _, bad_np = kernels.abm_solve_numpy(
                lambda x: square(x, packed), x0, 0.8, 300, c_pred, c_corr,
                1, 0)
            _, bad_nb = kernels.abm_solve_numba(
                square_jit, packed, x0, 0.8, 300, c_pred, c_corr, 1, 0)
        assert bad_np == bad_nb > 0


@requires_numba
class TestSolverLaneSelection:
    def test_field_with_and_without_jit_spec(self):
        sc = get_builtin("wuhan")
        grid = TimeGrid(0.0, 2.0, 200)
        config = SolverConfig(order=sc.order, step_size=grid.spacing)

        field = make_field(sc.params)
        assert field.jit_spec is not None
        traj_jit = solve_caputo_ivp(field, sc.initial_state.as_array(),
                                    grid, config)

        def plain(x):
            return rhs(x, sc.params)

        traj_py = solve_caputo_ivp(plain, sc.initial_state.as_array(),
                                   grid, config)
        np.testing.assert_allclose(traj_jit.states, traj_py.states,
                                   rtol=1e-12, atol=1e-9)

    def test_lane_csvs_byte_identical(self, tmp_path, monkeypatch):
        # At 10 significant digits the residual round-off difference
        # between lanes disappears entirely.
        traj_jit = run_scenario(get_builtin("wuhan"), t_end=6.0,
                                n_steps=600)
        jit_csv = tmp_path / "jit.csv"
        write_trajectory_csv(traj_jit, jit_csv)

        code = (
            "from fracepi import get_builtin, run_scenario, "
            "write_trajectory_csv\n"
            "t = run_scenario(get_builtin('wuhan'), t_end=6.0, n_steps=600)\n"
            "write_trajectory_csv(t, %r)\n" % str(tmp_path / "numpy.csv"))
        env = dict(os.environ, FRACEPI_NO_NUMBA="1")
        proc = subprocess.run([sys.executable, "-c", code], env=env,
                              capture_output=True, text=True, timeout=300)
        assert proc.returncode == 0, proc.stderr
        assert jit_csv.read_bytes() == (tmp_path / "numpy.csv").read_bytes()


class TestEnvFlag:
    @pytest.mark.parametrize("value,expect", [
        ("1", "False"), ("yes", "False"), ("true", "False"),
        ("", "True"), ("0", "True"), ("false", "True"),
    ])
    def test_flag_controls_lane(self, value, expect):
        if expect == "True" and not kernels.NUMBA_AVAILABLE:
            pytest.skip("numba lane unavailable")
        code = "import fracepi.kernels as k; print(k.NUMBA_AVAILABLE)"
        env = dict(os.environ, FRACEPI_NO_NUMBA=value)
        proc = subprocess.run([sys.executable, "-c", code], env=env,
                              capture_output=True, text=True, timeout=120)
        assert proc.returncode == 0, proc.stderr
        assert proc.stdout.strip() == expect

    def test_numpy_lane_has_no_kernel_objects(self):
        code = ("import fracepi.kernels as k; "
                "print(k.abm_solve_numba is None, k.l1_caputo_numba is None)")
        env = dict(os.environ, FRACEPI_NO_NUMBA="1")
        proc = subprocess.run([sys.executable, "-c", code], env=env,
                              capture_output=True, text=True, timeout=120)
        assert proc.stdout.strip() == "True True"
