"""Hot numerical loops, compiled with numba when available.

The predictor-corrector history sums are O(n^2) in the step count, so a
12,000-step run touches ~10^8 weight/state products.  Each kernel here
exists in two functionally identical lanes:

    * a numba @njit lane that runs the whole time-stepping loop in
      machine code, including calls into a jit-compiled vector field;
    * a pure-numpy lane that expresses the history sums as dot products
      and calls an arbitrary Python vector field.

Lane selection lives in solver.py; setting the environment variable
FRACEPI_NO_NUMBA to a non-empty value other than "0"/"false" before
import forces the numpy lane (and is how the equivalence tests and the
benchmark exercise both paths).

Kernels are pure arithmetic: gamma-function prefactors are computed by
the caller and passed in, and failures are reported as a returned step
index (>= 0) rather than raised, because rich exceptions are awkward
inside nopython code.  Wrappers in solver.py translate the index into
a NumericalError.
"""

from __future__ import annotations

import os

import numpy as np

_env = os.environ.get("FRACEPI_NO_NUMBA", "").strip().lower()
NUMBA_DISABLED = _env not in ("", "0", "false")

if not NUMBA_DISABLED:
    try:
        from numba import njit

        NUMBA_AVAILABLE = True
    except ImportError:  # pragma: no cover - numba is a hard dependency
        njit = None
        NUMBA_AVAILABLE = False
else:
    njit = None
    NUMBA_AVAILABLE = False


# ---------------------------------------------------------------------------
# Adams-Bashforth-Moulton predictor-corrector
# ---------------------------------------------------------------------------
#
# Step n -> n+1 for D^alpha x = f(x), x(0) = x0:
#
#   predictor:  xP = x0 + c_pred * sum_j [(n+1-j)^a - (n-j)^a] f_j
#   corrector:  x  = x0 + c_corr * ( A0(n) f_0
#                                    + sum_{1<=j<=n} C(n-j) f_j
#                                    + f(xP) )
#   A0(n)  = n^(a+1) - (n - a)(n+1)^a
#   C(m)   = (m+2)^(a+1) + m^(a+1) - 2(m+1)^(a+1)
#   c_pred = h^a / gamma(a+1),  c_corr = h^a / gamma(a+2)
#
# Both weight families depend only on index differences, so the power
# tables k^a and k^(a+1) are built once per solve.  A truncated-memory
# solve replaces the lower limit 0 by j0 = n+1-win_steps (the A0 term
# is then dropped together with the rest of the forgotten history).


def abm_solve_numpy(f, x0, alpha, n_steps, c_pred, c_corr,
                    corrector_iterations, win_steps):
    """Pure-numpy time-stepping loop.

    Args:
        f: Vector field, f(x) -> ndarray of the same shape as x.
        x0: Initial state, 1-d float array.
        alpha: Fractional order in (0, 1].
        n_steps: Number of steps to take.
        c_pred: Predictor prefactor h^alpha / gamma(alpha + 1).
        c_corr: Corrector prefactor h^alpha / gamma(alpha + 2).
        corrector_iterations: Number of corrector sweeps (>= 1).
        win_steps: Memory window in steps; 0 means full history.

    Returns:
        (states, bad_step): states has shape (n_steps + 1, dim) with
        states[0] == x0; bad_step is -1 on success, else the index of
        the first step at which a non-finite component appeared (rows
        from there on are unspecified).
    """
    dim = x0.shape[0]
    k = np.arange(n_steps + 2, dtype=np.float64)
    ka = k ** alpha
    ka1 = k ** (alpha + 1.0)
    wb = ka[1:] - ka[:-1]                       # wb[i] = (i+1)^a - i^a
    cc = ka1[2:] + ka1[:-2] - 2.0 * ka1[1:-1]   # cc[m] = C(m)

    states = np.empty((n_steps + 1, dim), dtype=np.float64)
    fh = np.empty((n_steps + 1, dim), dtype=np.float64)
    states[0] = x0
    fh[0] = f(x0)

    for n in range(n_steps):
        j0 = 0 if win_steps <= 0 else max(0, n + 1 - win_steps)
        # Reversed weight slice aligns wb[n-j] with fh[j].
        sp = wb[: n - j0 + 1][::-1] @ fh[j0 : n + 1]
        jref = max(1, j0)
        if jref <= n:
            sc = cc[: n - jref + 1][::-1] @ fh[jref : n + 1]
        else:
            sc = np.zeros(dim, dtype=np.float64)
        if j0 == 0:
            a0c = ka1[n] - (n - alpha) * ka[n + 1]
            sc = sc + a0c * fh[0]

        z = x0 + c_pred * sp
        for _ in range(corrector_iterations):
            z = x0 + c_corr * (sc + f(z))
        if not np.all(np.isfinite(z)):
            return states, n + 1
        states[n + 1] = z
        fh[n + 1] = f(z)
    return states, -1


def _abm_solve_loops(f, p, x0, alpha, n_steps, c_pred, c_corr,
                     corrector_iterations, win_steps):
    # Loop-style twin of abm_solve_numpy, written to compile under
    # nopython mode.  The vector field takes a packed parameter vector
    # so a single compiled dispatcher serves every parameter set.
    dim = x0.shape[0]
    ka = np.empty(n_steps + 2, dtype=np.float64)
    ka1 = np.empty(n_steps + 2, dtype=np.float64)
    for i in range(n_steps + 2):
        fi = float(i)
        ka[i] = fi ** alpha
        ka1[i] = fi ** (alpha + 1.0)

    states = np.empty((n_steps + 1, dim), dtype=np.float64)
    fh = np.empty((n_steps + 1, dim), dtype=np.float64)
    for d in range(dim):
        states[0, d] = x0[d]
    f0 = f(x0, p)
    for d in range(dim):
        fh[0, d] = f0[d]

    sp = np.empty(dim, dtype=np.float64)
    sc = np.empty(dim, dtype=np.float64)
    z = np.empty(dim, dtype=np.float64)

    for n in range(n_steps):
        j0 = 0
        if win_steps > 0 and n + 1 - win_steps > 0:
            j0 = n + 1 - win_steps
        for d in range(dim):
            sp[d] = 0.0
            sc[d] = 0.0
        for j in range(j0, n + 1):
            w = ka[n + 1 - j] - ka[n - j]
            for d in range(dim):
                sp[d] += w * fh[j, d]
        jref = j0 if j0 > 1 else 1
        for j in range(jref, n + 1):
            m = n - j
            w = ka1[m + 2] + ka1[m] - 2.0 * ka1[m + 1]
            for d in range(dim):
                sc[d] += w * fh[j, d]
        if j0 == 0:
            a0c = ka1[n] - (n - alpha) * ka[n + 1]
            for d in range(dim):
                sc[d] += a0c * fh[0, d]

        for d in range(dim):
            z[d] = x0[d] + c_pred * sp[d]
        for _ in range(corrector_iterations):
            fz = f(z, p)
            for d in range(dim):
                z[d] = x0[d] + c_corr * (sc[d] + fz[d])
        ok = True
        for d in range(dim):
            if not np.isfinite(z[d]):
                ok = False
        if not ok:
            return states, n + 1
        for d in range(dim):
            states[n + 1, d] = z[d]
        fz = f(z, p)
        for d in range(dim):
            fh[n + 1, d] = fz[d]
    return states, -1


# ---------------------------------------------------------------------------
# L1 discrete Caputo derivative of a sampled series
# ---------------------------------------------------------------------------
#
#   D^alpha x(t_n) ~= pref * sum_{k=0}^{n-1} (x_{k+1} - x_k) * w[n-k]
#   w[m] = m^(1-alpha) - (m-1)^(1-alpha),  pref = h^(-alpha)/gamma(2-alpha)
#
# At alpha = 1 the exponent 1-alpha is 0 and IEEE evaluates 0**0 as 1,
# which would zero out w[1]; the 0^(1-alpha) -> 0 continuity limit is
# enforced explicitly so the scheme degenerates to the backward
# difference it should.


def l1_caputo_numpy(values, alpha, pref):
    """Distributed-difference form of the L1 scheme, numpy lane.

    Args:
        values: Sampled series x_0 .. x_N, 1-d float array, N >= 1.
        alpha: Fractional order in (0, 1].
        pref: Prefactor h^(-alpha) / gamma(2 - alpha).

    Returns:
        Array of length N: the derivative at t_1 .. t_N.
    """
    x = np.asarray(values, dtype=np.float64)
    n = x.shape[0] - 1
    e = 1.0 - alpha
    pw = np.arange(n + 1, dtype=np.float64) ** e
    if e == 0.0:
        pw[0] = 0.0
    w = np.empty(n + 1, dtype=np.float64)
    w[0] = 0.0
    w[1:] = pw[1:] - pw[:-1]
    dx = x[1:] - x[:-1]
    # out[n] = sum_k dx[k] * w[n-k] is a linear convolution.
    conv = np.convolve(dx, w)
    return pref * conv[1 : n + 1]


def _l1_caputo_loops(values, alpha, pref):
    # Loop-style twin of l1_caputo_numpy for nopython compilation.
    n = values.shape[0] - 1
    e = 1.0 - alpha
    pw = np.empty(n + 1, dtype=np.float64)
    for m in range(n + 1):
        pw[m] = float(m) ** e
    if e == 0.0:
        pw[0] = 0.0
    out = np.empty(n, dtype=np.float64)
    for i in range(1, n + 1):
        s = 0.0
        for k in range(i):
            s += (values[k + 1] - values[k]) * (pw[i - k] - pw[i - k - 1])
        out[i - 1] = pref * s
    return out


if NUMBA_AVAILABLE:
    # Whole-loop compilation; the vector field argument must itself be
    # a numba dispatcher with signature f(x, p).
    abm_solve_numba = njit(cache=False, nogil=True)(_abm_solve_loops)
    l1_caputo_numba = njit(cache=False, nogil=True)(_l1_caputo_loops)
else:
    abm_solve_numba = None
    l1_caputo_numba = None
