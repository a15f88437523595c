"""Special functions used by the fractional solver and its tests.

Implements:
    - gamma_fn: Euler gamma function via the Lanczos approximation
      (g = 7, 9 coefficients), with the reflection formula for the
      left half-plane.
    - mittag_leffler: one-parameter Mittag-Leffler function E_alpha(z)
      by direct power series, used as an analytic oracle for the solver.

Both are scalar, pure-Python implementations with no dependency on the
rest of the package beyond the shared exception types.
"""

from __future__ import annotations

import math

from .errors import DomainError, NumericalError

# Lanczos approximation, g = 7, 9 coefficients.  Relative error of the
# approximation is below 1e-13 across the positive axis, comfortably
# inside the 1e-12 target on (0, 10].
_LANCZOS_G = 7.0
_LANCZOS_COEFFS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)

_SQRT_TWO_PI = math.sqrt(2.0 * math.pi)


def gamma_fn(x: float) -> float:
    """Gamma function for real arguments.

    Uses the Lanczos approximation for x >= 0.5 and the reflection
    formula gamma(x) = pi / (sin(pi*x) * gamma(1-x)) below that.

    Args:
        x: Real argument; must not be zero or a negative integer
           (poles of gamma).

    Returns:
        gamma(x).

    Raises:
        DomainError: If x is a pole or not finite.
    """
    x = float(x)
    if not math.isfinite(x):
        raise DomainError(f"gamma_fn requires a finite argument, got {x!r}")
    if x <= 0.0 and x == math.floor(x):
        raise DomainError(f"gamma_fn has a pole at non-positive integer {x}")

    if x < 0.5:
        # Reflection keeps the Lanczos sum on its accurate branch.
        return math.pi / (math.sin(math.pi * x) * gamma_fn(1.0 - x))

    z = x - 1.0
    acc = _LANCZOS_COEFFS[0]
    for i in range(1, len(_LANCZOS_COEFFS)):
        acc += _LANCZOS_COEFFS[i] / (z + i)
    t = z + _LANCZOS_G + 0.5
    return _SQRT_TWO_PI * math.pow(t, z + 0.5) * math.exp(-t) * acc


def mittag_leffler(alpha: float, z: float, *, rel_tol: float = 1e-16,
                   max_terms: int = 10000) -> float:
    """One-parameter Mittag-Leffler function E_alpha(z).

    Direct series sum(z**k / gamma(alpha*k + 1) for k >= 0), truncated
    once the next term falls below rel_tol times the running partial
    sum in magnitude.  Terms are evaluated in log space so that large
    intermediate terms (|z| up to 10) do not overflow before the
    series turns over.

    E_1(z) reduces to exp(z); this is the solver oracle identity the
    test suite leans on.  For strongly negative z the alternating
    series loses relative precision to cancellation, which is inherent
    to this summation method; the oracle is only used at moderate |z|.

    Args:
        alpha: Order, in (0, 1].
        z: Real argument, |z| <= 10 supported.
        rel_tol: Relative truncation threshold.
        max_terms: Hard cap on the number of series terms.

    Returns:
        E_alpha(z).

    Raises:
        DomainError: If alpha is outside (0, 1] or z is not finite.
        NumericalError: If the series has not met the truncation
            criterion after max_terms terms.
    """
    alpha = float(alpha)
    z = float(z)
    if not 0.0 < alpha <= 1.0:
        raise DomainError(f"mittag_leffler requires alpha in (0, 1], got {alpha}")
    if not math.isfinite(z):
        raise DomainError(f"mittag_leffler requires finite z, got {z!r}")
    if z == 0.0:
        return 1.0

    log_abs_z = math.log(abs(z))
    negative = z < 0.0
    total = 1.0  # k = 0 term
    for k in range(1, max_terms + 1):
        log_term = k * log_abs_z - math.lgamma(alpha * k + 1.0)
        term = math.exp(log_term)
        if negative and (k & 1):
            term = -term
        total += term
        if abs(term) < rel_tol * abs(total):
            return total
    raise NumericalError(
        f"Mittag-Leffler series did not converge within {max_terms} terms "
        f"for alpha={alpha}, z={z}",
        step_index=max_terms,
    )
