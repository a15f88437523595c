"""Named simulation setups and their on-disk formats.

A scenario bundles model parameters, an initial state, a fractional
order, and a time horizon.  Three built-in outbreak scenarios are
included (spain, portugal, wuhan); they share one rate set and differ
in effective population, seeding, and fractional order.

File formats:

  * Scenario files: UTF-8 text, one `key = value` pair per line, `#`
    starts a full-line comment, blank lines ignored.  Exactly the 25
    known keys must appear once each; anything else (unknown key,
    duplicate, missing key, malformed number) fails closed with the
    offending key and line number.  Numeric values may be decimal
    literals or exact rationals written `a/b`.
  * Trajectory CSV: header `t,S,E,I,P,A,H,R,F,IPH_total` followed by
    one row per sample; IPH_total is the active-case aggregate
    I + P + H.  Floats use repr-shortest formatting at a configurable
    number of significant digits (default 10).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from .errors import DomainError, ValidationError
from .model import CompartmentState, ModelParams
from .solver import FractionalOrder, Trajectory

DEFAULT_T_END = 120.0
DEFAULT_N_STEPS = 12000

CSV_HEADER = "t,S,E,I,P,A,H,R,F,IPH_total"
DEFAULT_CSV_PRECISION = 10

# Shared outbreak rate set used by every built-in scenario (per day,
# except the dimensionless l, rho1, rho2).
BUILTIN_RATES = {
    "beta": 2.55,
    "beta_prime": 7.65,
    "l": 1.56,
    "kappa": 0.25,
    "rho1": 0.58,
    "rho2": 0.001,
    "gamma_a": 0.94,
    "gamma_i": 0.27,
    "gamma_r": 0.5,
    "delta_i": 1.0 / 23.0,
    "delta_p": 1.0 / 23.0,
    "delta_h": 1.0 / 23.0,
}

# name -> (population, divisor, infected seed I0, super-spreader seed P0, alpha)
# The effective population is total population / divisor, reflecting
# the share of it actually exposed to the outbreak.
_BUILTIN_SETUPS = {
    "spain": (47_000_000.0, 425.0, 10.0, 1.0, 0.85),
    "portugal": (10_280_000.0, 875.0, 4.0, 1.0, 0.75),
    "wuhan": (11_000_000.0, 250.0, 1.0, 5.0, 1.0),
}

BUILTIN_NAMES = tuple(_BUILTIN_SETUPS)

# Canonical key order for scenario files.
SCENARIO_KEYS = (
    "name", "N",
    "S0", "E0", "I0", "P0", "A0", "H0", "R0_init", "F0",
    "beta", "beta_prime", "l", "kappa", "rho1", "rho2",
    "gamma_a", "gamma_i", "gamma_r", "delta_i", "delta_p", "delta_h",
    "alpha", "t_end", "n_steps",
)

_STATE_KEYS = ("S0", "E0", "I0", "P0", "A0", "H0", "R0_init", "F0")

# Initial compartment sums may differ from N by rounding only.
_POPULATION_MISMATCH_TOL = 1e-9


@dataclass(frozen=True)
class Scenario:
    """A complete, runnable simulation setup."""

    name: str
    params: ModelParams
    initial_state: CompartmentState
    order: FractionalOrder
    t_end: float
    n_steps: int

    def __post_init__(self):
        if not self.name:
            raise ValidationError("scenario name must be non-empty", key="name")
        state = self.initial_state
        for comp in ("S", "E", "I", "P", "A", "H", "R", "F"):
            if getattr(state, comp) < 0.0:
                raise ValidationError(
                    f"initial compartment {comp} must be non-negative, "
                    f"got {getattr(state, comp)}", key=comp + "0")
        mismatch = abs(state.total - self.params.N)
        if mismatch > _POPULATION_MISMATCH_TOL * self.params.N:
            raise ValidationError(
                f"initial compartments sum to {state.total!r}, expected "
                f"N = {self.params.N!r} (difference {mismatch:.3g})", key="N")
        if not (np.isfinite(self.t_end) and self.t_end > 0.0):
            raise ValidationError(
                f"t_end must be positive, got {self.t_end!r}", key="t_end")
        if not isinstance(self.n_steps, int) or self.n_steps < 1:
            raise ValidationError(
                f"n_steps must be a positive integer, got {self.n_steps!r}",
                key="n_steps")

    @property
    def step_size(self) -> float:
        return self.t_end / self.n_steps


def builtin_params(population: float) -> ModelParams:
    """The shared built-in rate set attached to a given population."""
    return ModelParams(N=population, **BUILTIN_RATES)


def builtin_scenarios() -> list[Scenario]:
    """The three built-in outbreak scenarios."""
    return [_make_builtin(name) for name in BUILTIN_NAMES]


def get_builtin(name: str) -> Scenario:
    """Fetch one built-in scenario by case-sensitive name."""
    if name not in _BUILTIN_SETUPS:
        raise ValidationError(
            f"unknown built-in scenario {name!r}; available: "
            + ", ".join(BUILTIN_NAMES), key="name")
    return _make_builtin(name)


def _make_builtin(name: str) -> Scenario:
    population, divisor, seed_i, seed_p, alpha = _BUILTIN_SETUPS[name]
    n_eff = population / divisor
    initial = CompartmentState(
        S=n_eff - seed_i - seed_p, E=0.0, I=seed_i, P=seed_p,
        A=0.0, H=0.0, R=0.0, F=0.0)
    return Scenario(
        name=name,
        params=builtin_params(n_eff),
        initial_state=initial,
        order=FractionalOrder(alpha),
        t_end=DEFAULT_T_END,
        n_steps=DEFAULT_N_STEPS,
    )


DFE_SCENARIO_NAME = "builtin-dfe-start"


def dfe_scenario() -> Scenario:
    """Synthetic diagnostic scenario starting exactly at the disease-free
    equilibrium (S0 = N, all other compartments zero); the solution must
    stay fixed, which exercises the solver's fixed-point behaviour."""
    n_eff = 44000.0
    initial = CompartmentState(S=n_eff, E=0.0, I=0.0, P=0.0,
                               A=0.0, H=0.0, R=0.0, F=0.0)
    return Scenario(
        name=DFE_SCENARIO_NAME,
        params=builtin_params(n_eff),
        initial_state=initial,
        order=FractionalOrder(1.0),
        t_end=DEFAULT_T_END,
        n_steps=DEFAULT_N_STEPS,
    )


def with_order(scenario: Scenario, alpha: float) -> Scenario:
    """Copy of a scenario with a different fractional order."""
    return replace(scenario, order=FractionalOrder(alpha))


def with_beta(scenario: Scenario, beta: float) -> Scenario:
    """Copy of a scenario with a different beta (beta_prime, l unchanged)."""
    return replace(scenario, params=replace(scenario.params, beta=beta))


# ---------------------------------------------------------------------------
# Scenario file parsing and emission
# ---------------------------------------------------------------------------


def _parse_number(text: str, key: str, line: int) -> float:
    """Parse a decimal or `a/b` rational literal into a float."""
    text = text.strip()
    if "/" in text:
        num_s, _, den_s = text.partition("/")
        try:
            num = float(num_s)
            den = float(den_s)
        except ValueError:
            raise ValidationError(
                f"line {line}: value for {key!r} is not a valid rational: "
                f"{text!r}", key=key, line=line) from None
        if den == 0.0:
            raise ValidationError(
                f"line {line}: rational for {key!r} has zero denominator",
                key=key, line=line)
        value = num / den
    else:
        try:
            value = float(text)
        except ValueError:
            raise ValidationError(
                f"line {line}: value for {key!r} is not a valid number: "
                f"{text!r}", key=key, line=line) from None
    if not math.isfinite(value):
        raise ValidationError(
            f"line {line}: value for {key!r} must be finite, got {text!r}",
            key=key, line=line)
    return value


def load_scenario(path) -> Scenario:
    """Parse a scenario file, failing closed on any irregularity.

    Raises:
        ValidationError: Unknown, duplicate, missing, or malformed
            entries; semantic violations (negative compartments,
            population mismatch, alpha out of range).  Carries the
            offending key and line number where applicable.
        OSError: If the file cannot be read.
    """
    path = Path(path)
    raw: dict[str, str] = {}
    lines: dict[str, int] = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            stripped = line.strip()
            if not stripped or stripped.startswith("#"):
                continue
            if "=" not in stripped:
                raise ValidationError(
                    f"line {lineno}: expected 'key = value', got {stripped!r}",
                    line=lineno)
            key, _, value = stripped.partition("=")
            key = key.strip()
            value = value.strip()
            if key not in SCENARIO_KEYS:
                raise ValidationError(
                    f"line {lineno}: unknown key {key!r}", key=key, line=lineno)
            if key in raw:
                raise ValidationError(
                    f"line {lineno}: duplicate key {key!r} "
                    f"(first seen on line {lines[key]})", key=key, line=lineno)
            if not value:
                raise ValidationError(
                    f"line {lineno}: empty value for {key!r}", key=key,
                    line=lineno)
            raw[key] = value
            lines[key] = lineno

    missing = [k for k in SCENARIO_KEYS if k not in raw]
    if missing:
        raise ValidationError(
            "scenario file is missing required keys: " + ", ".join(missing),
            key=missing[0])

    name = raw["name"]
    numbers = {k: _parse_number(raw[k], k, lines[k])
               for k in SCENARIO_KEYS if k not in ("name", "n_steps")}

    n_steps_text = raw["n_steps"].strip()
    try:
        n_steps = int(n_steps_text)
    except ValueError:
        raise ValidationError(
            f"line {lines['n_steps']}: n_steps must be an integer, got "
            f"{n_steps_text!r}", key="n_steps", line=lines["n_steps"]) from None

    try:
        params = ModelParams(
            N=numbers["N"],
            **{k: numbers[k] for k in BUILTIN_RATES})
        initial = CompartmentState(
            S=numbers["S0"], E=numbers["E0"], I=numbers["I0"],
            P=numbers["P0"], A=numbers["A0"], H=numbers["H0"],
            R=numbers["R0_init"], F=numbers["F0"])
        order = FractionalOrder(numbers["alpha"])
        return Scenario(name=name, params=params, initial_state=initial,
                        order=order, t_end=numbers["t_end"], n_steps=n_steps)
    except ValidationError as exc:
        if exc.line is None and exc.key in lines:
            raise ValidationError(str(exc), key=exc.key,
                                  line=lines[exc.key]) from None
        raise
    except DomainError as exc:  # FractionalOrder rejects alpha
        raise ValidationError(
            f"line {lines['alpha']}: {exc}", key="alpha",
            line=lines["alpha"]) from None


def _format_number(value: float) -> str:
    """Shortest decimal that round-trips the exact double."""
    if value == int(value) and abs(value) < 1e16:
        return str(int(value))
    return repr(float(value))


def save_scenario(scenario: Scenario, path) -> None:
    """Write a scenario file that load_scenario parses back equal."""
    params = scenario.params
    state = scenario.initial_state
    values = {
        "name": scenario.name,
        "N": _format_number(params.N),
        "S0": _format_number(state.S),
        "E0": _format_number(state.E),
        "I0": _format_number(state.I),
        "P0": _format_number(state.P),
        "A0": _format_number(state.A),
        "H0": _format_number(state.H),
        "R0_init": _format_number(state.R),
        "F0": _format_number(state.F),
        **{k: _format_number(getattr(params, k)) for k in BUILTIN_RATES},
        "alpha": _format_number(scenario.order.alpha),
        "t_end": _format_number(scenario.t_end),
        "n_steps": str(scenario.n_steps),
    }
    text = "".join(f"{key} = {values[key]}\n" for key in SCENARIO_KEYS)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


# ---------------------------------------------------------------------------
# Trajectory CSV
# ---------------------------------------------------------------------------


def iph_total(states: np.ndarray) -> np.ndarray:
    """The active-case aggregate I + P + H per sample."""
    return states[:, 2] + states[:, 3] + states[:, 5]


def write_trajectory_csv(trajectory: Trajectory, path, *,
                         precision: int = DEFAULT_CSV_PRECISION) -> int:
    """Write a solved trajectory as CSV; returns the number of data rows.

    Columns are the sample time, the eight compartments, and the
    aggregate IPH_total = I + P + H.
    """
    if not isinstance(precision, int) or precision < 1:
        raise ValidationError(
            f"precision must be a positive integer, got {precision!r}",
            key="precision")
    states = trajectory.states
    if states.shape[1] != 8:
        raise ValidationError(
            f"trajectory CSV needs 8-component states, got {states.shape[1]}")
    iph = iph_total(states)
    fmt = f"%.{precision}g"
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(CSV_HEADER + "\n")
        for i in range(states.shape[0]):
            row = [fmt % trajectory.times[i]]
            row.extend(fmt % v for v in states[i])
            row.append(fmt % iph[i])
            fh.write(",".join(row) + "\n")
    return int(states.shape[0])
