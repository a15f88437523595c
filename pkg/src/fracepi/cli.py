"""Command-line interface.

Subcommands:
    run        solve a scenario and write the trajectory CSV
    sweep      solve one scenario across several alpha or beta values
    r0         print the basic reproduction number via both formulas
    stability  print R0 and the threshold classification
    verify     run the numerical self-check battery

Output discipline: stdout carries machine-parseable `key: value` lines
only; prose and diagnostics go to stderr.  Exit codes: 0 success,
1 usage error, 2 validation error (bad scenario/parameters/paths),
3 numerical failure.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path

from .analysis import (basic_reproduction_number, classify_stability,
                       r0_rewritten)
from .errors import DomainError, NumericalError, ValidationError
from .scenario import (BUILTIN_NAMES, DEFAULT_CSV_PRECISION,
                       DFE_SCENARIO_NAME, Scenario, builtin_params,
                       dfe_scenario, get_builtin, load_scenario, with_beta,
                       with_order, write_trajectory_csv)
from .simulate import peak_summary, run_scenario
from .verify import VERIFY_LEVELS, run_checks

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VALIDATION = 2
EXIT_NUMERICAL = 3

_FLOAT_FORMAT = "%.12g"

# r0/stability accept the model rates directly; flag name -> params field.
_PARAM_FLAGS = {
    "beta": "beta",
    "beta_prime": "beta_prime",
    "l": "l",
    "kappa": "kappa",
    "rho1": "rho1",
    "rho2": "rho2",
    "gamma_a": "gamma_a",
    "gamma_i": "gamma_i",
    "gamma_r": "gamma_r",
    "delta_i": "delta_i",
    "delta_p": "delta_p",
    "delta_h": "delta_h",
}


class _UsageError(Exception):
    """Raised for bad flags/arguments; mapped to exit code 1."""


class _Parser(argparse.ArgumentParser):
    # Subparsers inherit this class, so every argparse-detected problem
    # funnels through the same exit-code mapping instead of sys.exit(2).
    def error(self, message):
        raise _UsageError(message)


def _emit(key: str, value) -> None:
    if isinstance(value, float):
        value = _FLOAT_FORMAT % value
    print(f"{key}: {value}")


def _fail(message: str) -> None:
    print(f"error: {message}", file=sys.stderr)


def build_parser() -> _Parser:
    parser = _Parser(prog="fracepi",
                     description="Fractional-order epidemic model toolkit.")
    sub = parser.add_subparsers(dest="command", metavar="command")

    run_p = sub.add_parser("run", help="solve a scenario, write trajectory CSV")
    run_p.add_argument("--scenario", required=True,
                       help="built-in name or scenario file path")
    run_p.add_argument("--alpha", type=float, default=None,
                       help="override the fractional order (0 < alpha <= 1)")
    run_p.add_argument("--t-end", type=float, default=None,
                       help="override the horizon in days")
    run_p.add_argument("--steps", type=int, default=None,
                       help="override the number of time steps")
    run_p.add_argument("--out", required=True, help="output CSV path")
    run_p.add_argument("--precision", type=int, default=DEFAULT_CSV_PRECISION,
                       help="significant digits in CSV floats")

    sweep_p = sub.add_parser("sweep", help="solve across alpha or beta values")
    sweep_p.add_argument("--scenario", required=True,
                         help="built-in name or scenario file path")
    sweep_p.add_argument("--param", required=True, choices=("alpha", "beta"),
                         help="parameter to sweep")
    sweep_p.add_argument("--values", required=True,
                         help="comma-separated sweep values")
    sweep_p.add_argument("--t-end", type=float, default=None,
                         help="override the horizon in days")
    sweep_p.add_argument("--steps", type=int, default=None,
                         help="override the number of time steps")
    sweep_p.add_argument("--out-dir", required=True,
                         help="directory for per-value CSVs and summary.csv")
    sweep_p.add_argument("--precision", type=int,
                         default=DEFAULT_CSV_PRECISION,
                         help="significant digits in CSV floats")

    r0_p = sub.add_parser("r0", help="print R0 via both formulas")
    _add_param_flags(r0_p)

    stab_p = sub.add_parser("stability",
                            help="print R0 and the threshold classification")
    _add_param_flags(stab_p)

    verify_p = sub.add_parser("verify", help="run the numerical self-checks")
    verify_p.add_argument("--level", choices=VERIFY_LEVELS, default="quick",
                          help="check battery size")

    return parser


def _add_param_flags(sub_parser) -> None:
    sub_parser.add_argument("--scenario", default=None,
                            help="take parameters from this scenario")
    for flag in _PARAM_FLAGS:
        sub_parser.add_argument("--" + flag.replace("_", "-"), type=float,
                                default=None, dest=flag)
    sub_parser.add_argument("--population", type=float, default=None,
                            help="population size N")


def _resolve_scenario(ref: str) -> Scenario:
    if ref in BUILTIN_NAMES:
        return get_builtin(ref)
    if ref == DFE_SCENARIO_NAME:
        return dfe_scenario()
    path = Path(ref)
    if path.exists():
        return load_scenario(path)
    raise ValidationError(
        f"scenario {ref!r} is neither a built-in name "
        f"({', '.join(BUILTIN_NAMES)}, {DFE_SCENARIO_NAME}) nor an existing "
        "file")


def _check_overrides(args) -> None:
    alpha = getattr(args, "alpha", None)
    if alpha is not None and not 0.0 < alpha <= 1.0:
        raise _UsageError(f"--alpha must lie in (0, 1], got {alpha}")
    t_end = getattr(args, "t_end", None)
    if t_end is not None and not t_end > 0.0:
        raise _UsageError(f"--t-end must be positive, got {t_end}")
    steps = getattr(args, "steps", None)
    if steps is not None and steps < 1:
        raise _UsageError(f"--steps must be >= 1, got {steps}")
    precision = getattr(args, "precision", None)
    if precision is not None and precision < 1:
        raise _UsageError(f"--precision must be >= 1, got {precision}")


def _parse_values(text: str, param: str) -> list[float]:
    tokens = [t.strip() for t in text.split(",") if t.strip()]
    if not tokens:
        raise _UsageError("--values must list at least one value")
    values = []
    for token in tokens:
        try:
            value = float(token)
        except ValueError:
            raise _UsageError(f"--values entry {token!r} is not a number") \
                from None
        if param == "alpha" and not 0.0 < value <= 1.0:
            raise _UsageError(
                f"alpha sweep values must lie in (0, 1], got {value}")
        if param == "beta" and value < 0.0:
            raise _UsageError(
                f"beta sweep values must be non-negative, got {value}")
        values.append(value)
    return values


def _params_from_flags(args):
    if args.scenario is not None:
        params = _resolve_scenario(args.scenario).params
    else:
        params = builtin_params(args.population
                                if args.population is not None else 44000.0)
    overrides = {field: getattr(args, field)
                 for field in _PARAM_FLAGS.values()
                 if getattr(args, field) is not None}
    if args.scenario is not None and args.population is not None:
        overrides["N"] = args.population
    if overrides:
        params = replace(params, **overrides)
    return params


def cmd_run(args) -> int:
    _check_overrides(args)
    sc = _resolve_scenario(args.scenario)
    trajectory = run_scenario(sc, alpha=args.alpha, t_end=args.t_end,
                              n_steps=args.steps)
    rows = write_trajectory_csv(trajectory, args.out,
                                precision=args.precision)
    verdict = classify_stability(sc.params)
    _emit("scenario", sc.name)
    _emit("alpha", args.alpha if args.alpha is not None else sc.order.alpha)
    _emit("r0", verdict.r0)
    _emit("stability", verdict.classification.value)
    _emit("rows", rows)
    _emit("out", args.out)
    return EXIT_OK


def cmd_sweep(args) -> int:
    _check_overrides(args)
    values = _parse_values(args.values, args.param)
    base = _resolve_scenario(args.scenario)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    fmt = "%.10g"
    summary_rows = []
    for value in values:
        if args.param == "alpha":
            sc = with_order(base, value)
        else:
            sc = with_beta(base, value)
        trajectory = run_scenario(sc, t_end=args.t_end, n_steps=args.steps)
        label = "%g" % value
        csv_path = out_dir / f"{base.name}_{args.param}_{label}.csv"
        write_trajectory_csv(trajectory, csv_path, precision=args.precision)
        stats = peak_summary(trajectory)
        r0 = basic_reproduction_number(sc.params)
        summary_rows.append(",".join([
            fmt % value, fmt % r0,
            fmt % stats["peak_I"], fmt % stats["peak_P"],
            fmt % stats["peak_H"], fmt % stats["peak_IPH"],
            fmt % stats["t_peak_IPH"], fmt % stats["final_IPH"],
        ]))

    summary_path = out_dir / "summary.csv"
    with open(summary_path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("param_value,R0,peak_I,peak_P,peak_H,peak_IPH,"
                 "t_peak_IPH,final_IPH\n")
        for row in summary_rows:
            fh.write(row + "\n")

    _emit("scenario", base.name)
    _emit("param", args.param)
    _emit("runs", len(values))
    _emit("out_dir", str(out_dir))
    _emit("summary", str(summary_path))
    return EXIT_OK


def cmd_r0(args) -> int:
    params = _params_from_flags(args)
    factored = basic_reproduction_number(params)
    expanded = r0_rewritten(params)
    _emit("r0_factored", factored)
    _emit("r0_expanded", expanded)
    _emit("difference", abs(factored - expanded))
    return EXIT_OK


def cmd_stability(args) -> int:
    params = _params_from_flags(args)
    verdict = classify_stability(params)
    _emit("r0", verdict.r0)
    _emit("classification", verdict.classification.value)
    return EXIT_OK


def cmd_verify(args) -> int:
    results = run_checks(args.level)
    for result in results:
        _emit(result.name, "pass" if result.passed else "fail")
        print(f"  {result.name}: {result.detail}", file=sys.stderr)
    failed = [r.name for r in results if not r.passed]
    _emit("result", "fail" if failed else "pass")
    if failed:
        _fail("failing checks: " + ", ".join(failed))
        return EXIT_NUMERICAL
    return EXIT_OK


_HANDLERS = {
    "run": cmd_run,
    "sweep": cmd_sweep,
    "r0": cmd_r0,
    "stability": cmd_stability,
    "verify": cmd_verify,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise _UsageError("a subcommand is required "
                              "(run, sweep, r0, stability, verify)")
        return _HANDLERS[args.command](args)
    except _UsageError as exc:
        _fail(str(exc))
        print(parser.format_usage().rstrip(), file=sys.stderr)
        return EXIT_USAGE
    except (ValidationError, DomainError, OSError) as exc:
        _fail(str(exc))
        return EXIT_VALIDATION
    except NumericalError as exc:
        _fail(str(exc))
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
