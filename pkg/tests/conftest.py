"""Shared fixtures: solved built-in trajectories are expensive enough
(12,000-step history sums) to cache once per session, and the
acceptance tests register their scorecard lines for an end-of-run
summary block that survives output capture."""

from __future__ import annotations

import pytest

from fracepi import BUILTIN_NAMES, get_builtin, run_scenario

_acceptance_lines: list[str] = []


@pytest.fixture(scope="session")
def builtin_trajectories():
    """name -> Trajectory for every built-in scenario at its own order."""
    return {name: run_scenario(get_builtin(name)) for name in BUILTIN_NAMES}


@pytest.fixture(scope="session")
def acceptance_log():
    """Accumulator the acceptance tests append their verdict lines to."""
    return _acceptance_lines


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if _acceptance_lines:
        terminalreporter.section("acceptance criteria scorecard")
        for line in _acceptance_lines:
            terminalreporter.write_line(line)
