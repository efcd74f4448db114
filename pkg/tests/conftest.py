"""Shared fixtures and the acceptance summary.

Test manifest: every randomized check uses SEED below.
"""

import pytest

SEED = 20170
SMALL_PRIMES = [2, 3, 5, 7, 11, 13]

_ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def report():
    """Collect one PASS/FAIL line per acceptance criterion."""

    def _report(name: str, ok: bool, detail: str = ""):
        line = f"[{'PASS' if ok else 'FAIL'}] {name}" + (f" -- {detail}" if detail else "")
        _ACCEPTANCE_LINES.append(line)
        print(line)
        return ok

    return _report


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
