"""Shared test plumbing: acceptance-criterion result lines.

Acceptance tests record one outcome each through the criterion fixture;
the terminal summary prints one PASS/FAIL line per criterion so the gate
can be read at a glance even when the rest of the -v output is long.
"""
import pytest

_CRITERIA = []


@pytest.fixture
def criterion():
    def record(number, ok, detail):
        _CRITERIA.append((number, bool(ok), detail))
        return bool(ok)

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number, ok, detail in sorted(_CRITERIA):
        word = "PASS" if ok else "FAIL"
        terminalreporter.write_line(f"CRITERION {number}: {word} - {detail}")
