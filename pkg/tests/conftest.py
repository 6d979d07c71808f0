import re

import pytest

_CRITERIA: dict[int, str] = {}


@pytest.fixture
def report_criterion():
    """Record one pass/fail line per acceptance criterion."""

    def report(number: int, ok: bool, detail: str) -> None:
        line = f"CRITERION {number} {'PASS' if ok else 'FAIL'}: {detail}"
        _CRITERIA[number] = line
        print(line)

    return report


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        line = _CRITERIA[number]
        markup = {"green": True} if re.search(r" PASS:", line) else {"red": True}
        terminalreporter.write_line(line, **markup)
