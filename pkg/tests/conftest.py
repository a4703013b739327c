import random

import pytest

_RESULTS: dict = {}


@pytest.fixture
def rng():
    return random.Random(20261018)


@pytest.fixture
def criterion():
    """Record and print one PASS/FAIL line for an acceptance criterion."""

    def record(number: int, title: str, ok: bool, detail: str = "") -> None:
        line = f"criterion {number} ({title}): {'PASS' if ok else 'FAIL'}"
        if detail:
            line += f"  [{detail}]"
        _RESULTS[number] = line
        print(line)

    return record


def pytest_terminal_summary(terminalreporter):
    if _RESULTS:
        terminalreporter.section("acceptance criteria")
        for number in sorted(_RESULTS):
            terminalreporter.write_line(_RESULTS[number])
