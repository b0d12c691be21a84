from __future__ import annotations

import random

import pytest

from forestshift import validate_forest, validate_weights

_ACCEPTANCE: list = []


@pytest.fixture
def rng():
    return random.Random(12345)


@pytest.fixture
def fork_forest():
    return validate_forest({"x0": "x0", "u": "x0", "v1": "u", "w1": "u"}, {"a": "v1", "b": "w1"})


@pytest.fixture
def fork_weights(fork_forest):
    return validate_weights(fork_forest, {"x0": 0, "u": 10, "v1": 1, "w1": 10}, {"a": 2, "b": 20})


@pytest.fixture
def unilateral():
    return validate_forest({0: 0}, {"r": 0})


@pytest.fixture
def acceptance_log():
    def record(number, ok, detail=""):
        _ACCEPTANCE.append((number, ok, detail))
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number, ok, detail in sorted(_ACCEPTANCE):
        terminalreporter.write_line(f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
