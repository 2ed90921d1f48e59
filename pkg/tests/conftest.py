from __future__ import annotations

import os

import pytest
from hypothesis import HealthCheck, settings

from bwbverify.levi import parabolic
from bwbverify.root_system import Weight, root_system

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@pytest.fixture(scope="session")
def e6():
    return root_system("E6")


@pytest.fixture(scope="session")
def a5():
    return root_system("A5")


@pytest.fixture(scope="session")
def parab():
    return parabolic("E6", 2)


def w(text: str) -> Weight:
    from bwbverify.notation import parse_weight

    return parse_weight(text)


ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def record_criterion(number: int, ok: bool, detail: str) -> None:
    ACCEPTANCE[number] = (ok, detail)
    print(f"criterion {number}: {'PASS' if ok else 'FAIL'}: {detail}")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
