import os
import sys

import pytest
from hypothesis import settings

sys.path.insert(0, os.path.dirname(__file__))

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

from ffcurves.specdoc import reference_curve  # noqa: E402


@pytest.fixture(scope="session")
def hermitian2():
    return reference_curve("hermitian2")


@pytest.fixture(scope="session")
def hermitian3():
    return reference_curve("hermitian3")


@pytest.fixture(scope="session")
def hermitian4():
    return reference_curve("hermitian4")


@pytest.fixture(scope="session")
def klein():
    return reference_curve("klein")


@pytest.fixture(scope="session")
def suzuki8():
    return reference_curve("suzuki8")


# ---------------------------------------------------------------------------
# acceptance bookkeeping: one PASS/FAIL line per criterion in the summary

_ACCEPTANCE: dict[int, dict] = {}


class _Criterion:
    def __init__(self, number: int, title: str):
        self.entry = _ACCEPTANCE.setdefault(number, {"title": title, "failed": []})

    def check(self, label: str, ok: bool, detail: str = "") -> bool:
        if not ok:
            self.entry["failed"].append(f"{label}{': ' + detail if detail else ''}")
        return ok


@pytest.fixture
def criterion():
    return _Criterion


def acceptance_lines() -> list[str]:
    out = []
    for n in sorted(_ACCEPTANCE):
        e = _ACCEPTANCE[n]
        status = "FAIL" if e["failed"] else "PASS"
        line = f"criterion {n} [{status}] {e['title']}"
        if e["failed"]:
            line += " -- " + "; ".join(e["failed"])
        out.append(line)
    return out


def pytest_terminal_summary(terminalreporter):
    lines = acceptance_lines()
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
