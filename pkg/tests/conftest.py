from __future__ import annotations

from pathlib import Path

import pytest

from legdga.cedga import build_dga, load_dga
from legdga.diagram.lkd import load

FIXTURES = Path(__file__).parent / "fixtures"
KNOTS = ["unknot", "trefoil", "chekanov_a", "chekanov_b"]


@pytest.fixture(scope="session")
def fixtures() -> Path:
    return FIXTURES


@pytest.fixture(scope="session")
def diagrams():
    return {n: load(FIXTURES / f"{n}.lkd") for n in KNOTS}


@pytest.fixture(scope="session")
def dgas(diagrams):
    return {n: build_dga(d) for n, d in diagrams.items()}


@pytest.fixture(scope="session")
def golden():
    return {n: load_dga(FIXTURES / f"{n}.dga.json") for n in KNOTS}


def pytest_terminal_summary(terminalreporter):
    try:
        import test_acceptance as acc
    except ImportError:
        return
    if not acc.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for i in sorted(acc.RESULTS):
        terminalreporter.write_line(acc.line(i))
