from __future__ import annotations

import sys

import pytest

from confcube import graph as G
from confcube.cubes import build_conf


@pytest.fixture(scope="session")
def theta4():
    return build_conf(G.theta(4, subdivided=True), 3)


@pytest.fixture(scope="session")
def c4():
    return build_conf(G.cycle(4), 3)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.LINES:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(mod.LINES):
        terminalreporter.write_line(mod.LINES[number])
