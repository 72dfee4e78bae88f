from __future__ import annotations

import sys
from pathlib import Path

import pytest

from ircnet.registry import load_registry
from ircnet.synth import fixture_a, fixture_a_lexicon

TESTS = Path(__file__).resolve().parent
FIXTURE_A = TESTS / "fixtures" / "fixture_a"

sys.path.insert(0, str(TESTS))


@pytest.fixture(scope="session")
def registry():
    return load_registry()


@pytest.fixture
def fx():
    return fixture_a()


@pytest.fixture
def fx_lexicon():
    return fixture_a_lexicon()


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
