from dataclasses import dataclass

import pytest

from jetcalc import load_fixture
from jetcalc.connections import Connection, Derivation
from jetcalc.presentation import Presentation
from jetcalc.scenario import Scenario, parse_expression


@dataclass
class Setup:
    scenario: Scenario
    pres: Presentation
    D: Derivation
    gamma: Connection | None

    def p(self, text: str):
        """Parse against this presentation."""
        return parse_expression(text, self.pres)


def build(name: str) -> Setup:
    s = load_fixture(name)
    pres = s.presentation
    D = Derivation(pres, s.derivation_degree, s.derivation)
    gamma = Connection(D, s.connection, s.connection_degree) if s.connection is not None else None
    return Setup(s, pres, D, gamma)


@pytest.fixture(scope="session")
def nodal() -> Setup:
    return build("nodal")


@pytest.fixture(scope="session")
def curve() -> Setup:
    return build("nongorenstein")


@pytest.fixture(scope="session")
def free() -> Setup:
    return build("free_plane")


def pytest_terminal_summary(terminalreporter):
    import sys
    mod = sys.modules.get("tests.test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[k])
