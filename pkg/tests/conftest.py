import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from ptbiext.ode import Grid, Potential, reference_solutions

settings.register_profile(
    "default",
    deadline=None,
    max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")


@pytest.fixture(scope="session")
def quartic():
    return Potential.monomial(4)


@pytest.fixture(scope="session")
def grid8():
    return Grid.uniform(8.0, 4097)


@pytest.fixture(scope="session")
def ref8(quartic, grid8):
    return reference_solutions(quartic, grid8, 1e-10)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    """Print the one-line verdicts recorded by the acceptance tests."""
    lines = []
    for key in ("passed", "failed"):
        for rep in terminalreporter.stats.get(key, []):
            if getattr(rep, "when", None) != "call":
                continue
            for name, value in getattr(rep, "user_properties", ()):
                if name == "acceptance":
                    lines.append(value)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines):
            terminalreporter.line(line)
