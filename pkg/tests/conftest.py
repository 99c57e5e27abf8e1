from hypothesis import HealthCheck, settings

settings.register_profile("default", deadline=None, max_examples=40,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

from functools import lru_cache

import pytest

from survwalk.gaussian_exact import gaussian_survival_curve
from survwalk.model import TimeChange
from survwalk.quadrature import QuadratureRule


@lru_cache(maxsize=None)
def _power_curve(q, barrier, N, refined):
    rule = QuadratureRule.with_nodes(L=16.0, nodes=1600) if refined else None
    return gaussian_survival_curve(TimeChange.power(q), N, barrier, rule)


@pytest.fixture(scope="session")
def power_curve():
    """Cached exact curves for kappa(n) = n^q; several modules reuse the long ones."""
    return _power_curve


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    lines = getattr(mod, "REPORT", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split("criterion ")[1].split(":")[0])):
            terminalreporter.write_line(line)
