import numpy as np
import pytest

from tails import (
    Clayton,
    Comonotone,
    Countermonotone,
    Gaussian,
    Gumbel,
    Independence,
    StudentT,
    checkerboard_extend,
    subcopula_from_joint,
)
from tails.discrete import JointPMF

_ACCEPTANCE = []


def pytest_runtest_logreport(report):
    if report.when == "call" and "test_acceptance.py" in report.nodeid:
        _ACCEPTANCE.append((report.nodeid.split("::")[-1], report.outcome))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome in _ACCEPTANCE:
        terminalreporter.write_line(f"{'PASS' if outcome == 'passed' else 'FAIL'}  {name}")


CLOSED_FORM = [
    Independence(),
    Comonotone(),
    Countermonotone(),
    Clayton(0.5),
    Clayton(2.0),
    Gumbel(1.0),
    Gumbel(2.5),
]
QUADRATURE = [Gaussian(0.5), Gaussian(-0.7), Gaussian(0.95)]
SLOW_QUADRATURE = [StudentT(0.3, 4.0), StudentT(-0.5, 1.5)]


@pytest.fixture
def comonotone_coins():
    return checkerboard_extend(subcopula_from_joint(JointPMF.from_mass(np.diag([0.5, 0.5]))))


@pytest.fixture
def independent_coins():
    return checkerboard_extend(subcopula_from_joint(JointPMF.from_mass(np.full((2, 2), 0.25))))


def random_checkerboard(rng, max_nodes=20):
    rows = int(rng.integers(1, max_nodes))
    cols = int(rng.integers(1, max_nodes))
    mass = rng.dirichlet(np.full(rows * cols, 0.5)).reshape(rows, cols)
    # zero out some cells so sparse grids are exercised
    mass[rng.random(mass.shape) < 0.3] = 0.0
    if mass.sum() == 0:
        mass[0, 0] = 1.0
    mass /= mass.sum()
    return checkerboard_extend(subcopula_from_joint(JointPMF.from_mass(mass)))
