import itertools

import numpy as np
import pytest

from shgeff import crystal_db

ACCEPTANCE_LINES = []


def brute_trilinear(t, u, v, w):
    """Reference 27-term sum, written out with plain loops."""
    total = 0.0
    for i, j, k in itertools.product(range(3), repeat=3):
        total += t[i][j][k] * u[i] * v[j] * w[k]
    return total


def brute_polarizations(theta, phi):
    a = [np.sin(phi), -np.cos(phi), 0.0]
    b = [-np.cos(theta) * np.cos(phi), -np.cos(theta) * np.sin(phi), np.sin(theta)]
    return a, b


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def kdp():
    return crystal_db.build("-42m", {"chi14": 1.0})


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
