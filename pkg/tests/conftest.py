import math

import numpy as np
import pytest

from eprgames.games import GameMatrix, prisoners_dilemma

_CRITERIA: dict[str, tuple[str, str]] = {}


def random_symmetric_game(rng: np.random.Generator, scale: float = 10.0) -> GameMatrix:
    """A player-symmetric game: payoff depends on own bit and how many others chose 1."""
    f = rng.uniform(-scale, scale, size=(2, 3))
    g = np.empty((2, 2, 2, 3))
    for l in (0, 1):
        for m in (0, 1):
            for n in (0, 1):
                bits = (l, m, n)
                for p in range(3):
                    others = sum(bits) - bits[p]
                    g[l, m, n, p] = f[bits[p], others]
    return GameMatrix(g)


def random_game(rng: np.random.Generator, scale: float = 10.0) -> GameMatrix:
    return GameMatrix(rng.uniform(-scale, scale, size=(2, 2, 2, 3)))


@pytest.fixture
def pd():
    return prisoners_dilemma()


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def angle(rng, lo=0.0, hi=math.pi):
    return float(rng.uniform(lo, hi))


# -- acceptance summary ---------------------------------------------------------


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.failed):
        return
    for key, label in report.user_properties:
        if key == "criterion":
            _CRITERIA[label[0]] = (label[1], "PASS" if report.passed else "FAIL")


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_CRITERIA, key=int):
        title, status = _CRITERIA[num]
        terminalreporter.write_line(f"{status}  criterion {int(num):2d}: {title}")
