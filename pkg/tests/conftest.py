import numpy as np
import pytest

from motif_forge.core import Segment


def random_walk(length, seed):
    rng = np.random.default_rng(seed)
    w = np.cumsum(rng.normal(size=length))
    return (w - w.mean()) / w.std()


@pytest.fixture
def pattern():
    return random_walk(50, 11)


@pytest.fixture
def two_copies(pattern):
    """[P, P]: the second copy starts at 50."""
    return np.concatenate([pattern, pattern])


@pytest.fixture
def three_copies(pattern):
    return np.concatenate([pattern, pattern, pattern])


def planted(n, length, starts, seed=0, noise=0.0):
    """Noise background with exact copies of one random-walk pattern."""
    rng = np.random.default_rng(seed)
    x = rng.normal(size=n)
    p = 3 * random_walk(length, seed + 100)
    for s in starts:
        x[s:s + length] = p
    if noise:
        x = x + rng.normal(scale=noise, size=n)
    return x, [Segment(s, s + length - 1) for s in starts]


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
