import random

import pytest

from cmunits.numerics import QuadSurd
from cmunits.quadforms import theta_K


@pytest.fixture
def rng():
    return random.Random(20240601)


def random_sl2(rng, bound=6):
    while True:
        a, b, c, d = (rng.randint(-bound, bound) for _ in range(4))
        if a * d - b * c == 1:
            return (a, b), (c, d)


# points with imaginary part near 1, where q-products converge fast
TEST_POINTS = [
    theta_K(-7),
    theta_K(-8),
    theta_K(-11),
    QuadSurd(0, 1, 1, -1),
    QuadSurd(1, 6, 3, -1),
]


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import REPORT
    except ImportError:
        return
    if REPORT:
        terminalreporter.section("acceptance criteria")
        for line in sorted(REPORT, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
