import random

import pytest
from hypothesis import strategies as st

from eqpowers.cyclotomic import CycInt, make

PRIMES = (2, 3, 5, 7)


def cycints(order, lo=-100, hi=100):
    return st.lists(st.integers(lo, hi), min_size=order, max_size=order).map(
        lambda raw: make(order, raw)
    )


@st.composite
def cyc_triples(draw, lo=-100, hi=100):
    n = draw(st.sampled_from(PRIMES))
    s = cycints(n, lo, hi)
    return draw(s), draw(s), draw(s)


def random_cycint(rng: random.Random, order: int, lo: int = -5, hi: int = 5) -> CycInt:
    return make(order, [rng.randint(lo, hi) for _ in range(order - 1)])


@pytest.fixture
def rng():
    return random.Random(20240601)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
