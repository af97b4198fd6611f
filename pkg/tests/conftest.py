import random
from fractions import Fraction

import pytest
from hypothesis import strategies as st

from carcass.fixtures import fixture_carcass, fixture_map
from carcass.rational_pl import PLMap

F = Fraction


@pytest.fixture(scope="session")
def tent_map():
    return fixture_carcass("tent")


@pytest.fixture(scope="session")
def g_A():
    return fixture_carcass("g_A")


@pytest.fixture(scope="session")
def g_B():
    return fixture_carcass("g_B")


@pytest.fixture(scope="session")
def h_A():
    return fixture_map("h_A")


def _distinct_fractions(rng, count, max_den):
    out = set()
    while len(out) < count:
        q = rng.randint(2, max_den)
        out.add(F(rng.randint(1, q - 1), q))
    return sorted(out)


def random_homeomorphism(rng, max_kinks=6, max_den=16):
    """Increasing PL homeomorphism with at most ``max_kinks`` interior breakpoints."""
    m = rng.randint(0, max_kinks)
    xs = _distinct_fractions(rng, m, max_den)
    ys = _distinct_fractions(rng, m, max_den)
    return PLMap([(0, 0)] + list(zip(xs, ys)) + [(1, 1)])


def homeomorphism_corpus(n=50, seed=20261018):
    rng = random.Random(seed)
    return [random_homeomorphism(rng) for _ in range(n)]


@pytest.fixture(scope="session")
def corpus():
    return homeomorphism_corpus()


def fractions_in_unit(max_den=64):
    return st.builds(
        lambda q, p: F(p % (q + 1), q),
        st.integers(min_value=1, max_value=max_den),
        st.integers(min_value=0, max_value=10 ** 6),
    )


@st.composite
def homeomorphisms(draw, max_kinks=6, max_den=32):
    m = draw(st.integers(0, max_kinks))
    interior = st.builds(lambda q, p: F(1 + p % (q - 1), q), st.integers(2, max_den), st.integers(0, 10 ** 6))
    xs = sorted(draw(st.sets(interior, min_size=m, max_size=m)))
    ys = sorted(draw(st.sets(interior, min_size=m, max_size=m)))
    return PLMap([(0, 0)] + list(zip(xs, ys)) + [(1, 1)])


@st.composite
def pl_maps(draw, max_pieces=6, max_den=32):
    m = draw(st.integers(0, max_pieces - 1))
    interior = st.builds(lambda q, p: F(1 + p % (q - 1), q), st.integers(2, max_den), st.integers(0, 10 ** 6))
    xs = sorted(draw(st.sets(interior, min_size=m, max_size=m)))
    ys = draw(st.lists(fractions_in_unit(max_den), min_size=m + 2, max_size=m + 2))
    return PLMap(list(zip([F(0)] + xs + [F(1)], ys)))


# --- acceptance reporting ------------------------------------------------

ACCEPTANCE_RESULTS = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_RESULTS):
        ok, text = ACCEPTANCE_RESULTS[key]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  criterion {key:>2}: {text}")
