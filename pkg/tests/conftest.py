import sys
from fractions import Fraction

import pytest
from hypothesis import settings
from hypothesis import strategies as st

settings.register_profile("default", max_examples=150, deadline=None)
settings.load_profile("default")

FIG1 = [Fraction(v) for v in range(100, 10, -10)]


def rationals(lo=0, hi=100, den=4):
    return st.builds(Fraction, st.integers(lo * den, hi * den), st.just(den))


def sorted_profiles(min_size=1, max_size=7, lo=0, hi=100):
    return st.lists(rationals(lo, hi), min_size=min_size, max_size=max_size).map(
        lambda xs: sorted(xs, reverse=True))


@pytest.fixture
def fig1():
    return list(FIG1)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if not mod or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(mod.RESULTS, key=int):
        terminalreporter.write_line(mod._line(key))
