from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from dao_auction.core import (
    NEG_INF,
    BidProfile,
    InvariantViolation,
    MechanismError,
    MechanismOutcome,
    as_rational,
    fmt,
    make_profile,
    resort,
    unsort,
)


@pytest.mark.parametrize("raw, want", [
    ("2.5", Fraction(5, 2)), ("256/7", Fraction(256, 7)), (3, Fraction(3)), (" 1/3 ", Fraction(1, 3)),
])
def test_as_rational_parses(raw, want):
    assert as_rational(raw) == want


@pytest.mark.parametrize("raw", [0.5, True, "abc", "1/0", None])
def test_as_rational_rejects(raw):
    with pytest.raises(MechanismError):
        as_rational(raw)


def test_fmt():
    assert fmt(Fraction(256, 7)) == "256/7"
    assert fmt(Fraction(8, 2)) == "4"
    assert fmt(NEG_INF) == "-inf"
    with pytest.raises(MechanismError):
        fmt(0.25)


def test_make_profile_is_stable():
    p = make_profile([3, 5, 3, 7])
    assert p.bids == (7, 5, 3, 3)
    assert p.order == (3, 1, 0, 2)
    assert p.original() == (3, 5, 3, 7)
    assert p.rank_of(2) == 3


def test_profile_validation():
    with pytest.raises(MechanismError):
        BidProfile((Fraction(1), Fraction(2)), (0, 1))
    with pytest.raises(MechanismError):
        BidProfile((Fraction(2),), (1,))
    with pytest.raises(MechanismError):
        make_profile([])


def test_outcome_invariants():
    with pytest.raises(InvariantViolation):
        MechanismOutcome((Fraction(2),), (Fraction(0),), True, Fraction(0))
    with pytest.raises(InvariantViolation):
        MechanismOutcome((Fraction(0),), (Fraction(1),), False, Fraction(0))
    o = MechanismOutcome((Fraction(1), Fraction(0)), (Fraction(3), Fraction(0)), True, Fraction(3))
    assert o.budget_residual() == 0
    assert o.access_set() == {0}
    assert o.X_total == 1


@given(st.lists(st.integers(0, 9), min_size=1, max_size=8))
def test_unsort_resort_round_trip(raw):
    prof = make_profile(raw)
    x = tuple(Fraction(r, 9) for r in range(prof.n))
    out = MechanismOutcome(x, x, True, sum(x, Fraction(0)))
    back = unsort(out, prof)
    assert resort(back, prof) == out
    for rank, member in enumerate(prof.order):
        assert back.x[member] == x[rank]
