from fractions import Fraction
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from dao_auction.core import NEG_INF, LosingPriceError, MechanismOutcome
from dao_auction.mech_baseline import allocate_baseline, wtp_baseline
from dao_auction.mech_collective import (
    FeasibleParams,
    allocate_collective,
    enumerate_feasible_params,
    feasibility_problems,
    member_utility,
    optimal_parameters,
    pool_capacity,
    wtp_collective,
)
from conftest import sorted_profiles

alphas = st.fractions(0, 4, max_denominator=5)


def test_fig3(fig1):
    assert wtp_collective(fig1, 1) == 460
    params = optimal_parameters(fig1, 400, 1)
    assert params.as_tuple() == (56, 28, 5, 8)
    out = allocate_collective(fig1, params, 400)
    assert sum(out.p) == 400
    assert out.x[5:8] == (Fraction(25, 28), Fraction(5, 7), Fraction(15, 28))
    assert enumerate_feasible_params(fig1, 400, 1) == [
        FeasibleParams(Fraction(56), Fraction(28), 5, 8),
        FeasibleParams(Fraction(125, 2), Fraction(125, 4), 4, 7),
    ]


def test_alpha_zero_fig1(fig1):
    assert optimal_parameters(fig1, 256, 0).as_tuple() == (Fraction(256, 7), Fraction(256, 7), 7, 7)


def test_losing_and_zero_price(fig1):
    with pytest.raises(LosingPriceError):
        optimal_parameters(fig1, 461, 1)
    assert optimal_parameters(fig1, 0, 1).as_tuple() == (0, 0, 9, 9)


def test_pool_capacity(fig1):
    assert pool_capacity(fig1, 7, 1) == 460
    assert pool_capacity(fig1, 8, 1) == 420
    assert max(pool_capacity(fig1, k, 1) for k in range(1, 10)) == wtp_collective(fig1, 1)


def test_feasibility_problems_reports():
    bad = FeasibleParams(Fraction(10), Fraction(10), 1, 1)
    assert feasibility_problems([10, 5], bad, 10, 1)  # P2 wrong for alpha=1


def test_member_utility_budget():
    out = MechanismOutcome((Fraction(1),), (Fraction(5),), True, Fraction(5))
    assert member_utility(0, [4], out, 1) == NEG_INF
    assert member_utility(0, [6], out, 1) == 1 + 6


@given(sorted_profiles(max_size=7, lo=1), alphas, st.integers(1, 1000))
def test_water_filling_is_widest_feasible(vals, alpha, permille):
    wtp = wtp_collective(vals, alpha)
    P = wtp * Fraction(permille, 1000)
    params = optimal_parameters(vals, P, alpha)
    feasible = enumerate_feasible_params(vals, P, alpha)
    assert feasible and feasible[0] == params
    assert not feasibility_problems(vals, params, P, alpha)
    out = allocate_collective(vals, params, P)
    assert out.budget_residual() == 0
    assert all(x * params.P1 == p for x, p in zip(out.x, out.p))


@given(sorted_profiles(max_size=7, lo=1), alphas)
def test_wtp_dominates_baseline(vals, alpha):
    assert wtp_collective(vals, alpha) >= wtp_baseline(vals)
    assert wtp_collective(vals, alpha) == max(pool_capacity(vals, k, alpha)
                                              for k in range(1, len(vals) + 1))


@given(sorted_profiles(max_size=7, lo=1), st.integers(1, 1000))
def test_alpha_zero_matches_baseline(vals, permille):
    P = wtp_baseline(vals) * Fraction(permille, 1000)
    assert allocate_collective(vals, optimal_parameters(vals, P, 0), P) == allocate_baseline(vals, P)


def test_wider_pools_cheaper_seeded():
    rng = random.Random(11)
    for _ in range(400):
        vals = sorted((Fraction(rng.randint(1, 60)) for _ in range(rng.randint(1, 7))), reverse=True)
        alpha = Fraction(rng.randint(0, 8), rng.randint(1, 3))
        P = wtp_collective(vals, alpha) * Fraction(rng.randint(1, 100), 100)
        params = enumerate_feasible_params(vals, P, alpha)
        for wide, narrow in zip(params, params[1:]):
            assert narrow.k2 < wide.k2
            assert narrow.P1 > wide.P1 and narrow.P2 > wide.P2
            assert narrow.k1 <= wide.k1
            xw = allocate_collective(vals, wide).x
            xn = allocate_collective(vals, narrow).x
            assert all(a >= b for a, b in zip(xw, xn))
