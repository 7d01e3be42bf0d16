from fractions import Fraction
import random

import pytest
from hypothesis import given

from dao_auction import kernels
from dao_auction.core import MechanismError
from dao_auction.grouping import (
    Excludability,
    Grouping,
    brute_force_opt_wtp,
    compare_excludability,
    enumerate_all_groupings,
    enumerate_continuous_groupings,
    evaluate_grouping,
    optimal_grouping,
    two_level_allocation,
)
from dao_auction.mech_baseline import allocate_baseline, wtp_baseline
from conftest import sorted_profiles

BELL = [1, 1, 2, 5, 15, 52, 203, 877]


@pytest.mark.parametrize("n", range(1, 8))
def test_enumeration_counts(n):
    assert sum(1 for _ in enumerate_all_groupings(n)) == BELL[n]
    conts = list(enumerate_continuous_groupings(n))
    assert len(conts) == 2 ** (n - 1)
    assert all(g.is_continuous() for g in conts)


def test_grouping_validation():
    with pytest.raises(MechanismError):
        Grouping(((0,), (0, 1)))
    with pytest.raises(MechanismError):
        Grouping(((0,), ()))
    assert not Grouping(((0, 2), (1,))).is_continuous()


def test_fig1_explicit_grouping(fig1):
    g = Grouping(tuple((i,) for i in range(7)) + ((7, 8),))
    ev = evaluate_grouping(fig1, g)
    assert ev.wtp_total == 320
    assert ev.critical_index == 8 and ev.critical_value == 40
    out = two_level_allocation(fig1, g, 256)
    assert out.p == (32,) * 7 + (16, 16)
    assert out.budget_residual() == 0


def test_fig1_optimum_beats_explicit(fig1):
    og = optimal_grouping(fig1)
    assert og.opt_wtp == 400 == brute_force_opt_wtp(fig1)
    assert og.grouping.intervals() == [(1, 1), (2, 2), (3, 3), (4, 5), (6, 9)]
    assert og.evaluation.wtp_total == 400


@pytest.mark.parametrize("a", range(1, 7))
def test_harmonic_family(a):
    n = 2 ** a
    vals = [Fraction(n, i) for i in range(1, n + 1)]
    assert optimal_grouping(vals).opt_wtp == Fraction(n * (a + 1), 2)
    assert wtp_baseline(vals) == n


def test_single_and_zero_values():
    og = optimal_grouping([7])
    assert og.opt_wtp == 7 and og.k == 1
    og = optimal_grouping([0, 0])
    assert og.opt_wtp == 0 and og.grouping == Grouping.degenerate(2)


@given(sorted_profiles(max_size=6))
def test_algorithm_matches_oracles(vals):
    og = optimal_grouping(vals)
    assert og.opt_wtp == brute_force_opt_wtp(vals) == brute_force_opt_wtp(vals, True)
    assert og.opt_wtp == kernels.max_partition_wtp(vals)
    assert og.grouping.is_continuous()
    assert og.evaluation.wtp_total == og.opt_wtp
    assert og.opt_wtp >= wtp_baseline(vals)


@given(sorted_profiles(max_size=9))
def test_block_sizes_non_decreasing(vals):
    sizes = optimal_grouping(vals).block_sizes
    assert list(sizes) == sorted(sizes)


def test_access_superset_seeded():
    rng = random.Random(7)
    for _ in range(300):
        vals = sorted((Fraction(rng.randint(1, 50)) for _ in range(rng.randint(1, 9))), reverse=True)
        P = wtp_baseline(vals) * Fraction(rng.randint(1, 100), 100)
        base = allocate_baseline(vals, P)
        grouped = two_level_allocation(vals, optimal_grouping(vals).grouping, P)
        assert grouped.access_set() >= base.access_set()
        assert grouped.budget_residual() == 0


def test_compare_excludability():
    assert compare_excludability([1, 1, 0], [1, 0, 0]) is Excludability.LESS
    assert compare_excludability([1, 0, 0], [1, 1, 0]) is Excludability.MORE
    assert compare_excludability({0, 1}, {0, 1}) is Excludability.EQUAL
    assert compare_excludability([1, 0], [0, 1]) is Excludability.INCOMPARABLE
