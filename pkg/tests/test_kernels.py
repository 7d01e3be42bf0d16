from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given
from hypothesis import strategies as st

from dao_auction import kernels
from dao_auction.grouping import brute_force_opt_wtp
from conftest import sorted_profiles

needs_compiled = pytest.mark.skipif(not kernels.compiled_available(), reason="extension not built")


def _both(fn, *args):
    with kernels.use_backend("python"):
        py = fn(*args)
    with kernels.use_backend("cython"):
        cy = fn(*args)
    return py, cy


def test_scale_common_denominator():
    ints, extra, den = kernels.scale([Fraction(1, 2), Fraction(1, 3)], Fraction(5, 6))
    assert den == 6 and ints == [3, 2] and extra == [5]


def test_use_backend_restores():
    before = kernels.backend()
    with kernels.use_backend("python"):
        assert kernels.backend() == "python"
    assert kernels.backend() == before
    with pytest.raises(ValueError):
        with kernels.use_backend("fortran"):
            pass


@needs_compiled
@given(sorted_profiles(max_size=7))
def test_backends_agree_grouping(vals):
    for fn in (kernels.group_cv_scan, kernels.max_partition_wtp, kernels.max_continuous_wtp):
        py, cy = _both(fn, vals)
        assert py == cy


@needs_compiled
@given(sorted_profiles(max_size=8), st.fractions(0, 5, max_denominator=4), st.integers(1, 1000))
def test_backends_agree_collective(vals, alpha, permille):
    py, cy = _both(kernels.collective_wtp, vals, alpha)
    assert py == cy
    price = py * Fraction(permille, 1000)
    if price > 0:
        py, cy = _both(kernels.collective_widths, vals, price, alpha)
        assert py == cy


def test_huge_values_fall_back_to_python_ints():
    big = [Fraction(10**30), Fraction(10**29, 7), Fraction(1, 10**12)]
    assert kernels.group_cv_scan(big)[0] == brute_force_opt_wtp(big)
    wtp = kernels.collective_wtp(big, Fraction(1))
    assert wtp == max(sum(min(b, 2 * big[i]) for b in big[:i + 1]) for i in range(3))


def test_partition_oracle_small_exhaustive():
    # every multiset of size 4 over {1, 2, 3}
    for combo in product([3, 2, 1], repeat=4):
        vals = sorted(map(Fraction, combo), reverse=True)
        assert kernels.max_partition_wtp(vals) == brute_force_opt_wtp(vals)
        assert kernels.max_continuous_wtp(vals) == brute_force_opt_wtp(vals, continuous_only=True)


def test_env_forces_pure_python():
    import os
    import subprocess
    import sys
    code = "from dao_auction import kernels; print(kernels.backend())"
    env = dict(os.environ, DAO_AUCTION_PURE="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True)
    assert out.stdout.strip() == "python"
