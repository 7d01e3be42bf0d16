"""The baseline lower-level mechanism: WTP = max_i i*b_i with equal cost shares."""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .core import (
    LosingPriceError,
    MechanismError,
    MechanismOutcome,
    as_nonnegative,
    sorted_values,
)


def wtp_baseline_index(profile) -> tuple[Fraction, int]:
    """Return ``(max_i i*b_i, i)`` with ``i`` the largest 1-based maximizer."""
    bids = sorted_values(profile)
    best, arg = Fraction(-1), 0
    for i, b in enumerate(bids, start=1):
        if i * b >= best:
            best, arg = i * b, i
    return best, arg


def wtp_baseline(profile) -> Fraction:
    return wtp_baseline_index(profile)[0]


def cutoff_index(profile, P_total: Fraction) -> int:
    """Largest 1-based ``i`` with ``i*b_i >= P_total``; 0 if none."""
    bids = sorted_values(profile)
    for i in range(len(bids), 0, -1):
        if i * bids[i - 1] >= P_total:
            return i
    return 0


def allocate_baseline(profile, P_total) -> MechanismOutcome:
    """Binary access for the top ``i*`` members, each paying ``P_total / i*``."""
    bids = sorted_values(profile)
    P_total = as_nonnegative(P_total)
    i_star = cutoff_index(bids, P_total)
    if i_star == 0:
        raise LosingPriceError(f"P_total={P_total} exceeds WTP={wtp_baseline(bids)}")
    share = P_total / i_star
    n = len(bids)
    x = tuple(Fraction(1) if i < i_star else Fraction(0) for i in range(n))
    p = tuple(share if i < i_star else Fraction(0) for i in range(n))
    return MechanismOutcome(x, p, True, P_total)


def losing_outcome(n: int) -> MechanismOutcome:
    if n < 1:
        raise MechanismError("n must be positive")
    zeros = (Fraction(0),) * n
    return MechanismOutcome(zeros, zeros, False, Fraction(0))


def social_welfare(values: Sequence[Fraction], x: Sequence[Fraction]) -> Fraction:
    """Exact ``sum v_i * x_i``; both sequences in the same member order."""
    values = getattr(values, "bids", values)
    if len(values) != len(x):
        raise MechanismError("values and access vector differ in length")
    return sum((Fraction(v) * Fraction(xi) for v, xi in zip(values, x)), Fraction(0))


def harmonic_number(ell: int) -> Fraction:
    if ell < 1:
        raise MechanismError("ell must be positive")
    return sum((Fraction(1, i) for i in range(1, ell + 1)), Fraction(0))


def harmonic_bound_check(opt_sw: Fraction, sw: Fraction, ell: int) -> bool:
    """True iff ``opt_sw <= H_ell * sw``.  A zero ``sw`` only passes when ``opt_sw`` is 0."""
    return opt_sw <= harmonic_number(ell) * sw
