"""Collective-utility mechanism with partial access.

Members with bid at least ``P1`` get full access and pay ``P1``; members with
bid in ``[P2, P1)`` pay their bid for access ``b_i / P1``; the rest are
excluded.  ``P2 = P1 / (1 + alpha)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import kernels
from .core import (
    NEG_INF,
    ExtendedValue,
    InvariantViolation,
    LosingPriceError,
    MechanismError,
    MechanismOutcome,
    as_nonnegative,
    sorted_values,
)


@dataclass(frozen=True)
class FeasibleParams:
    P1: Fraction
    P2: Fraction
    k1: int
    k2: int

    def as_tuple(self):
        return (self.P1, self.P2, self.k1, self.k2)


def _alpha(alpha) -> Fraction:
    return as_nonnegative(alpha)


def pool_capacity(profile, k2: int, alpha) -> Fraction:
    """Largest amount a pool of the top ``k2`` members can pay with ``P1 <= (1+a)*b_k2``."""
    bids = sorted_values(profile)
    cap = (1 + _alpha(alpha)) * bids[k2 - 1]
    return sum((min(b, cap) for b in bids[:k2]), Fraction(0))


def wtp_collective(profile, alpha) -> Fraction:
    """``max_i sum_{j<=i} min(b_j, (1+alpha)*b_i)``."""
    return kernels.collective_wtp(sorted_values(profile), _alpha(alpha))


def optimal_parameters(profile, P_total, alpha) -> FeasibleParams:
    """Widest feasible pool and its water line.

    The pool width ``k2`` shrinks from ``n`` until its capacity reaches
    ``P_total``; the water line then rises layer by layer from ``b_k2``.
    A zero price gives everyone full access for free.
    """
    bids = sorted_values(profile)
    P_total = as_nonnegative(P_total)
    alpha = _alpha(alpha)
    n = len(bids)
    if P_total == 0:
        return FeasibleParams(Fraction(0), Fraction(0), n, n)
    wtp = wtp_collective(bids, alpha)
    if P_total > wtp:
        raise LosingPriceError(f"P_total={P_total} exceeds WTP={wtp}")
    try:
        k1, k2, remain, full = kernels.collective_widths(bids, P_total, alpha)
    except ArithmeticError as exc:
        raise InvariantViolation(f"water-filling failed on a winning price: {exc}") from exc
    if full:
        P1 = P_total / k2
    else:
        P1 = bids[k1] + remain / k1
    params = FeasibleParams(P1, P1 / (1 + alpha), k1, k2)
    problems = feasibility_problems(bids, params, P_total, alpha)
    if problems:
        raise InvariantViolation("; ".join(problems))
    return params


def feasibility_problems(profile, params: FeasibleParams, P_total, alpha) -> list[str]:
    """Everything wrong with ``params`` for this profile; empty when feasible."""
    bids = sorted_values(profile)
    P1, P2, k1, k2 = params.as_tuple()
    out = []
    if P2 * (1 + _alpha(alpha)) != P1:
        out.append("P2 != P1/(1+alpha)")
    if not 1 <= k1 <= k2 <= len(bids):
        out.append(f"bad widths k1={k1} k2={k2}")
        return out
    if max((i for i, b in enumerate(bids, start=1) if b >= P1), default=0) != k1:
        out.append("k1 is not the last member bidding at least P1")
    if max((i for i, b in enumerate(bids, start=1) if b >= P2), default=0) != k2:
        out.append("k2 is not the last member bidding at least P2")
    if k1 * P1 + sum(bids[k1:k2], Fraction(0)) != P_total:
        out.append("budget does not balance")
    return out


def allocate_collective(profile, params: FeasibleParams, P_total=None) -> MechanismOutcome:
    bids = sorted_values(profile)
    P1, _, k1, k2 = params.as_tuple()
    total = k1 * P1 + sum(bids[k1:k2], Fraction(0))
    if P_total is not None and as_nonnegative(P_total) != total:
        raise MechanismError(f"params collect {total}, not {P_total}")
    x, p = [], []
    for i, b in enumerate(bids, start=1):
        if i <= k1:
            x.append(Fraction(1))
            p.append(P1)
        elif i <= k2:
            x.append(b / P1)
            p.append(b)
        else:
            x.append(Fraction(0))
            p.append(Fraction(0))
    return MechanismOutcome(tuple(x), tuple(p), True, total)


def member_utility(i: int, values, outcome: MechanismOutcome, alpha) -> ExtendedValue:
    """Collective utility of the member at position ``i`` (0-based, outcome order).

    ``values`` are true values in the same order as the outcome.  Paying more
    than one's value is ``-inf``.
    """
    values = getattr(values, "bids", values)
    if len(values) != outcome.n:
        raise MechanismError("values and outcome differ in length")
    x, p, v = outcome.x[i], outcome.p[i], values[i]
    if p > v:
        return NEG_INF
    if x > 0:
        sw = sum((vj * xj for vj, xj in zip(values, outcome.x)), Fraction(0))
        return v * x - p + _alpha(alpha) * sw
    return -p


def enumerate_feasible_params(profile, P_total, alpha) -> list[FeasibleParams]:
    """Brute-force oracle: every feasible parameter group, widest pool first.

    For each ``(k2, k1)`` pair the budget equation fixes ``P1``; the pair is
    kept when the definitions of ``k1`` and ``k2`` hold for that ``P1``.
    """
    bids = sorted_values(profile)
    P_total = as_nonnegative(P_total)
    alpha = _alpha(alpha)
    n = len(bids)
    found = []
    for k2 in range(n, 0, -1):
        for k1 in range(k2, 0, -1):
            P1 = (P_total - sum(bids[k1:k2], Fraction(0))) / k1
            if P1 < 0:
                continue
            cand = FeasibleParams(P1, P1 / (1 + alpha), k1, k2)
            if not feasibility_problems(bids, cand, P_total, alpha):
                found.append(cand)
    return found
