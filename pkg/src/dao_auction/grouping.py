"""Subgroups inside a DAO.

A grouping partitions the members (identified by 0-based rank in the
value-sorted order) into subgroups.  Each subgroup bids ``max_t t*v_t`` over
its own members and the DAO bids ``max_j j*WTP^j`` over its subgroups.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

from . import kernels
from .core import MechanismError, MechanismOutcome, as_nonnegative, sorted_values
from .mech_baseline import allocate_baseline, wtp_baseline


@dataclass(frozen=True)
class Grouping:
    subgroups: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        subs = tuple(tuple(sorted(s)) for s in self.subgroups)
        object.__setattr__(self, "subgroups", subs)
        if any(not s for s in subs):
            raise MechanismError("empty subgroup")
        members = [m for s in subs for m in s]
        if sorted(members) != list(range(len(members))):
            raise MechanismError("subgroups do not partition the members")

    @classmethod
    def from_cuts(cls, cuts: Sequence[int]) -> "Grouping":
        """Build the interval grouping whose blocks end at ``cuts`` (first cut is 0)."""
        return cls(tuple(tuple(range(a, b)) for a, b in zip(cuts, cuts[1:])))

    @classmethod
    def degenerate(cls, n: int) -> "Grouping":
        return cls((tuple(range(n)),))

    @classmethod
    def singletons(cls, n: int) -> "Grouping":
        return cls(tuple((i,) for i in range(n)))

    @property
    def n(self) -> int:
        return sum(len(s) for s in self.subgroups)

    @property
    def k(self) -> int:
        return len(self.subgroups)

    def is_continuous(self) -> bool:
        """No crossing: each subgroup is a run of consecutive ranks."""
        return all(s[-1] - s[0] + 1 == len(s) for s in self.subgroups)

    def intervals(self) -> list[tuple[int, int]]:
        """1-based ``(first, last)`` ranks per subgroup; only for continuous groupings."""
        if not self.is_continuous():
            raise MechanismError("grouping has a crossing")
        return [(s[0] + 1, s[-1] + 1) for s in sorted(self.subgroups)]


@dataclass(frozen=True)
class GroupingEvaluation:
    subgroup_wtps: tuple[Fraction, ...]  # in the grouping's subgroup order
    ranking: tuple[int, ...]  # subgroup indices by WTP desc, ties to the lowest member
    wtp_total: Fraction
    critical_index: int
    critical_value: Fraction


@dataclass(frozen=True)
class OptimalGrouping:
    grouping: Grouping
    evaluation: GroupingEvaluation
    opt_wtp: Fraction
    opt_cv: Fraction
    k: int
    block_sizes: tuple[int, ...]  # greedy block sizes before the tail merge
    tail: int  # members merged into the k-th block


def subgroup_wtp(member_values: Sequence[Fraction]) -> Fraction:
    if not member_values:
        raise MechanismError("empty subgroup")
    return wtp_baseline(member_values)


def evaluate_grouping(values, g: Grouping) -> GroupingEvaluation:
    vals = sorted_values(values)
    if g.n != len(vals):
        raise MechanismError(f"grouping covers {g.n} members, profile has {len(vals)}")
    wtps = tuple(subgroup_wtp([vals[m] for m in s]) for s in g.subgroups)
    ranking = tuple(sorted(range(g.k), key=lambda j: (-wtps[j], g.subgroups[j][0])))
    best, ci = Fraction(-1), 0
    for pos, j in enumerate(ranking, start=1):
        if pos * wtps[j] >= best:
            best, ci = pos * wtps[j], pos
    return GroupingEvaluation(wtps, ranking, best, ci, wtps[ranking[ci - 1]])


def optimal_grouping(values) -> OptimalGrouping:
    """Maximum-WTP continuous grouping, computed by the O(n^3) candidate scan.

    Every interval's WTP is a candidate critical value; for each, members are
    cut greedily into the most blocks reaching it.  Leftover members that
    cannot form another such block join the last block.
    """
    vals = sorted_values(values)
    n = len(vals)
    opt_wtp, opt_cv, k = kernels.group_cv_scan(vals)
    if k == 0:
        g = Grouping.degenerate(n)
        return OptimalGrouping(g, evaluate_grouping(vals, g), Fraction(0), Fraction(0), 0, (n,), 0)
    cuts = kernels.greedy_cuts(vals, opt_cv)
    if len(cuts) != k + 1:
        raise AssertionError(f"greedy rebuild found {len(cuts) - 1} blocks, scan found {k}")
    blocks = [tuple(range(a, b)) for a, b in zip(cuts, cuts[1:])]
    sizes = tuple(len(b) for b in blocks)
    tail = tuple(range(cuts[-1], n))
    blocks[-1] = blocks[-1] + tail
    g = Grouping(tuple(blocks))
    return OptimalGrouping(g, evaluate_grouping(vals, g), opt_wtp, opt_cv, k, sizes, len(tail))


def enumerate_continuous_groupings(n: int) -> Iterator[Grouping]:
    """All 2**(n-1) interval groupings of ``n`` members."""
    if not 1 <= n <= 20:
        raise MechanismError("n must be in [1, 20]")
    for mask in range(1 << (n - 1)):
        cuts = [0] + [i + 1 for i in range(n - 1) if mask >> i & 1] + [n]
        yield Grouping.from_cuts(cuts)


def enumerate_all_groupings(n: int) -> Iterator[Grouping]:
    """All Bell(n) set partitions, via restricted growth strings."""
    if not 1 <= n <= 10:
        raise MechanismError("n must be in [1, 10]")

    def rec(i: int, labels: list[int], blocks: int):
        if i == n:
            subs = [[] for _ in range(blocks)]
            for m, b in enumerate(labels):
                subs[b].append(m)
            yield Grouping(tuple(tuple(s) for s in subs))
            return
        for b in range(blocks + 1):
            labels.append(b)
            yield from rec(i + 1, labels, max(blocks, b + 1))
            labels.pop()

    yield from rec(0, [], 0)


def brute_force_opt_wtp(values, continuous_only: bool = False) -> Fraction:
    """Reference oracle: evaluate every grouping and keep the best."""
    vals = sorted_values(values)
    gen = enumerate_continuous_groupings if continuous_only else enumerate_all_groupings
    return max(evaluate_grouping(vals, g).wtp_total for g in gen(len(vals)))


def two_level_allocation(values, g: Grouping, P_total) -> MechanismOutcome:
    """Run the baseline rule over subgroups, then inside each winning subgroup."""
    vals = sorted_values(values)
    P_total = as_nonnegative(P_total)
    ev = evaluate_grouping(vals, g)
    upper = allocate_baseline([ev.subgroup_wtps[j] for j in ev.ranking], P_total)
    x = [Fraction(0)] * len(vals)
    p = [Fraction(0)] * len(vals)
    for pos, j in enumerate(ev.ranking):
        if not upper.x[pos]:
            continue
        members = g.subgroups[j]
        inner = allocate_baseline([vals[m] for m in members], upper.p[pos])
        for t, m in enumerate(members):
            x[m] = inner.x[t]
            p[m] = inner.p[t]
    return MechanismOutcome(tuple(x), tuple(p), True, P_total)


class Excludability(str, enum.Enum):
    LESS = "less_excludable"
    MORE = "more_excludable"
    EQUAL = "equal"
    INCOMPARABLE = "incomparable"


def compare_excludability(x1, x2) -> Excludability:
    """Pointwise comparison of two access vectors (or two access sets).

    ``LESS`` means ``x1`` grants every member at least as much as ``x2``.
    """
    if isinstance(x1, (set, frozenset)) or isinstance(x2, (set, frozenset)):
        a1, a2 = frozenset(x1), frozenset(x2)
        if a1 == a2:
            return Excludability.EQUAL
        if a1 >= a2:
            return Excludability.LESS
        if a1 <= a2:
            return Excludability.MORE
        return Excludability.INCOMPARABLE
    if len(x1) != len(x2):
        raise MechanismError("access vectors differ in length")
    ge = all(a >= b for a, b in zip(x1, x2))
    le = all(a <= b for a, b in zip(x1, x2))
    if ge and le:
        return Excludability.EQUAL
    if ge:
        return Excludability.LESS
    if le:
        return Excludability.MORE
    return Excludability.INCOMPARABLE
