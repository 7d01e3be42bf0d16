"""Upper-level second-price auction over DAOs and single-member deviation scans."""
from __future__ import annotations

import enum
import random
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Optional, Sequence

from .core import (
    NEG_INF,
    ExtendedValue,
    MechanismError,
    MechanismOutcome,
    as_nonnegative,
    make_profile,
    unsort,
)
from .grouping import optimal_grouping, two_level_allocation
from .mech_baseline import (
    allocate_baseline,
    cutoff_index,
    harmonic_bound_check,
    losing_outcome,
    social_welfare,
    wtp_baseline,
)
from .mech_collective import (
    allocate_collective,
    member_utility,
    optimal_parameters,
    wtp_collective,
)


class Mechanism(str, enum.Enum):
    BASELINE = "baseline"
    GROUPED = "grouped"
    COLLECTIVE = "collective"


@dataclass(frozen=True)
class DaoSpec:
    """One DAO: true values and bids in original member order."""

    values: tuple[Fraction, ...]
    bids: tuple[Fraction, ...]
    mechanism: Mechanism = Mechanism.BASELINE
    alpha: Fraction = Fraction(0)
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(as_nonnegative(v) for v in self.values))
        object.__setattr__(self, "bids", tuple(as_nonnegative(b) for b in self.bids))
        object.__setattr__(self, "mechanism", Mechanism(self.mechanism))
        object.__setattr__(self, "alpha", as_nonnegative(self.alpha))
        if not self.values:
            raise MechanismError("a DAO needs at least one member")
        if len(self.values) != len(self.bids):
            raise MechanismError("values and bids differ in length")

    @classmethod
    def truthful(cls, values, mechanism=Mechanism.BASELINE, alpha=0, name=""):
        vals = tuple(as_nonnegative(v) for v in values)
        return cls(vals, vals, Mechanism(mechanism), as_nonnegative(alpha), name)

    @property
    def n(self) -> int:
        return len(self.values)

    def with_bid(self, member: int, bid: Fraction) -> "DaoSpec":
        bids = list(self.bids)
        bids[member] = bid
        return replace(self, bids=tuple(bids))


@dataclass(frozen=True)
class AuctionInstance:
    daos: tuple[DaoSpec, ...]
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "daos", tuple(self.daos))
        if not self.daos:
            raise MechanismError("an auction needs at least one DAO")

    def replace_dao(self, index: int, dao: DaoSpec) -> "AuctionInstance":
        daos = list(self.daos)
        daos[index] = dao
        return replace(self, daos=tuple(daos))


@dataclass(frozen=True)
class AuctionResult:
    winner: Optional[int]
    P_total: Fraction
    wtps: tuple[Fraction, ...]
    per_dao_outcomes: tuple[MechanismOutcome, ...]  # original member order
    details: tuple[dict, ...]
    sw: Fraction
    opt_sw: Fraction
    ell: int
    generic: bool
    harmonic_ok: bool


@dataclass(frozen=True)
class DeviationReport:
    dao: int
    member: int  # original member id within the DAO
    truthful_utility: ExtendedValue
    best_deviation_utility: ExtendedValue
    best_deviation_bid: Fraction
    points: int

    @property
    def profitable(self) -> bool:
        return self.best_deviation_utility > self.truthful_utility


@dataclass(frozen=True)
class DeviationGrid:
    underbids: int = 64
    overbids: int = 32
    max_multiplier: Fraction = Fraction(4)
    breakpoints: bool = True
    extra: tuple[Fraction, ...] = field(default_factory=tuple)


def dao_wtp(dao: DaoSpec) -> Fraction:
    profile = make_profile(dao.bids)
    if dao.mechanism is Mechanism.BASELINE:
        return wtp_baseline(profile)
    if dao.mechanism is Mechanism.GROUPED:
        return optimal_grouping(profile).opt_wtp
    return wtp_collective(profile, dao.alpha)


def dao_allocation(dao: DaoSpec, P_total: Fraction) -> tuple[MechanismOutcome, dict]:
    """Winning-DAO outcome in original member order plus mechanism diagnostics."""
    profile = make_profile(dao.bids)
    if dao.mechanism is Mechanism.BASELINE:
        out = allocate_baseline(profile, P_total)
        detail = {"i_star": cutoff_index(profile, P_total)}
    elif dao.mechanism is Mechanism.GROUPED:
        og = optimal_grouping(profile)
        out = two_level_allocation(profile, og.grouping, P_total)
        detail = {
            "grouping": [[profile.order[r] for r in s] for s in og.grouping.subgroups],
            "critical_index": og.evaluation.critical_index,
            "critical_value": og.evaluation.critical_value,
        }
    else:
        params = optimal_parameters(profile, P_total, dao.alpha)
        out = allocate_collective(profile, params, P_total)
        detail = {"P1": params.P1, "P2": params.P2, "k1": params.k1, "k2": params.k2}
    return unsort(out, profile), detail


def utility(dao: DaoSpec, member: int, outcome: MechanismOutcome) -> ExtendedValue:
    """Member utility under its DAO's model; outcome in original member order.

    The collective mechanism uses the collective utility with the budget
    constraint; the other two use the quasi-linear ``v*x - p``.
    """
    if dao.mechanism is Mechanism.COLLECTIVE:
        return member_utility(member, dao.values, outcome, dao.alpha)
    return dao.values[member] * outcome.x[member] - outcome.p[member]


def second_price(wtps: Sequence[Fraction]) -> tuple[int, Fraction]:
    """Winner (lowest index among the highest) and the highest competing bid."""
    winner = max(range(len(wtps)), key=lambda i: (wtps[i], -i))
    others = [w for i, w in enumerate(wtps) if i != winner]
    return winner, max(others, default=Fraction(0))


def genericity_check(instance_or_wtps) -> bool:
    """Best-effort syntactic test: all DAO bids pairwise distinct."""
    if isinstance(instance_or_wtps, AuctionInstance):
        wtps = [dao_wtp(d) for d in instance_or_wtps.daos]
    else:
        wtps = list(instance_or_wtps)
    return len(set(wtps)) == len(wtps)


def run_auction(instance: AuctionInstance) -> AuctionResult:
    wtps = tuple(dao_wtp(d) for d in instance.daos)
    winner, price = second_price(wtps)
    outcomes, details = [], []
    for i, dao in enumerate(instance.daos):
        if i == winner:
            out, detail = dao_allocation(dao, price)
        else:
            out, detail = losing_outcome(dao.n), {}
        outcomes.append(out)
        details.append(detail)
    win = instance.daos[winner]
    sw = social_welfare(win.values, outcomes[winner].x)
    opt_sw = max(sum(d.values, Fraction(0)) for d in instance.daos)
    ell = max(d.n for d in instance.daos)
    return AuctionResult(
        winner=winner,
        P_total=price,
        wtps=wtps,
        per_dao_outcomes=tuple(outcomes),
        details=tuple(details),
        sw=sw,
        opt_sw=opt_sw,
        ell=ell,
        generic=genericity_check(wtps),
        harmonic_ok=harmonic_bound_check(opt_sw, sw, ell),
    )


def _deviation_points(instance, dao_idx, member, result, grid: DeviationGrid) -> list[Fraction]:
    dao = instance.daos[dao_idx]
    v = dao.values[member]
    pts = {v, Fraction(0)}
    if v > 0:
        pts.update(v * Fraction(k, grid.underbids + 1) for k in range(1, grid.underbids + 1))
        if grid.overbids:
            step = (grid.max_multiplier - 1) / grid.overbids
            pts.update(v * (1 + step * k) for k in range(1, grid.overbids + 1))
    pts.update(grid.extra)
    if grid.breakpoints:
        marks = set()
        others = [b for j, b in enumerate(dao.bids) if j != member]
        marks.update(others)
        one_plus = 1 + dao.alpha
        marks.update(one_plus * b for b in others)
        marks.update(b / one_plus for b in others)
        rivals = [w for i, w in enumerate(result.wtps) if i != dao_idx]
        for i in range(1, dao.n + 1):
            marks.update(w / i for w in rivals)
            marks.add(result.P_total / i)
        detail = result.details[dao_idx]
        for key in ("P1", "P2", "critical_value"):
            if key in detail:
                marks.add(detail[key])
        marks = sorted(m for m in marks if m >= 0)
        pts.update(marks)
        pts.update((a + b) / 2 for a, b in zip(marks, marks[1:]))
        if marks:
            pts.add(marks[-1] + 1)
    return sorted(p for p in pts if p >= 0)


def deviation_utility(instance: AuctionInstance, dao_idx: int, member: int, bid: Fraction,
                      rival_wtps: Optional[Sequence[Fraction]] = None) -> ExtendedValue:
    """Utility of ``member`` when it alone bids ``bid``; everything else is rerun."""
    dao = instance.daos[dao_idx].with_bid(member, bid)
    if rival_wtps is None:
        rival_wtps = [dao_wtp(d) for i, d in enumerate(instance.daos) if i != dao_idx]
    wtps = list(rival_wtps)
    wtps.insert(dao_idx, dao_wtp(dao))
    winner, price = second_price(wtps)
    if winner != dao_idx:
        return utility(dao, member, losing_outcome(dao.n))
    out, _ = dao_allocation(dao, price)
    return utility(dao, member, out)


def ic_deviation_scan(instance: AuctionInstance, dao: int, member: int,
                      grid: Optional[DeviationGrid] = None) -> DeviationReport:
    """Best single-member misreport over a grid plus structural breakpoints."""
    grid = grid or DeviationGrid()
    result = run_auction(instance)
    spec = instance.daos[dao]
    truthful = utility(spec, member, result.per_dao_outcomes[dao])
    rivals = [w for i, w in enumerate(result.wtps) if i != dao]
    best_u, best_b = NEG_INF, spec.values[member]
    points = _deviation_points(instance, dao, member, result, grid)
    for b in points:
        u = deviation_utility(instance, dao, member, b, rivals)
        if u > best_u:
            best_u, best_b = u, b
    return DeviationReport(dao, member, truthful, best_u, best_b, len(points))


# -- instance generation ----------------------------------------------------

PERTURBATION = Fraction(1, 10**6)


def random_values(rng: random.Random, n: int, lo: int = 1, hi: int = 100) -> list[Fraction]:
    return [Fraction(rng.randint(lo, hi)) for _ in range(n)]


def perturb(values: Sequence[Fraction], rng: random.Random) -> list[Fraction]:
    """Add a distinct seeded ``r/10**6`` to every value."""
    rs = rng.sample(range(1, 1000), len(values))
    return [v + r * PERTURBATION for v, r in zip(values, rs)]


def random_instance(rng: random.Random, mechanism: Mechanism, *, daos=(2, 3), size=(1, 6),
                    alpha=Fraction(0), lo=1, hi=100, generic=True, seed=0) -> AuctionInstance:
    """Truthful instance; DAO bids are made pairwise distinct by perturbation when required."""
    m = rng.randint(*daos)
    specs = [DaoSpec.truthful(random_values(rng, rng.randint(*size), lo, hi), mechanism, alpha,
                              f"dao{i}") for i in range(m)]
    inst = AuctionInstance(tuple(specs), seed)
    while generic and not genericity_check(inst):
        wtps = [dao_wtp(d) for d in inst.daos]
        for i, w in enumerate(wtps):
            if wtps.count(w) > 1:
                inst = inst.replace_dao(i, DaoSpec.truthful(perturb(inst.daos[i].values, rng),
                                                            mechanism, alpha, inst.daos[i].name))
                break
    return inst
