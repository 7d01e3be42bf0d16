"""Seeded property suites for the grouping algorithm and both mechanisms.

Every suite draws JSON-native cases (rationals as strings) from a seeded RNG
and checks each one independently; a failing case is shrunk by dropping
members and re-checked, so every reported counterexample replays on its own.
Failures are returned as data.
"""
from __future__ import annotations

import os
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Optional

from . import kernels
from .core import fmt, make_profile
from .grouping import (
    Grouping,
    compare_excludability,
    Excludability,
    evaluate_grouping,
    optimal_grouping,
    two_level_allocation,
)
from .harness import (
    DaoSpec,
    DeviationGrid,
    Mechanism,
    ic_deviation_scan,
    random_instance,
    run_auction,
)
from .mech_baseline import allocate_baseline, wtp_baseline
from .mech_collective import (
    allocate_collective,
    enumerate_feasible_params,
    member_utility,
    optimal_parameters,
    wtp_collective,
)
from .scenario import instance_to_scenario, parse_scenario

Case = dict
MAX_COUNTEREXAMPLES = 5

#: DAO values (14, 3, 2) against a rival bidding 7: the top member gains by bidding 7/2.
GROUPED_UNDERBID_WITNESS: Case = {
    "instance": {
        "version": "1",
        "alpha": "0",
        "daos": [
            {"name": "G", "values": ["14", "3", "2"], "bids": ["14", "3", "2"], "mechanism": "grouped"},
            {"name": "rival", "values": ["7"], "bids": ["7"], "mechanism": "baseline"},
        ],
    },
    "bids": ["7/2"],
}


@dataclass(frozen=True)
class Suite:
    name: str
    description: str
    generate: Callable[[random.Random, int], Case]
    check: Callable[[Case], list[str]]
    default_count: int
    expect_violations: bool = False
    fixed: tuple[Case, ...] = ()


def _q(values) -> list[Fraction]:
    return [Fraction(v) for v in values]


def _s(values) -> list[str]:
    return [fmt(v) for v in values]


def _rand_values(rng, max_size, lo=1, hi=100):
    n = rng.randint(1, max_size)
    return sorted((Fraction(rng.randint(lo, hi)) for _ in range(n)), reverse=True)


def _rand_price(rng, wtp: Fraction, allow_zero=True) -> Fraction:
    if wtp == 0:
        return Fraction(0)
    r = rng.random()
    if r < 0.1 and allow_zero:
        return Fraction(0)
    if r < 0.3:
        return wtp
    lo = 0 if allow_zero else 1
    return wtp * Fraction(rng.randint(lo, 1000), 1000) or wtp


def _rand_alpha(rng) -> Fraction:
    return Fraction(rng.randint(1, 12), rng.randint(1, 4))


# -- grouping ---------------------------------------------------------------

def _gen_values(rng, max_size):
    return {"values": _s(_rand_values(rng, max_size))}


def check_thm2(case):
    vals = _q(case["values"])
    og = optimal_grouping(vals)
    out = []
    full = kernels.max_partition_wtp(vals)
    cont = kernels.max_continuous_wtp(vals)
    if og.opt_wtp != full:
        out.append(f"algorithm {fmt(og.opt_wtp)} != all-partition optimum {fmt(full)}")
    if og.opt_wtp != cont:
        out.append(f"algorithm {fmt(og.opt_wtp)} != continuous optimum {fmt(cont)}")
    if not og.grouping.is_continuous():
        out.append("output grouping has a crossing")
    if evaluate_grouping(vals, og.grouping).wtp_total != og.opt_wtp:
        out.append("output grouping does not evaluate to the reported optimum")
    if og.opt_wtp < wtp_baseline(vals):
        out.append("optimum below the ungrouped WTP")
    return out


def check_lemma1(case):
    sizes = optimal_grouping(_q(case["values"])).block_sizes
    if any(a > b for a, b in zip(sizes, sizes[1:])):
        return [f"pre-merge block sizes {list(sizes)} decrease"]
    return []


def _gen_thm3(rng, max_size):
    vals = _rand_values(rng, max_size)
    return {"values": _s(vals), "P_total": fmt(_rand_price(rng, wtp_baseline(vals)))}


def check_thm3(case):
    vals = _q(case["values"])
    P = Fraction(case["P_total"])
    if P > wtp_baseline(vals):
        return []
    base = allocate_baseline(vals, P)
    grouped = two_level_allocation(vals, optimal_grouping(vals).grouping, P)
    rel = compare_excludability(grouped.access_set(), base.access_set())
    if rel not in (Excludability.LESS, Excludability.EQUAL):
        return [f"grouped access {sorted(grouped.access_set())} does not contain "
                f"ungrouped access {sorted(base.access_set())}"]
    return []


# -- collective mechanism ---------------------------------------------------

def _gen_lemma2(rng, max_size):
    hi = rng.choice([10, 100])
    bids = _rand_values(rng, max_size, 1, hi)
    alpha = rng.choice([Fraction(0), _rand_alpha(rng)])
    P = _rand_price(rng, wtp_collective(bids, alpha), allow_zero=False)
    return {"bids": _s(bids), "P_total": fmt(P), "alpha": fmt(alpha)}


def _lemma2_pairs(case):
    bids = _q(case["bids"])
    P, alpha = Fraction(case["P_total"]), Fraction(case["alpha"])
    if P == 0 or P > wtp_collective(bids, alpha):
        return bids, alpha, []
    params = enumerate_feasible_params(bids, P, alpha)
    return bids, alpha, params


def check_lemma2(case):
    bids, alpha, params = _lemma2_pairs(case)
    if not params:
        return []
    out = []
    P = Fraction(case["P_total"])
    if params[0] != optimal_parameters(bids, P, alpha):
        out.append("widest feasible group differs from the water-filling output")
    for wide, narrow in zip(params, params[1:]):
        tag = f"k2 {wide.k2}->{narrow.k2}"
        if not narrow.k2 < wide.k2:
            out.append(f"{tag}: feasible list not strictly decreasing in k2")
        if not narrow.P1 > wide.P1 or not narrow.P2 > wide.P2:
            out.append(f"{tag}: P1/P2 did not increase")
        if narrow.k1 > wide.k1:
            out.append(f"{tag}: k1 increased")
        xw, xn = allocate_collective(bids, wide), allocate_collective(bids, narrow)
        if compare_excludability(xw.x, xn.x) not in (Excludability.LESS, Excludability.EQUAL):
            out.append(f"{tag}: wider pool is not less-excludable")
        for i in range(len(bids)):
            if member_utility(i, bids, xw, alpha) < member_utility(i, bids, xn, alpha):
                out.append(f"{tag}: member {i + 1} prefers the narrower pool")
    return out


def check_lemma2_k1_strict(case):
    _, _, params = _lemma2_pairs(case)
    return [f"k2 {w.k2}->{n.k2} keeps k1={n.k1}" for w, n in zip(params, params[1:])
            if not n.k1 < w.k1]


def _gen_alpha0(rng, max_size):
    bids = _rand_values(rng, max_size, 1, rng.choice([10, 100]))
    return {"bids": _s(bids), "P_total": fmt(_rand_price(rng, wtp_baseline(bids)))}


def check_alpha0(case):
    bids = _q(case["bids"])
    P = Fraction(case["P_total"])
    out = []
    if wtp_collective(bids, 0) != wtp_baseline(bids):
        out.append("WTP differs at alpha=0")
    base = allocate_baseline(bids, P)
    coll = allocate_collective(bids, optimal_parameters(bids, P, 0), P)
    for field in ("x", "p", "won", "P_total"):
        if getattr(base, field) != getattr(coll, field):
            out.append(f"{field} differs at alpha=0")
    return out


# -- auctions ---------------------------------------------------------------

def _instance(case):
    return parse_scenario(case["instance"]).instance()


def _gen_instance(mechanism, collective_alpha=True, generic=True, hi=100):
    def gen(rng, max_size):
        alpha = _rand_alpha(rng) if collective_alpha else Fraction(0)
        inst = random_instance(rng, mechanism, size=(1, max_size), alpha=alpha, hi=hi,
                               generic=generic)
        return {"instance": instance_to_scenario(inst)}
    return gen


def check_thm4(case):
    inst = _instance(case)
    res = run_auction(inst)
    out = []
    for d, dao in enumerate(inst.daos):
        o = res.per_dao_outcomes[d]
        for i in range(dao.n):
            if member_utility(i, dao.values, o, dao.alpha) < 0:
                out.append(f"IR: dao {d} member {i}")
        if o.budget_residual() != 0:
            out.append(f"BB: dao {d} residual {fmt(o.budget_residual())}")
        for i in range(dao.n):
            for j in range(i + 1, dao.n):
                if dao.bids[i] == dao.bids[j] and (o.x[i], o.p[i]) != (o.x[j], o.p[j]):
                    out.append(f"ET: dao {d} members {i},{j}")
        prof = make_profile(dao.bids)
        if wtp_collective(prof, dao.alpha) < wtp_baseline(prof):
            out.append(f"WTP dominance: dao {d}")
    w = res.winner
    dao, o = inst.daos[w], res.per_dao_outcomes[w]
    P1 = res.details[w]["P1"]
    for i in range(dao.n):
        if o.x[i] * P1 != o.p[i]:
            out.append(f"uniform pricing: member {i}")
    profile = make_profile(dao.bids)
    if res.P_total <= wtp_baseline(profile):
        base = allocate_baseline(profile, res.P_total)
        coll = allocate_collective(profile, optimal_parameters(profile, res.P_total, dao.alpha))
        if compare_excludability(coll.x, base.x) not in (Excludability.LESS, Excludability.EQUAL):
            out.append("allocation dominance vs baseline")
        vals = profile.permute(dao.values)
        sw = sum((v * x for v, x in zip(vals, coll.x)), Fraction(0))
        sw_base = sum((v * x for v, x in zip(vals, base.x)), Fraction(0))
        if sw < sw_base:
            out.append("SW dominance vs baseline")
    return out


def check_bb(case):
    res = run_auction(_instance(case))
    return [f"dao {d} residual {fmt(o.budget_residual())}"
            for d, o in enumerate(res.per_dao_outcomes) if o.budget_residual() != 0]


def _gen_mixed(rng, max_size):
    alpha = _rand_alpha(rng)
    inst = random_instance(rng, Mechanism.BASELINE, size=(1, max_size), alpha=alpha, generic=False)
    daos = [DaoSpec(d.values, d.bids, rng.choice(list(Mechanism)), alpha, d.name)
            for d in inst.daos]
    return {"instance": instance_to_scenario(inst.__class__(tuple(daos)))}


def check_hl(case):
    res = run_auction(_instance(case))
    if not res.harmonic_ok:
        return [f"OPT_SW {fmt(res.opt_sw)} > H_{res.ell} * SW {fmt(res.sw)}"]
    return []


def check_ic(case):
    inst = _instance(case)
    out = []
    for d, dao in enumerate(inst.daos):
        for m in range(dao.n):
            rep = ic_deviation_scan(inst, d, m)
            if rep.profitable:
                out.append(f"dao {d} member {m}: bid {fmt(rep.best_deviation_bid)} gives "
                           f"{fmt(rep.best_deviation_utility)} > {fmt(rep.truthful_utility)}")
    return out


def check_ic_grouped(case):
    """Profitable underbids in a grouped DAO; a hit is the expected outcome."""
    inst = _instance(case)
    extra = tuple(Fraction(b) for b in case.get("bids", ()))
    grid = DeviationGrid(underbids=32, overbids=0, extra=extra)
    out = []
    for d, dao in enumerate(inst.daos):
        if dao.mechanism is not Mechanism.GROUPED:
            continue
        for m in range(dao.n):
            rep = ic_deviation_scan(inst, d, m, grid)
            if rep.profitable and rep.best_deviation_bid < dao.values[m]:
                out.append(f"dao {d} member {m}: underbid {fmt(rep.best_deviation_bid)} gives "
                           f"{fmt(rep.best_deviation_utility)} > {fmt(rep.truthful_utility)}")
    return out


# -- fixed vectors-----------------------------------------------------------

FIG1 = [Fraction(v) for v in range(100, 10, -10)]


def _fig2(a):
    n = 2 ** a
    return [Fraction(n, i) for i in range(1, n + 1)]


def check_figure(case):
    fig = case["figure"]
    out = []
    if fig == "1":
        if wtp_baseline(FIG1) != 300:
            out.append("fig1: WTP != 300")
        base = allocate_baseline(FIG1, 256)
        if base.p != (Fraction(256, 7),) * 7 + (0, 0):
            out.append("fig1: shares != 256/7 for the top 7")
        g = Grouping(tuple((i,) for i in range(7)) + ((7, 8),))
        if evaluate_grouping(FIG1, g).wtp_total != 320:
            out.append("fig1: grouped WTP != 320")
        if two_level_allocation(FIG1, g, 256).p != (32,) * 7 + (16, 16):
            out.append("fig1: grouped payments != 32 / 16")
    elif fig.startswith("2"):
        a = int(fig.split(":")[1])
        vals = _fig2(a)
        n = 2 ** a
        if optimal_grouping(vals).opt_wtp != Fraction(n * (a + 1), 2):
            out.append(f"fig2 a={a}: opt_WTP != n(a+1)/2")
        if wtp_baseline(vals) != n:
            out.append(f"fig2 a={a}: ungrouped WTP != n")
    elif fig == "3":
        if wtp_collective(FIG1, 1) != 460:
            out.append("fig3: WTP != 460")
        params = optimal_parameters(FIG1, 400, 1)
        if params.as_tuple() != (56, 28, 5, 8):
            out.append(f"fig3: params {params.as_tuple()} != (56, 28, 5, 8)")
        if allocate_collective(FIG1, params).budget_residual() != 0:
            out.append("fig3: allocation does not balance")
    return out


FIGURE_CASES = tuple({"figure": f} for f in ["1", *(f"2:{a}" for a in range(1, 7)), "3"])


SUITES: dict[str, Suite] = {
    s.name: s
    for s in [
        Suite("regression", "fixed fig1 / fig2 / fig3 vectors", lambda rng, k: FIGURE_CASES[0],
              check_figure, 0, fixed=FIGURE_CASES),
        Suite("thm2", "grouping algorithm equals the all-partition and continuous optima",
              _gen_values, check_thm2, 200),
        Suite("lemma1", "pre-merge block sizes are non-decreasing", _gen_values, check_lemma1, 200),
        Suite("thm3", "optimal grouping is less-excludable than no grouping", _gen_thm3,
              check_thm3, 200),
        Suite("lemma2", "wider feasible pools: lower P1/P2, more access, higher utility",
              _gen_lemma2, check_lemma2, 200),
        Suite("lemma2-k1-strict", "strict decrease of k1 along the feasible list (known false)",
              _gen_lemma2, check_lemma2_k1_strict, 200, expect_violations=True),
        Suite("thm4", "IR, BB, ET, uniform pricing and dominance of the collective mechanism",
              _gen_instance(Mechanism.COLLECTIVE, hi=20), check_thm4, 500),
        Suite("ic", "no profitable single-member deviation in the collective mechanism",
              _gen_instance(Mechanism.COLLECTIVE), check_ic, 100),
        Suite("ic-grouped", "grouped mechanism admits a profitable underbid (expected)",
              _gen_instance(Mechanism.GROUPED, collective_alpha=False, hi=20), check_ic_grouped,
              20, expect_violations=True, fixed=(GROUPED_UNDERBID_WITNESS,)),
        Suite("bb", "budget balance for every mechanism", _gen_mixed, check_bb, 200),
        Suite("hl", "OPT_SW <= H_ell * SW for the baseline mechanism",
              _gen_instance(Mechanism.BASELINE, collective_alpha=False, generic=False),
              check_hl, 500),
        Suite("alpha0", "collective mechanism at alpha=0 equals the baseline", _gen_alpha0,
              check_alpha0, 200),
    ]
}

DEFAULT_MAX_SIZE = {"ic": 5, "ic-grouped": 4}


def _shrinks(case: Case) -> Iterable[Case]:
    for key in ("values", "bids"):
        vals = case.get(key)
        if isinstance(vals, list) and len(vals) > 1 and "figure" not in case:
            for i in range(len(vals)):
                yield {**case, key: vals[:i] + vals[i + 1:]}
    if "instance" in case:
        sc = case["instance"]
        daos = sc["daos"]
        for d in range(len(daos)):
            if len(daos) > 1:
                yield {**case, "instance": {**sc, "daos": daos[:d] + daos[d + 1:]}}
            for i in range(len(daos[d]["values"])):
                if len(daos[d]["values"]) > 1:
                    dao = dict(daos[d])
                    dao["values"] = dao["values"][:i] + dao["values"][i + 1:]
                    dao["bids"] = dao["bids"][:i] + dao["bids"][i + 1:]
                    yield {**case, "instance": {**sc, "daos": daos[:d] + [dao] + daos[d + 1:]}}


def minimize(suite: Suite, case: Case, limit: int = 50) -> tuple[Case, list[str]]:
    """Greedy shrink; the returned case still fails ``suite.check``."""
    problems = suite.check(case)
    for _ in range(limit):
        for smaller in _shrinks(case):
            p = suite.check(smaller)
            if p:
                case, problems = smaller, p
                break
        else:
            break
    return case, problems


def _threads() -> int:
    try:
        return max(0, int(os.environ.get("DAO_AUCTION_THREADS", "0")))
    except ValueError:
        return 0


def run_suite(name: str, seed: int = 1, count: Optional[int] = None,
              max_size: Optional[int] = None) -> dict:
    suite = SUITES[name]
    size = max_size or DEFAULT_MAX_SIZE.get(name, 8)
    count = suite.default_count if count is None else count
    if not suite.default_count:
        count = 0  # fixed vectors only
    rng = random.Random(f"{name}:{seed}")
    cases = list(suite.fixed) + [suite.generate(rng, size) for _ in range(count)]
    threads = _threads()
    if threads:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(suite.check, cases))
    else:
        results = [suite.check(c) for c in cases]
    failing = [(i, c, r) for i, (c, r) in enumerate(zip(cases, results)) if r]
    examples = []
    for i, c, r in sorted(failing, key=lambda t: t[0])[:MAX_COUNTEREXAMPLES]:
        small, small_problems = minimize(suite, c)
        examples.append({"id": i, "case": c, "problems": r, "minimized": small,
                         "minimized_problems": small_problems})
    ok = bool(failing) if suite.expect_violations else not failing
    return {
        "suite": name,
        "description": suite.description,
        "seed": seed,
        "instances": len(cases),
        "max_size": size,
        "violations": len(failing),
        "expect_violations": suite.expect_violations,
        "ok": ok,
        "counterexamples": examples,
    }


def theorem_suite(names: Iterable[str] = ("all",), seed: int = 1, count: Optional[int] = None,
                  max_size: Optional[int] = None) -> dict:
    names = list(names)
    if "all" in names:
        names = list(SUITES)
    unknown = [n for n in names if n not in SUITES]
    if unknown:
        raise KeyError(f"unknown suite(s): {', '.join(unknown)}")
    reports = [run_suite(n, seed, count, max_size) for n in names]
    return {"seed": seed, "ok": all(r["ok"] for r in reports), "suites": reports}
