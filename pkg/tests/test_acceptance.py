"""Acceptance criteria 1-13, one PASS/FAIL line each.

Run ``pytest tests/test_acceptance.py`` (lines appear in the terminal summary)
or ``python tests/test_acceptance.py`` to print them directly.
"""
from __future__ import annotations

import subprocess
import sys
import time
from fractions import Fraction
from importlib import resources
from pathlib import Path

import pytest

from dao_auction import kernels
from dao_auction.grouping import Grouping, evaluate_grouping, optimal_grouping, two_level_allocation
from dao_auction.harness import AuctionInstance, DaoSpec, deviation_utility
from dao_auction.mech_baseline import allocate_baseline, cutoff_index, wtp_baseline
from dao_auction.mech_collective import allocate_collective, optimal_parameters, wtp_collective
from dao_auction.scenario import load_scenario
from dao_auction.suites import run_suite

FIG1 = [Fraction(v) for v in range(100, 10, -10)]
SCENARIOS = Path(resources.files("dao_auction") / "scenarios")
RESULTS: dict[str, tuple[bool, str]] = {}


def record(key, ok, detail):
    RESULTS[key] = (ok, detail)
    return ok, detail


def crit1():
    t = time.perf_counter()
    base = allocate_baseline(FIG1, 256)
    g = Grouping(tuple((i,) for i in range(7)) + ((7, 8),))
    grouped = two_level_allocation(FIG1, g, 256)
    ok = (wtp_baseline(FIG1) == 300 and cutoff_index(FIG1, 256) == 7
          and base.p[:7] == (Fraction(256, 7),) * 7 and not any(base.p[7:])
          and evaluate_grouping(FIG1, g).wtp_total == 320
          and grouped.p[:7] == (32,) * 7 and grouped.p[7:] == (16, 16))
    dt = time.perf_counter() - t
    return record("1", ok and dt < 1, f"WTP 300, i*=7 at 256/7, grouped 320 / 32 / 16+16 ({dt:.3f}s)")


def crit2():
    t = time.perf_counter()
    bad = []
    for a in range(1, 7):
        n = 2 ** a
        vals = [Fraction(n, i) for i in range(1, n + 1)]
        if optimal_grouping(vals).opt_wtp != Fraction(n * (a + 1), 2) or wtp_baseline(vals) != n:
            bad.append(a)
    dt = time.perf_counter() - t
    return record("2", not bad and dt < 1, f"a=1..6 opt_WTP n(a+1)/2, ungrouped n; bad={bad} ({dt:.3f}s)")


def crit3():
    params = optimal_parameters(FIG1, 400, 1)
    out = allocate_collective(FIG1, params, 400)
    ok = (wtp_collective(FIG1, 1) == 460 and params.as_tuple() == (56, 28, 5, 8)
          and sum(out.p) == 400)
    return record("3", ok, f"WTP {wtp_collective(FIG1, 1)}, params {tuple(map(str, params.as_tuple()))}")


def _suite(key, name, minimum, limit=None, **kw):
    t = time.perf_counter()
    rep = run_suite(name, seed=1, **kw)
    dt = time.perf_counter() - t
    ok = rep["violations"] == 0 and rep["instances"] >= minimum and (limit is None or dt < limit)
    return record(key, ok, f"{name}: {rep['violations']} violations over {rep['instances']} "
                           f"instances ({dt:.1f}s)")


def crit4():
    assert kernels.max_partition_wtp  # oracle present in whichever backend is active
    return _suite("4", "thm2", 200, limit=60, max_size=8)


def crit5():
    return _suite("5", "thm3", 200)


def crit6():
    return _suite("6", "lemma1", 200)


def crit7():
    """Strict monotonicity of the feasible list, including k1 strictly decreasing."""
    rest = run_suite("lemma2", seed=1)
    strict = run_suite("lemma2-k1-strict", seed=1)
    ok = rest["violations"] == 0 and strict["violations"] == 0
    detail = (f"P1/P2/allocation/utility/weak-k1: {rest['violations']} violations; "
              f"strict k1 decrease: {strict['violations']} violations over {strict['instances']}")
    if strict["counterexamples"]:
        detail += f"; e.g. {strict['counterexamples'][0]['minimized']}"
    return record("7", ok, detail)


def crit8():
    return _suite("8", "thm4", 500)


def crit9():
    return _suite("9", "ic", 100)


def crit10():
    sc = load_scenario(SCENARIOS / "grouped_underbid.json")
    dao = sc.daos[0]
    truthful = AuctionInstance((DaoSpec(dao.values, dao.values, dao.mechanism, 0, dao.name),) + sc.daos[1:])
    member = next(i for i in range(dao.n) if dao.bids[i] != dao.values[i])
    u_true = deviation_utility(truthful, 0, member, dao.values[member])
    u_dev = deviation_utility(truthful, 0, member, dao.bids[member])
    return record("10", u_dev > u_true and dao.bids[member] < dao.values[member],
                  f"member {member} value {dao.values[member]}: truthful utility {u_true}, "
                  f"bid {dao.bids[member]} gives {u_dev}")


def crit11():
    return _suite("11", "hl", 500)


def crit12():
    return _suite("12", "alpha0", 200)


def _cli(*args):
    proc = subprocess.run([sys.executable, "-m", "dao_auction", *args], capture_output=True, check=False)
    return proc.returncode, proc.stdout


def crit13():
    runs = [("run", str(SCENARIOS / "fig3.json"), "--seed", "4"),
            ("run", str(SCENARIOS / "fig2_a3.json"), "--format", "csv"),
            ("verify", "thm2", "--seed", "5", "-n", "50", "--max-size", "8"),
            ("verify", "ic-grouped", "--seed", "5", "-n", "3")]
    same = []
    for args in runs:
        a, b = _cli(*args), _cli(*args)
        same.append(a == b and a[0] == 0 and a[1])
    return record("13", all(same), f"{sum(map(bool, same))}/{len(runs)} commands byte-identical")


CRITERIA = [crit1, crit2, crit3, crit4, crit5, crit6, crit7, crit8, crit9, crit10, crit11, crit12, crit13]


def _line(key):
    ok, detail = RESULTS[key]
    return f"criterion {key:>2}: {'PASS' if ok else 'FAIL'}  {detail}"


@pytest.mark.parametrize("check", [c for c in CRITERIA if c is not crit7], ids=lambda c: c.__name__)
def test_criterion(check):
    ok, detail = check()
    assert ok, detail


@pytest.mark.xfail(strict=True, reason="strict k1 decrease does not hold; see the counterexample")
def test_criterion_7():
    ok, detail = crit7()
    assert ok, detail


def test_criterion_7_provable_parts():
    rep = run_suite("lemma2", seed=1)
    assert rep["violations"] == 0 and rep["instances"] >= 200


if __name__ == "__main__":
    for c in CRITERIA:
        c()
        print(_line(c.__name__[4:]), flush=True)
    sys.exit(0 if all(ok for ok, _ in RESULTS.values()) else 1)
