import pytest

from dao_auction import suites
from dao_auction.suites import SUITES, minimize, run_suite, theorem_suite

QUICK = {"ic": 3, "ic-grouped": 2}


@pytest.mark.parametrize("name", [n for n in SUITES if not SUITES[n].expect_violations])
def test_suites_pass_small(name):
    rep = run_suite(name, seed=3, count=QUICK.get(name, 40))
    assert rep["ok"], rep["counterexamples"]
    assert rep["violations"] == 0


def test_expected_violation_suites():
    rep = run_suite("lemma2-k1-strict", seed=1)
    assert rep["violations"] > 0 and rep["ok"]
    small = rep["counterexamples"][0]["minimized"]
    assert SUITES["lemma2-k1-strict"].check(small)


def test_minimize_keeps_failure():
    suite = SUITES["ic-grouped"]
    case, problems = minimize(suite, suites.GROUPED_UNDERBID_WITNESS)
    assert problems


def test_broken_check_is_reported_and_shrunk(monkeypatch):
    def check(case):
        return ["too long"] if len(case["values"]) >= 3 else []
    fake = suites.Suite("fake", "", suites._gen_values, check, 30)
    monkeypatch.setitem(SUITES, "fake", fake)
    rep = run_suite("fake", seed=1)
    assert not rep["ok"]
    assert all(len(c["minimized"]["values"]) == 3 for c in rep["counterexamples"])
    assert len(rep["counterexamples"]) <= suites.MAX_COUNTEREXAMPLES


def test_threads_do_not_change_report(monkeypatch):
    monkeypatch.setenv("DAO_AUCTION_THREADS", "0")
    a = theorem_suite(["thm2", "thm4"], seed=2, count=30)
    monkeypatch.setenv("DAO_AUCTION_THREADS", "4")
    b = theorem_suite(["thm2", "thm4"], seed=2, count=30)
    assert a == b


def test_unknown_suite():
    with pytest.raises(KeyError):
        theorem_suite(["nope"])
