"""``dao-auction`` command line: run scenarios, inspect groupings and parameters, run suites.

Exit codes: 0 ok, 1 bad input or unknown suite, 2 invariant violation,
3 price above the DAO's willingness to pay.
"""
from __future__ import annotations

import sys
from fractions import Fraction

import click

from .core import InvariantViolation, LosingPriceError, MechanismError, as_nonnegative, make_profile, unsort
from .grouping import optimal_grouping
from .harness import run_auction, utility
from .mech_baseline import harmonic_number, wtp_baseline
from .mech_collective import allocate_collective, optimal_parameters, wtp_collective
from .scenario import ScenarioError, approx, dumps, load_scenario, rows_to_csv
from .suites import SUITES, theorem_suite

EXIT_INPUT, EXIT_INVARIANT, EXIT_LOSING = 1, 2, 3
APPROX_NOTE = "decimal approximations for reading only; the exact fields are authoritative"

format_option = click.option("--format", "fmt_", type=click.Choice(["json", "csv"]), default="json",
                             show_default=True, help="Report format.")
approx_option = click.option("--approx", "with_approx", is_flag=True,
                             help="Add non-authoritative decimal approximations.")


class Fail(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _emit(text: str) -> None:
    click.echo(text, nl=False)


def _parse_values(raw, what="value") -> list[Fraction]:
    try:
        return [as_nonnegative(v) for v in raw]
    except MechanismError as exc:
        raise Fail(EXIT_INPUT, f"bad {what}: {exc}") from exc


def _load(path):
    try:
        return load_scenario(path)
    except ScenarioError as exc:
        raise Fail(EXIT_INPUT, str(exc)) from exc


# -- run ----------------------------------------------------------------------

def run_report(scenario, seed: int, with_approx: bool = False) -> dict:
    instance = scenario.instance(seed)
    result = run_auction(instance)
    for d, out in enumerate(result.per_dao_outcomes):
        if out.budget_residual() != 0:
            raise InvariantViolation(f"budget balance: dao {d} residual {out.budget_residual()}")
    if result.winner is not None and result.P_total > result.wtps[result.winner]:
        raise InvariantViolation("individual rationality: price above the winning WTP")
    daos = []
    for d, dao in enumerate(instance.daos):
        out = result.per_dao_outcomes[d]
        members = [
            {"id": i, "value": dao.values[i], "bid": dao.bids[i], "x": out.x[i], "p": out.p[i],
             "utility": utility(dao, i, out)}
            for i in range(dao.n)
        ]
        daos.append({"index": d, "name": dao.name, "mechanism": dao.mechanism, "wtp": result.wtps[d],
                     "won": out.won, "details": result.details[d], "members": members})
    h = harmonic_number(result.ell)
    report = {
        "seed": seed,
        "scenario": scenario.echo(),
        "winner": result.winner,
        "winner_name": instance.daos[result.winner].name,
        "P_total": result.P_total,
        "wtps": list(result.wtps),
        "daos": daos,
        "sw": result.sw,
        "opt_sw": result.opt_sw,
        "ell": result.ell,
        "H_ell": h,
        "harmonic_bound": {"holds": result.harmonic_ok, "rhs": h * result.sw},
        "generic": result.generic,
    }
    if with_approx:
        report["approx"] = {
            "note": APPROX_NOTE,
            "P_total": approx(result.P_total),
            "sw": approx(result.sw),
            "daos": [{"x": approx(list(o.x)), "p": approx(list(o.p))} for o in result.per_dao_outcomes],
        }
    return report


def run_csv(report: dict, with_approx: bool) -> str:
    summary = [[k, report[k]] for k in ("seed", "winner", "winner_name", "P_total", "sw", "opt_sw",
                                        "ell", "H_ell", "generic")]
    summary.append(["harmonic_bound_holds", report["harmonic_bound"]["holds"]])
    header = ["dao", "name", "mechanism", "member", "value", "bid", "x", "p"]
    if with_approx:
        header += ["x_approx_non_authoritative", "p_approx_non_authoritative"]
    rows = []
    for dao in report["daos"]:
        for m in dao["members"]:
            row = [dao["index"], dao["name"], dao["mechanism"].value, m["id"], m["value"], m["bid"],
                   m["x"], m["p"]]
            if with_approx:
                row += [float(m["x"]), float(m["p"])]
            rows.append(row)
    return rows_to_csv(["field", "value"], summary) + "\n" + rows_to_csv(header, rows)


# -- group --------------------------------------------------------------------

def group_report(values) -> dict:
    profile = make_profile(values)
    og = optimal_grouping(profile)
    ev = og.evaluation
    return {
        "values": list(profile.bids),
        "opt_wtp": og.opt_wtp,
        "ungrouped_wtp": wtp_baseline(profile),
        "k": og.k,
        "intervals": [list(iv) for iv in og.grouping.intervals()],
        "subgroup_wtps": list(ev.subgroup_wtps),
        "critical_index": ev.critical_index,
        "critical_value": ev.critical_value,
    }


# -- params -------------------------------------------------------------------

def params_report(bids, price, alpha) -> dict:
    profile = make_profile(bids)
    params = optimal_parameters(profile, price, alpha)
    out = unsort(allocate_collective(profile, params, price), profile)
    return {
        "bids": list(bids),
        "alpha": alpha,
        "P_total": price,
        "wtp": wtp_collective(profile, alpha),
        "P1": params.P1,
        "P2": params.P2,
        "k1": params.k1,
        "k2": params.k2,
        "members": [{"id": i, "bid": bids[i], "x": out.x[i], "p": out.p[i]} for i in range(len(bids))],
    }


def _member_csv(report: dict, head: list[str], with_approx: bool) -> str:
    summary = [[k, report[k]] for k in head]
    header = ["member", "bid", "x", "p"]
    if with_approx:
        header += ["x_approx_non_authoritative", "p_approx_non_authoritative"]
    rows = []
    for m in report["members"]:
        row = [m["id"], m["bid"], m["x"], m["p"]]
        if with_approx:
            row += [float(m["x"]), float(m["p"])]
        rows.append(row)
    return rows_to_csv(["field", "value"], summary) + "\n" + rows_to_csv(header, rows)


# -- commands -----------------------------------------------------------------

@click.group()
def cli():
    """Two-level public-good auctions between DAOs."""


@cli.command()
@click.argument("scenario", type=click.Path(dir_okay=False))
@click.option("--seed", type=int, default=0, show_default=True, help="Recorded in the report.")
@format_option
@approx_option
def run(scenario, seed, fmt_, with_approx):
    """Run the auction described by a SCENARIO file."""
    report = run_report(_load(scenario), seed, with_approx)
    _emit(dumps(report) if fmt_ == "json" else run_csv(report, with_approx))


@cli.command()
@click.argument("values", nargs=-1)
@click.option("--scenario", type=click.Path(dir_okay=False), help="Group every DAO's bids in a scenario.")
@format_option
def group(values, scenario, fmt_):
    """Optimal grouping of VALUES (any order; reported in sorted rank, 1-based)."""
    if scenario and values:
        raise Fail(EXIT_INPUT, "give either values or --scenario, not both")
    if scenario:
        sc = _load(scenario)
        reports = [dict(group_report(d.bids), name=d.name) for d in sc.daos]
    elif values:
        reports = [group_report(_parse_values(values))]
    else:
        raise Fail(EXIT_INPUT, "no values given")
    if fmt_ == "json":
        _emit(dumps(reports[0] if len(reports) == 1 and not scenario else reports))
        return
    rows = [[r.get("name", ""), s, iv[0], iv[1], w]
            for r in reports for s, (iv, w) in enumerate(zip(r["intervals"], r["subgroup_wtps"]))]
    summary = rows_to_csv(["name", "opt_wtp", "k", "critical_index", "critical_value"],
                          [[r.get("name", ""), r["opt_wtp"], r["k"], r["critical_index"],
                            r["critical_value"]] for r in reports])
    _emit(summary + "\n" + rows_to_csv(["name", "subgroup", "first", "last", "wtp"], rows))


@cli.command()
@click.argument("bids", nargs=-1, required=True)
@click.option("--price", "-p", "price", required=True, help="P_total to raise.")
@click.option("--alpha", "-a", default="0", show_default=True, help="Collective-utility weight.")
@format_option
@approx_option
def params(bids, price, alpha, fmt_, with_approx):
    """Water-filling parameters and allocation for BIDS at a given price."""
    bids = _parse_values(bids, "bid")
    price, alpha = _parse_values([price, alpha], "price/alpha")
    if price == 0:
        raise Fail(EXIT_INPUT, "price must be positive")
    try:
        report = params_report(bids, price, alpha)
    except LosingPriceError as exc:
        raise Fail(EXIT_LOSING, f"losing price: {exc}") from exc
    if with_approx:
        report["approx"] = {"note": APPROX_NOTE, "P1": float(report["P1"]), "P2": float(report["P2"])}
    head = ["alpha", "P_total", "wtp", "P1", "P2", "k1", "k2"]
    _emit(dumps(report) if fmt_ == "json" else _member_csv(report, head, with_approx))


@cli.command()
@click.argument("suite")
@click.option("--seed", type=int, default=1, show_default=True)
@click.option("-n", "count", type=click.IntRange(min=0), default=None,
              help="Random instances per suite (default: per-suite).")
@click.option("--max-size", type=click.IntRange(min=1), default=None,
              help="Largest DAO size drawn.")
@format_option
def verify(suite, seed, count, max_size, fmt_):
    """Run a property SUITE (or 'all'); exit 0 iff every suite passes."""
    names = list(SUITES) if suite == "all" else [suite]
    if any(n not in SUITES for n in names):
        raise Fail(EXIT_INPUT, f"unknown suite {suite!r}; choose from all, {', '.join(SUITES)}")
    report = theorem_suite(names, seed, count, max_size)
    if fmt_ == "json":
        _emit(dumps(report))
    else:
        _emit(rows_to_csv(
            ["suite", "seed", "instances", "max_size", "violations", "expect_violations", "ok"],
            [[r["suite"], r["seed"], r["instances"], r["max_size"], r["violations"],
              r["expect_violations"], r["ok"]] for r in report["suites"]]))
    if not report["ok"]:
        raise Fail(EXIT_INVARIANT, "at least one suite failed")


def main(argv=None) -> int:
    try:
        cli.main(args=argv, prog_name="dao-auction", standalone_mode=False)
    except Fail as exc:
        click.echo(f"error: {exc}", err=True)
        return exc.code
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except click.Abort:
        return EXIT_INPUT
    except click.ClickException as exc:
        exc.show()
        return EXIT_INPUT
    except InvariantViolation as exc:
        click.echo(f"invariant violated: {exc}", err=True)
        return EXIT_INVARIANT
    except LosingPriceError as exc:
        click.echo(f"losing price: {exc}", err=True)
        return EXIT_LOSING
    except MechanismError as exc:
        click.echo(f"error: {exc}", err=True)
        return EXIT_INPUT
    return 0


if __name__ == "__main__":
    sys.exit(main())
