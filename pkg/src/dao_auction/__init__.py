"""Exact two-level public-good auctions between DAOs.

An upper-level second-price auction picks the DAO that can pay the most for a
public good; inside the winning DAO a cost-sharing rule splits the price among
members.  Three inner rules are provided: equal sharing among the top payers,
optimal grouping with a two-level allocation, and a collective-utility rule
with partial access.
"""
from .core import (
    NEG_INF,
    BidProfile,
    InvariantViolation,
    LosingPriceError,
    MechanismError,
    MechanismOutcome,
    make_profile,
)
from .grouping import (
    Excludability,
    Grouping,
    compare_excludability,
    evaluate_grouping,
    optimal_grouping,
    two_level_allocation,
)
from .harness import (
    AuctionInstance,
    DaoSpec,
    Mechanism,
    ic_deviation_scan,
    run_auction,
)
from .mech_baseline import allocate_baseline, wtp_baseline
from .mech_collective import (
    FeasibleParams,
    allocate_collective,
    enumerate_feasible_params,
    optimal_parameters,
    wtp_collective,
)
from .suites import theorem_suite

__all__ = [
    "NEG_INF", "BidProfile", "InvariantViolation", "LosingPriceError", "MechanismError",
    "MechanismOutcome", "make_profile", "Excludability", "Grouping", "compare_excludability",
    "evaluate_grouping", "optimal_grouping", "two_level_allocation", "AuctionInstance", "DaoSpec",
    "Mechanism", "ic_deviation_scan", "run_auction", "allocate_baseline", "wtp_baseline",
    "FeasibleParams", "allocate_collective", "enumerate_feasible_params", "optimal_parameters",
    "wtp_collective", "theorem_suite",
]
