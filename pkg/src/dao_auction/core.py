"""Exact scalars, bid profiles and mechanism outcomes shared by every mechanism.

All money, value and access quantities are :class:`fractions.Fraction`.
Floats are rejected at the boundary so that tie conditions such as
``i * b_i >= P_total`` are decided exactly.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Sequence, Union

ExactRational = Fraction
#: Utilities may be ``-inf`` when a member is charged more than its value.
ExtendedValue = Union[Fraction, float]
NEG_INF = float("-inf")

RationalLike = Union[Fraction, int, str]


class MechanismError(ValueError):
    """Invalid input to a mechanism or algorithm."""


class LosingPriceError(MechanismError):
    """The requested price exceeds the DAO's willingness to pay."""


class InvariantViolation(AssertionError):
    """An internal invariant that should be guaranteed by construction failed."""


def as_rational(value: RationalLike) -> Fraction:
    """Parse ``value`` as an exact rational.

    Accepts ints, Fractions and decimal or ``"p/q"`` strings.  ``"2.5"`` becomes
    ``5/2``.  Floats are refused because they carry binary rounding.
    """
    if type(value) is Fraction:
        return value
    if isinstance(value, bool):
        raise MechanismError(f"not a rational: {value!r}")
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise MechanismError(f"cannot parse {value!r} as a rational") from exc
    raise MechanismError(f"not an exact rational: {value!r} ({type(value).__name__})")


def as_nonnegative(value: RationalLike) -> Fraction:
    q = as_rational(value)
    if q < 0:
        raise MechanismError(f"negative quantity: {q}")
    return q


def fmt(q: ExtendedValue) -> str:
    """Canonical text form: ``"256/7"``, integers without ``/1``, ``"-inf"``."""
    if isinstance(q, float):
        if q == NEG_INF:
            return "-inf"
        raise MechanismError(f"float in exact context: {q!r}")
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


@dataclass(frozen=True)
class BidProfile:
    """A DAO's bids sorted non-increasingly.

    ``order[r]`` is the original (0-based) member id of the member at sorted
    rank ``r``.
    """

    bids: tuple[Fraction, ...]
    order: tuple[int, ...]

    def __post_init__(self):
        if not self.bids:
            raise MechanismError("a profile needs at least one member")
        if len(self.bids) != len(self.order):
            raise MechanismError("bids and order differ in length")
        if sorted(self.order) != list(range(len(self.order))):
            raise MechanismError("order is not a permutation")
        if any(b < 0 for b in self.bids):
            raise MechanismError("negative bid")
        if any(a < b for a, b in zip(self.bids, self.bids[1:])):
            raise MechanismError("bids are not sorted non-increasingly")

    @property
    def n(self) -> int:
        return len(self.bids)

    def __len__(self) -> int:
        return len(self.bids)

    def __getitem__(self, rank: int) -> Fraction:
        return self.bids[rank]

    def __iter__(self):
        return iter(self.bids)

    def rank_of(self, member: int) -> int:
        return self.order.index(member)

    def original(self) -> tuple[Fraction, ...]:
        """Bids in original member order."""
        out = [Fraction(0)] * self.n
        for rank, member in enumerate(self.order):
            out[member] = self.bids[rank]
        return tuple(out)

    def permute(self, per_member: Sequence) -> tuple:
        """Re-express a per-member sequence (original order) in sorted-rank order."""
        if len(per_member) != self.n:
            raise MechanismError("length mismatch")
        return tuple(per_member[m] for m in self.order)


def make_profile(raw_bids: Iterable[RationalLike]) -> BidProfile:
    """Sort ``raw_bids`` non-increasingly, keeping ties in original order."""
    bids = [as_nonnegative(b) for b in raw_bids]
    if not bids:
        raise MechanismError("empty bid list")
    order = sorted(range(len(bids)), key=bids.__getitem__, reverse=True)
    # reverse=True keeps equal keys in original order, so the sort stays stable
    return BidProfile(tuple(bids[i] for i in order), tuple(order))


def sorted_values(obj) -> tuple[Fraction, ...]:
    """Accept a BidProfile or an already sorted sequence and return the sorted tuple."""
    if isinstance(obj, BidProfile):
        return obj.bids
    vals = tuple(as_nonnegative(v) for v in obj)
    if not vals:
        raise MechanismError("empty profile")
    if any(a < b for a, b in zip(vals, vals[1:])):
        raise MechanismError("values must be sorted non-increasingly")
    return vals


@dataclass(frozen=True)
class MechanismOutcome:
    """Per-member access ``x`` and payment ``p`` plus the DAO-level result."""

    x: tuple[Fraction, ...]
    p: tuple[Fraction, ...]
    won: bool
    P_total: Fraction

    def __post_init__(self):
        if len(self.x) != len(self.p):
            raise MechanismError("x and p differ in length")
        if any(not (0 <= xi <= 1) for xi in self.x):
            raise InvariantViolation("access outside [0, 1]")
        if not self.won and (any(self.x) or any(self.p)):
            raise InvariantViolation("losing DAO with nonzero access or payment")

    @property
    def X_total(self) -> int:
        return int(self.won)

    @property
    def n(self) -> int:
        return len(self.x)

    def budget_residual(self) -> Fraction:
        if not self.won:
            return sum(self.p, Fraction(0))
        return sum(self.p, Fraction(0)) - self.P_total

    def access_set(self) -> frozenset[int]:
        return frozenset(i for i, xi in enumerate(self.x) if xi > 0)


def unsort(outcome: MechanismOutcome, profile: BidProfile) -> MechanismOutcome:
    """Map an outcome in sorted-rank order back to original member order."""
    if outcome.n != profile.n:
        raise MechanismError(f"outcome has {outcome.n} members, profile has {profile.n}")
    x = [Fraction(0)] * profile.n
    p = [Fraction(0)] * profile.n
    for rank, member in enumerate(profile.order):
        x[member] = outcome.x[rank]
        p[member] = outcome.p[rank]
    return MechanismOutcome(tuple(x), tuple(p), outcome.won, outcome.P_total)


def resort(outcome: MechanismOutcome, profile: BidProfile) -> MechanismOutcome:
    """Inverse of :func:`unsort`."""
    if outcome.n != profile.n:
        raise MechanismError("length mismatch")
    return MechanismOutcome(
        profile.permute(outcome.x), profile.permute(outcome.p), outcome.won, outcome.P_total
    )
