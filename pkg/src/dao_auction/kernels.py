"""Backend selection for the hot integer loops.

The compiled extension ``_kernels`` is used when it was built and importable;
otherwise the pure-Python ``_pykernels`` module is used.  ``DAO_AUCTION_PURE=1``
forces the fallback.  Rational inputs are scaled to integers by their common
denominator, so both backends decide every comparison exactly.  Inputs whose
intermediate products could exceed int64 are always routed to the Python
backend, whatever was selected.
"""
from __future__ import annotations

import contextlib
import math
import os
from fractions import Fraction
from typing import Sequence

from . import _pykernels

try:
    if os.environ.get("DAO_AUCTION_PURE", "") not in ("", "0"):
        raise ImportError("pure-Python backend forced")
    from . import _kernels as _compiled
except ImportError:
    _compiled = None

_active = _compiled or _pykernels

INT64_SAFE = 1 << 62


def backend() -> str:
    return _active.BACKEND


def compiled_available() -> bool:
    return _compiled is not None


@contextlib.contextmanager
def use_backend(name: str):
    """Temporarily select ``"python"`` or ``"cython"``."""
    global _active
    if name == "cython":
        if _compiled is None:
            raise RuntimeError("compiled kernels are not built")
        new = _compiled
    elif name == "python":
        new = _pykernels
    else:
        raise ValueError(f"unknown backend {name!r}")
    old, _active = _active, new
    try:
        yield
    finally:
        _active = old


def scale(values: Sequence[Fraction], *extra: Fraction) -> tuple[list[int], list[int], int]:
    """Multiply out the common denominator of ``values`` and ``extra``."""
    den = 1
    for q in (*values, *extra):
        den = math.lcm(den, q.denominator)
    ints = [q.numerator * (den // q.denominator) for q in values]
    others = [q.numerator * (den // q.denominator) for q in extra]
    return ints, others, den


def _pick(bound: int):
    if _active is _pykernels or bound >= INT64_SAFE:
        return _pykernels
    return _active


def _grouping_bound(ints: list[int]) -> int:
    n = len(ints)
    return (n + 1) * (n + 1) * (max(ints) + 1)


def group_cv_scan(values: Sequence[Fraction]) -> tuple[Fraction, Fraction, int]:
    """Best ``(opt_wtp, opt_cv, k)`` over the interval-WTP candidates."""
    ints, _, den = scale(values)
    opt_wtp, opt_cv, k = _pick(_grouping_bound(ints)).group_cv_scan(ints)
    return Fraction(opt_wtp, den), Fraction(opt_cv, den), k


def greedy_cuts(values: Sequence[Fraction], cv: Fraction) -> list[int]:
    ints, (c,), _ = scale(values, cv)
    return list(_pick(_grouping_bound(ints) + c).greedy_cuts(ints, c))


def max_partition_wtp(values: Sequence[Fraction]) -> Fraction:
    ints, _, den = scale(values)
    return Fraction(_pick(_grouping_bound(ints)).max_partition_wtp(ints), den)


def max_continuous_wtp(values: Sequence[Fraction]) -> Fraction:
    ints, _, den = scale(values)
    return Fraction(_pick(_grouping_bound(ints)).max_continuous_wtp(ints), den)


def _collective_bound(ints, a, c, price=0):
    n = len(ints)
    return max((c + a) * (max(ints) + 1) * (n + 1), c * (price + 1), (n + 1) * (max(ints) + 1))


def collective_wtp(values: Sequence[Fraction], alpha: Fraction) -> Fraction:
    ints, _, den = scale(values)
    a, c = alpha.numerator, alpha.denominator
    s = _pick(_collective_bound(ints, a, c)).collective_wtp(ints, a, c)
    return Fraction(s, den * c)


def collective_widths(values: Sequence[Fraction], price: Fraction, alpha: Fraction):
    """``(k1, k2, p_remain, full)`` of the water-filling parameter search."""
    ints, (p,), den = scale(values, price)
    a, c = alpha.numerator, alpha.denominator
    k1, k2, rem, full = _pick(_collective_bound(ints, a, c, p)).collective_widths(ints, p, a, c)
    return k1, k2, Fraction(rem, den), bool(full)
