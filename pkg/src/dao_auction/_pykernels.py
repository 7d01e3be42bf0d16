"""Pure-Python integer kernels.

Every function takes member values already scaled to nonnegative Python ints
(a common denominator has been multiplied out) and sorted non-increasingly.
Python ints are unbounded, so this backend is always exact and serves as the
fallback whenever the compiled backend is missing or its int64 bound would
be exceeded.
"""
from __future__ import annotations

BACKEND = "python"


def group_cv_scan(v):
    """Candidate critical-value scan of the optimal grouping algorithm.

    Returns ``(opt_wtp, opt_cv, k)``.
    """
    n = len(v)
    candidates = []
    seen = set()
    for i in range(n):
        wtp = 0
        for j in range(i, n):
            t = (j - i + 1) * v[j]
            if t > wtp:
                wtp = t
            if wtp not in seen:
                seen.add(wtp)
                candidates.append(wtp)
    opt_wtp = opt_cv = k = 0
    for cv in candidates:
        ci = 0
        size = 1
        for vi in v:
            if size * vi >= cv:
                ci += 1
                size = 1
            else:
                size += 1
        total = ci * cv
        if total > opt_wtp:
            opt_wtp, opt_cv, k = total, cv, ci
    return opt_wtp, opt_cv, k


def greedy_cuts(v, cv):
    """Greedy block ends for a fixed critical value; list starts with 0."""
    cuts = [0]
    size = 1
    for i, vi in enumerate(v, start=1):
        if size * vi >= cv:
            cuts.append(i)
            size = 1
        else:
            size += 1
    return cuts


def _total(block_wtps):
    block_wtps.sort(reverse=True)
    best = 0
    for j, w in enumerate(block_wtps, start=1):
        if j * w > best:
            best = j * w
    return best


def max_partition_wtp(v):
    """Brute force: max DAO WTP over every set partition of the members."""
    n = len(v)
    labels = [0] * n
    maxima = [0] * n
    best = 0
    while True:
        counts = [0] * n
        wtps = [0] * n
        blocks = 0
        for i in range(n):
            b = labels[i]
            if b + 1 > blocks:
                blocks = b + 1
            counts[b] += 1
            t = counts[b] * v[i]
            if t > wtps[b]:
                wtps[b] = t
        total = _total(wtps[:blocks])
        if total > best:
            best = total
        # next restricted growth string
        i = n - 1
        while i > 0 and labels[i] > maxima[i - 1]:
            i -= 1
        if i == 0:
            return best
        labels[i] += 1
        maxima[i] = max(maxima[i - 1], labels[i])
        for j in range(i + 1, n):
            labels[j] = 0
            maxima[j] = maxima[i]


def max_continuous_wtp(v):
    """Brute force: max DAO WTP over all 2**(n-1) interval groupings."""
    n = len(v)
    best = 0
    for mask in range(1 << (n - 1)):
        wtps = []
        count = 0
        w = 0
        for i in range(n):
            count += 1
            t = count * v[i]
            if t > w:
                w = t
            if i == n - 1 or mask >> i & 1:
                wtps.append(w)
                count = 0
                w = 0
        total = _total(wtps)
        if total > best:
            best = total
    return best


def collective_wtp(v, a, c):
    """``c`` times the collective aggregation with factor ``a/c``."""
    best = 0
    for i in range(len(v)):
        cap = (c + a) * v[i]
        s = 0
        for j in range(i + 1):
            cv = c * v[j]
            s += cv if cv < cap else cap
        if s > best:
            best = s
    return best


def collective_widths(v, price, a, c):
    """Pool width and water-fill step of the optimal parameter algorithm.

    Returns ``(k1, k2, p_remain, full)``; ``full`` is True when every member of
    the pool pays the same price (``P_remain <= 0`` branch).
    """
    n = len(v)
    k2 = n + 1
    size = 0
    target = c * price
    while target > size:
        k2 -= 1
        if k2 < 1:
            raise ArithmeticError("price exceeds every pool capacity")
        cap = (c + a) * v[k2 - 1]
        size = 0
        for j in range(k2):
            cv = c * v[j]
            size += cv if cv < cap else cap
    p_remain = price - k2 * v[k2 - 1]
    if p_remain <= 0:
        return k2, k2, p_remain, True
    k1 = k2 - 1
    while p_remain > 0:
        if k1 < 1:
            raise ArithmeticError("water-fill overflowed the pool")
        nxt = v[k1] if k1 < n else 0
        layer = k1 * (v[k1 - 1] - nxt)
        if p_remain <= layer:
            break
        p_remain -= layer
        k1 -= 1
    return k1, k2, p_remain, False
