# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled int64 kernels.

Same API as ``_pykernels``.  Callers guarantee, via ``kernels.fits_int64``,
that every intermediate product stays below 2**62; the loops run without
the GIL.
"""
from libc.stdlib cimport malloc, free

ctypedef long long i64

BACKEND = "cython"


cdef i64* _load(v) except NULL:
    cdef Py_ssize_t n = len(v), i
    cdef i64* buf = <i64*> malloc((n if n > 0 else 1) * sizeof(i64))
    if buf == NULL:
        raise MemoryError()
    for i in range(n):
        buf[i] = v[i]
    return buf


cdef i64 _total(i64* w, int k) noexcept nogil:
    # insertion sort, descending; k is tiny
    cdef int i, j
    cdef i64 t, best = 0
    for i in range(1, k):
        t = w[i]
        j = i - 1
        while j >= 0 and w[j] < t:
            w[j + 1] = w[j]
            j -= 1
        w[j + 1] = t
    for i in range(k):
        if (i + 1) * w[i] > best:
            best = (i + 1) * w[i]
    return best


def group_cv_scan(v):
    # duplicates are kept: a repeated candidate ties its first occurrence and
    # the strict-improvement test ignores it
    cdef int n = len(v), i, j, m = 0, idx, size
    cdef i64* x = _load(v)
    cdef i64* cand = <i64*> malloc((n * (n + 1) // 2 + 1) * sizeof(i64))
    cdef i64 wtp, t, cv, ci, total, opt_wtp = 0, opt_cv = 0, k = 0
    if cand == NULL:
        free(x)
        raise MemoryError()
    try:
        with nogil:
            for i in range(n):
                wtp = 0
                for j in range(i, n):
                    t = (j - i + 1) * x[j]
                    if t > wtp:
                        wtp = t
                    cand[m] = wtp
                    m += 1
            for idx in range(m):
                cv = cand[idx]
                ci = 0
                size = 1
                for i in range(n):
                    if size * x[i] >= cv:
                        ci += 1
                        size = 1
                    else:
                        size += 1
                total = ci * cv
                if total > opt_wtp:
                    opt_wtp = total
                    opt_cv = cv
                    k = ci
        return opt_wtp, opt_cv, k
    finally:
        free(x)
        free(cand)


def greedy_cuts(v, cv):
    cdef int n = len(v), i, size = 1
    cdef i64 c = cv
    cuts = [0]
    for i in range(n):
        if size * <i64> v[i] >= c:
            cuts.append(i + 1)
            size = 1
        else:
            size += 1
    return cuts


def max_partition_wtp(v):
    cdef int n = len(v), i, j, b, blocks
    cdef i64* x = _load(v)
    cdef int* labels = <int*> malloc(n * sizeof(int))
    cdef int* maxima = <int*> malloc(n * sizeof(int))
    cdef int* counts = <int*> malloc(n * sizeof(int))
    cdef i64* wtps = <i64*> malloc(n * sizeof(i64))
    cdef i64 t, total, best = 0
    if labels == NULL or maxima == NULL or counts == NULL or wtps == NULL:
        free(x); free(labels); free(maxima); free(counts); free(wtps)
        raise MemoryError()
    try:
        with nogil:
            for i in range(n):
                labels[i] = 0
                maxima[i] = 0
            while True:
                for i in range(n):
                    counts[i] = 0
                    wtps[i] = 0
                blocks = 0
                for i in range(n):
                    b = labels[i]
                    if b + 1 > blocks:
                        blocks = b + 1
                    counts[b] += 1
                    t = counts[b] * x[i]
                    if t > wtps[b]:
                        wtps[b] = t
                total = _total(wtps, blocks)
                if total > best:
                    best = total
                i = n - 1
                while i > 0 and labels[i] > maxima[i - 1]:
                    i -= 1
                if i == 0:
                    break
                labels[i] += 1
                maxima[i] = maxima[i - 1] if maxima[i - 1] > labels[i] else labels[i]
                for j in range(i + 1, n):
                    labels[j] = 0
                    maxima[j] = maxima[i]
        return best
    finally:
        free(x); free(labels); free(maxima); free(counts); free(wtps)


def max_continuous_wtp(v):
    cdef int n = len(v), i, nb, count
    cdef long mask, masks = 1L << (n - 1)
    cdef i64* x = _load(v)
    cdef i64* wtps = <i64*> malloc(n * sizeof(i64))
    cdef i64 t, w, total, best = 0
    if wtps == NULL:
        free(x)
        raise MemoryError()
    try:
        with nogil:
            for mask in range(masks):
                nb = 0
                count = 0
                w = 0
                for i in range(n):
                    count += 1
                    t = count * x[i]
                    if t > w:
                        w = t
                    if i == n - 1 or (mask >> i) & 1:
                        wtps[nb] = w
                        nb += 1
                        count = 0
                        w = 0
                total = _total(wtps, nb)
                if total > best:
                    best = total
        return best
    finally:
        free(x)
        free(wtps)


def collective_wtp(v, a, c):
    cdef int n = len(v), i, j
    cdef i64* x = _load(v)
    cdef i64 aa = a, cc = c, cap, cv, s, best = 0
    try:
        with nogil:
            for i in range(n):
                cap = (cc + aa) * x[i]
                s = 0
                for j in range(i + 1):
                    cv = cc * x[j]
                    s += cv if cv < cap else cap
                if s > best:
                    best = s
        return best
    finally:
        free(x)


def collective_widths(v, price, a, c):
    cdef int n = len(v), j, k1, k2 = n + 1
    cdef i64* x = _load(v)
    cdef i64 aa = a, cc = c, p = price, size = 0, target, cap, cv, p_remain, nxt, layer
    cdef int err = 0
    try:
        target = cc * p
        with nogil:
            while target > size:
                k2 -= 1
                if k2 < 1:
                    err = 1
                    break
                cap = (cc + aa) * x[k2 - 1]
                size = 0
                for j in range(k2):
                    cv = cc * x[j]
                    size += cv if cv < cap else cap
        if err:
            raise ArithmeticError("price exceeds every pool capacity")
        p_remain = p - k2 * x[k2 - 1]
        if p_remain <= 0:
            return k2, k2, p_remain, True
        k1 = k2 - 1
        while p_remain > 0:
            if k1 < 1:
                raise ArithmeticError("water-fill overflowed the pool")
            nxt = x[k1] if k1 < n else 0
            layer = k1 * (x[k1 - 1] - nxt)
            if p_remain <= layer:
                break
            p_remain -= layer
            k1 -= 1
        return k1, k2, p_remain, False
    finally:
        free(x)
