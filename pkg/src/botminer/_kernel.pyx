# cython: boundscheck=False, wraparound=False, initializedcheck=False
"""Compiled alignment DP kernels over integer-encoded token sequences.

Both kernels score match=+1, mismatch=-1, gap=-1 and resolve ties between
equal-score alignments deterministically: maximize match count, then
minimize alignment length. Each returns (score, matches, length).
"""

from libc.stdlib cimport free, malloc


cdef inline bint _better(long s1, long m1, long l1,
                         long s2, long m2, long l2) nogil:
    # (score desc, matches desc, length asc)
    if s1 != s2:
        return s1 > s2
    if m1 != m2:
        return m1 > m2
    return l1 < l2


cdef void _global(const int *a, Py_ssize_t la, const int *b, Py_ssize_t lb,
                  long *rows, long *out) nogil:
    # rows must hold 6*(lb+1) longs of scratch.
    cdef Py_ssize_t i, j
    cdef int ai
    cdef long bs, bm, bl, ts, tm, tl
    cdef long *ps = rows
    cdef long *pm = rows + (lb + 1)
    cdef long *pl = rows + 2 * (lb + 1)
    cdef long *cs = rows + 3 * (lb + 1)
    cdef long *cm = rows + 4 * (lb + 1)
    cdef long *cl = rows + 5 * (lb + 1)
    cdef long *tmp
    for j in range(lb + 1):
        ps[j] = -j
        pm[j] = 0
        pl[j] = j
    for i in range(1, la + 1):
        cs[0] = -i
        cm[0] = 0
        cl[0] = i
        ai = a[i - 1]
        for j in range(1, lb + 1):
            if ai == b[j - 1]:
                bs = ps[j - 1] + 1
                bm = pm[j - 1] + 1
            else:
                bs = ps[j - 1] - 1
                bm = pm[j - 1]
            bl = pl[j - 1] + 1
            ts = ps[j] - 1
            tm = pm[j]
            tl = pl[j] + 1
            if _better(ts, tm, tl, bs, bm, bl):
                bs = ts
                bm = tm
                bl = tl
            ts = cs[j - 1] - 1
            tm = cm[j - 1]
            tl = cl[j - 1] + 1
            if _better(ts, tm, tl, bs, bm, bl):
                bs = ts
                bm = tm
                bl = tl
            cs[j] = bs
            cm[j] = bm
            cl[j] = bl
        tmp = ps; ps = cs; cs = tmp
        tmp = pm; pm = cm; cm = tmp
        tmp = pl; pl = cl; cl = tmp
    out[0] = ps[lb]
    out[1] = pm[lb]
    out[2] = pl[lb]


cdef void _local(const int *a, Py_ssize_t la, const int *b, Py_ssize_t lb,
                 long *rows, long *out) nogil:
    cdef Py_ssize_t i, j
    cdef int ai
    cdef long bs, bm, bl, ts, tm, tl
    cdef long best_s = 0, best_m = 0, best_l = 0
    cdef long *ps = rows
    cdef long *pm = rows + (lb + 1)
    cdef long *pl = rows + 2 * (lb + 1)
    cdef long *cs = rows + 3 * (lb + 1)
    cdef long *cm = rows + 4 * (lb + 1)
    cdef long *cl = rows + 5 * (lb + 1)
    cdef long *tmp
    for j in range(lb + 1):
        ps[j] = 0
        pm[j] = 0
        pl[j] = 0
    for i in range(1, la + 1):
        cs[0] = 0
        cm[0] = 0
        cl[0] = 0
        ai = a[i - 1]
        for j in range(1, lb + 1):
            # restart candidate: the empty alignment
            bs = 0
            bm = 0
            bl = 0
            if ai == b[j - 1]:
                ts = ps[j - 1] + 1
                tm = pm[j - 1] + 1
            else:
                ts = ps[j - 1] - 1
                tm = pm[j - 1]
            tl = pl[j - 1] + 1
            if _better(ts, tm, tl, bs, bm, bl):
                bs = ts
                bm = tm
                bl = tl
            ts = ps[j] - 1
            tm = pm[j]
            tl = pl[j] + 1
            if _better(ts, tm, tl, bs, bm, bl):
                bs = ts
                bm = tm
                bl = tl
            ts = cs[j - 1] - 1
            tm = cm[j - 1]
            tl = cl[j - 1] + 1
            if _better(ts, tm, tl, bs, bm, bl):
                bs = ts
                bm = tm
                bl = tl
            cs[j] = bs
            cm[j] = bm
            cl[j] = bl
            if _better(bs, bm, bl, best_s, best_m, best_l):
                best_s = bs
                best_m = bm
                best_l = bl
        tmp = ps; ps = cs; cs = tmp
        tmp = pm; pm = cm; cm = tmp
        tmp = pl; pl = cl; cl = tmp
    out[0] = best_s
    out[1] = best_m
    out[2] = best_l


cdef long *_scratch(Py_ssize_t lb) except NULL:
    cdef long *rows = <long *> malloc(6 * (lb + 1) * sizeof(long))
    if rows == NULL:
        raise MemoryError()
    return rows


def global_align(const int[::1] a, const int[::1] b):
    """Needleman-Wunsch over the whole of both sequences."""
    cdef Py_ssize_t la = a.shape[0]
    cdef Py_ssize_t lb = b.shape[0]
    cdef long out[3]
    cdef long *rows = _scratch(lb)
    cdef const int *pa = &a[0] if la else NULL
    cdef const int *pb = &b[0] if lb else NULL
    try:
        _global(pa, la, pb, lb, rows, out)
        return out[0], out[1], out[2]
    finally:
        free(rows)


def local_align(const int[::1] a, const int[::1] b):
    """Smith-Waterman; returns the best-scoring local region."""
    cdef Py_ssize_t la = a.shape[0]
    cdef Py_ssize_t lb = b.shape[0]
    cdef long out[3]
    cdef long *rows = _scratch(lb)
    cdef const int *pa = &a[0] if la else NULL
    cdef const int *pb = &b[0] if lb else NULL
    try:
        _local(pa, la, pb, lb, rows, out)
        return out[0], out[1], out[2]
    finally:
        free(rows)


def percent_identity_batch(const int[::1] tokens, const long[::1] offsets,
                           const long[::1] ia, const long[::1] ib,
                           bint combined, double[::1] out):
    """Percent identity for many sequence pairs in one call.

    Sequence k is tokens[offsets[k]:offsets[k+1]]; pair p compares
    sequences ia[p] and ib[p], writing into out[p].
    """
    cdef Py_ssize_t n_pairs = ia.shape[0]
    cdef Py_ssize_t p, sa, sb, la, lb, max_lb = 0
    cdef long res[3]
    cdef long loc[3]
    cdef long matches
    for p in range(n_pairs):
        lb = offsets[ib[p] + 1] - offsets[ib[p]]
        if lb > max_lb:
            max_lb = lb
    cdef long *rows = _scratch(max_lb)
    cdef const int *base = &tokens[0] if tokens.shape[0] else NULL
    try:
        with nogil:
            for p in range(n_pairs):
                sa = offsets[ia[p]]
                sb = offsets[ib[p]]
                la = offsets[ia[p] + 1] - sa
                lb = offsets[ib[p] + 1] - sb
                if la == 0 and lb == 0:
                    out[p] = 1.0
                    continue
                if la == 0 or lb == 0:
                    out[p] = 0.0
                    continue
                _global(base + sa, la, base + sb, lb, rows, res)
                matches = res[1]
                if combined:
                    _local(base + sa, la, base + sb, lb, rows, loc)
                    if loc[1] > matches:
                        matches = loc[1]
                out[p] = <double> matches / <double> res[2]
    finally:
        free(rows)
