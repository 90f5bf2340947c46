"""Pure-Python fallback for the alignment DP kernels.

Same contract as the compiled module: match=+1, mismatch=-1, gap=-1;
ties between equal-score alignments resolved by maximizing match count,
then minimizing alignment length. Each function returns
(score, matches, length).
"""

from __future__ import annotations

from typing import Sequence


def _better(s1: int, m1: int, l1: int, s2: int, m2: int, l2: int) -> bool:
    if s1 != s2:
        return s1 > s2
    if m1 != m2:
        return m1 > m2
    return l1 < l2


def global_align(a: Sequence[int], b: Sequence[int]) -> tuple[int, int, int]:
    a = list(a)
    b = list(b)
    la, lb = len(a), len(b)
    ps = list(range(0, -(lb + 1), -1))
    pm = [0] * (lb + 1)
    pl = list(range(lb + 1))
    for i in range(1, la + 1):
        cs = [-i] + [0] * lb
        cm = [0] * (lb + 1)
        cl = [i] + [0] * lb
        ai = a[i - 1]
        for j in range(1, lb + 1):
            if ai == b[j - 1]:
                bs, bm = ps[j - 1] + 1, pm[j - 1] + 1
            else:
                bs, bm = ps[j - 1] - 1, pm[j - 1]
            bl = pl[j - 1] + 1
            ts, tm, tl = ps[j] - 1, pm[j], pl[j] + 1
            if _better(ts, tm, tl, bs, bm, bl):
                bs, bm, bl = ts, tm, tl
            ts, tm, tl = cs[j - 1] - 1, cm[j - 1], cl[j - 1] + 1
            if _better(ts, tm, tl, bs, bm, bl):
                bs, bm, bl = ts, tm, tl
            cs[j], cm[j], cl[j] = bs, bm, bl
        ps, pm, pl = cs, cm, cl
    return ps[lb], pm[lb], pl[lb]


def local_align(a: Sequence[int], b: Sequence[int]) -> tuple[int, int, int]:
    a = list(a)
    b = list(b)
    la, lb = len(a), len(b)
    best = (0, 0, 0)
    ps = [0] * (lb + 1)
    pm = [0] * (lb + 1)
    pl = [0] * (lb + 1)
    for i in range(1, la + 1):
        cs = [0] * (lb + 1)
        cm = [0] * (lb + 1)
        cl = [0] * (lb + 1)
        ai = a[i - 1]
        for j in range(1, lb + 1):
            bs, bm, bl = 0, 0, 0  # restart: the empty alignment
            if ai == b[j - 1]:
                ts, tm = ps[j - 1] + 1, pm[j - 1] + 1
            else:
                ts, tm = ps[j - 1] - 1, pm[j - 1]
            tl = pl[j - 1] + 1
            if _better(ts, tm, tl, bs, bm, bl):
                bs, bm, bl = ts, tm, tl
            ts, tm, tl = ps[j] - 1, pm[j], pl[j] + 1
            if _better(ts, tm, tl, bs, bm, bl):
                bs, bm, bl = ts, tm, tl
            ts, tm, tl = cs[j - 1] - 1, cm[j - 1], cl[j - 1] + 1
            if _better(ts, tm, tl, bs, bm, bl):
                bs, bm, bl = ts, tm, tl
            cs[j], cm[j], cl[j] = bs, bm, bl
            if _better(bs, bm, bl, *best):
                best = (bs, bm, bl)
        ps, pm, pl = cs, cm, cl
    return best


def percent_identity_batch(tokens, offsets, ia, ib, combined, out):
    """Same contract as the compiled batch entry point."""
    tokens = list(tokens)
    for p in range(len(ia)):
        sa, ea = offsets[ia[p]], offsets[ia[p] + 1]
        sb, eb = offsets[ib[p]], offsets[ib[p] + 1]
        a = tokens[sa:ea]
        b = tokens[sb:eb]
        if not a and not b:
            out[p] = 1.0
            continue
        if not a or not b:
            out[p] = 0.0
            continue
        _, matches, length = global_align(a, b)
        if combined:
            _, local_matches, _ = local_align(a, b)
            if local_matches > matches:
                matches = local_matches
        out[p] = matches / length
