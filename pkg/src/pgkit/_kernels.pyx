# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot loops over 64-bit masks.  Same API as ``pgkit._pykernels``.

Callers must only pass masks that fit in 64 bits; ``pgkit.kernels`` routes
wider universes to the pure-Python implementation.
"""
import numpy as np

from libc.stdint cimport int32_t, int64_t, uint64_t


cdef extern from *:
    int __builtin_ctzll(unsigned long long x) nogil


cdef uint64_t[::1] _as_u64(seq):
    return np.array([int(m) for m in seq], dtype=np.uint64)


cdef void _ec_rec(
    const uint64_t[::1] masks,
    const int32_t[::1] off,
    const int32_t[::1] flat,
    uint64_t full,
    uint64_t covered,
    int32_t[::1] chosen,
    int depth,
    list out,
):
    cdef int col, i, r
    cdef uint64_t m
    if covered == full:
        out.append(tuple([chosen[i] for i in range(depth)]))
        return
    col = __builtin_ctzll(full & ~covered)
    for i in range(off[col], off[col + 1]):
        r = flat[i]
        m = masks[r]
        if (m & covered) == 0:
            chosen[depth] = r
            _ec_rec(masks, off, flat, full, covered | m, chosen, depth + 1, out)


def exact_cover(row_masks, universe, candidates, prefix=()):
    cdef uint64_t[::1] masks = _as_u64(row_masks)
    cdef uint64_t full = int(universe)
    cdef uint64_t covered = 0
    cdef int depth = 0
    offsets = [0]
    flat = []
    for col in candidates:
        flat.extend(col)
        offsets.append(len(flat))
    cdef int32_t[::1] off = np.array(offsets, dtype=np.int32)
    cdef int32_t[::1] fl = np.array(flat or [0], dtype=np.int32)
    cdef int32_t[::1] chosen = np.zeros(65, dtype=np.int32)
    for r in prefix:
        if covered & masks[r]:
            return []
        covered |= masks[r]
        chosen[depth] = r
        depth += 1
    out = []
    _ec_rec(masks, off, fl, full, covered, chosen, depth, out)
    return out


def subset_partitions(row_masks, int k, universe):
    cdef uint64_t[::1] masks = _as_u64(row_masks)
    cdef uint64_t full = int(universe)
    cdef int n = masks.shape[0]
    cdef int32_t[::1] idx = np.arange(max(k, 1), dtype=np.int32)
    cdef int i, j
    cdef uint64_t acc, m
    cdef bint ok
    out = []
    if k > n or k <= 0:
        return out
    while True:
        acc = 0
        ok = True
        for i in range(k):
            m = masks[idx[i]]
            if acc & m:
                ok = False
                break
            acc |= m
        if ok and acc == full:
            out.append(tuple([idx[i] for i in range(k)]))
        # next combination in lexicographic order
        i = k - 1
        while i >= 0 and idx[i] == n - k + i:
            i -= 1
        if i < 0:
            break
        idx[i] += 1
        for j in range(i + 1, k):
            idx[j] = idx[j - 1] + 1
    return out


def pasch_scan(table, masks_seq, bint symmetrized, bint pruned, int lo, int hi):
    cdef const int32_t[:, ::1] lt = np.ascontiguousarray(table, dtype=np.int32)
    cdef uint64_t[::1] masks = _as_u64(masks_seq)
    cdef int n = lt.shape[0]
    cdef int a, b, c, d, dmin
    cdef int64_t canonical = 0
    cdef uint64_t lab, lac, lbc
    cdef bint bad, found = False
    cdef int fa = 0, fb = 0, fc = 0, fd = 0
    for a in range(lo, hi):
        for b in range(a + 1 if pruned else 0, n):
            if b == a:
                continue
            lab = masks[lt[a, b]]
            for c in range(a + 1 if pruned else 0, n):
                if c == a or c == b:
                    continue
                lac = masks[lt[a, c]]
                lbc = masks[lt[b, c]]
                if pruned:
                    dmin = c + 1 if symmetrized else a + 1
                else:
                    dmin = 0
                for d in range(dmin, n):
                    if d == a or d == b or d == c:
                        continue
                    canonical += 1
                    if (lab & masks[lt[c, d]]) == 0:
                        continue
                    bad = (lac & masks[lt[b, d]]) == 0
                    if symmetrized and not bad:
                        bad = (masks[lt[a, d]] & lbc) == 0
                    if bad and not found:
                        found = True
                        fa, fb, fc, fd = a, b, c, d
    cases = canonical if pruned else (hi - lo) * n ** 3
    return cases, ((fa, fb, fc, fd) if found else None)


def transversal_scan(masks_seq, bint ordered, int lo, int hi):
    cdef uint64_t[::1] masks = _as_u64(masks_seq)
    cdef int L = masks.shape[0]
    cdef int l1, l2, l3, l4, hit
    cdef uint64_t m1, m2, m3, m4
    cdef int64_t cases = 0
    cdef bint found = False
    cdef int f1 = 0, f2 = 0, f3 = 0
    wit = {}
    for l1 in range(lo, hi):
        m1 = masks[l1]
        for l2 in range(0 if ordered else l1 + 1, L):
            m2 = masks[l2]
            for l3 in range(0 if ordered else l2 + 1, L):
                cases += 1
                if l1 == l2 or l1 == l3 or l2 == l3:
                    continue
                m3 = masks[l3]
                hit = -1
                for l4 in range(L):
                    m4 = masks[l4]
                    if (m4 & m1) and (m4 & m2) and (m4 & m3):
                        hit = l4
                        break
                if hit < 0:
                    if not found:
                        found = True
                        f1, f2, f3 = l1, l2, l3
                elif l1 < l2 and l2 < l3:
                    wit[(l1, l2, l3)] = hit
    return cases, ((f1, f2, f3) if found else None), wit
