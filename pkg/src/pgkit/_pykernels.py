"""Pure-Python hot loops.  ``pgkit._kernels`` mirrors this API in Cython.

Masks are Python ints, so these also handle universes wider than 64 bits.
"""
from __future__ import annotations

from itertools import combinations


def _low(mask: int) -> int:
    return (mask & -mask).bit_length() - 1


def exact_cover(row_masks, universe, candidates, prefix=()):
    """All exact covers of ``universe`` by rows, in depth-first order.

    At every node the search branches only on rows covering the lowest
    uncovered column, so each cover is produced exactly once.  ``candidates[c]``
    lists the rows whose mask contains column c.  ``prefix`` pins rows that
    are already chosen (used to split the tree across workers).
    """
    covered = 0
    for r in prefix:
        if covered & row_masks[r]:
            return []
        covered |= row_masks[r]
    out = []
    chosen = list(prefix)

    def rec(covered):
        if covered == universe:
            out.append(tuple(chosen))
            return
        col = _low(universe & ~covered)
        for r in candidates[col]:
            m = row_masks[r]
            if not m & covered:
                chosen.append(r)
                rec(covered | m)
                chosen.pop()

    rec(covered)
    return out


def subset_partitions(row_masks, k, universe):
    """Every k-subset of rows (lexicographic) that partitions ``universe``.

    Deliberately unpruned: each of the C(len(rows), k) subsets is tested.
    """
    out = []
    for combo in combinations(range(len(row_masks)), k):
        acc = 0
        ok = True
        for r in combo:
            m = row_masks[r]
            if acc & m:
                ok = False
                break
            acc |= m
        if ok and acc == universe:
            out.append(combo)
    return out


def pasch_scan(table, masks, symmetrized, pruned, lo, hi):
    """Scan point 4-tuples (A, B, C, D) with A in [lo, hi).

    Unpruned: every tuple in range(n)**4 is a case; tuples with a repeated
    point are vacuous.  Pruned: only canonical representatives under the
    symmetry group of the statement (A smallest for the plain form;
    A < B, C < D, A < C for the symmetrized form).

    Returns (cases, first violating tuple or None) in lexicographic order.
    """
    n = len(table)
    lt = [list(map(int, row)) for row in table]
    canonical = 0
    first = None
    for a in range(lo, hi):
        la = lt[a]
        for b in range(a + 1 if pruned else 0, n):
            if b == a:
                continue
            lab = masks[la[b]]
            lb = lt[b]
            for c in range(a + 1 if pruned else 0, n):
                if c == a or c == b:
                    continue
                lc = lt[c]
                lac = masks[la[c]]
                lbc = masks[lb[c]]
                dmin = (c + 1 if symmetrized else a + 1) if pruned else 0
                for d in range(dmin, n):
                    if d == a or d == b or d == c:
                        continue
                    canonical += 1
                    if not lab & masks[lc[d]]:
                        continue
                    bad = not lac & masks[lb[d]]
                    if symmetrized and not bad:
                        bad = not masks[la[d]] & lbc
                    if bad and first is None:
                        first = (a, b, c, d)
    cases = canonical if pruned else (hi - lo) * n ** 3
    return cases, first


def transversal_scan(masks, ordered, lo, hi):
    """For line triples with l1 in [lo, hi), find the smallest line meeting all three.

    ``ordered`` scans every triple in range(L)**3 (repeats count as vacuous
    cases); otherwise only l1 < l2 < l3.  Returns (cases, first failing triple
    or None, {(l1, l2, l3): l4 for sorted triples}).
    """
    L = len(masks)
    cases = 0
    first = None
    wit = {}
    for l1 in range(lo, hi):
        m1 = masks[l1]
        for l2 in range(L):
            if not ordered and l2 <= l1:
                continue
            m2 = masks[l2]
            for l3 in range(L):
                if not ordered and l3 <= l2:
                    continue
                cases += 1
                if l1 == l2 or l1 == l3 or l2 == l3:
                    continue
                m3 = masks[l3]
                for l4, m4 in enumerate(masks):
                    if m4 & m1 and m4 & m2 and m4 & m3:
                        if l1 < l2 < l3:
                            wit[(l1, l2, l3)] = l4
                        break
                else:
                    if first is None:
                        first = (l1, l2, l3)
    return cases, first, wit
