"""Exhaustive checks of the synthetic axioms of projective space.

Each check returns an :class:`AxiomReport`.  ``cases_checked`` is the size
of the quantifier domain actually scanned: unpruned scans count every tuple
(including degenerate ones such as l1 == l2, which hold vacuously), pruned
scans count only the canonical representatives under the argument
symmetries of the statement.  Counterexamples are the lexicographically
smallest violating tuple of the scanned domain.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from concurrent.futures import Executor

from . import kernels
from ._parallel import run
from .geometry import Geometry, mask_to_indices

AXIOM_IDS = ("a1_exists", "uniqueness", "a3_1", "a2", "a2_sym", "a3_2", "a3_3")


@dataclass
class AxiomReport:
    axiom_id: str
    holds: bool
    cases_checked: int
    counterexample: tuple[int, ...] | None = None
    witness_table: object = field(default=None, repr=False)
    pruned: bool = False
    seconds: float = field(default=0.0, compare=False)

    def to_dict(self, timing: bool = False) -> dict:
        d = {
            "axiom_id": self.axiom_id,
            "holds": self.holds,
            "cases_checked": self.cases_checked,
            "counterexample": list(self.counterexample) if self.counterexample is not None else None,
            "pruned": self.pruned,
        }
        if timing:
            d["seconds"] = round(self.seconds, 6)
        return d


class AxiomFailure(Exception):
    def __init__(self, report: AxiomReport):
        self.report = report
        super().__init__(
            f"axiom {report.axiom_id} fails; counterexample {report.counterexample}"
        )


def _timed(fn):
    def wrapper(*args, **kwargs):
        t0 = time.perf_counter()
        rep = fn(*args, **kwargs)
        rep.seconds = time.perf_counter() - t0
        return rep

    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    wrapper.__wrapped__ = fn
    return wrapper


def _lowest(mask: int) -> int:
    return (mask & -mask).bit_length() - 1


@_timed
def check_a1_exists(g: Geometry) -> AxiomReport:
    """Some line contains both A and B, for every ordered pair (A, B).

    The witness table maps each pair of distinct points to its joining line;
    it has no diagonal.
    """
    n = g.num_points
    through = g.lines_through
    table: dict[tuple[int, int], int] = {}
    bad = None
    for a in range(n):
        for b in range(n):
            common = through[a] & through[b]
            if not common:
                if bad is None:
                    bad = (a, b)
                continue
            if a != b:
                table[(a, b)] = _lowest(common)
    return AxiomReport(
        "a1_exists", bad is None, n * n, bad, table if bad is None else None
    )


@_timed
def check_a1_uniqueness(g: Geometry, pruned: bool = False) -> AxiomReport:
    """Two lines sharing two distinct points coincide.

    Counterexamples are (A, B, l1, l2) with l1 < l2 the two smallest common
    lines.  Pruned mode scans A < B only.
    """
    n = g.num_points
    through = g.lines_through
    bad = None
    cases = 0
    for a in range(n):
        for b in range(a + 1 if pruned else 0, n):
            cases += 1
            if a == b:
                continue
            common = through[a] & through[b]
            if common.bit_count() > 1 and bad is None:
                l1, l2 = mask_to_indices(common)[:2]
                bad = (a, b, l1, l2)
    return AxiomReport("uniqueness", bad is None, cases, bad, pruned=pruned)


@_timed
def check_a3_1(g: Geometry) -> AxiomReport:
    """Every line carries at least three distinct points.

    Witness: each line mapped to its three smallest points.
    """
    table = {}
    bad = None
    for rec in g.lines:
        pts = rec.point_list
        if len(pts) < 3:
            if bad is None:
                bad = (rec.index,)
            continue
        table[rec.index] = pts[:3]
    return AxiomReport("a3_1", bad is None, g.num_lines, bad, table if bad is None else None)


def _pasch_chunk(table, masks, symmetrized, pruned, lo, hi):
    return kernels.pasch_scan(table, masks, symmetrized, pruned, lo, hi)


@_timed
def check_pasch(
    g: Geometry,
    symmetrized: bool = False,
    pruned: bool = False,
    executor: Executor | None = None,
) -> AxiomReport:
    """Pasch: if lines AB and CD meet then AC and BD meet (and AD, BC when symmetrized).

    The lines are the joining lines of the four points, which uniqueness
    makes canonical, so only point 4-tuples are enumerated.  The plain form
    is invariant under the Klein four-group on (A, B, C, D), the symmetrized
    form under the order-8 group generated by A<->B, C<->D and
    (A, B)<->(C, D); pruned mode scans one representative per orbit.
    """
    n = g.num_points
    masks = g.line_masks()
    table = g.line_through_table
    if executor is None:
        cases, bad = _pasch_chunk(table, masks, symmetrized, pruned, 0, n)
    else:
        parts = run(
            executor,
            _pasch_chunk,
            [(table, masks, symmetrized, pruned, a, a + 1) for a in range(n)],
        )
        cases = sum(c for c, _ in parts)
        bad = next((b for _, b in parts if b is not None), None)
    return AxiomReport(
        "a2_sym" if symmetrized else "a2", bad is None, cases, bad, pruned=pruned
    )


@_timed
def check_a3_2(g: Geometry, pruned: bool = False) -> AxiomReport:
    """Two disjoint lines exist.

    On success ``counterexample`` carries the first disjoint pair found in
    lexicographic order.  On failure it is ``()``: no witness exists, which
    the full scan (``cases_checked`` pairs) establishes.
    """
    masks = g.line_masks()
    L = len(masks)
    cases = 0
    for l1 in range(L):
        for l2 in range(l1 + 1 if pruned else 0, L):
            cases += 1
            if not masks[l1] & masks[l2]:
                return AxiomReport("a3_2", True, cases, (l1, l2), pruned=pruned)
    return AxiomReport("a3_2", False, cases, (), pruned=pruned)


class TransversalTable:
    """Skolem function for a3_3: (l1, l2, l3) -> (l4, (J1, J2, J3)).

    l4 is the smallest line meeting all three, Ji the smallest point of
    l4 and li in common.  Stored once per unordered triple.
    """

    def __init__(self, g: Geometry, by_sorted: dict[tuple[int, int, int], int]):
        self._masks = g.line_masks()
        self._by_sorted = by_sorted

    def __len__(self) -> int:
        return len(self._by_sorted)

    def __call__(self, l1: int, l2: int, l3: int) -> tuple[int, tuple[int, int, int]]:
        if len({l1, l2, l3}) != 3:
            raise KeyError(f"lines {l1}, {l2}, {l3} are not pairwise distinct")
        l4 = self._by_sorted[tuple(sorted((l1, l2, l3)))]
        m4 = self._masks[l4]
        j = tuple(_lowest(m4 & self._masks[l]) for l in (l1, l2, l3))
        return l4, j

    def items(self):
        for key in self._by_sorted:
            yield key, self(*key)


def _transversal_chunk(masks, ordered, lo, hi):
    return kernels.transversal_scan(masks, ordered, lo, hi)


@_timed
def check_a3_3(
    g: Geometry, pruned: bool = False, executor: Executor | None = None
) -> AxiomReport:
    """Every three pairwise distinct lines have a common transversal line."""
    masks = g.line_masks()
    L = len(masks)
    ordered = not pruned
    if executor is None:
        parts = [_transversal_chunk(masks, ordered, 0, L)]
    else:
        parts = run(executor, _transversal_chunk, [(masks, ordered, l, l + 1) for l in range(L)])
    cases = sum(p[0] for p in parts)
    bad = next((p[1] for p in parts if p[1] is not None), None)
    wit: dict = {}
    for p in parts:
        wit.update(p[2])
    table = TransversalTable(g, dict(sorted(wit.items()))) if bad is None else None
    return AxiomReport("a3_3", bad is None, cases, bad, table, pruned=pruned)


def check_all(
    g: Geometry, pruned: bool = True, executor: Executor | None = None
) -> list[AxiomReport]:
    """All seven checks, in ``AXIOM_IDS`` order."""
    return [
        check_a1_exists(g),
        check_a1_uniqueness(g, pruned=pruned),
        check_a3_1(g),
        check_pasch(g, symmetrized=False, pruned=pruned, executor=executor),
        check_pasch(g, symmetrized=True, pruned=pruned, executor=executor),
        check_a3_2(g, pruned=pruned),
        check_a3_3(g, pruned=pruned, executor=executor),
    ]


@dataclass
class SkolemTables:
    f_a1: dict[tuple[int, int], int]
    f_a3_3: TransversalTable

    def verify(self, g: Geometry) -> bool:
        """Re-check every entry against the incidence bitmasks."""
        masks = g.line_masks()
        for (a, b), l in self.f_a1.items():
            if a == b or not (masks[l] >> a & 1 and masks[l] >> b & 1):
                return False
        for (l1, l2, l3), (l4, js) in self.f_a3_3.items():
            for l, j in zip((l1, l2, l3), js):
                if not (masks[l4] >> j & 1 and masks[l] >> j & 1):
                    return False
        return True


def skolem_tables(g: Geometry, executor: Executor | None = None) -> SkolemTables:
    """Witness functions for a1_exists and a3_3.

    Raises:
        AxiomFailure: if either axiom fails on ``g``.
    """
    a1 = check_a1_exists(g)
    if not a1.holds:
        raise AxiomFailure(a1)
    a33 = check_a3_3(g, pruned=True, executor=executor)
    if not a33.holds:
        raise AxiomFailure(a33)
    return SkolemTables(a1.witness_table, a33.witness_table)
