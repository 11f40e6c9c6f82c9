"""Spreads and packings of PG(3, q).

A spread is a set of q^2+1 lines partitioning the points; a packing is a set
of q^2+q+1 spreads partitioning the lines.  Both are found as exact covers,
always branching on the lowest uncovered point (resp. line), which yields
each object exactly once without any permutation duplicates.
"""
from __future__ import annotations

import random
from collections import Counter
from concurrent.futures import Executor
from dataclasses import dataclass, field
from itertools import combinations

import networkx as nx

from . import kernels
from ._parallel import run
from .geometry import Geometry, GeometryError, indices_to_mask


@dataclass(frozen=True, order=True)
class Spread:
    lines: tuple[int, ...]
    covered: int = field(compare=False, repr=False)


@dataclass(frozen=True, order=True)
class Packing:
    spreads: tuple[int, ...]
    covered: int = field(compare=False, repr=False)


def spread_size(g: Geometry) -> int:
    q = g.order
    return q * q + 1


def packing_size(g: Geometry) -> int:
    q = g.order
    return q * q + q + 1


def _require_pg3(g: Geometry) -> None:
    if g.n != 3:
        raise GeometryError(f"spreads and packings need PG(3,q); got {g!r}")


def is_spread(g: Geometry, lines) -> bool:
    """q^2+1 distinct, pairwise disjoint lines covering every point."""
    lines = list(lines)
    for l in lines:
        if not 0 <= l < g.num_lines:
            raise IndexError(f"line index {l} out of range")
    if len(lines) != spread_size(g) or len(set(lines)) != len(lines):
        return False
    acc = 0
    for l in lines:
        m = g.lines[l].points
        if acc & m:
            return False
        acc |= m
    return acc == g.all_points


def _point_candidates(g: Geometry) -> list[list[int]]:
    return [
        [l for l in range(g.num_lines) if g.lines[l].points >> p & 1]
        for p in range(g.num_points)
    ]


def _cover_chunk(masks, universe, candidates, prefix):
    return kernels.exact_cover(masks, universe, candidates, prefix)


def _exact_cover(masks, universe, candidates, executor):
    if executor is None:
        found = _cover_chunk(masks, universe, candidates, ())
    else:
        col = ((universe & -universe).bit_length() - 1) if universe else 0
        parts = run(
            executor,
            _cover_chunk,
            [(masks, universe, candidates, (r,)) for r in candidates[col]],
        )
        found = [s for part in parts for s in part]
    return sorted(tuple(sorted(s)) for s in found)


def enumerate_spreads(g: Geometry, executor: Executor | None = None) -> list[Spread]:
    """All spreads, each with sorted lines, in lexicographic order."""
    _require_pg3(g)
    masks = g.line_masks()
    covers = _exact_cover(masks, g.all_points, _point_candidates(g), executor)
    return [Spread(c, g.all_points) for c in covers]


def brute_force_spreads(g: Geometry) -> list[tuple[int, ...]]:
    """Oracle: filter every (q^2+1)-subset of lines for the partition property."""
    _require_pg3(g)
    return kernels.subset_partitions(g.line_masks(), spread_size(g), g.all_points)


def spread_membership(g: Geometry, lines, spreads: list[Spread]) -> tuple[bool, bool]:
    """(is_spread(lines), sorted(lines) is an enumerated spread)."""
    lines = list(lines)
    listed = {s.lines for s in spreads}
    return is_spread(g, lines), tuple(sorted(lines)) in listed


def spread_membership_selftest(
    g: Geometry, spreads: list[Spread], sample: int | None = None, seed: int = 0
) -> tuple[int, list[tuple[int, ...]]]:
    """Compare the predicate with list membership over line subsets.

    Scans all (q^2+1)-subsets, or ``sample`` random ones.  Returns the number
    of subsets checked and the subsets on which the two sides disagree.
    """
    listed = {s.lines for s in spreads}
    k = spread_size(g)
    if sample is None:
        subsets = combinations(range(g.num_lines), k)
    else:
        rng = random.Random(seed)
        subsets = (tuple(sorted(rng.sample(range(g.num_lines), k))) for _ in range(sample))
    checked = 0
    mismatches = []
    for sub in subsets:
        checked += 1
        if is_spread(g, sub) != (sub in listed):
            mismatches.append(sub)
    return checked, mismatches


def is_packing(g: Geometry, spreads: list[Spread], members) -> bool:
    """q^2+q+1 distinct spreads whose line sets partition all lines."""
    members = list(members)
    for i in members:
        if not 0 <= i < len(spreads):
            raise IndexError(f"spread index {i} out of range")
    if len(members) != packing_size(g) or len(set(members)) != len(members):
        return False
    acc = 0
    for i in members:
        m = indices_to_mask(spreads[i].lines)
        if acc & m:
            return False
        acc |= m
    return acc == g.all_lines


def enumerate_packings(
    g: Geometry, spreads: list[Spread], executor: Executor | None = None
) -> list[Packing]:
    """All packings as sorted spread-index tuples, in lexicographic order."""
    _require_pg3(g)
    masks = [indices_to_mask(s.lines) for s in spreads]
    candidates = [[] for _ in range(g.num_lines)]
    for i, s in enumerate(spreads):
        for l in s.lines:
            candidates[l].append(i)
    covers = _exact_cover(masks, g.all_lines, candidates, executor)
    return [Packing(c, g.all_lines) for c in covers]


def clique_oracle_packings(g: Geometry, spreads: list[Spread]) -> list[tuple[int, ...]]:
    """Oracle: (q^2+q+1)-cliques of the spread-disjointness graph.

    Such a clique covers every line, so it is maximal and appears among the
    maximal cliques networkx enumerates.
    """
    k = packing_size(g)
    sets = [frozenset(s.lines) for s in spreads]
    G = nx.Graph()
    G.add_nodes_from(range(len(spreads)))
    G.add_edges_from(
        (i, j) for i, j in combinations(range(len(spreads)), 2) if sets[i].isdisjoint(sets[j])
    )
    return sorted(tuple(sorted(c)) for c in nx.find_cliques(G) if len(c) == k)


def line_regularity(g: Geometry, spreads: list[Spread]) -> Counter:
    """Number of spreads through each line."""
    c = Counter({l: 0 for l in range(g.num_lines)})
    c.update(l for s in spreads for l in s.lines)
    return c


def spread_regularity(spreads: list[Spread], packings: list[Packing]) -> Counter:
    """Number of packings containing each spread."""
    c = Counter({i: 0 for i in range(len(spreads))})
    c.update(i for p in packings for i in p.spreads)
    return c
