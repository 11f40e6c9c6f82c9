"""Collineations of PG(n, q), orbits of spreads and packings, and witnesses.

Group elements are kept as point permutations; a line permutation is
derived by sending each line to the line through the images of two of its
points.  Orbits and witnesses only ever use a generating set.  The full
group is materialized on request (PG(3,2) has 20160 elements).
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from itertools import product
from math import prod

from .enumeration import Packing, Spread, is_packing, is_spread
from .geometry import Geometry, GeometryError, indices_to_mask


@dataclass(frozen=True)
class Collineation:
    point_perm: tuple[int, ...]
    line_perm: tuple[int, ...]
    matrix: tuple[tuple[int, ...], ...] | None = None

    def to_dict(self) -> dict:
        d = {"point_perm": list(self.point_perm), "line_perm": list(self.line_perm)}
        if self.matrix is not None:
            d["matrix"] = [list(r) for r in self.matrix]
        return d


@dataclass(frozen=True)
class Isomorphism:
    """Incidence-preserving bijection from one geometry onto another."""

    point_map: tuple[int, ...]
    line_map: tuple[int, ...]


@dataclass
class OrbitReport:
    object_kind: str
    orbit_count: int
    orbit_sizes: list[int]
    representatives: list[int]
    class_of: list[int]
    group_order: int | None = None

    def to_dict(self) -> dict:
        return {
            "object_kind": self.object_kind,
            "orbit_count": self.orbit_count,
            "orbit_sizes": self.orbit_sizes,
            "representatives": self.representatives,
            "class_of": self.class_of,
            "group_order": self.group_order,
        }


def group_order_formula(n: int, q: int) -> int:
    """|PGL(n+1, q)|."""
    d = n + 1
    return prod(q**d - q**i for i in range(d)) // (q - 1)


def compose(s: tuple[int, ...], t: tuple[int, ...]) -> tuple[int, ...]:
    """s after t."""
    return tuple(s[x] for x in t)


def invert(s: tuple[int, ...]) -> tuple[int, ...]:
    inv = [0] * len(s)
    for i, x in enumerate(s):
        inv[x] = i
    return tuple(inv)


def line_perm_from_points(g: Geometry, pp: tuple[int, ...]) -> tuple[int, ...]:
    table = g.line_through_table
    out = []
    for rec in g.lines:
        a, b = rec.point_list[:2]
        out.append(int(table[pp[a], pp[b]]))
    return tuple(out)


def preserves_incidence(g: Geometry, pp, lp) -> bool:
    if sorted(pp) != list(range(g.num_points)) or sorted(lp) != list(range(g.num_lines)):
        return False
    for rec in g.lines:
        image = indices_to_mask(pp[p] for p in rec.point_list)
        if image != g.lines[lp[rec.index]].points:
            return False
    return True


def make_collineation(g: Geometry, pp, matrix=None) -> Collineation:
    pp = tuple(pp)
    return Collineation(pp, line_perm_from_points(g, pp), matrix)


def matrix_point_perm(g: Geometry, M) -> tuple[int, ...]:
    """Point permutation induced by an invertible matrix acting on column vectors."""
    F = g.field_spec
    perm = []
    for pt in g.points:
        w = []
        for row in M:
            acc = 0
            for m, x in zip(row, pt.coords):
                acc = F.add(acc, F.mul(m, x))
            w.append(acc)
        perm.append(g.point_index(w))
    if len(set(perm)) != len(perm):
        raise GeometryError("matrix is singular")
    return tuple(perm)


def _require_coords(g: Geometry) -> None:
    if not g.constructed:
        raise GeometryError(
            f"{g!r} has no coordinates; build the matching PG(n,q), call "
            "find_isomorphism(constructed, loaded) and transport its generators"
        )


def _additive_basis(q: int, p: int, k: int) -> list[int]:
    return [p**i for i in range(k)]


def _elementary(d: int, i: int, j: int, a: int):
    return tuple(tuple(1 if r == c else (a if (r, c) == (i, j) else 0) for c in range(d)) for r in range(d))


def _diag(d: int, w: int):
    return tuple(tuple((w if r == 0 else 1) if r == c else 0 for c in range(d)) for r in range(d))


def _perm_matrix(d: int, i: int, j: int):
    swap = {i: j, j: i}
    return tuple(tuple(1 if swap.get(r, r) == c else 0 for c in range(d)) for r in range(d))


def generator_matrices(g: Geometry, kind: str = "transvections"):
    """Matrices generating GL(n+1, q).

    ``transvections``: I + a E_ij for all i != j and a in an additive basis,
    plus diag(w, 1, ..., 1) for a primitive w.  ``permutations``: adjacent
    coordinate swaps, I + a E_01, and the same diagonal matrix.
    """
    _require_coords(g)
    F = g.field_spec
    d = g.n + 1
    basis = _additive_basis(F.q, F.p, F.k)
    mats = []
    if kind == "transvections":
        mats += [_elementary(d, i, j, a) for i, j in product(range(d), repeat=2) if i != j for a in basis]
    elif kind == "permutations":
        mats += [_perm_matrix(d, i, i + 1) for i in range(d - 1)]
        mats += [_elementary(d, 0, 1, a) for a in basis]
    else:
        raise ValueError(f"unknown generating set {kind!r}")
    if F.q > 2:
        mats.append(_diag(d, F.primitive_element()))
    return mats


def collineation_generators(g: Geometry, kind: str = "transvections") -> list[Collineation]:
    """Generators of PGL(n+1, q) as collineations, identity images dropped."""
    out = []
    seen = set()
    ident = tuple(range(g.num_points))
    for M in generator_matrices(g, kind):
        pp = matrix_point_perm(g, M)
        if pp == ident or pp in seen:
            continue
        seen.add(pp)
        out.append(make_collineation(g, pp, M))
    return out


def transport(
    target: Geometry, gens: list[Collineation], iso: Isomorphism
) -> list[Collineation]:
    """Conjugate collineations of a source geometry into ``target`` along ``iso``."""
    phi = iso.point_map
    phi_inv = invert(phi)
    return [make_collineation(target, compose(phi, compose(c.point_perm, phi_inv))) for c in gens]


def generators_for(g: Geometry, kind: str = "transvections") -> list[Collineation]:
    """Generators for constructed or loaded PG(n,q); loaded ones go through an isomorphism."""
    if g.constructed:
        return collineation_generators(g, kind)
    if not g.n:
        raise GeometryError(f"{g!r} does not have the counts of any PG(2,q) or PG(3,q)")
    from .geometry import build_pg

    twin = build_pg(g.n, g.q)
    iso = find_isomorphism(twin, g)
    if iso is None:
        raise GeometryError(f"{g!r} is not isomorphic to PG({g.n},{g.q})")
    return transport(g, collineation_generators(twin, kind), iso)


def collineation_group(
    g: Geometry, generators: list[Collineation] | None = None, max_order: int = 2_000_000
) -> list[Collineation]:
    """Closure of the generators under composition, identity first, in BFS order.

    Raises:
        GeometryError: for file-loaded geometries without explicit generators,
            or when the closure exceeds ``max_order``.
    """
    if generators is None:
        _require_coords(g)
        generators = collineation_generators(g)
    gens = [c.point_perm for c in generators]
    ident = tuple(range(g.num_points))
    seen = {ident}
    order = [ident]
    queue = deque(order)
    while queue:
        x = queue.popleft()
        for s in gens:
            y = compose(s, x)
            if y not in seen:
                seen.add(y)
                order.append(y)
                queue.append(y)
                if len(order) > max_order:
                    raise GeometryError(f"group larger than max_order={max_order}")
    return [make_collineation(g, pp) for pp in order]


def _spread_perm(g: Geometry, lp: tuple[int, ...], spreads: list[Spread]) -> tuple[int, ...]:
    index = {s.lines: i for i, s in enumerate(spreads)}
    return tuple(index[tuple(sorted(lp[l] for l in s.lines))] for s in spreads)


def apply(g: Geometry, c: Collineation, obj, spreads: list[Spread] | None = None):
    """Image of a spread (or of a packing, given the spread list) under ``c``."""
    if isinstance(obj, Spread):
        image = Spread(tuple(sorted(c.line_perm[l] for l in obj.lines)), obj.covered)
        assert is_spread(g, image.lines), "collineation mapped a spread to a non-spread"
        return image
    if isinstance(obj, Packing):
        if spreads is None:
            raise ValueError("applying to a packing needs the spread list")
        sp = _spread_perm(g, c.line_perm, spreads)
        image = Packing(tuple(sorted(sp[i] for i in obj.spreads)), obj.covered)
        assert is_packing(g, spreads, image.spreads), "collineation mapped a packing to a non-packing"
        return image
    raise TypeError(f"cannot apply a collineation to {type(obj).__name__}")


class _Action:
    """Generator action on a list of spreads or packings, by object index."""

    def __init__(self, g, objects, generators, spreads=None):
        self.g = g
        self.objects = objects
        self.generators = generators
        if objects and isinstance(objects[0], Packing):
            if spreads is None:
                raise ValueError("packing orbits need the spread list")
            self.kind = "packing"
            sperms = [_spread_perm(g, c.line_perm, spreads) for c in generators]
            keys = [o.spreads for o in objects]
            maps = sperms
        else:
            self.kind = "spread"
            keys = [o.lines for o in objects]
            maps = [c.line_perm for c in generators]
        index = {k: i for i, k in enumerate(keys)}
        # images[j][i] = index of generator j applied to object i
        self.images = [
            [index[tuple(sorted(m[x] for x in k))] for k in keys] for m in maps
        ]


def orbits(
    g: Geometry,
    objects: list,
    generators: list[Collineation],
    spreads: list[Spread] | None = None,
    group_order: int | None = None,
) -> OrbitReport:
    """Orbits of spreads or packings under the group generated by ``generators``."""
    act = _Action(g, objects, generators, spreads)
    n = len(objects)
    class_of = [-1] * n
    reps, sizes = [], []
    for start in range(n):
        if class_of[start] != -1:
            continue
        oid = len(reps)
        class_of[start] = oid
        queue = deque([start])
        size = 0
        while queue:
            i = queue.popleft()
            size += 1
            for img in act.images:
                j = img[i]
                if class_of[j] == -1:
                    class_of[j] = oid
                    queue.append(j)
        reps.append(start)
        sizes.append(size)
    return OrbitReport(act.kind, len(reps), sorted(sizes), reps, class_of, group_order)


def _word_to(act: _Action, a: int, b: int) -> list[int] | None:
    parent = {a: None}
    queue = deque([a])
    while queue:
        i = queue.popleft()
        if i == b:
            break
        for j, img in enumerate(act.images):
            k = img[i]
            if k not in parent:
                parent[k] = (i, j)
                queue.append(k)
    if b not in parent:
        return None
    word = []
    node = b
    while parent[node] is not None:
        node, j = parent[node]
        word.append(j)
    return word[::-1]


def find_witness(
    g: Geometry,
    objects: list,
    a: int,
    b: int,
    generators: list[Collineation],
    spreads: list[Spread] | None = None,
    _action: _Action | None = None,
) -> Collineation | None:
    """A collineation carrying object ``a`` onto object ``b``, or None.

    Found by BFS over generator images from ``a``; the generator word along
    the path is composed and the result re-verified.
    """
    act = _action or _Action(g, objects, generators, spreads)
    word = _word_to(act, a, b)
    if word is None:
        return None
    pp = tuple(range(g.num_points))
    for j in word:
        pp = compose(generators[j].point_perm, pp)
    c = make_collineation(g, pp)
    if apply(g, c, objects[a], spreads) != objects[b]:
        raise AssertionError(f"witness for {a} -> {b} does not verify")
    return c


def witness_chain(
    g: Geometry, objects: list, generators: list[Collineation], spreads: list[Spread] | None = None
) -> list[Collineation | None]:
    """Witnesses i -> (i + 1) mod len(objects) for every i."""
    act = _Action(g, objects, generators, spreads)
    n = len(objects)
    return [find_witness(g, objects, i, (i + 1) % n, generators, spreads, act) for i in range(n)]


def find_isomorphism(g1: Geometry, g2: Geometry) -> Isomorphism | None:
    """Incidence-preserving bijection g1 -> g2, or None.

    Backtracks over images of g1's points in index order, trying candidate
    images in increasing order, so g vs g yields the identity.  Each new
    pair (x -> y) fixes the images of the lines joining x to earlier points;
    conflicting line images prune the branch.
    """
    if (g1.num_points, g1.num_lines) != (g2.num_points, g2.num_lines):
        return None
    if g1.line_size != g2.line_size:
        return None
    deg1 = [m.bit_count() for m in g1.lines_through]
    deg2 = [m.bit_count() for m in g2.lines_through]
    if sorted(deg1) != sorted(deg2):
        return None
    n = g1.num_points
    t1 = g1.line_through_table.tolist()
    t2 = g2.line_through_table.tolist()
    phi = [-1] * n
    used = [False] * n
    psi: dict[int, int] = {}
    psi_inv: dict[int, int] = {}

    def assign(x: int, y: int, added: list[int]) -> bool:
        for u in range(x):
            l1 = t1[x][u]
            l2 = t2[y][phi[u]]
            img = psi.get(l1)
            if img is not None:
                if img != l2:
                    return False
                continue
            if l2 in psi_inv:
                return False
            psi[l1] = l2
            psi_inv[l2] = l1
            added.append(l1)
        return True

    def rec(x: int) -> bool:
        if x == n:
            return True
        for y in range(n):
            if used[y] or deg2[y] != deg1[x]:
                continue
            added: list[int] = []
            if assign(x, y, added):
                phi[x] = y
                used[y] = True
                if rec(x + 1):
                    return True
                used[y] = False
                phi[x] = -1
            for l1 in added:
                del psi_inv[psi.pop(l1)]
        return False

    if not rec(0):
        return None
    pm = tuple(phi)
    lm = tuple(t2[pm[r.point_list[0]]][pm[r.point_list[1]]] for r in g1.lines)
    for r in g1.lines:
        if indices_to_mask(pm[p] for p in r.point_list) != g2.lines[lm[r.index]].points:
            return None
    return Isomorphism(pm, lm)
