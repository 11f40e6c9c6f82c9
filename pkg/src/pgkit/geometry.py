"""Incidence structures: PG(n, q) built from GF(q)^(n+1), or loaded from text.

Point and line sets are stored as int bitmasks (bit i = point i, or line i),
so disjointness and cover tests are single AND/OR operations.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .gf import FieldError, FieldSpec, field_make


class GeometryError(ValueError):
    """Invalid incidence structure or unsupported construction."""


class IncidenceFormatError(GeometryError):
    """Malformed incidence text; ``row`` is the 1-based line number in the file."""

    def __init__(self, message: str, row: int | None = None):
        self.row = row
        super().__init__(f"row {row}: {message}" if row is not None else message)


class _SameLine:
    __slots__ = ()

    def __repr__(self) -> str:
        return "SAME_LINE"

    def __bool__(self) -> bool:
        return False

    def __reduce__(self):
        return "SAME_LINE"


#: Returned by :func:`intersect_in` when both arguments are the same line.
SAME_LINE = _SameLine()


@dataclass(frozen=True)
class ProjPoint:
    index: int
    coords: tuple[int, ...]


@dataclass(frozen=True)
class LineRec:
    index: int
    points: int
    basis: tuple[int, int] | None = None

    @property
    def point_list(self) -> tuple[int, ...]:
        return mask_to_indices(self.points)


@dataclass(frozen=True, eq=False)
class Geometry:
    """Immutable incidence structure.

    ``lines_through[p]`` is a bitmask over line indices and
    ``line_through_table[a, b]`` the line joining distinct points a and b
    (-1 on the diagonal).  Both are derived from ``lines``.
    """

    n: int
    q: int
    num_points: int
    num_lines: int
    lines: tuple[LineRec, ...]
    lines_through: tuple[int, ...] = field(repr=False)
    line_through_table: np.ndarray = field(repr=False)
    provenance: str
    points: tuple[ProjPoint, ...] | None = field(default=None, repr=False)
    field_spec: FieldSpec | None = field(default=None, repr=False)

    @property
    def line_size(self) -> int:
        return self.lines[0].points.bit_count()

    @property
    def order(self) -> int:
        """q, falling back to (points per line - 1) for undeclared orders."""
        return self.q or self.line_size - 1

    @property
    def constructed(self) -> bool:
        return self.provenance == "constructed"

    @property
    def all_points(self) -> int:
        return (1 << self.num_points) - 1

    @property
    def all_lines(self) -> int:
        return (1 << self.num_lines) - 1

    def line_masks(self) -> list[int]:
        return [l.points for l in self.lines]

    def line_points(self, l: int) -> tuple[int, ...]:
        return self.lines[l].point_list

    def incidence_key(self) -> tuple[tuple[int, ...], ...]:
        """Labelled incidence, used to compare geometries for equality."""
        return tuple(l.point_list for l in self.lines)

    def point_index(self, coords) -> int:
        if self.points is None or self.field_spec is None:
            raise GeometryError("geometry has no coordinates")
        return self._coord_index[normalize(self.field_spec, coords)]

    @property
    def _coord_index(self) -> dict[tuple[int, ...], int]:
        cache = self.__dict__.get("_coord_cache")
        if cache is None:
            cache = {p.coords: p.index for p in self.points or ()}
            object.__setattr__(self, "_coord_cache", cache)
        return cache

    def __reduce__(self):
        if self.constructed:
            return (build_pg, (self.n, self.q))
        return (_from_rows, (self.incidence_key(), self.provenance))

    def __repr__(self) -> str:
        label = f"PG({self.n},{self.q})" if self.n else "incidence structure"
        return (
            f"<Geometry {label}: {self.num_points} points, {self.num_lines} lines, "
            f"{self.provenance}>"
        )


def mask_to_indices(mask: int) -> tuple[int, ...]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return tuple(out)


def indices_to_mask(indices) -> int:
    m = 0
    for i in indices:
        m |= 1 << i
    return m


def pg_counts(n: int, q: int) -> tuple[int, int, int]:
    """(points, lines, points per line) of PG(n, q)."""
    points = (q ** (n + 1) - 1) // (q - 1)
    per_line = q + 1
    # each line is determined by any of its (q+1)q ordered point pairs
    lines = points * (points - 1) // (per_line * q)
    return points, lines, per_line


def normalize(F: FieldSpec, coords) -> tuple[int, ...]:
    """Scale a nonzero vector so its leftmost nonzero coordinate is 1."""
    for c in coords:
        if c:
            s = F.inv(c)
            return tuple(F.mul(s, x) for x in coords)
    raise GeometryError("zero vector is not a projective point")


def _assemble(
    rows: list[tuple[int, ...]],
    num_points: int,
    *,
    n: int,
    q: int,
    provenance: str,
    points=None,
    field_spec=None,
    bases=None,
    row_numbers=None,
) -> Geometry:
    table = np.full((num_points, num_points), -1, dtype=np.int32)
    through = [0] * num_points
    recs = []
    for li, pts in enumerate(rows):
        for a, b in itertools.combinations(pts, 2):
            if table[a, b] != -1:
                other = int(table[a, b])
                row = row_numbers[li] if row_numbers else None
                raise IncidenceFormatError(
                    f"points {a} and {b} already lie on line {other}; "
                    "two lines may share at most one point",
                    row,
                )
            table[a, b] = table[b, a] = li
        for p in pts:
            through[p] |= 1 << li
        recs.append(LineRec(li, indices_to_mask(pts), bases[li] if bases else None))
    table.setflags(write=False)
    return Geometry(
        n=n,
        q=q,
        num_points=num_points,
        num_lines=len(rows),
        lines=tuple(recs),
        lines_through=tuple(through),
        line_through_table=table,
        provenance=provenance,
        points=points,
        field_spec=field_spec,
    )


def build_pg(n: int, q: int) -> Geometry:
    """Construct PG(n, q) for n in {2, 3}.

    Points are the normalized vectors of GF(q)^(n+1) in lexicographic order;
    lines are indexed lexicographically by their sorted point tuples.
    """
    if n not in (2, 3):
        raise GeometryError(f"unsupported dimension n={n}; expected 2 or 3")
    try:
        F = field_make(q)
    except FieldError as exc:
        raise GeometryError(f"unsupported order q={q}: {exc}") from None
    vecs = [v for v in itertools.product(range(q), repeat=n + 1) if any(v)]
    coords = sorted({normalize(F, v) for v in vecs})
    index = {c: i for i, c in enumerate(coords)}
    npts = len(coords)
    seen = np.zeros((npts, npts), dtype=bool)
    found: list[tuple[tuple[int, ...], tuple[int, int]]] = []
    nonzero = range(1, q)
    for a in range(npts):
        va = coords[a]
        for b in range(a + 1, npts):
            if seen[a, b]:
                continue
            vb = coords[b]
            pts = {a, b}
            for lam in nonzero:
                for mu in range(q):
                    w = tuple(F.add(F.mul(mu, x), F.mul(lam, y)) for x, y in zip(va, vb))
                    pts.add(index[normalize(F, w)])
            line = tuple(sorted(pts))
            for x, y in itertools.combinations(line, 2):
                seen[x, y] = True
            found.append((line, (a, b)))
    found.sort()
    points = tuple(ProjPoint(i, c) for i, c in enumerate(coords))
    return _assemble(
        [l for l, _ in found],
        npts,
        n=n,
        q=q,
        provenance="constructed",
        points=points,
        field_spec=F,
        bases=[b for _, b in found],
    )


def _infer_pg(num_points: int, num_lines: int, size: int) -> tuple[int, int]:
    q = size - 1
    for n in (2, 3):
        if q >= 2 and pg_counts(n, q) == (num_points, num_lines, size):
            return n, q
    return 0, 0


def _from_rows(rows, provenance: str, row_numbers=None) -> Geometry:
    num_points = 1 + max(max(r) for r in rows)
    n, q = _infer_pg(num_points, len(rows), len(rows[0]))
    return _assemble(
        [tuple(r) for r in rows],
        num_points,
        n=n,
        q=q,
        provenance=provenance,
        row_numbers=row_numbers,
    )


def load_incidence(text: str, name: str = "<string>") -> Geometry:
    """Parse incidence text: one row of point indices per line.

    Blank rows and rows starting with '#' are skipped and do not shift line
    indices.  When the counts match PG(2, q) or PG(3, q) for q = line size - 1
    the order and dimension are recorded, otherwise both stay 0.

    Raises:
        IncidenceFormatError: with the offending row number.
    """
    rows: list[tuple[int, ...]] = []
    row_numbers: list[int] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        s = raw.strip()
        if not s or s.startswith("#"):
            continue
        pts = []
        for tok in s.split():
            if not tok.isdigit():
                raise IncidenceFormatError(f"non-numeric token {tok!r}", lineno)
            pts.append(int(tok))
        if len(set(pts)) != len(pts):
            raise IncidenceFormatError(f"duplicate point in row {s!r}", lineno)
        if rows and len(pts) != len(rows[0]):
            raise IncidenceFormatError(
                f"row has {len(pts)} points, expected {len(rows[0])}", lineno
            )
        if len(pts) < 2:
            raise IncidenceFormatError("a line needs at least two points", lineno)
        rows.append(tuple(sorted(pts)))
        row_numbers.append(lineno)
    if not rows:
        raise IncidenceFormatError("no lines in incidence data")
    g = _from_rows(rows, f"loaded({name})", row_numbers)
    missing = g.all_points & ~indices_to_mask(p for r in rows for p in r)
    if missing:
        raise IncidenceFormatError(f"points {list(mask_to_indices(missing))} lie on no line")
    return g


def load_incidence_file(path) -> Geometry:
    path = Path(path)
    return load_incidence(path.read_text(), name=path.name)


def _check_point(g: Geometry, p: int) -> None:
    if not 0 <= p < g.num_points:
        raise IndexError(f"point index {p} out of range [0, {g.num_points})")


def _check_line(g: Geometry, l: int) -> None:
    if not 0 <= l < g.num_lines:
        raise IndexError(f"line index {l} out of range [0, {g.num_lines})")


def incid(g: Geometry, p: int, l: int) -> bool:
    _check_point(g, p)
    _check_line(g, l)
    return bool(g.lines[l].points >> p & 1)


def line_through(g: Geometry, a: int, b: int) -> int:
    """The unique line on distinct points a and b."""
    _check_point(g, a)
    _check_point(g, b)
    if a == b:
        raise GeometryError(f"line through P{a} and P{b} is not unique (same point)")
    l = int(g.line_through_table[a, b])
    if l < 0:
        raise GeometryError(f"no line through P{a} and P{b}")
    return l


def intersect_in(g: Geometry, l1: int, l2: int):
    """Common point of two lines, None if disjoint, SAME_LINE if l1 == l2."""
    _check_line(g, l1)
    _check_line(g, l2)
    if l1 == l2:
        return SAME_LINE
    common = g.lines[l1].points & g.lines[l2].points
    if not common:
        return None
    return (common & -common).bit_length() - 1


def pg32_fixture_text() -> str:
    """Bundled PG(3,2) incidence file in the reference labelling."""
    return (Path(__file__).parent / "data" / "pg32.txt").read_text()


def load_pg32() -> Geometry:
    return load_incidence(pg32_fixture_text(), name="pg32.txt")
