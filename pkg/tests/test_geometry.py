import itertools

import pytest

from pgkit import (
    SAME_LINE,
    GeometryError,
    IncidenceFormatError,
    build_pg,
    incid,
    intersect_in,
    line_through,
    load_incidence,
)
from pgkit.export import emit_incidence_txt
from pgkit.geometry import load_incidence_file, normalize, pg32_fixture_text, pg_counts

KNOWN_COUNTS = [
    (2, 2, 7, 7, 3),
    (2, 3, 13, 13, 4),
    (2, 5, 31, 31, 6),
    (3, 2, 15, 35, 3),
    (3, 3, 40, 130, 4),
    (3, 4, 85, 357, 5),
]


@pytest.mark.parametrize("n, q, pts, lines, per", KNOWN_COUNTS)
def test_counts(n, q, pts, lines, per):
    g = build_pg(n, q)
    assert (g.num_points, g.num_lines, g.line_size) == (pts, lines, per)
    assert pg_counts(n, q) == (pts, lines, per)
    assert all(l.points.bit_count() == per for l in g.lines)


@pytest.mark.parametrize("q", [2, 3, 4])
def test_pg3_closed_forms(q):
    g = build_pg(3, q)
    assert g.num_points == (q * q + 1) * (q + 1)
    assert g.num_lines == (q * q + q + 1) * (q * q + 1)
    assert {m.bit_count() for m in g.lines_through} == {q * q + q + 1}


@pytest.mark.parametrize("n, q", [(1, 2), (4, 2), (3, 6)])
def test_build_unsupported(n, q):
    with pytest.raises(GeometryError):
        build_pg(n, q)


def test_points_normalized_and_sorted():
    g = build_pg(3, 3)
    coords = [p.coords for p in g.points]
    assert coords == sorted(coords)
    for c in coords:
        first = next(x for x in c if x)
        assert first == 1
    assert g.point_index((0, 0, 2, 2)) == g.point_index((0, 0, 1, 1))


def test_lines_lexicographic_and_spanned():
    g = build_pg(3, 3)
    F = g.field_spec
    keys = [l.point_list for l in g.lines]
    assert keys == sorted(keys)
    for rec in g.lines:
        a, b = (g.points[i].coords for i in rec.basis)
        span = {
            g.point_index(tuple(F.add(F.mul(s, x), F.mul(t, y)) for x, y in zip(a, b)))
            for s in range(3)
            for t in range(3)
            if s or t
        }
        assert span == set(rec.point_list)


def test_normalize_rejects_zero():
    g = build_pg(2, 2)
    with pytest.raises(GeometryError):
        normalize(g.field_spec, (0, 0, 0))


def test_pg32_fixture_rows(pg32):
    assert pg32.num_points == 15 and pg32.num_lines == 35
    assert (pg32.n, pg32.q) == (3, 2)
    assert pg32.line_points(0) == (0, 1, 2)
    assert pg32.line_points(1) == (0, 3, 4)
    assert pg32.line_points(4) == (0, 9, 10)


def test_incid(pg32):
    assert incid(pg32, 0, 0) is True
    assert incid(pg32, 3, 0) is False
    with pytest.raises(IndexError):
        incid(pg32, 15, 0)
    with pytest.raises(IndexError):
        incid(pg32, 0, 35)


def test_line_through(pg32):
    assert line_through(pg32, 0, 1) == 0
    assert line_through(pg32, 0, 9) == 4
    with pytest.raises(GeometryError):
        line_through(pg32, 0, 0)


def test_intersect_in(pg32):
    assert intersect_in(pg32, 0, 1) == 0
    assert intersect_in(pg32, 0, 19) is None
    assert intersect_in(pg32, 0, 0) is SAME_LINE
    assert not SAME_LINE


@pytest.mark.parametrize("n, q", [(2, 2), (2, 3), (3, 2), (3, 3)])
def test_unique_line_through_each_pair(n, q):
    g = build_pg(n, q)
    for a, b in itertools.combinations(range(g.num_points), 2):
        on_both = [l for l in range(g.num_lines) if incid(g, a, l) and incid(g, b, l)]
        assert on_both == [line_through(g, a, b)] == [line_through(g, b, a)]
        assert incid(g, a, line_through(g, a, b))


def test_derived_tables_consistent(pg32):
    for p in range(pg32.num_points):
        expected = sum(1 << l for l in range(pg32.num_lines) if incid(pg32, p, l))
        assert pg32.lines_through[p] == expected


@pytest.mark.parametrize(
    "text, row",
    [
        ("", None),
        ("# only a comment\n\n", None),
        ("0 1 2\n0 1 3\n", 2),
        ("0 1 2\n3 3 4\n", 2),
        ("0 1 2\n0 3\n", 2),
        ("0 1 x\n", 1),
        ("0 1 2\n# c\n0 3 -4\n", 3),
    ],
)
def test_load_errors(text, row):
    with pytest.raises(IncidenceFormatError) as err:
        load_incidence(text)
    assert err.value.row == row


def test_comments_do_not_shift_indices():
    g = load_incidence("# header\n0 1 2\n\n# mid\n0 3 4\n1 3 5\n")
    assert g.line_points(1) == (0, 3, 4)
    assert g.num_lines == 3 and (g.n, g.q) == (0, 0)


def test_row_order_normalized():
    g = load_incidence("1 0 2\n4 3 0\n0 6 5\n3 1 5\n1 6 4\n2 5 4\n3 2 6\n")
    assert g.line_points(0) == (0, 1, 2)
    assert g.line_points(1) == (0, 3, 4)
    assert (g.n, g.q) == (2, 2)


def test_round_trip_constructed():
    for n, q in [(2, 2), (3, 2), (2, 5), (3, 3)]:
        g = build_pg(n, q)
        h = load_incidence(emit_incidence_txt(g))
        assert h.incidence_key() == g.incidence_key()
        assert (h.n, h.q) == (n, q)


def test_round_trip_fixture_bytes(pg32):
    body = "".join(r + "\n" for r in pg32_fixture_text().splitlines() if r and not r.startswith("#"))
    assert emit_incidence_txt(pg32) == body


def test_load_file(tmp_path):
    p = tmp_path / "plane.txt"
    p.write_text(emit_incidence_txt(build_pg(2, 2)))
    g = load_incidence_file(p)
    assert g.provenance == "loaded(plane.txt)"
    assert (g.n, g.q) == (2, 2)


def test_pickle_round_trip(pg32, pg32c):
    import pickle

    for g in (pg32, pg32c):
        h = pickle.loads(pickle.dumps(g))
        assert h.incidence_key() == g.incidence_key()
        assert h.provenance == g.provenance
    assert pickle.loads(pickle.dumps(SAME_LINE)) is SAME_LINE
