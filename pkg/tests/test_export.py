import json

import jsonschema
import pytest

from pgkit import axioms as ax
from pgkit import build_pg, load_incidence
from pgkit import export as ex
from pgkit import symmetry as sy

POINT_DECL = """Inductive Point :=
| P0 | P1 | P2 | P3 | P4 | P5 | P6 | P7 | P8 | P9
| P10 | P11 | P12 | P13 | P14 ."""

LINE_DECL = """Inductive Line :=
| L0 | L1 | L2 | L3 | L4 | L5 | L6 | L7 | L8 | L9
| L10 | L11 | L12 | L13 | L14 | L15 | L16 | L17 | L18 | L19
| L20 | L21 | L22 | L23 | L24 | L25 | L26 | L27 | L28 | L29
| L30 | L31 | L32 | L33 | L34 ."""

INCID_HEAD = """Definition incid_lp (p:Point) (l:Line) : bool :=
match l with
| L0 => match p with P0 | P1 | P2 => true | _ => false end
| L1 => match p with P0 | P3 | P4 => true | _ => false end
| L2 => match p with P0 | P5 | P6 => true | _ => false end
| L3 => match p with P0 | P7 | P8 => true | _ => false end"""

# the reference listing writes this clause as "P0 | P10 | P9"; points are emitted ascending
L4_CLAUSE = "| L4 => match p with P0 | P10 | P9 => true | _ => false end"

SPREAD_DEFS = """Definition S0 := [ L0; L19; L24; L28; L33 ].
Definition S1 := [ L0; L19; L26; L29; L32 ]."""


@pytest.fixture(scope="module")
def source(pg32, spreads, packings):
    return ex.emit_proof_source(pg32, spreads, packings)


def contains_tokens(haystack, needle):
    h, n = ex.tokens(haystack), ex.tokens(needle)
    return any(h[i : i + len(n)] == n for i in range(len(h) - len(n) + 1))


@pytest.mark.parametrize("fragment", [POINT_DECL, LINE_DECL, INCID_HEAD, SPREAD_DEFS])
def test_reference_fragments_token_for_token(source, fragment):
    assert contains_tokens(source, fragment)


def test_l4_clause_up_to_point_order(source):
    clause = next(l for l in source.splitlines() if l.startswith("| L4 =>"))
    assert clause == "| L4 => match p with P0 | P9 | P10 => true | _ => false end"
    pts = lambda s: sorted(t for t in ex.tokens(s) if t.startswith("P"))
    assert pts(clause) == pts(L4_CLAUSE)
    assert not contains_tokens(source, L4_CLAUSE)


def test_spreads_list(source):
    line = next(l for l in source.splitlines() if l.startswith("Definition spreads"))
    toks = ex.tokens(line)
    assert toks[:6] == ["Definition", "spreads", ":=", "[", "S0", ";"]
    assert toks[-4:] == [";", "S55", "]", "."]
    assert "Definition K239 := [" in source


def test_source_validates(source):
    assert ex.validate_proof_source(source) == []


def test_validator_catches_problems(source):
    assert ex.validate_proof_source(source.replace("end.", "end", 1))
    assert ex.validate_proof_source(source.replace("[ L0; L19", "[ L0; L99", 1))
    assert ex.validate_proof_source(source.replace("| P14 .", "| P13 .", 1))
    assert ex.validate_proof_source(source + "Definition S0 := [ L0 ].\n")
    assert ex.validate_proof_source(source.replace("[ S0 ;", "[ ( S0 ;", 1))


def test_skolem_emission(pg32):
    sk = ax.skolem_tables(pg32)
    cfg = ex.EmissionConfig(include=frozenset({"geometry", "axioms-witnesses"}))
    text = ex.emit_proof_source(pg32, cfg=cfg, skolem=sk)
    assert ex.validate_proof_source(text) == []
    assert "| P0, P1 => L0" in text
    assert text.count("=> (L") == 6545 * 6 + 1  # plus the default clause
    with pytest.raises(ex.EmissionError):
        ex.emit_proof_source(pg32, cfg=cfg)


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(point_prefix="L"),
        dict(spread_prefix="K"),
        dict(point_prefix="9x"),
        dict(line_prefix="f_a"),
        dict(include=frozenset({"geometry", "proofs"})),
    ],
)
def test_name_collisions(pg32, spreads, packings, kwargs):
    with pytest.raises(ex.EmissionError):
        ex.emit_proof_source(pg32, spreads, packings, ex.EmissionConfig(**kwargs))


def test_custom_prefixes(pg32, spreads):
    cfg = ex.EmissionConfig(point_prefix="Pt", line_prefix="Ln", spread_prefix="Sp")
    text = ex.emit_proof_source(pg32, spreads, cfg=cfg)
    assert "Definition Sp0 := [ Ln0; Ln19; Ln24; Ln28; Ln33 ]." in text
    assert ex.validate_proof_source(text) == []


def test_emission_is_deterministic(pg32, spreads, packings):
    a = ex.emit_proof_source(pg32, spreads, packings)
    b = ex.emit_proof_source(pg32, list(spreads), list(packings))
    assert a == b


@pytest.mark.parametrize("n, q", [(2, 2), (2, 3), (3, 2), (3, 3), (3, 4)])
def test_incidence_round_trip(n, q):
    g = build_pg(n, q)
    text = ex.emit_incidence_txt(g)
    h = load_incidence(text)
    assert ex.emit_incidence_txt(h) == text
    assert h.incidence_key() == g.incidence_key()


def test_json_document(pg32, spreads, packings, gens):
    reports = ax.check_all(pg32)
    orbit = sy.orbits(pg32, spreads, gens)
    text = ex.emit_json(pg32, spreads, packings, reports, [orbit])
    doc = json.loads(text)
    jsonschema.validate(doc, ex.json_schema())
    assert doc["schema_version"] == ex.SCHEMA_VERSION
    assert doc["spreads"][0] == {"lines": [0, 19, 24, 28, 33]}
    assert '{"lines":[0,19,24,28,33]}' in text
    assert len(doc["packings"]) == 240
    assert text == ex.emit_json(pg32, spreads, packings, ax.check_all(pg32), [orbit])
    assert text.endswith("\n") and "seconds" not in text


def test_json_schema_rejects_bad_documents(pg32):
    doc = json.loads(ex.emit_json(pg32))
    schema = ex.json_schema()
    jsonschema.validate(doc, schema)
    doc["spreads"] = [{"lines": "0 19"}]
    with pytest.raises(jsonschema.ValidationError):
        jsonschema.validate(doc, schema)
