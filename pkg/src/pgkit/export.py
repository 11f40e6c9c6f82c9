"""Text, JSON and Coq emission for geometries, spreads and packings."""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from itertools import permutations
from pathlib import Path

from .geometry import Geometry

SCHEMA_VERSION = 1

INCLUDE_ALL = frozenset({"geometry", "axioms-witnesses", "spreads", "packings"})
_FIXED_NAMES = {
    "Point", "Line", "incid_lp", "spreads", "packings", "f_a1", "f_a3_3",
    "p", "l", "a", "b", "l1", "l2", "l3",
}
_COQ_KEYWORDS = {
    "as", "at", "cofix", "else", "end", "exists", "exists2", "fix", "for", "forall",
    "fun", "if", "IF", "in", "let", "match", "mod", "Prop", "return", "Set", "then",
    "Type", "using", "where", "with", "true", "false", "bool", "list",
}
_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_']*\Z")


class EmissionError(ValueError):
    pass


@dataclass(frozen=True)
class EmissionConfig:
    format: str = "coq"
    point_prefix: str = "P"
    line_prefix: str = "L"
    spread_prefix: str = "S"
    packing_prefix: str = "K"
    include: frozenset = field(default=frozenset({"geometry", "spreads", "packings"}))

    def names(self, g: Geometry, n_spreads: int = 0, n_packings: int = 0) -> dict[str, list[str]]:
        """Identifiers for every object; raises EmissionError on any collision."""
        groups = {
            "points": [f"{self.point_prefix}{i}" for i in range(g.num_points)],
            "lines": [f"{self.line_prefix}{i}" for i in range(g.num_lines)],
            "spreads": [f"{self.spread_prefix}{i}" for i in range(n_spreads)],
            "packings": [f"{self.packing_prefix}{i}" for i in range(n_packings)],
        }
        seen: dict[str, str] = {}
        for kind, names in groups.items():
            for name in names:
                if not _IDENT.match(name) or name in _COQ_KEYWORDS:
                    raise EmissionError(f"{name!r} is not a usable identifier")
                if name in _FIXED_NAMES:
                    raise EmissionError(f"{kind} name {name!r} collides with a generated definition")
                if name in seen:
                    raise EmissionError(f"{kind} name {name!r} collides with {seen[name]}")
                seen[name] = kind
        unknown = set(self.include) - INCLUDE_ALL
        if unknown:
            raise EmissionError(f"unknown include items {sorted(unknown)}")
        return groups


def emit_incidence_txt(g: Geometry) -> str:
    return "".join(" ".join(map(str, rec.point_list)) + "\n" for rec in g.lines)


def _constructor_rows(names: list[str], per_row: int = 10) -> list[str]:
    return [
        "".join(f"| {n} " for n in names[i : i + per_row]).rstrip() + (" ." if i + per_row >= len(names) else " ")
        for i in range(0, len(names), per_row)
    ]


def _list(items: list[str], sep: str) -> str:
    return "[ " + sep.join(items) + " ]"


def emit_proof_source(
    g: Geometry,
    spreads=(),
    packings=(),
    cfg: EmissionConfig | None = None,
    skolem=None,
) -> str:
    """Coq source: inductive points and lines, ``incid_lp``, spread and packing lists.

    ``skolem`` (an :class:`pgkit.axioms.SkolemTables`) is required when
    ``cfg.include`` contains ``axioms-witnesses``.
    """
    cfg = cfg or EmissionConfig()
    names = cfg.names(g, len(spreads), len(packings))
    P, L, S, K = names["points"], names["lines"], names["spreads"], names["packings"]
    out = ["(* Generated by pgkit. *)", "Require Import List.", "Import ListNotations.", ""]
    if "geometry" in cfg.include:
        out += ["Inductive Point :="] + _constructor_rows(P) + [""]
        out += ["Inductive Line :="] + _constructor_rows(L) + [""]
        out += ["Definition incid_lp (p:Point) (l:Line) : bool := ", "match l with "]
        for rec in g.lines:
            pts = " | ".join(P[p] for p in rec.point_list)
            out.append(f"| {L[rec.index]} => match p with {pts} => true | _ => false end")
        out += ["end.", ""]
    if "axioms-witnesses" in cfg.include:
        if skolem is None:
            raise EmissionError("axioms-witnesses requested without skolem tables")
        out += ["Definition f_a1 (a b:Point) : Line :=", "match a, b with"]
        for (a, b), l in skolem.f_a1.items():
            out.append(f"| {P[a]}, {P[b]} => {L[l]}")
        out += [f"| _, _ => {L[0]}", "end.", ""]
        out += [
            "Definition f_a3_3 (l1 l2 l3:Line) : Line * (Point * Point * Point) :=",
            "match l1, l2, l3 with",
        ]
        entries = []
        for key, _ in skolem.f_a3_3.items():
            for t in permutations(key):
                entries.append(t)
        for t in sorted(entries):
            l4, (j1, j2, j3) = skolem.f_a3_3(*t)
            out.append(
                f"| {L[t[0]]}, {L[t[1]]}, {L[t[2]]} => ({L[l4]}, ({P[j1]}, {P[j2]}, {P[j3]}))"
            )
        out += [f"| _, _, _ => ({L[0]}, ({P[0]}, {P[0]}, {P[0]}))", "end.", ""]
    if "spreads" in cfg.include and spreads:
        for i, s in enumerate(spreads):
            out.append(f"Definition {S[i]} := {_list([L[l] for l in s.lines], '; ')}.")
        out += [f"Definition spreads := {_list(S, ' ; ')}.", ""]
    if "packings" in cfg.include and packings:
        for i, p in enumerate(packings):
            out.append(f"Definition {K[i]} := {_list([S[s] for s in p.spreads], '; ')}.")
        out += [f"Definition packings := {_list(K, ' ; ')}.", ""]
    return "\n".join(out).rstrip("\n") + "\n"


_TOKEN = re.compile(r"\(\*.*?\*\)|:=|=>|[A-Za-z_][A-Za-z0-9_']*|\d+|[|\[\];(),:*.]|\S", re.S)
_BUILTINS = {"List", "ListNotations", "bool", "true", "false", "_"}


def tokens(text: str) -> list[str]:
    """Coq-ish tokens with comments removed."""
    return [t for t in _TOKEN.findall(text) if not t.startswith("(*")]


def validate_proof_source(text: str) -> list[str]:
    """Structural checks on emitted Coq; returns a list of problems (empty if well formed).

    Checks sentence structure, bracket and match/end balance, unique
    constructors, and that every identifier is declared before use.
    """
    problems = []
    toks = tokens(text)
    sentences: list[list[str]] = [[]]
    for t in toks:
        if t == ".":
            sentences.append([])
        else:
            sentences[-1].append(t)
    if sentences[-1]:
        problems.append("trailing text without terminating '.'")
    declared = set(_BUILTINS)
    keywords = {"match", "with", "end", "Require", "Import", "Inductive", "Definition"}
    for sent in sentences[:-1]:
        if not sent:
            problems.append("empty sentence")
            continue
        head = sent[0]
        if head in ("Require", "Import"):
            continue
        if head not in ("Inductive", "Definition") or len(sent) < 3:
            problems.append(f"unexpected sentence start {head!r}")
            continue
        name = sent[1]
        if name in declared:
            problems.append(f"{name} declared twice")
        local = set()
        if head == "Inductive":
            if sent[2] != ":=":
                problems.append(f"Inductive {name}: missing ':='")
            ctors = [t for t in sent[3:] if t != "|"]
            if any(sent[i] != "|" for i in range(3, len(sent), 2)):
                problems.append(f"Inductive {name}: constructors must be '|'-separated")
            if len(set(ctors)) != len(ctors):
                problems.append(f"Inductive {name}: duplicate constructors")
            declared.add(name)
            declared.update(ctors)
            continue
        body_start = sent.index(":=") if ":=" in sent else None
        if body_start is None:
            problems.append(f"Definition {name}: missing ':='")
            continue
        for t in sent[2:body_start]:
            if _IDENT.match(t) and t not in declared:
                local.add(t)
        depth = {"(": 0, "[": 0, "match": 0}
        for t in sent[body_start + 1 :]:
            if t in ("(", "["):
                depth[t] += 1
            elif t in (")", "]"):
                key = "(" if t == ")" else "["
                depth[key] -= 1
                if depth[key] < 0:
                    problems.append(f"Definition {name}: unbalanced {t!r}")
                    depth[key] = 0
            elif t == "match":
                depth["match"] += 1
            elif t == "end":
                depth["match"] -= 1
            elif _IDENT.match(t) and t not in declared | local | keywords:
                problems.append(f"Definition {name}: undeclared identifier {t!r}")
        if any(depth.values()):
            problems.append(f"Definition {name}: unbalanced brackets or match/end")
        declared.add(name)
    return problems


def emit_json(g: Geometry, spreads=(), packings=(), reports=(), orbits=()) -> str:
    """Byte-deterministic JSON document (fixed key order, compact separators)."""
    doc = {
        "schema_version": SCHEMA_VERSION,
        "geometry": {
            "n": g.n,
            "q": g.q,
            "num_points": g.num_points,
            "num_lines": g.num_lines,
            "provenance": g.provenance,
            "lines": [list(r.point_list) for r in g.lines],
        },
        "spreads": [{"lines": list(s.lines)} for s in spreads],
        "packings": [{"spreads": list(p.spreads)} for p in packings],
        "axioms": [r.to_dict() for r in reports],
        "orbits": [o.to_dict() for o in orbits],
    }
    return dumps(doc)


def dumps(obj) -> str:
    return json.dumps(obj, separators=(",", ":"), ensure_ascii=True) + "\n"


def json_schema() -> dict:
    return json.loads((Path(__file__).parent / "data" / "pgkit.schema.json").read_text())
