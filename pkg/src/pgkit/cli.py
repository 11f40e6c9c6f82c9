"""Command-line front end.

Exit codes: 0 success, 1 a check or self-test failed, 2 bad input.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import re
import sys
import time
from pathlib import Path

from . import __version__
from . import axioms as ax
from . import enumeration as en
from . import export as ex
from . import symmetry as sy
from ._parallel import make_executor, resolve_jobs
from .geometry import (
    Geometry,
    GeometryError,
    build_pg,
    load_incidence_file,
    pg_counts,
)

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2
FULL_GROUP_LIMIT = 100_000


class InputError(Exception):
    pass


class Run:
    """Per-invocation state: output directory, worker pool, manifest entry."""

    def __init__(self, args):
        self.args = args
        self.out = Path(args.out)
        self.out.mkdir(parents=True, exist_ok=True)
        self.jobs = resolve_jobs(args.jobs)
        self.executor = make_executor(self.jobs)
        self.timings: dict[str, float] = {}
        self.written: dict[str, str] = {}
        self.inputs: dict[str, str] = {}

    def stage(self, name):
        run = self

        class _Stage:
            def __enter__(self):
                self.t0 = time.perf_counter()

            def __exit__(self, *exc):
                run.timings[name] = round(time.perf_counter() - self.t0, 6)

        return _Stage()

    def write(self, name: str, text: str) -> Path:
        path = self.out / name
        path.write_text(text)
        self.written[name] = hashlib.sha256(text.encode()).hexdigest()
        return path

    def geometry(self) -> Geometry:
        a = self.args
        with self.stage("load"):
            if a.input is not None:
                path = Path(a.input)
                if not path.is_file():
                    raise InputError(f"no such file: {path}")
                self.inputs[str(path)] = hashlib.sha256(path.read_bytes()).hexdigest()
                return load_incidence_file(path)
            if a.n is None or a.q is None:
                raise InputError("give an incidence file or both --n and --q")
            return build_pg(a.n, a.q)

    def finish(self) -> None:
        if self.executor is not None:
            self.executor.shutdown()
        manifest_path = self.out / "manifest.json"
        manifest = {"tool_version": __version__, "runs": {}}
        if manifest_path.exists():
            try:
                manifest = json.loads(manifest_path.read_text())
            except json.JSONDecodeError:
                pass
        params = {
            k: v for k, v in sorted(vars(self.args).items()) if k not in ("func", "out", "jobs")
        }
        manifest["tool_version"] = __version__
        manifest.setdefault("runs", {})[self.args.command] = {
            "command": self.args.command,
            "parameters": params,
            "jobs": self.jobs,
            "input_hashes": self.inputs,
            "timings": self.timings,
            "result_digests": dict(sorted(self.written.items())),
        }
        manifest_path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")


def _label(g: Geometry) -> str:
    return f"PG({g.n},{g.q})" if g.n else "incidence structure"


def _counts_line(g: Geometry) -> str:
    return f"{g.num_points} points, {g.num_lines} lines, {g.line_size} points/line"


def _spreads(run: Run, g: Geometry):
    with run.stage("spreads"):
        return en.enumerate_spreads(g, run.executor)


def _packings(run: Run, g: Geometry, spreads):
    with run.stage("packings"):
        return en.enumerate_packings(g, spreads, run.executor)


def _spread_text(spreads) -> str:
    return "".join(
        f"S{i} := [ {'; '.join(f'L{l}' for l in s.lines)} ]\n" for i, s in enumerate(spreads)
    )


def _packing_text(packings) -> str:
    return "".join(
        f"K{i} := [ {'; '.join(f'S{s}' for s in p.spreads)} ]\n" for i, p in enumerate(packings)
    )


def cmd_build(run: Run) -> int:
    a = run.args
    with run.stage("build"):
        g = build_pg(a.n, a.q)
    run.write(f"pg{a.n}{a.q}.txt", ex.emit_incidence_txt(g))
    expected = pg_counts(a.n, a.q)
    print(f"PG({a.n},{a.q}): {_counts_line(g)}")
    return EXIT_OK if (g.num_points, g.num_lines, g.line_size) == expected else EXIT_FAIL


def cmd_axioms(run: Run) -> int:
    a = run.args
    g = run.geometry()
    with run.stage("axioms"):
        reports = ax.check_all(g, pruned=not a.no_prune, executor=run.executor)
    run.write("axioms.json", ex.dumps([r.to_dict() for r in reports]))
    pasch_gate = "a2_sym" if a.symmetrized_pasch else "a2"
    ok = True
    for r in reports:
        gating = r.axiom_id not in ("a2", "a2_sym") or r.axiom_id == pasch_gate
        status = "holds" if r.holds else "FAILS"
        extra = "" if r.holds else f" counterexample {list(r.counterexample)}"
        note = "" if gating else " (informational)"
        print(f"{r.axiom_id:<10} {status:<6} cases_checked {r.cases_checked}{extra}{note}")
        ok &= r.holds or not gating
    return EXIT_OK if ok else EXIT_FAIL


def cmd_spreads(run: Run) -> int:
    g = run.geometry()
    spreads = _spreads(run, g)
    run.write("spreads.json", ex.dumps([{"lines": list(s.lines)} for s in spreads]))
    run.write("spreads.txt", _spread_text(spreads))
    print(f"{len(spreads)} spreads")
    if run.args.oracle:
        with run.stage("oracle"):
            brute = en.brute_force_spreads(g)
            _, mismatches = en.spread_membership_selftest(g, spreads)
        if brute != [s.lines for s in spreads] or mismatches:
            print(f"oracle agreement: MISMATCH ({len(brute)} from brute force, "
                  f"{len(mismatches)} predicate disagreements)")
            return EXIT_FAIL
        print("oracle agreement: exact")
    return EXIT_OK


def cmd_packings(run: Run) -> int:
    g = run.geometry()
    spreads = _spreads(run, g)
    packings = _packings(run, g, spreads)
    run.write("packings.json", ex.dumps([{"spreads": list(p.spreads)} for p in packings]))
    run.write("packings.txt", _packing_text(packings))
    print(f"{len(packings)} packings")
    if run.args.oracle:
        with run.stage("oracle"):
            cliques = en.clique_oracle_packings(g, spreads)
        if cliques != [p.spreads for p in packings]:
            print(f"oracle agreement: MISMATCH ({len(cliques)} cliques)")
            return EXIT_FAIL
        print("oracle agreement: exact")
    return EXIT_OK


def _generators(run: Run, g: Geometry):
    with run.stage("generators"):
        return sy.generators_for(g)


def _objects(run: Run, g: Geometry, kind: str):
    spreads = _spreads(run, g)
    if kind == "spreads":
        return spreads, spreads
    return _packings(run, g, spreads), spreads


def cmd_classify(run: Run) -> int:
    a = run.args
    g = run.geometry()
    gens = _generators(run, g)
    formula = sy.group_order_formula(g.n, g.q)
    order = formula
    if formula <= FULL_GROUP_LIMIT:
        with run.stage("group"):
            order = len(sy.collineation_group(g, gens))
    objects, spreads = _objects(run, g, a.kind)
    with run.stage("orbits"):
        rep = sy.orbits(g, objects, gens, spreads=spreads, group_order=order)
    run.write(f"orbits_{a.kind}.json", ex.dumps(rep.to_dict()))
    print(f"collineations: {order}")
    sizes = ", ".join(map(str, rep.orbit_sizes))
    noun = "class" if rep.orbit_count == 1 else "classes"
    print(f"{rep.orbit_count} {noun} (size{'s' if rep.orbit_count > 1 else ''} {sizes})")
    ok = order == formula and all(order % s == 0 for s in rep.orbit_sizes)
    return EXIT_OK if ok else EXIT_FAIL


_REF = re.compile(r"[A-Za-z]*(\d+)\Z")


def _parse_ref(text: str, n: int) -> int:
    m = _REF.match(text.strip())
    if not m or int(m.group(1)) >= n:
        raise InputError(f"bad object reference {text!r} (expected e.g. S0, K3 or 5, < {n})")
    return int(m.group(1))


def cmd_witness(run: Run) -> int:
    a = run.args
    g = run.geometry()
    gens = _generators(run, g)
    objects, spreads = _objects(run, g, a.kind)
    prefix = "S" if a.kind == "spreads" else "K"
    if a.chain:
        with run.stage("chain"):
            chain = sy.witness_chain(g, objects, gens, spreads)
        entries = []
        for i, c in enumerate(chain):
            j = (i + 1) % len(objects)
            entries.append({"from": i, "to": j, "collineation": c.to_dict() if c else None})
            print(f"{prefix}{i} -> {prefix}{j}: {'verified' if c else 'no witness exists'}")
        run.write(f"witness_chain_{a.kind}.json", ex.dumps(entries))
        return EXIT_OK if all(chain) else EXIT_FAIL
    if a.from_ is None or a.to is None:
        raise InputError("witness needs --from and --to, or --chain")
    i, j = _parse_ref(a.from_, len(objects)), _parse_ref(a.to, len(objects))
    with run.stage("witness"):
        c = sy.find_witness(g, objects, i, j, gens, spreads)
    if c is None:
        rep = sy.orbits(g, objects, gens, spreads=spreads)
        print(
            f"no witness exists: {prefix}{i} is in class {rep.class_of[i]}, "
            f"{prefix}{j} is in class {rep.class_of[j]}"
        )
        run.write("witness.json", ex.dumps({"from": i, "to": j, "collineation": None}))
        return EXIT_FAIL
    image = sy.apply(g, c, objects[i], spreads)
    transcript = {
        "incidence_preserved": sy.preserves_incidence(g, c.point_perm, c.line_perm),
        "image": list(image.lines if a.kind == "spreads" else image.spreads),
        "target": list(objects[j].lines if a.kind == "spreads" else objects[j].spreads),
    }
    ok = transcript["incidence_preserved"] and transcript["image"] == transcript["target"]
    run.write(
        "witness.json",
        ex.dumps({"from": i, "to": j, "collineation": c.to_dict(), "verification": transcript}),
    )
    identity = c.point_perm == tuple(range(g.num_points))
    print(f"witness {prefix}{i} -> {prefix}{j}: {'identity, ' if identity else ''}"
          f"{'verified' if ok else 'VERIFICATION FAILED'}")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_export(run: Run) -> int:
    a = run.args
    g = run.geometry()
    include = frozenset(a.include.split(",")) if a.include else None
    spreads = packings = ()
    if a.format != "txt" and g.n == 3:
        spreads = _spreads(run, g)
        if g.order == 2:
            packings = _packings(run, g, spreads)
    with run.stage("export"):
        if a.format == "txt":
            run.write("pg.txt", ex.emit_incidence_txt(g))
        elif a.format == "json":
            reports = ax.check_all(g, executor=run.executor)
            run.write("pg.json", ex.emit_json(g, spreads, packings, reports))
        else:
            cfg = ex.EmissionConfig(include=include) if include else ex.EmissionConfig()
            skolem = ax.skolem_tables(g, run.executor) if "axioms-witnesses" in cfg.include else None
            text = ex.emit_proof_source(g, spreads, packings, cfg, skolem)
            problems = ex.validate_proof_source(text)
            run.write("pg.v", text)
            if problems:
                for p in problems[:20]:
                    print(f"invalid output: {p}")
                return EXIT_FAIL
    print(f"exported {_label(g)} as {a.format}: {', '.join(sorted(run.written))}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", default="pgkit-out", help="output directory")
    common.add_argument("--jobs", type=int, default=None,
                        help="worker processes (default: $PGKIT_JOBS or CPU count)")

    source = argparse.ArgumentParser(add_help=False)
    source.add_argument("input", nargs="?", help="incidence file (one line per row)")
    source.add_argument("--n", type=int, help="dimension, to build PG(n,q)")
    source.add_argument("--q", type=int, help="field order, to build PG(n,q)")

    p = argparse.ArgumentParser(prog="pgkit", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"pgkit {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    b = sub.add_parser("build", parents=[common], help="construct PG(n,q)")
    b.add_argument("--n", type=int, required=True)
    b.add_argument("--q", type=int, required=True)
    b.set_defaults(func=cmd_build)

    s = sub.add_parser("axioms", parents=[common, source], help="check the axioms")
    s.add_argument("--symmetrized-pasch", action="store_true",
                   help="gate the exit status on the symmetrized Pasch form instead of the plain one")
    s.add_argument("--no-prune", action="store_true", help="scan full tuple spaces")
    s.set_defaults(func=cmd_axioms)

    for name, fn, help_ in (("spreads", cmd_spreads, "enumerate spreads"),
                            ("packings", cmd_packings, "enumerate packings")):
        s = sub.add_parser(name, parents=[common, source], help=help_)
        s.add_argument("--oracle", action="store_true", help="cross-check with a brute-force oracle")
        s.set_defaults(func=fn)

    s = sub.add_parser("classify", parents=[common, source], help="orbits under collineations")
    s.add_argument("--kind", choices=("spreads", "packings"), default="spreads")
    s.set_defaults(func=cmd_classify)

    s = sub.add_parser("witness", parents=[common, source], help="collineation between two objects")
    s.add_argument("--kind", choices=("spreads", "packings"), default="spreads")
    s.add_argument("--from", dest="from_", metavar="FROM")
    s.add_argument("--to")
    s.add_argument("--chain", action="store_true", help="witnesses i -> i+1 mod N for all i")
    s.set_defaults(func=cmd_witness)

    s = sub.add_parser("export", parents=[common, source], help="emit txt, json or coq")
    s.add_argument("--format", choices=("txt", "json", "coq"), default="txt")
    s.add_argument("--include", help="comma list from: " + ",".join(sorted(ex.INCLUDE_ALL)))
    s.set_defaults(func=cmd_export)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        run = Run(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    try:
        code = args.func(run)
    except (InputError, GeometryError, ex.EmissionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        code = EXIT_INPUT
    finally:
        run.finish()
    return code


if __name__ == "__main__":
    sys.exit(main())
