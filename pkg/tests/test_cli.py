import json
import subprocess
import sys

import pytest

from pgkit.cli import main
from pgkit.geometry import pg32_fixture_text


@pytest.fixture
def fixture_file(tmp_path):
    p = tmp_path / "pg32.txt"
    p.write_text(pg32_fixture_text())
    return str(p)


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_build(capsys, tmp_path):
    code, out, _ = run(capsys, "build", "--n", "3", "--q", "3", "--out", str(tmp_path), "--jobs", "1")
    assert code == 0
    assert "40 points, 130 lines, 4 points/line" in out
    assert len((tmp_path / "pg33.txt").read_text().splitlines()) == 130
    manifest = json.loads((tmp_path / "manifest.json").read_text())
    assert "pg33.txt" in manifest["runs"]["build"]["result_digests"]


def test_build_bad_field(capsys, tmp_path):
    code, _, err = run(capsys, "build", "--n", "3", "--q", "6", "--out", str(tmp_path), "--jobs", "1")
    assert code == 2 and "error" in err


def test_axioms_fixture(capsys, tmp_path, fixture_file):
    code, out, _ = run(capsys, "axioms", fixture_file, "--no-prune", "--out", str(tmp_path), "--jobs", "1")
    assert code == 0
    assert "a3_3       holds  cases_checked 42875" in out
    assert "a2_sym" in out and "(informational)" in out
    reports = json.loads((tmp_path / "axioms.json").read_text())
    assert all(r["holds"] for r in reports)


def test_axioms_plane_fails(capsys, tmp_path):
    code, out, _ = run(capsys, "axioms", "--n", "2", "--q", "2", "--out", str(tmp_path), "--jobs", "1")
    assert code == 1
    assert "a3_2       FAILS" in out


def test_symmetrized_pasch_flag_moves_the_gate(capsys, tmp_path):
    code, out, _ = run(capsys, "axioms", "--n", "3", "--q", "2", "--symmetrized-pasch", "--out", str(tmp_path), "--jobs", "1")
    assert code == 0
    line = next(l for l in out.splitlines() if l.startswith("a2 "))
    assert line.endswith("(informational)")


def test_corrupt_input(capsys, tmp_path):
    bad = tmp_path / "bad.txt"
    bad.write_text("0 1 2\n0 1 3\n")
    code, _, err = run(capsys, "axioms", str(bad), "--out", str(tmp_path), "--jobs", "1")
    assert code == 2 and "row 2" in err


def test_missing_input(capsys, tmp_path):
    code, _, err = run(capsys, "spreads", str(tmp_path / "nope.txt"), "--out", str(tmp_path), "--jobs", "1")
    assert code == 2
    code, _, err = run(capsys, "spreads", "--out", str(tmp_path), "--jobs", "1")
    assert code == 2


def test_spreads_with_oracle(capsys, tmp_path, fixture_file):
    code, out, _ = run(capsys, "spreads", fixture_file, "--oracle", "--out", str(tmp_path), "--jobs", "1")
    assert code == 0
    assert "56 spreads" in out and "oracle agreement: exact" in out
    assert (tmp_path / "spreads.txt").read_text().splitlines()[0] == "S0 := [ L0; L19; L24; L28; L33 ]"


def test_packings_with_oracle(capsys, tmp_path, fixture_file):
    code, out, _ = run(capsys, "packings", fixture_file, "--oracle", "--out", str(tmp_path), "--jobs", "1")
    assert code == 0
    assert "240 packings" in out and "oracle agreement: exact" in out


def test_classify(capsys, tmp_path, fixture_file):
    code, out, _ = run(capsys, "classify", fixture_file, "--kind", "packings", "--out", str(tmp_path), "--jobs", "1")
    assert code == 0
    assert "collineations: 20160" in out
    assert "2 classes (sizes 120, 120)" in out


def test_witness_cross_class(capsys, tmp_path, fixture_file):
    args = ["witness", fixture_file, "--kind", "packings", "--out", str(tmp_path), "--jobs", "1"]
    rep_code, _, _ = run(capsys, "classify", fixture_file, "--kind", "packings", "--out", str(tmp_path), "--jobs", "1")
    class_of = json.loads((tmp_path / "orbits_packings.json").read_text())["class_of"]
    other = class_of.index(1 - class_of[0])
    code, out, _ = run(capsys, *args, "--from", "K0", "--to", f"K{other}")
    assert code == 1
    assert out.startswith(f"no witness exists: K0 is in class {class_of[0]}")
    same = class_of.index(class_of[0], 1)
    code, out, _ = run(capsys, *args, "--from", "K0", "--to", f"K{same}")
    assert code == 0 and "verified" in out
    doc = json.loads((tmp_path / "witness.json").read_text())
    assert doc["verification"]["image"] == doc["verification"]["target"]


def test_witness_identity(capsys, tmp_path, fixture_file):
    code, out, _ = run(capsys, "witness", fixture_file, "--from", "S3", "--to", "S3", "--out", str(tmp_path), "--jobs", "1")
    assert code == 0 and "identity" in out


def test_witness_bad_reference(capsys, tmp_path, fixture_file):
    code, _, err = run(capsys, "witness", fixture_file, "--from", "S0", "--to", "S56", "--out", str(tmp_path), "--jobs", "1")
    assert code == 2


def test_witness_chain(capsys, tmp_path, fixture_file):
    code, out, _ = run(capsys, "witness", fixture_file, "--chain", "--out", str(tmp_path), "--jobs", "1")
    assert code == 0
    assert out.count("verified") == 56
    assert len(json.loads((tmp_path / "witness_chain_spreads.json").read_text())) == 56


@pytest.mark.parametrize("fmt, name", [("txt", "pg.txt"), ("json", "pg.json"), ("coq", "pg.v")])
def test_export(capsys, tmp_path, fixture_file, fmt, name):
    code, out, _ = run(capsys, "export", fixture_file, "--format", fmt, "--out", str(tmp_path), "--jobs", "1")
    assert code == 0
    assert (tmp_path / name).exists()


def test_export_txt_round_trip(capsys, tmp_path, fixture_file):
    run(capsys, "export", fixture_file, "--out", str(tmp_path), "--jobs", "1")
    body = [r for r in pg32_fixture_text().splitlines() if r and not r.startswith("#")]
    assert (tmp_path / "pg.txt").read_text().splitlines() == body


def test_export_bad_include(capsys, tmp_path, fixture_file):
    code, _, _ = run(capsys, "export", fixture_file, "--format", "coq", "--include", "geometry,lemmas", "--out", str(tmp_path), "--jobs", "1")
    assert code == 2


def test_manifest_accumulates(capsys, tmp_path, fixture_file):
    run(capsys, "spreads", fixture_file, "--out", str(tmp_path), "--jobs", "1")
    run(capsys, "build", "--n", "2", "--q", "2", "--out", str(tmp_path), "--jobs", "1")
    m = json.loads((tmp_path / "manifest.json").read_text())
    assert set(m["runs"]) == {"spreads", "build"}
    assert fixture_file in m["runs"]["spreads"]["input_hashes"]


def test_module_entry_point(tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "pgkit", "build", "--n", "2", "--q", "3", "--out", str(tmp_path), "--jobs", "1"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0
    assert "13 points, 13 lines" in proc.stdout


def test_bad_jobs(capsys, tmp_path):
    code, _, err = run(capsys, "build", "--n", "2", "--q", "2", "--out", str(tmp_path), "--jobs", "0")
    assert code == 2
