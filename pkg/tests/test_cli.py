import json

import pytest

from slimlat.cli import main
from slimlat.order import named_posets


@pytest.fixture
def s7_seq(tmp_path):
    f = tmp_path / "s7.seq"
    f.write_text("grid 1 1\nfork 0 0 1\n")
    return f


def test_build_to_json(tmp_path, s7_seq):
    out = tmp_path / "s7.json"
    assert main(["build", "--input", str(s7_seq), "--out", str(out)]) == 0
    data = json.loads(out.read_text())
    assert data["n"] == 7
    assert len(data["covers"]) == 9


def test_validate_json_input(tmp_path, s7_seq):
    lattice_json = tmp_path / "s7.json"
    main(["build", "--input", str(s7_seq), "--out", str(lattice_json)])
    out = tmp_path / "report.json"
    rc = main(["validate", "--input", str(lattice_json), "--format", "json", "--out", str(out)])
    assert rc == 0
    assert json.loads(out.read_text())["ok"]


def test_lamps_and_con(tmp_path, s7_seq):
    out = tmp_path / "lamps.json"
    assert main(["lamps", "--input", str(s7_seq), "--out", str(out)]) == 0
    rep = json.loads(out.read_text())
    assert rep["congruence_iso_ok"] and len(rep["lamps"]) == 3

    out2 = tmp_path / "con.json"
    assert main(["con", "--input", str(s7_seq), "--out", str(out2)]) == 0
    con = json.loads(out2.read_text())
    assert con["jir_count"] == 3 and con["con_size"] == 5


def test_minimize_cli(tmp_path):
    seq = tmp_path / "two.seq"
    seq.write_text("grid 2 2\nfork 1 1 2\n")
    out = tmp_path / "trace.json"
    assert main(["minimize", "--input", str(seq), "--out", str(out)]) == 0
    trace = json.loads(out.read_text())
    assert len(trace["steps"]) == 1
    assert trace["steps"][0]["rule"] == "neighboring"


def test_decompose_cli(tmp_path, s7_seq):
    lattice_json = tmp_path / "s7.json"
    main(["build", "--input", str(s7_seq), "--out", str(lattice_json)])
    out = tmp_path / "rec.seq"
    rc = main(["decompose", "--input", str(lattice_json), "--format", "json", "--out", str(out)])
    assert rc == 0
    assert "fork" in out.read_text()


def test_double_cli(tmp_path, s7_seq):
    out = tmp_path / "doubled.seq"
    assert main(["double", "--input", str(s7_seq), "--step", "1", "--out", str(out)]) == 0
    text = out.read_text()
    assert text.startswith("grid 1 1\n") and text.count("fork") == 2


def test_enumerate_cli(tmp_path):
    out = tmp_path / "enum.json"
    assert main(["enumerate", "--max-len", "4", "--out", str(out)]) == 0
    data = json.loads(out.read_text())
    assert data["counts"] == {"2": 1, "3": 2, "4": 6}


def test_realize_cli(tmp_path):
    poset_file = tmp_path / "y.poset"
    poset_file.write_text(named_posets("Y").to_json())
    out = tmp_path / "answer.json"
    assert main(["realize", "--input", str(poset_file), "--max-len", "7", "--out", str(out)]) == 0
    ans = json.loads(out.read_text())
    assert ans["status"] == "found" and ans["min_length"] == 5


def test_render_cli(tmp_path, s7_seq):
    out = tmp_path / "pic.svg"
    rc = main(["render", "--input", str(s7_seq), "--render-format", "svg", "--out", str(out)])
    assert rc == 0
    assert out.read_text().startswith("<svg")


def test_exit_codes(tmp_path):
    bad = tmp_path / "bad.seq"
    bad.write_text("fork 0 0 1\n")
    assert main(["build", "--input", str(bad)]) == 2

    assert main(["enumerate", "--max-len", "9"]) == 3

    chain = tmp_path / "chain.json"
    chain.write_text('{"n": 3, "covers": [[0, 1], [1, 2]], '
                     '"upper_order": [[1], [2], []], "lower_order": [[], [0], [1]]}')
    assert main(["validate", "--input", str(chain), "--format", "json"]) == 1
