import json
import subprocess
import sys

import pytest

from spectrakit.cli import main

TORUS = ["--topology", "one_holed_torus", "--cuffs", "1.7", "--twists", "0.35"]


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_bounds_eval(capsys):
    code, out, _ = run(capsys, "bounds", "eval", "--genus", "2")
    assert code == 0
    doc = json.loads(out)
    assert doc["bounds"]["genus"] == 2
    assert doc["config"]["command"] == "bounds eval"


def test_usage_errors(capsys):
    assert run(capsys, "bounds", "eval", "--genus", "2", "--bogus")[0] == 2
    assert run(capsys, "bounds", "eval")[0] == 2
    assert run(capsys, "teleport")[0] == 2
    assert run(capsys, "bounds", "eval", "--genus", "2", "--workers", "0")[0] == 2


def test_domain_errors_exit_one(capsys):
    code, _, err = run(capsys, "bounds", "eval", "--genus", "1")
    assert code == 1 and "DomainError" in err
    code, _, err = run(capsys, "spectrum", "compare", "/nonexistent/a.json", "/nonexistent/b.json")
    assert code == 1 and "cannot read" in err


def test_uncertified_spectrum(capsys):
    code, out, err = run(capsys, "spectrum", "compute", "--cuffs", "2.4", "2.9", "2.6",
                         "--twists", "0.3", "-0.5", "0.8", "--max-word-length", "2")
    assert code == 1 and out == "" and "uncertified" in err


def test_surface_build(capsys, tmp_path):
    path = tmp_path / "s.json"
    path.write_text(json.dumps({"topology": "closed_genus2", "cuff_lengths": [2.0, 2.5, 3.0],
                                "twists": [0.1, 0.2, 0.3]}))
    code, out, _ = run(capsys, "surface", "build", "--surface", str(path))
    doc = json.loads(out)
    assert code == 0
    assert doc["relator_error"] < 1e-6
    assert doc["measured_cuff_lengths"] == pytest.approx([2.0, 2.5, 3.0], abs=1e-8)
    assert set(doc["generators"]) == set("ABCD")


def test_spectrum_compute_compare(capsys, tmp_path):
    a, b, c = (tmp_path / n for n in ("a.json", "b.json", "a.csv"))
    assert main(["spectrum", "compute", *TORUS, "--cutoff", "6", "-o", str(a), "--csv", str(c)]) == 0
    assert main(["spectrum", "compute", "--topology", "one_holed_torus", "--cuffs", "1.7",
                 "--twists", str(0.35 + 1.7), "--cutoff", "6", "-o", str(b)]) == 0
    doc = json.loads(a.read_text())
    assert doc["spectrum"]["certified"] and doc["config"]["surface"]["cuff_lengths"] == [1.7]
    assert c.read_text().startswith("length,multiplicity\n")
    code, out, _ = run(capsys, "spectrum", "compare", str(a), str(b), "--cutoff", "6")
    assert code == 0 and json.loads(out)["isospectral"] is True


def test_output_independent_of_workers(capsys):
    outs = [run(capsys, "spectrum", "compute", *TORUS, "--cutoff", "7", "--workers", w)[1] for w in ("1", "8")]
    assert outs[0] == outs[1]


def test_mcshane_verify(capsys):
    code, out, _ = run(capsys, "mcshane", "verify", "--boundary-length", "2", "--cutoff", "20")
    doc = json.loads(out)
    assert code == 0
    assert 0 < doc["deficit"] < 1e-6
    assert {"boundary_length", "cutoff", "terms", "partial_sum", "deficit"} <= set(doc)


def test_interrogate_run_with_family(capsys, tmp_path):
    fam = tmp_path / "family.json"
    fam.write_text(json.dumps({"members": [
        {"label": "sym", "surface": {"topology": "closed_genus2", "cuff_lengths": [2.634, 2.634, 2.634],
                                     "twists": [0, 0, 0]}},
        {"label": "skew", "surface": {"topology": "closed_genus2", "cuff_lengths": [2.4, 2.9, 2.6],
                                      "twists": [0.3, -0.5, 0.8]}},
    ]}))
    code, out, _ = run(capsys, "interrogate", "run", "--family", str(fam), "--truth", "1",
                       "--sweep", "1", "--cutoff", "5")
    doc = json.loads(out)
    assert code == 0
    assert doc["winner"] == "skew" and doc["correct"]
    assert doc["total_questions"] == len(doc["questions"]) <= 2
    code, _, err = run(capsys, "interrogate", "run", "--family", str(fam), "--truth", "5", "--cutoff", "5")
    assert code == 1 and "outside" in err


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "spectrakit", "bounds", "eval", "--genus", "3"],
                         capture_output=True, text=True)
    assert res.returncode == 0
    assert json.loads(res.stdout)["bounds"]["genus"] == 3
