import json
import subprocess
import sys
from pathlib import Path

import pytest

from curvedainf.cli import main
from curvedainf.constructions import DGAData, obstructed_problems, solvable_problems
from curvedainf.ring import ConeSpec
from curvedainf.serialization import algebra_to_doc, dumps, problem_to_doc

SAMPLES = Path(__file__).resolve().parent.parent / "samples"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_validate_cone(capsys):
    code, out, _ = run(capsys, "validate", SAMPLES / "cone_orthant2.json")
    assert code == 0 and "valid cone" in out


def test_rank_deficient_cone(capsys):
    code, _, err = run(capsys, "validate", SAMPLES / "cone_rank_deficient.json")
    assert code == 2 and "rank condition" in err


def test_bad_curvature(capsys):
    code, _, err = run(capsys, "validate", SAMPLES / "algebra_bad_curvature.json")
    assert code == 2 and "curvature condition" in err


def test_unreadable_and_malformed(capsys, tmp_path):
    assert run(capsys, "validate", tmp_path / "missing.json")[0] == 1
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run(capsys, "validate", bad)[0] == 1


def test_transfer_trivial(capsys, tmp_path):
    out_file = tmp_path / "result.json"
    code, _, _ = run(capsys, "transfer", SAMPLES / "problem_trivial.json", "--format", "json",
                     "-o", out_file)
    assert code == 0
    doc = json.loads(out_file.read_text())
    assert doc["a"]["coeffs"] == {}
    assert all(doc["checks"].values())


def test_transfer_exterior_with_cunit(capsys):
    code, out, _ = run(capsys, "transfer", SAMPLES / "problem_exterior.json", "--cunit", "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert doc["a"]["coeffs"]
    assert doc["checks"]["c_unit"] is True
    assert doc["e_a"]["parity"] == 0


def test_transfer_obstructed(capsys):
    code, out, err = run(capsys, "transfer", SAMPLES / "problem_torsion.json")
    assert code == 3
    assert "obstructed at order 1" in out + err


@pytest.mark.parametrize("p", obstructed_problems(), ids=lambda p: p.label)
def test_every_obstructed_problem_exits_3(capsys, tmp_path, p):
    f = tmp_path / "p.json"
    f.write_text(dumps(problem_to_doc(p)))
    assert run(capsys, "transfer", f)[0] == 3


def test_check_violation_exits_4(capsys, tmp_path):
    cone = ConeSpec.orthant(1)
    alg = DGAData((("a", 0), ("b", 0), ("c", 0)), {},
                  {("a", "a"): {"a": 1}, ("a", "b"): {"b": 1}, ("b", "a"): {"c": 1}}).algebra(cone, 2)
    f = tmp_path / "alg.json"
    f.write_text(dumps(algebra_to_doc(alg)))
    code, out, _ = run(capsys, "check", f, "--arity-bound", "3")
    assert code == 4 and "FAIL" in out


def test_check_problem(capsys):
    code, out, _ = run(capsys, "check", SAMPLES / "problem_exterior.json")
    assert code == 0 and out.count("PASS") == 4


def test_enumerate_dm(capsys):
    code, out, _ = run(capsys, "enumerate", "--dm", "--k", "3", "--ell", "0")
    assert code == 0
    rows = [l for l in out.splitlines()[1:] if l.split() and l.split()[0].isdigit()]
    assert len(rows) == 3


def test_enumerate_types(capsys):
    code, out, _ = run(capsys, "enumerate", SAMPLES / "geometry_chern_one.json", "--k", "1",
                       "--max-vertices", "2", "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert doc["k"] == 1 and len(doc["types"]) > 0


def test_exclude(capsys):
    code, out, _ = run(capsys, "exclude", SAMPLES / "geometry_no_classes.json", "--iA", "0", "--k", "2")
    assert code == 0 and "1 survivors" in out
    code, out, _ = run(capsys, "exclude", SAMPLES / "geometry_chern_one.json", "--iA", "1", "--k", "1",
                       "--target", "1,0", "--budget", "L=1,C=1", "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert doc["passed"] and sum(c["survivor"] for c in doc["configurations"]) == 1


def test_exclude_refuses_large_dimension(capsys):
    code, _, _ = run(capsys, "exclude", SAMPLES / "geometry_chern_one.json", "--iA", "5", "--k", "1",
                     "--target", "1,0")
    assert code == 2


def test_series(capsys):
    code, out, _ = run(capsys, "series", SAMPLES / "expression.json")
    assert code == 0
    doc = json.loads(out)
    # (1 + T^(1,0))(1 - T^(0,1))^2 has six terms
    assert len(doc["terms"]) == 6 and "specialized" in doc


def test_property_small(capsys):
    code, out, _ = run(capsys, "property", "--cases", "20", "--seed", "4")
    assert code == 0 and "FAIL" not in out


def test_outputs_are_deterministic(tmp_path):
    p = solvable_problems(2, seed=9)[1]
    f = tmp_path / "p.json"
    f.write_text(dumps(problem_to_doc(p)))
    outs = []
    for i in range(2):
        o = tmp_path / f"r{i}.json"
        subprocess.run([sys.executable, "-m", "curvedainf", "transfer", str(f), "--format", "json",
                        "-o", str(o)], check=True)
        outs.append(o.read_bytes())
    assert outs[0] == outs[1]
