import json
from importlib import resources

import pytest

from drc.cli import main

GRAPH = str(resources.files("drc").joinpath("data/example_g4_graph.json"))
TWIST = "[e0:3,e1:6,e2:3]"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_enumerate_json(capsys):
    code, out, _ = run(capsys, "enumerate", "--g", "4", "--n", "4", "--k", "3", "--m=-2,5,3,12")
    assert code == 0
    doc = json.loads(out)
    assert len(doc["strata"]) == 47 and doc["case"] == "GENERIC"


def test_enumerate_table_and_out(capsys, tmp_path):
    target = tmp_path / "a.json"
    code, out, _ = run(capsys, "enumerate", "--g", "2", "--k", "1", "--m=3,-1",
                       "--out", str(target))
    assert code == 0 and json.loads(target.read_text())["input"]["g"] == 2
    code, out, _ = run(capsys, "enumerate", "--g", "2", "--k", "1", "--m=3,-1", "--table")
    assert "interior" in out and "case GENERIC" in out


def test_stratum_report(capsys):
    code, out, _ = run(capsys, "stratum-report", "--graph", GRAPH, "--twist", TWIST, "--table")
    assert code == 0
    assert "weight 6" in out and "length 2" in out
    assert "(l_e0, l_e1^2, l_e2)" in out
    code, out, _ = run(capsys, "stratum-report", "--graph", GRAPH, "--twist", TWIST)
    assert json.loads(out)["drl_local"]["multiplicity"] == "6/1"


def test_chart_equations(capsys):
    code, out, _ = run(capsys, "chart-equations", "--graph", GRAPH, "--twist", TWIST,
                       "--divided", "--bound", "2")
    assert code == 0
    lines = out.splitlines()
    assert lines[:2] == ["a_g0 * a_g1 = 1", "a_e0 * a_g1 = a_e1^2"]
    code, out, _ = run(capsys, "chart-equations", "--graph", GRAPH, "--twist", TWIST,
                       "--divided", "--json")
    assert json.loads(out)["lci_witness"] is True


def test_residue(capsys):
    code, out, _ = run(capsys, "residue", "--k", "1", "--factors", "0:-2,1:-1")
    assert code == 0
    doc = json.loads(out)
    assert doc["residue_sum"] == "0/1"
    code, out, _ = run(capsys, "residue", "--k", "2", "--factors", "0:-4,1:-1",
                       "--scalar", "-1", "--at", "0", "--table")
    assert "Res^2 1/4" in out


def test_root_sum(capsys):
    code, out, _ = run(capsys, "root-sum", "--k", "2", "--stratum=-2,-2,-1,1", "--subset", "1,2",
                       "--trials", "10", "--table")
    assert code == 0 and "10/10 nonzero" in out
    code, out, _ = run(capsys, "root-sum", "--k", "1", "--factors", "0:-1,1:-1",
                       "--subset", "1")
    assert code == 0 and json.loads(out)["nonvanishing"]


def test_sweep_and_fault_injection(capsys):
    code, out, _ = run(capsys, "sweep", "--g", "2", "--n", "2", "--ks", "1,2", "--m-bound", "3")
    assert code == 0 and "violations 0" in out
    code, out, _ = run(capsys, "sweep", "--g", "2", "--n", "2", "--ks", "1", "--m-bound", "3",
                       "--inject-fault", "--json")
    assert code == 4
    assert json.loads(out)["violations"]


def test_verify_archive(capsys, tmp_path):
    path = tmp_path / "g4.json"
    run(capsys, "enumerate", "--g", "4", "--k", "3", "--m=-2,5,3,12", "--out", str(path))
    code, out, _ = run(capsys, "verify-archive", str(path))
    assert code == 0 and "47 strata re-verified" in out
    doc = json.loads(path.read_text())
    doc["strata"][1]["aut_order"] = 7
    path.write_text(json.dumps(doc))
    code, _, err = run(capsys, "verify-archive", str(path))
    assert code == 4 and "aut_order" in err
    path.write_text("{")
    code, _, _ = run(capsys, "verify-archive", str(path))
    assert code == 2


@pytest.mark.parametrize("argv,code", [
    (["enumerate", "--g", "4", "--k", "3", "--m=-2,5,3,11"], 2),          # bad weight sum
    (["enumerate", "--g", "2", "--k", "1", "--m=1,1"], 2),                # not GENERIC
    (["enumerate", "--g", "4", "--k", "3", "--m=-2,5,3,12", "--guard-edges", "2"], 3),
    (["stratum-report", "--graph", GRAPH, "--twist", "[e0:3,e1:3,e2:3]"], 2),
    (["stratum-report", "--graph", "/nonexistent.json", "--twist", TWIST], 2),
    (["residue", "--k", "1", "--factors", "0:x"], 2),
    (["verify-archive", "/nonexistent.json"], 2),
])
def test_exit_codes(capsys, argv, code):
    got, _, err = run(capsys, *argv)
    assert got == code and err.startswith("drc: error")
