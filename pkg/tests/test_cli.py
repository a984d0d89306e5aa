import json
import subprocess
import sys
from pathlib import Path

import pytest

from motivic_mckay.cli import main
from motivic_mckay.groups import GroupSpec, catalog_spec
from motivic_mckay.jets import JetProblem
from motivic_mckay.motivic import expr_eq, from_json, parse
from motivic_mckay.resolution import ResolutionData, ade_catalog

FIXTURES = Path(__file__).parent / "fixtures"


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv, "--format", "json")
    return code, json.loads(out) if out.strip() else None, err


def test_analyze_cyclic2(capsys):
    code, data, _ = run_json(capsys, "analyze-group", "cyclic:2")
    assert code == 0
    assert expr_eq(from_json(data["measure_sum"]), parse("L^(-1) + L^(-2)"))
    assert data["euler"] == "2"
    code, text, _ = run(capsys, "analyze-group", "cyclic:2")
    assert "orbifold sum: L^(-1) + L^(-2)" in text


def test_analyze_icosahedral(capsys):
    code, data, _ = run_json(capsys, "analyze-group", "binary-icosahedral", "--euler")
    assert code == 0
    assert data["group"]["classes"] == 9 and data["euler"] == "9"
    assert "hodge" not in data


def test_analyze_gl(capsys):
    code, data, _ = run_json(capsys, "analyze-group", "cyclic:3:1,1")
    assert code == 0 and data["group"]["mode"] == "GL"
    s = from_json(data["measure_sum"])
    assert expr_eq(s, parse("L^(-2/3) + L^(-4/3) + L^(-2)"))
    assert {t.exponent.denominator for t in s.terms} == {1, 3}
    # q^(-2/3) is not rational, so no point count exists
    code, _, err = run(capsys, "analyze-group", "cyclic:3:1,1", "--point-count", "2")
    assert code == 2 and "non-integral" in err


def test_analyze_group_file(capsys, tmp_path):
    path = tmp_path / "g.json"
    path.write_text(json.dumps(catalog_spec("binary-dihedral:2").to_json()))
    code, data, _ = run_json(capsys, "analyze-group", str(path))
    assert code == 0 and data["group"]["order"] == 8 and data["euler"] == "5"
    assert GroupSpec.from_json(json.loads(path.read_text())) == catalog_spec("binary-dihedral:2")


def test_analyze_errors(capsys, tmp_path):
    code, _, err = run(capsys, "analyze-group", "binary-icosahedral", "--cap-group", "50")
    assert code == 3 and "error" in err
    assert run(capsys, "analyze-group", "cyclic:0")[0] == 2
    assert run(capsys, "analyze-group", "no-such-group")[0] == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run(capsys, "analyze-group", str(bad))[0] == 2
    infinite = tmp_path / "inf.json"
    infinite.write_text(json.dumps({"n": 2, "root_order": 1, "generators": [[[1, 1], [0, 1]]]}))
    assert run(capsys, "analyze-group", str(infinite), "--cap-group", "100")[0] == 3


@pytest.mark.parametrize("name", ["A:5", "E6", "D:3", "cyclic:3:1,1,1"])
def test_check_catalog_holds(capsys, name):
    code, data, _ = run_json(capsys, "check-mckay", name)
    assert code == 0 and data["holds"]
    assert expr_eq(from_json(data["lhs"]), from_json(data["rhs"]))


def test_check_perturbed_fails(capsys):
    code, text, _ = run(capsys, "check-mckay", "A:2", "--nu", "1=2")
    assert code == 1
    assert "holds: False" in text and "simplified:     L^(-2)" in text
    assert "rhs (classes):    L^(-1) + L^(-2)" in text


def test_check_resolution_file(capsys, tmp_path):
    spec, res = ade_catalog("E7")
    rpath, gpath = tmp_path / "r.json", tmp_path / "g.json"
    rpath.write_text(res.dumps())
    gpath.write_text(json.dumps(spec.to_json()))
    assert run(capsys, "check-mckay", str(rpath), "--group", str(gpath))[0] == 0
    assert run(capsys, "check-mckay", str(rpath), "--group", "E6-not-a-group")[0] == 2
    assert run(capsys, "check-mckay", str(rpath))[0] == 2
    # dimension mismatch
    assert run(capsys, "check-mckay", str(rpath), "--group", "cyclic:3:1,1,1")[0] == 2
    assert ResolutionData.from_json(json.loads(rpath.read_text())) == res


def test_check_input_errors(capsys):
    assert run(capsys, "check-mckay", "F4")[0] == 2
    assert run(capsys, "check-mckay", "A:3", "--nu", "9=2")[0] == 2
    assert run(capsys, "check-mckay", "A:3", "--nu", "1=0")[0] == 2


def write_problem(tmp_path, problem: JetProblem, **extra):
    path = tmp_path / "p.json"
    path.write_text(json.dumps({**problem.to_json(), **extra}))
    return str(path)


def test_jets_a1(capsys, tmp_path):
    path = write_problem(tmp_path, JetProblem.from_strings(["x*y - z^2"], 3, 1, variables=("x", "y", "z")))
    code, data, _ = run_json(capsys, "jets", path)
    assert code == 0
    row = data["table"][0]
    assert row["liftable_count"] == 9 and row["raw_count"] == 27 and row["normalized"] == "1/9"
    assert JetProblem.from_json(data["problem"]).to_json() == data["problem"]


def test_jets_smooth_line(capsys, tmp_path):
    path = write_problem(tmp_path, JetProblem.from_strings(["y"], 3, 2, variables=("x", "y")))
    code, data, _ = run_json(capsys, "jets", path, "--levels", "0-2")
    assert code == 0
    assert [r["liftable_count"] for r in data["table"]] == [1, 3, 9]


def test_jets_partition_table(capsys, tmp_path):
    path = write_problem(tmp_path, JetProblem.from_strings(["u*v - w^2"], 3, 2, variables=("u", "v", "w")))
    code, text, _ = run(capsys, "jets", path, "--classify", "2")
    assert code == 0 and "1:54 2:6 indeterminate:21" in text


def test_jets_fixture_replay(capsys):
    data = json.loads((FIXTURES / "a1_q2_n2.json").read_text())
    code, out, _ = run_json(capsys, "jets", str(FIXTURES / "a1_q2_n2.json"), "--lift-cap", "6")
    assert code == 0
    assert out == data


def test_jets_errors(capsys, tmp_path):
    path = write_problem(tmp_path, JetProblem.from_strings(["x*y - z^2"], 3, 1, variables=("x", "y", "z")))
    code, _, err = run(capsys, "jets", path, "--level", "4", "--cap-budget", "1000")
    assert code == 3 and "budget" in err
    assert run(capsys, "jets", path, "--q", "4")[0] == 2
    assert run(capsys, "jets", path, "--q", "11")[0] == 2
    assert run(capsys, "jets", str(tmp_path / "missing.json"))[0] == 2


def test_catalog(capsys):
    code, data, _ = run_json(capsys, "catalog")
    assert code == 0 and "E8" in data["resolutions"]


def test_unknown_flag_rejected(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["analyze-group", "cyclic:2", "--bogus"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit):
        main([])


def test_console_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "motivic_mckay", "check-mckay", "E8", "--format", "json"],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["holds"] is True
