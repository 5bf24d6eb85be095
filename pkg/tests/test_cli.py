import csv
import io
import json

import numpy as np

import pytest

from ubrel import lie_algebras as la
from ubrel.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_compose_velocity_addition(capsys):
    code, out, _ = run(capsys, "compose", "--left-v", "0.5", "--right-v", "0.5")
    assert code == 0
    data = json.loads(out)
    assert data["v"][0] == pytest.approx(0.8)
    assert len(data["matrix"]) == 4


def test_compose_methods_agree(capsys):
    args = ["compose", "--c", "2", "--left-v", "0.3", "--left-f", "1", "--right-v", "-0.7", "--right-r", "2", "--right-m", "0.5"]
    _, a, _ = run(capsys, *args, "--method", "matrix")
    _, b, _ = run(capsys, *args, "--method", "closed")
    a, b = json.loads(a), json.loads(b)
    for key in ("v", "f", "r", "m"):
        assert np.allclose(a[key], b[key], rtol=1e-9, atol=1e-12)


def test_compose_identity(capsys):
    _, out, _ = run(capsys, "compose", "--n", "2", "--left", '{"n": 2}', "--right", '{"n": 2}')
    data = json.loads(out)
    assert data["v"] == [0.0, 0.0] and data["r"] == 0.0


def test_compose_json_file(capsys, tmp_path):
    f = tmp_path / "p.json"
    f.write_text(json.dumps({"n": 1, "c": 1.0, "v": [0.5]}))
    code, out, _ = run(capsys, "compose", "--left", str(f), "--right", str(f))
    assert code == 0 and json.loads(out)["v"][0] == pytest.approx(0.8)


@pytest.mark.parametrize(
    "argv",
    [
        ["compose", "--n", "2", "--method", "closed"],
        ["compose", "--left", "{not json"],
        ["compose", "--left", "/nonexistent/file.json"],
        ["compose", "--left-v", "1.5"],
        ["verify", "nope"],
        ["algebra", "so3"],
        ["algebra", "ub_three", "--n", "1", "--c", "-1"],
        [],
    ],
)
def test_usage_errors_exit_2(capsys, argv):
    with pytest.raises(SystemExit) as info:
        raise SystemExit(main(argv))
    assert info.value.code == 2


def test_transform(capsys):
    code, out, _ = run(capsys, "transform", "--params", '{"v": [0.6]}', "--diff", '{"dt": 1, "dq": [0], "dp": [0], "de": 0}')
    assert code == 0
    data = json.loads(out)
    assert data["dt"] == pytest.approx(1.25) and data["dq"][0] == pytest.approx(0.75)


def test_algebra_tables(capsys):
    _, out, _ = run(capsys, "algebra", "ub", "--n", "1")
    assert json.loads(out)["labels"] == ["L_0,1", "M_0,0", "M_0,1", "M_1,1"]
    _, out, _ = run(capsys, "algebra", "ubc", "--n", "3")
    coeffs = {t["coeff"] for br in json.loads(out)["brackets"] for t in br["terms"]}
    assert coeffs <= {-2.0, -1.0, 1.0, 2.0}
    _, out, _ = run(capsys, "algebra", "u1n", "--n", "1", "--b", "10", "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    mm = [float(r["coeff"]) for r in rows if r["label_i"].startswith("M") and r["label_j"].startswith("M")]
    assert sorted(mm) == pytest.approx([-0.02, 0.02])


def test_verify_metric_and_determinism(capsys):
    code, out1, _ = run(capsys, "verify", "metric", "--trials", "50", "--seed", "7")
    _, out2, _ = run(capsys, "verify", "metric", "--trials", "50", "--seed", "7")
    assert code == 0
    a, b = json.loads(out1), json.loads(out2)
    assert a["status"] == "pass"
    a.pop("elapsed_ms"), b.pop("elapsed_ms")
    assert json.dumps(a) == json.dumps(b)


def test_verify_contraction_ratios(capsys):
    code, out, _ = run(capsys, "verify", "contraction")
    data = json.loads(out)
    assert code == 0
    rows = data["details"]["contraction:ub_three_n3"]
    assert [r["ratio"] for r in rows[1:]] == pytest.approx([0.25] * 3, abs=1e-4)


def test_verify_corrupted_table_fails(capsys, tmp_path):
    bad = la.build_basis("ub_covariant", 2).table.with_entry("L_0,1", "L_0,2", "L_1,2", -1.0)
    f = tmp_path / "bad.json"
    f.write_text(json.dumps(bad.to_json()))
    code, out, err = run(capsys, "verify", "algebra", "--table", str(f))
    assert code == 1
    assert json.loads(out)["status"] == "fail"
    assert "[L_0,1, L_0,2]" in err
