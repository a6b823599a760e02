import json
from fractions import Fraction

import pytest

from levinorm.cli import BAD_INPUT, FAILED, OK, main


def write(path, doc):
    path.write_text(json.dumps(doc))
    return str(path)


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr().out
    return code, out


@pytest.fixture
def sl2_problem(tmp_path, capsys):
    out = tmp_path / "p.json"
    assert main(["make-example", "sl2", "--steps", "2", "--seed", "3", "-o", str(out)]) == OK
    capsys.readouterr()
    return out


def test_check_valid(sl2_problem, capsys):
    code, out = run(["check", str(sl2_problem)], capsys)
    report = json.loads(out)
    assert code == OK and report["ok"] and report["D"] == 4


def test_check_names_jacobi_triple(sl2_problem, tmp_path, capsys):
    doc = json.loads(sl2_problem.read_text())
    # add x1 x2 to {x1, x2} only: breaks Jacobi at degree 2
    doc["structure"]["brackets"].append({"i": 1, "j": 2, "poly": [{"exp": [2, 0, 1], "coef": "1"}]})
    doc["structure"]["brackets"] = _merge(doc["structure"]["brackets"])
    code, out = run(["check", write(tmp_path / "bad.json", doc)], capsys)
    report = json.loads(out)
    assert code == FAILED
    jac = [f for f in report["findings"] if f["code"] == "jacobi"]
    assert jac and len(jac[0]["triple"]) == 3


def _merge(entries):
    merged = {}
    for e in entries:
        merged.setdefault((e["i"], e["j"]), []).extend(e["poly"])
    out = []
    for (i, j), poly in merged.items():
        by = {}
        for t in poly:
            by[tuple(t["exp"])] = by.get(tuple(t["exp"]), 0) + Fraction(t["coef"])
        out.append({"i": i, "j": j, "poly": [{"exp": list(e), "coef": str(c)} for e, c in by.items() if c]})
    return out


def test_check_bad_coefficient(sl2_problem, tmp_path, capsys):
    doc = json.loads(sl2_problem.read_text())
    doc["structure"]["brackets"][0]["poly"][0]["coef"] = "1/0"
    code, _ = run(["check", write(tmp_path / "bad.json", doc)], capsys)
    assert code == BAD_INPUT


def test_missing_file(tmp_path, capsys):
    assert main(["check", str(tmp_path / "nope.json")]) == BAD_INPUT
    assert main(["diagnostics", str(tmp_path / "nope.json")]) == BAD_INPUT


def test_normalize_schedule_too_long(sl2_problem, capsys):
    code, out = run(["normalize", str(sl2_problem), "--steps", "3"], capsys)
    assert code == FAILED
    assert json.loads(out)["status"] == "failed"


def test_normalize_and_diagnostics(sl2_problem, tmp_path, capsys):
    res = tmp_path / "r.json"
    code, _ = run(["normalize", str(sl2_problem), "-o", str(res)], capsys)
    doc = json.loads(res.read_text())
    assert code == OK and doc["status"] == "ok" and all(doc["checks"].values())
    code, out = run(["diagnostics", str(res), "--rho", "0.5", "--homotopy-samples", "3"], capsys)
    rep = json.loads(out)
    assert code == OK and len(rep["steps"]) == 2 and len(rep["homotopy"]["windows"]) == 2
    assert main(["diagnostics", str(res), "--rho", "0"]) == BAD_INPUT
    assert main(["diagnostics", str(res), "--epsilon", "0.3"]) == BAD_INPUT


def test_linear_input_gives_zero_psi(tmp_path, capsys):
    out = tmp_path / "p.json"
    main(["make-example", "so3", "--steps", "2", "-o", str(out)])
    doc = json.loads(out.read_text())
    for e in doc["structure"]["brackets"]:
        e["poly"] = [t for t in e["poly"] if sum(t["exp"]) == 1]
    res = tmp_path / "r.json"
    main(["normalize", write(tmp_path / "lin.json", doc), "-o", str(res)])
    capsys.readouterr()
    code, text = run(["diagnostics", str(res), "--rho", "1"], capsys)
    rep = json.loads(text)
    assert code == OK and all(r["psi_majorant"] == 0 for r in rep["steps"])


def test_algebroid_normalize(tmp_path, capsys):
    out = tmp_path / "a.json"
    main(["make-example", "sl2-k2", "--mode", "algebroid", "--steps", "2", "--seed", "1", "-o", str(out)])
    capsys.readouterr()
    code, text = run(["normalize", str(out), "--format", "text"], capsys)
    assert code == OK
    assert "anchor_linear: pass" in text


def test_gaussian_field(sl2_problem, capsys):
    code, out = run(["normalize", str(sl2_problem), "--field", "gaussian"], capsys)
    assert code == OK and json.loads(out)["status"] == "ok"


def test_make_example_text(capsys):
    code, out = run(["make-example", "so3", "--format", "text"], capsys)
    assert code == OK and out.startswith("poisson problem: n=3 D=4")
