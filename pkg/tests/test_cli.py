import json
import os

import pytest

from strip_homology import cli
from strip_homology.models import CheckFeedback, VerifyResult


@pytest.fixture(autouse=True)
def restore_cell_limit(monkeypatch):
    monkeypatch.delenv("STRIP_HOMOLOGY_CELL_LIMIT", raising=False)
    monkeypatch.setenv("STRIP_HOMOLOGY_WORKERS", "1")


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_betti_text(capsys):
    assert run(capsys, "betti", "--n", "3", "--w", "2") == (0, "1,7\n", "")


def test_betti_json(capsys):
    code, out, _ = run(capsys, "betti", "--n", "3", "--w", "2", "--format", "json")
    assert code == 0
    assert json.loads(out)["betti"][1] == {"degree": 1, "betti": "7"}


def test_formula_evaluation(capsys):
    assert run(capsys, "formula", "--j", "1", "--w", "2", "--eval", "3")[1] == "7\n"


def test_formula_document(capsys):
    code, out, _ = run(capsys, "formula", "--j", "1", "--w", "2", "--eval", "12", "--format", "json")
    document = json.loads(out)
    assert code == 0
    assert document["dominant"] == {"degree": 2, "base": 2}
    assert document["values"] == [{"n": 12, "betti": "114687"}]


def test_barcode_formats(capsys):
    code, out, _ = run(capsys, "barcode", "--n", "2", "--format", "csv")
    assert code == 0
    assert out.splitlines()[0] == "degree,birth,death,multiplicity"
    _, out, _ = run(capsys, "barcode", "--n", "2", "--degrees", "1", "--format", "json")
    assert json.loads(out) == [{"degree": 1, "birth": 2, "multiplicity": "1"}]


def test_unordered_csv(capsys):
    code, out, _ = run(capsys, "unordered", "--n", "3", "--w", "2", "--p", "2")
    assert code == 0
    assert out == "n,w,p,degree,dim\n3,2,2,0,1\n3,2,2,1,2\n3,2,2,2,0\n"


def test_unordered_json_has_relations(capsys):
    _, out, _ = run(capsys, "unordered", "--n", "6", "--w", "4", "--p", "3", "--format", "json")
    document = json.loads(out)
    assert all(document["relations"].values())
    assert "∘^1" in document["generators"]


def test_weighted_critical_cells(capsys):
    code, out, _ = run(capsys, "critical", "--kind", "weighted", "--weights", "1,1,1", "--k", "2")
    assert code == 0
    assert out.splitlines() == [
        "kind,n,w_or_k,p,dim,count",
        "weighted_permutohedron,3,2,0,0,1",
        "weighted_permutohedron,3,2,0,1,1",
        "weighted_permutohedron,3,2,0,2,0",
    ]


def test_basis_with_chains(capsys):
    code, out, _ = run(capsys, "basis", "--n", "3", "--w", "2", "--dim", "1", "--chains")
    document = json.loads(out)
    assert code == 0
    assert len(document["elements"]) == 7
    assert all(element["chain"] for element in document["elements"])


def test_oracle_homology(capsys):
    code, out, _ = run(capsys, "oracle", "--n", "3", "--w", "2")
    degrees = json.loads(out)["degrees"]
    assert code == 0
    assert [row["betti"] for row in degrees] == ["1", "7", "0"]


def test_oracle_triplets(capsys, tmp_path):
    path = tmp_path / "m.txt"
    path.write_text("1 2 2 2\n0 0 2\n1 1 6\n", encoding="utf-8")
    code, out, _ = run(capsys, "oracle", "--triplets", str(path))
    assert code == 0
    assert json.loads(out)["invariant_factors"] == ["2", "6"]


def test_oracle_persistence(capsys):
    code, out, _ = run(capsys, "oracle", "--persistence", "--n", "2", "--format", "text")
    assert code == 0
    assert out.startswith("H_0\n")


def test_matrix_export(capsys):
    code, out, _ = run(capsys, "matrix", "--n", "3", "--w", "2", "--dim", "1")
    assert code == 0
    assert out.splitlines()[0] == "1 6 12 24"


def test_output_file(capsys, tmp_path):
    target = tmp_path / "out" / "betti.txt"
    code, out, _ = run(capsys, "betti", "--n", "3", "--w", "2", "--output", str(target))
    assert code == 0
    assert out == ""
    assert target.read_text(encoding="utf-8") == "1,7\n"


@pytest.mark.parametrize(
    "argv",
    [
        ("unordered", "--n", "3", "--w", "2", "--p", "4"),
        ("critical", "--w", "2", "--format", "svg"),
        ("formula", "--j", "1", "--w", "1"),
        ("matrix", "--n", "3", "--w", "2", "--dim", "0"),
        ("oracle", "--n", "9", "--w", "3", "--cell-limit", "100"),
    ],
)
def test_invalid_input_exits_with_two(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 2
    assert out == ""
    error = json.loads(err.strip().splitlines()[-1])
    assert set(error) == {"error", "message"}


def test_verify_failure_exits_with_one(capsys, monkeypatch):
    failing = VerifyResult(
        status="fail",
        level="quick",
        summary="0/1 rules passed, 1 failed, 0 warnings",
        score=0.0,
        details=[CheckFeedback(id="X-1", status="fail", comment="broken", score=0.0)],
    )
    monkeypatch.setattr(cli, "run_policy", lambda level, **options: failing)
    code, out, _ = run(capsys, "verify")
    assert code == 1
    assert json.loads(out)["status"] == "fail"


def test_verify_text_report(capsys, monkeypatch):
    passing = VerifyResult(status="ok", level="quick", summary="1/1 rules passed, 0 failed, 0 warnings", score=1.0)
    monkeypatch.setattr(cli, "run_policy", lambda level, **options: passing)
    assert run(capsys, "verify", "--format", "text") == (0, "ok: 1/1 rules passed, 0 failed, 0 warnings\n", "")


@pytest.mark.parametrize(
    "argv",
    [
        ("critical", "--kind", "unordered", "--n", "6", "--w", "4", "--p", "3"),
        ("critical", "--kind", "strip", "--n", "4", "--w", "2"),
        ("critical", "--kind", "weighted", "--weights", "1,1,2", "--k", "3", "--format", "json"),
    ],
)
def test_critical_from_order_matches_enumeration(capsys, argv):
    code, enumerated, _ = run(capsys, *argv)
    assert code == 0
    assert run(capsys, *argv, "--from-order") == (0, enumerated, "")


def test_blocked_cell_is_listed_from_order(capsys):
    argv = ("critical", "--kind", "unordered", "--n", "6", "--w", "4", "--p", "3", "--list-cells", "--format", "json")
    code, out, _ = run(capsys, *argv, "--from-order")
    assert code == 0
    assert "∘^2|∘^4" in json.loads(out)["cells"]


def test_cell_limit_stays_out_of_the_environment(capsys, monkeypatch):
    code, _, err = run(capsys, "critical", "--kind", "strip", "--n", "5", "--w", "3", "--from-order", "--cell-limit", "50")
    assert code == 2
    assert json.loads(err.strip().splitlines()[-1])["error"] == "SizeLimitError"
    assert "STRIP_HOMOLOGY_CELL_LIMIT" not in os.environ
