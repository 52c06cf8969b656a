"""Command-line front end: subcommands, exit codes, determinism."""

import json

import pytest

from char3lab.cli import run
from char3lab.field import make_field
from char3lab.linalg import Matrix, identity, matrix_to_record


@pytest.fixture
def i3_file(tmp_path):
    rec = matrix_to_record(identity(make_field(1), 3))
    path = tmp_path / "I3.json"
    path.write_text(json.dumps(rec))
    return str(path)


def test_permanent_identity_matrix(i3_file, capsys):
    assert run(["permanent", "--input", i3_file, "--method", "ryser"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["value"] == "[1]"


def test_permanent_naive_method(i3_file, capsys):
    assert run(["permanent", "--input", i3_file, "--method", "naive"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["value"] == "[1]"


def test_permanent_paper_compare(tmp_path, capsys):
    import random

    spec = make_field(4)
    rng = random.Random(90)
    m = Matrix(spec, 3, 3, tuple(spec.random(rng) for _ in range(9)))
    path = tmp_path / "M.json"
    path.write_text(json.dumps(matrix_to_record(m)))
    assert run(["permanent", "--input", str(path), "--method", "paper",
                "--compare", "--seed", "4"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert "verdict" in out
    assert out["verdict"]["rhs"] == out["oracle"]


def test_check_must_pass_exit_zero(capsys):
    code = run(["check", "--id", "borchardt", "--dims", "n=3",
                "--field", "3^2", "--trials", "5", "--seed", "7"])
    assert code == 0
    out = json.loads(capsys.readouterr().out)
    assert all(v["status"] == "pass" for v in out["verdicts"])


def test_check_finding_exit_zero(tmp_path, capsys):
    # a non-MUST-PASS fail is a finding: recorded, exit 0
    out_file = tmp_path / "out.json"
    code = run(["check", "--id", "lemma5", "--dims", "t=2", "--field", "3^1",
                "--trials", "1", "--seed", "0", "--json", str(out_file)])
    assert code == 0
    rec = json.loads(out_file.read_text())
    v = rec["verdicts"][0]
    assert v["status"] in ("pass", "fail")


def test_check_unknown_id_usage_error(capsys):
    assert run(["check", "--id", "nonsense"]) == 2


def test_check_witness_replay(tmp_path, capsys):
    out_file = tmp_path / "v.json"
    assert run(["check", "--id", "thm3", "--field", "3^4", "--seed", "0",
                "--json", str(out_file)]) == 0
    verdict = json.loads(out_file.read_text())["verdicts"][0]
    assert verdict["status"] == "fail"
    wit_file = tmp_path / "w.json"
    wit_file.write_text(json.dumps(verdict))
    replay_file = tmp_path / "r.json"
    assert run(["check", "--witness", str(wit_file),
                "--json", str(replay_file)]) == 0
    replay = json.loads(replay_file.read_text())["verdicts"][0]
    assert replay["lhs"] == verdict["lhs"]
    assert replay["rhs"] == verdict["rhs"]


def test_check_all_small_plan(tmp_path, capsys):
    plan_file = tmp_path / "plan.json"
    plan_file.write_text(json.dumps(
        [{"id": "lemma1", "trials": 1}, {"id": "pfaffian_det", "trials": 1}]))
    out_file = tmp_path / "report.json"
    code = run(["check-all", "--plan", str(plan_file), "--field", "3^2",
                "--seed", "1", "--json", str(out_file)])
    assert code == 0
    rep = json.loads(out_file.read_text())
    assert rep["schema_version"] == 1
    assert rep["must_pass_ok"] is True
    assert len(rep["verdicts"]) == 2


def test_field_subcommand(capsys):
    assert run(["field", "--make", "4"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["field"] == "3^4/[1,0,1,1,1]"
    assert out["modulus"] == [1, 0, 1, 1, 1]


def test_bearing_subcommand(capsys):
    assert run(["bearing", "--n", "1", "--m", "2", "--field", "3^3",
                "--strategy", "random", "--seed", "3",
                "--budget", "20000"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["found"] is True
    assert out["bearing"]["jacobian_rank"] >= 0


def test_no_subcommand_usage_error(capsys):
    assert run([]) == 2


def test_stdout_deterministic(capsys):
    argv = ["check", "--id", "lemma4", "--field", "3^2", "--trials", "3",
            "--seed", "13"]
    assert run(argv) == 0
    first = capsys.readouterr().out
    assert run(argv) == 0
    second = capsys.readouterr().out
    assert first == second
