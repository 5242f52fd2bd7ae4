import json
import subprocess
import sys

import pytest

from rankmax.cli import run


def cli(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_solve_example(capsys, example_path):
    code, out, _ = cli(capsys, "solve", example_path)
    assert code == 0
    assert "signature: (3, 0, 1, 2, 0, 0)" in out
    assert "a1 - p5  (rank 4)" in out


def test_solve_machine_phases(capsys, example_path):
    code, out, _ = cli(capsys, "solve", example_path, "--phases", "--format", "machine")
    doc = json.loads(out)
    assert code == 0
    assert doc["signature"] == [3, 0, 1, 2, 0, 0]
    assert len(doc["phases"]) == 6


def test_classify(capsys, example_path):
    code, out, _ = cli(capsys, "classify", example_path, "--format", "machine")
    classes = {(d["applicant"], d["post"]): d["class"] for d in json.loads(out)}
    assert code == 0
    assert classes[("a1", "p5")] == "every"
    assert classes[("a1", "p2")] == "none"
    assert classes[("a2", "p1")] == "some"


def test_fposts_and_critical(capsys, example_path):
    code, out, _ = cli(capsys, "fposts", example_path, "--applicant", "a1")
    assert code == 0 and out.split() == ["p2", "p1", "p6"]
    code, out, _ = cli(capsys, "critical", example_path, "--applicant", "a6", "--format", "machine")
    assert code == 0 and json.loads(out)["critical_ranks"]["p2"] == 1


def test_strategy_min_max(capsys, example_path):
    code, out, _ = cli(capsys, "strategy", example_path, "--applicant", "a1", "--kind", "min-max", "--format", "machine")
    doc = json.loads(out)
    assert code == 0
    assert doc["guaranteed_post"] == "p2"
    assert doc["mode"] == "every-rmm"
    assert doc["verified"] is True


def test_strategy_human_shows_true_ranks(capsys, example_path):
    code, out, _ = cli(capsys, "strategy", example_path, "--applicant", "a1", "--kind", "best-nonfirst")
    assert code == 0
    assert "1: p3 [3]" in out
    assert "6: p6 [-]" in out
    assert "[ok]" in out


def test_strategy_inapplicable_exit_1(capsys, tmp_path):
    path = tmp_path / "clash.txt"
    path.write_text("a1: p\na2: p\n")
    code, _, err = cli(capsys, "strategy", str(path), "--applicant", "a1", "--kind", "min-max")
    assert code == 1
    assert "no feasible f-post" in err


@pytest.mark.parametrize("kind", ["best-nonfirst", "min-max", "improve-best"])
def test_oracle_verify_strategy(capsys, example_path, kind):
    code, out, _ = cli(capsys, "oracle", example_path, "--applicant", "a1", "--verify-strategy", kind, "--format", "machine")
    assert code == 0
    assert json.loads(out)["confirmed"] is True


def test_oracle_enumerate(capsys, example_path):
    code, out, _ = cli(capsys, "oracle", example_path, "--format", "machine")
    doc = json.loads(out)
    assert code == 0
    assert len(doc["matchings"]) == 6
    assert all(["a1", "p5"] in m for m in doc["matchings"])


def test_oracle_min_max_search(capsys, example_path):
    code, out, _ = cli(capsys, "oracle", example_path, "--applicant", "a1", "--min-max-search", "--format", "machine")
    doc = json.loads(out)
    assert code == 0
    assert doc["optimal_worst_true_rank"] == 1
    assert doc["optimal_posts"] == ["p2"]


def test_oracle_guard_exit_1(capsys, example_path):
    code, _, err = cli(capsys, "oracle", example_path, "--max-applicants", "3")
    assert code == 1
    assert "limit" in err


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["solve"],
        ["strategy", "EX", "--applicant", "a1", "--kind", "bogus"],
        ["fposts", "EX"],
        ["bogus"],
    ],
)
def test_usage_errors_exit_2(capsys, example_path, argv):
    argv = [example_path if a == "EX" else a for a in argv]
    code, _, _ = cli(capsys, *argv)
    assert code == 2


def test_missing_file_exit_2(capsys, tmp_path):
    code, _, err = cli(capsys, "solve", str(tmp_path / "nope.txt"))
    assert code == 2 and "cannot read" in err


def test_parse_error_exit_2(capsys, tmp_path):
    path = tmp_path / "bad.txt"
    path.write_text("a1: (p q\n")
    code, _, err = cli(capsys, "solve", str(path))
    assert code == 2 and "line 1, column 5" in err


def test_unknown_applicant_exit_2(capsys, example_path):
    code, _, _ = cli(capsys, "fposts", example_path, "--applicant", "zz")
    assert code == 2


def test_gen_deterministic(capsys):
    argv = ["gen", "--applicants", "4", "--posts", "4", "--max-rank", "3", "--tie-prob", "0.2", "--seed", "5"]
    _, first, _ = cli(capsys, *argv)
    _, second, _ = cli(capsys, *argv)
    assert first == second
    assert "\na1: " in first


def test_gen_bad_parameters_exit_2(capsys):
    code, _, err = cli(capsys, "gen", "--applicants", "0", "--posts", "1", "--max-rank", "1", "--seed", "1")
    assert code == 2 and "at least 1" in err


@pytest.mark.parametrize("command", ["solve", "classify", "strategy", "oracle"])
def test_machine_output_byte_stable(capsys, example_path, command):
    argv = [command, example_path, "--format", "machine"]
    if command in ("strategy", "oracle"):
        argv += ["--applicant", "a1"]
    if command == "strategy":
        argv += ["--kind", "improve-best"]
    outputs = {cli(capsys, *argv)[1] for _ in range(3)}
    assert len(outputs) == 1


def test_gen_pipe_solve():
    gen = subprocess.run(
        [sys.executable, "-m", "rankmax.cli", "gen", "--applicants", "2", "--posts", "2", "--max-rank", "1",
         "--tie-prob", "0", "--seed", "7"],
        capture_output=True, text=True, check=True,
    )
    solve = subprocess.run(
        [sys.executable, "-m", "rankmax.cli", "solve", "-"], input=gen.stdout, capture_output=True, text=True
    )
    assert solve.returncode == 0
    assert solve.stdout.startswith("signature: (")


def test_failed_certificate_exit_1_with_dump(capsys, tmp_path):
    path = tmp_path / "short.txt"
    path.write_text("a1: p1 p2\na2: p1\n")
    code, out, _ = cli(capsys, "strategy", str(path), "--applicant", "a1", "--kind", "improve-best")
    assert code == 1
    assert "[FAIL] edge (a1, p1) in some-rmm" in out
