import json
import os
import shutil

import pytest

import contragen.main
from contragen.main import EXIT_CORPUS, EXIT_FAULT, EXIT_OK, EXIT_USAGE, run

from conftest import POST_EMPTY, PRE_LIMIT, corpus_path

FAST = ["--budget-generations", "3", "--population", "8", "--no-color"]


def test_no_command(capsys):
    assert run([]) == EXIT_USAGE
    assert "specify a command" in capsys.readouterr().err


def test_unknown_flag_is_a_usage_error():
    with pytest.raises(SystemExit) as info:
        run(["generate", corpus_path("giftpack.sub"), "--bogus"])
    assert info.value.code == EXIT_USAGE


def test_invalid_configuration_value(tmp_path):
    args = ["generate", corpus_path("giftpack.sub"), "--population", "1", "--out", str(tmp_path)]
    assert run(args) == EXIT_USAGE


def test_internal_fault_is_not_a_usage_error(monkeypatch, capsys):
    def broken(*args, **kwargs):
        raise ValueError("lost track of a term")

    monkeypatch.setattr(contragen.main, "extract_program", broken)
    assert run(["extract", corpus_path("giftpack.sub")]) == EXIT_FAULT
    assert "Internal fault: ValueError" in capsys.readouterr().err


def test_missing_subject_file(tmp_path):
    assert run(["extract", str(tmp_path / "missing.sub")]) == EXIT_CORPUS


def test_unparsable_subject_file(tmp_path):
    path = tmp_path / "broken.sub"
    path.write_text("class Broken {", encoding="utf-8")
    assert run(["extract", str(path)]) == EXIT_CORPUS


def test_malformed_pattern_table(tmp_path):
    table = tmp_path / "rules.txt"
    table.write_text("{X} is odd\n", encoding="utf-8")
    assert run(["extract", corpus_path("giftpack.sub"), "--patterns", str(table)]) == EXIT_CORPUS


def test_extract_prints_contracts(capsys):
    assert run(["extract", corpus_path("giftpack.sub")]) == EXIT_OK
    data = json.loads(capsys.readouterr().out)
    ids = [c["id"] for c in data["contracts"]]
    assert ids[0] == PRE_LIMIT
    assert POST_EMPTY in ids
    assert data["skipped"] == []


def test_generate_contract_mode(tmp_path):
    progress = tmp_path / "progress.jsonl"
    args = ["generate", corpus_path("giftpack.sub"), "--out", str(tmp_path / "out"), "--progress-log", str(progress)]
    assert run(args + FAST) == EXIT_OK
    lines = progress.read_text(encoding="utf-8").splitlines()
    assert json.loads(lines[0])["generation"] == 0


def test_generate_coverage_mode(tmp_path):
    args = ["generate", corpus_path("giftpack.sub"), "--mode", "coverage", "--out", str(tmp_path)]
    assert run(args + FAST) == EXIT_OK
    with open(tmp_path / "giftpack-coverage.json", encoding="utf-8") as f:
        matrix = json.load(f)["matrix"]
    assert set(matrix) == {f"GiftPack.unwrapAndSave/post{i}" for i in range(5)}


def test_experiment_missing_corpus(tmp_path):
    assert run(["experiment", str(tmp_path / "nowhere"), "--no-color"]) == EXIT_CORPUS


def test_experiment_needs_a_repetition(tmp_path):
    assert run(["experiment", str(tmp_path), "--reps", "0", "--no-color"]) == EXIT_USAGE


def test_experiment_writes_reports(tmp_path, capsys):
    corpus = tmp_path / "corpus"
    corpus.mkdir()
    shutil.copy(corpus_path("divider.sub"), corpus / "divider.sub")
    reports = tmp_path / "reports"
    args = ["experiment", str(corpus), "--reps", "1", "--seed", "4", "--report", str(reports),
            "--budget-generations", "2", "--no-color"]
    assert run(args) == EXIT_OK
    assert sorted(os.listdir(reports)) == ["corpus-seed4-r1.csv", "corpus-seed4-r1.json", "corpus-seed4-r1.txt"]
    assert "Experiment corpus-seed4-r1" in capsys.readouterr().out


def test_experiment_with_only_broken_programs(tmp_path):
    (tmp_path / "broken.sub").write_text("class {", encoding="utf-8")
    args = ["experiment", str(tmp_path), "--reps", "1", "--report", str(tmp_path / "r"), "--no-color"]
    assert run(args) == EXIT_CORPUS
