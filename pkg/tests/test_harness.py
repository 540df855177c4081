import csv
import io
import json
import os
import shutil

import pytest

from contragen.contracts.model import HIGH, LOW
from contragen.harness import (
    CATEGORIES,
    ContractRow,
    Experiment,
    ProgramReport,
    RunReport,
    render_report,
    run_contract_generation,
    run_coverage_generation,
    run_experiment,
    write_report,
)
from contragen.harness.experiment import contract_budget, corpus_files
from contragen.harness.report import CSV_FIELDS, ROW_LABELS
from contragen.search import SearchConfig

from conftest import POST_CONTAINS, POST_EMPTY, POST_NOMORE, POST_NPE, corpus_path


def row(
    contract_hits=0,
    contract_alarms=0,
    baseline_hits=0,
    baseline_alarms=0,
    repetitions=10,
    confidence=HIGH,
    contract_inconclusive=0,
    baseline_inconclusive=0,
):
    return ContractRow(
        "p", "P.m/post0", "@return x", confidence, repetitions,
        contract_hits, contract_alarms, baseline_hits, baseline_alarms,
        contract_inconclusive, baseline_inconclusive,
    )


class TestClassification:
    @pytest.mark.parametrize(
        "counts, category",
        [
            ((5, 0, 0, 0), "contract_only_pass"),
            ((5, 3, 4, 4), "contract_only_alarm"),
            ((10, 0, 10, 0), "both_pass"),
            ((5, 3, 5, 3), "both_alarm"),
            ((6, 4, 6, 3), "both_alarm_contract"),
            ((5, 2, 5, 3), "both_alarm_baseline"),
            ((0, 0, 7, 0), "baseline_only_pass"),
            ((2, 2, 7, 5), "baseline_only_alarm"),
            ((4, 4, 4, 4), "untested"),
        ],
    )
    def test_categories(self, counts, category):
        assert row(*counts).category == category

    def test_alarm_needs_a_strict_majority_of_hits(self):
        tied = row(6, 3)
        assert tied.contract_tested
        assert not tied.contract_alarm

    def test_single_repetition(self):
        assert row(1, 1, 0, 0, repetitions=1).category == "contract_only_alarm"
        assert row(0, 0, 0, 0, repetitions=1).category == "untested"

    def test_odd_repetitions_round_the_threshold_up(self):
        assert row(2, 0, repetitions=3).contract_tested
        assert not row(1, 0, repetitions=3).contract_tested

    def test_hit_without_a_verdict_is_inconclusive(self):
        assert row(0, 0, 10, 0, baseline_inconclusive=10).category == "inconclusive"
        assert row(10, 0, 0, 0, contract_inconclusive=6).category == "inconclusive"
        # most hitting runs must reach a verdict
        assert row(10, 0, 10, 0, baseline_inconclusive=5).category == "contract_only_pass"
        assert row(10, 2, 10, 6, baseline_inconclusive=4).category == "both_alarm_baseline"
        assert row(0, 0, 4, 0, baseline_inconclusive=4).category == "untested"

    def test_inconclusive_counts_are_reported(self):
        data = row(10, 0, 10, 0, contract_inconclusive=1, baseline_inconclusive=9).to_dict()
        assert data["contract_inconclusive"] == 1
        assert data["baseline_inconclusive"] == 9

    def test_low_confidence_alarm_is_suspect(self):
        assert row(5, 5, confidence=LOW).suspect
        assert not row(5, 0, confidence=LOW).suspect
        assert not row(5, 5, confidence=HIGH).suspect


def sample_report():
    report = RunReport("/data/corpus/", 3, 2, {"population_size": 50})
    program = ProgramReport("p", "p.sub", 4, 1, 3, 0, 1)
    program.rows = [
        ContractRow("p", "P.m/post0", "@throws E", HIGH, 2, 2, 2, 2, 0),
        ContractRow("p", "P.m/post1", "@return x", LOW, 2, 1, 1, 0, 0),
        ContractRow("p", "P.m/post2", "@return x", HIGH, 2, 0, 0, 0, 0),
    ]
    report.programs.append(program)
    report.contract_tests = 5
    report.baseline_contracts_per_test = [0, 1, 2, 2]
    return report


class TestRunReport:
    def test_counts(self):
        data = sample_report().to_dict()
        assert data["name"] == "corpus-seed3-r2"
        assert list(data["categories"]) == list(CATEGORIES)
        assert data["categories"]["both_alarm_contract"] == 1
        assert data["categories"]["contract_only_alarm"] == 1
        assert data["categories"]["untested"] == 1
        assert data["total"] == 3
        assert data["tested"] == {"contracts": 3, "contract_tested": 2, "baseline_tested": 1, "suspect": 1}

    def test_per_test_stats(self):
        stats = sample_report().per_test_stats()
        assert stats["baseline_tests"] == 4
        assert stats["zero_contract_fraction"] == 0.25
        assert stats["multi_contract_tests"] == 2
        assert stats["max_contracts_per_test"] == 2
        assert stats["contract_mode_tests"] == 5


class TestRendering:
    def test_text(self):
        text = render_report(sample_report(), "text")
        assert text.startswith("Experiment corpus-seed3-r2")
        for label, _ in ROW_LABELS:
            assert label in text
        assert "P.m/post1" in text
        assert "(suspect)" in text
        assert "hitting no contract: 1 (25.0%)" in text

    def test_json_round_trips_the_dict(self):
        report = sample_report()
        assert json.loads(render_report(report, "json")) == json.loads(json.dumps(report.to_dict()))

    def test_csv(self):
        rows = list(csv.DictReader(io.StringIO(render_report(sample_report(), "csv"))))
        assert len(rows) == 3
        assert tuple(rows[0].keys()) == CSV_FIELDS
        assert rows[0]["category"] == "both_alarm_contract"

    def test_dict_input(self):
        data = sample_report().to_dict()
        assert render_report(data, "text") == render_report(sample_report(), "text")

    def test_unknown_format(self):
        with pytest.raises(ValueError):
            render_report(sample_report(), "xml")

    def test_write_report(self, tmp_path):
        paths = write_report(sample_report(), str(tmp_path))
        assert sorted(os.path.basename(p) for p in paths.values()) == [
            "corpus-seed3-r2.csv",
            "corpus-seed3-r2.json",
            "corpus-seed3-r2.txt",
        ]


class TestGeneration:
    def test_contract_budget(self, gift_extraction):
        # 10 objectives form one batch: max(60, 20 * 10) generations
        assert contract_budget(gift_extraction, SearchConfig()) == 200

    def test_contract_generation(self, giftpack, gift_extraction, fast_config):
        run = run_contract_generation(giftpack, gift_extraction, fast_config, fast_config.seed)
        assert set(run.hits) == {c.id for c in gift_extraction.postconditions()}
        assert run.hits[POST_EMPTY] and run.alarms[POST_EMPTY]
        # these two cannot be violated by any input
        assert not run.alarms[POST_NPE]
        assert not run.alarms[POST_NOMORE]
        assert run.tests == len(run.emitted) == sum(run.judged.values())
        assert all(run.hits[cid] for cid, judged in run.judged.items() if judged)
        for solution, emitted in zip(run.solutions, run.emitted):
            assert emitted.focal_contract == solution.contract_id
            assert emitted.expected == ("alarm" if run.alarms[solution.contract_id] else "pass")

    def test_coverage_generation(self, giftpack, gift_extraction):
        config = SearchConfig(population_size=8, seed=1)
        run = run_coverage_generation(giftpack, gift_extraction, config, 1, budget=3)
        assert set(run.hits) == {c.id for c in gift_extraction.postconditions()}
        assert all(run.hits[cid] for cid, alarm in run.alarms.items() if alarm)
        assert all(run.hits[cid] for cid, judged in run.judged.items() if judged)
        assert not any(run.inconclusive(cid) and run.alarms[cid] for cid in run.hits)
        assert len(run.contracts_per_test) == run.tests
        assert not run.alarms[POST_NPE]


class TestExperiment:
    def test_needs_a_repetition(self):
        with pytest.raises(ValueError):
            Experiment(SearchConfig(), 0)

    def test_missing_corpus(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            corpus_files(str(tmp_path / "nowhere"))

    def test_broken_program_does_not_stop_the_run(self, tmp_path):
        shutil.copy(corpus_path("divider.sub"), tmp_path / "divider.sub")
        (tmp_path / "broken.sub").write_text("class Broken {", encoding="utf-8")
        config = SearchConfig(population_size=6, fixed_budget=2)
        report = run_experiment(str(tmp_path), config, repetitions=1)
        assert [p.name for p in report.programs] == ["divider"]
        assert [f["program"] for f in report.failures] == ["broken.sub"]
        rows = {r.contract_id: r for r in report.rows}
        assert len(rows) == 6
        # the precondition excludes the guard
        assert rows["Divider.divide/post0"].category == "untested"
        assert report.to_dict()["total"] == 6


@pytest.mark.slow
class TestAcceptance:
    @pytest.fixture
    def gift_corpus(self, tmp_path):
        directory = tmp_path / "gifts"
        directory.mkdir()
        shutil.copy(corpus_path("giftpack.sub"), directory / "giftpack.sub")
        return str(directory)

    def test_seeded_faults_raise_alarms(self, gift_corpus, tmp_path):
        config = SearchConfig(population_size=50, fixed_budget=80, seed=0)
        emit_dir = str(tmp_path / "suites")
        report = run_experiment(gift_corpus, config, repetitions=1, emit_dir=emit_dir)
        rows = {r.contract_id: r for r in report.rows}
        assert rows[POST_EMPTY].contract_alarm
        assert rows[POST_CONTAINS].contract_alarm
        assert not rows[POST_NOMORE].contract_alarm
        assert os.path.isfile(os.path.join(emit_dir, "giftpack", "GiftPack", "manifest.json"))

    def test_same_seed_same_report(self, gift_corpus):
        config = SearchConfig(population_size=20, fixed_budget=10, seed=5)
        first = run_experiment(gift_corpus, config, repetitions=2).to_dict()
        second = run_experiment(gift_corpus, config, repetitions=2).to_dict()
        assert first == second


@pytest.fixture(scope="module")
def gift_report(tmp_path_factory):
    directory = tmp_path_factory.mktemp("gifts")
    shutil.copy(corpus_path("giftpack.sub"), directory / "giftpack.sub")
    return run_experiment(str(directory), SearchConfig(), repetitions=10)


@pytest.fixture(scope="module")
def corpus_report(corpus_dir):
    return run_experiment(corpus_dir, SearchConfig(), repetitions=10)


@pytest.mark.slow
class TestGiftPackRepetitions:
    def test_every_postcondition_tested_in_nine_runs(self, gift_report):
        rows = {r.contract_id: r for r in gift_report.rows}
        assert len(rows) == 5
        assert all(r.contract_hits >= 9 for r in rows.values())

    def test_seeded_faults_alarm_in_nine_runs(self, gift_report):
        rows = {r.contract_id: r for r in gift_report.rows}
        assert rows[POST_EMPTY].contract_alarms >= 9
        assert rows[POST_CONTAINS].contract_alarms >= 9

    def test_baseline_misses_the_already_contains_contract(self, gift_report):
        row = next(r for r in gift_report.rows if r.contract_id == POST_CONTAINS)
        assert row.baseline_hits <= 4
        assert not row.baseline_tested


@pytest.mark.slow
class TestCorpusComparison:
    def test_contract_mode_tests_a_superset(self, corpus_report):
        contract = {r.contract_id for r in corpus_report.rows if r.contract_tested}
        baseline = {r.contract_id for r in corpus_report.rows if r.baseline_tested}
        assert baseline <= contract
        assert len(contract) >= 1.1 * len(baseline)

    def test_no_baseline_only_rows(self, corpus_report):
        counts = corpus_report.category_counts()
        assert counts["baseline_only_alarm"] == 0
        assert counts["baseline_only_pass"] == 0

    def test_baseline_tests_hit_zero_and_several_contracts(self, corpus_report):
        stats = corpus_report.per_test_stats()
        assert stats["zero_contract_tests"] >= 1
        assert stats["multi_contract_tests"] >= 1
