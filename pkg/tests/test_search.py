import io
import json
import random

import pytest

from contragen.contracts.extractor import extract_program
from contragen.fitness import FitnessEvaluator, objectives_for
from contragen.lang.interpreter import execute_test
from contragen.lang.parser import parse_file
from contragen.search import (
    SATISFYING,
    SECONDS,
    VIOLATING,
    Archive,
    ConfigError,
    GeneticSearch,
    ProgressLog,
    SearchConfig,
    TestCase,
    batch_budget,
    evolve,
    plan_batches,
    select_solutions,
    total_budget,
)
from contragen.search.factory import TestFactory, is_well_formed
from contragen.search.operators import Mutator, crossover, remove_with_dependents
from contragen.search.selection import Minimizer

from conftest import GIFT_UNWRAP, POST_CONTAINS, POST_EMPTY, POST_NPE, POST_OTHERWISE, GiftTests, call, corpus_path, new, ref


def goals_by_id(extraction):
    return {o.id: o for o in objectives_for(extraction.contracts)}


class TestConfig:
    def test_defaults(self):
        config = SearchConfig()
        assert config.population_size == 50
        assert config.batch_size == 10
        assert config.epsilon == 0.5

    def test_replace_ignores_none(self):
        config = SearchConfig().replace(seed=9, workers=None)
        assert config.seed == 9
        assert config.workers == 1

    @pytest.mark.parametrize(
        "changes",
        [{"population_size": 1}, {"batch_size": 0}, {"budget_mode": "steps"}, {"workers": 0}, {"epsilon": 0}],
    )
    def test_invalid_values(self, changes):
        with pytest.raises(ConfigError):
            SearchConfig(**changes)

    def test_wrong_type_is_a_config_error(self):
        with pytest.raises(ConfigError):
            SearchConfig(population_size="fifty")

    def test_from_settings(self):
        class Stub:
            values = {"search.population_size": 12, "interpreter.step_budget": 500, "fitness.epsilon": 0.25}

            def get(self, key):
                return self.values.get(key)

        config = SearchConfig.from_settings(Stub())
        assert (config.population_size, config.step_budget, config.epsilon) == (12, 500, 0.25)


class TestPlanner:
    def test_seconds_budget_per_batch(self):
        config = SearchConfig(budget_mode=SECONDS)
        batches = plan_batches(list(range(22)), config)
        assert [len(b.objectives) for b in batches] == [10, 10, 2]
        assert [b.budget for b in batches] == [350, 350, 70]
        assert total_budget(batches) == 770

    def test_floor_applies_to_small_batches(self):
        assert batch_budget(1, SearchConfig(budget_mode=SECONDS)) == 60
        assert batch_budget(1, SearchConfig()) == 60
        assert batch_budget(5, SearchConfig()) == 100

    def test_fixed_budget_wins(self):
        assert batch_budget(7, SearchConfig(fixed_budget=3)) == 3

    def test_no_objectives(self):
        with pytest.raises(ValueError):
            plan_batches([], SearchConfig())


class TestArchive:
    def test_lower_value_then_shorter_test(self):
        archive = Archive(["g"])
        long_test = GiftTests.already_contains()
        short_test = GiftTests.null_gift()
        assert archive.update("g", 0.5, short_test)
        assert archive.update("g", 0.0, long_test)
        assert not archive.update("g", 0.2, short_test)
        assert archive.update("g", 0.0, short_test)
        assert archive.solution("g").serialize() == short_test.serialize()

    def test_unsolved_goal_has_no_solution(self):
        archive = Archive(["a", "b"])
        archive.update("a", 0.3, GiftTests.null_gift())
        assert archive.solution("a") is None
        assert archive.best_value("b") == 1.0
        assert archive.unsolved_ids == ["a", "b"]
        assert not archive.all_solved

    def test_merge_and_distinct_tests(self):
        first = Archive(["a"])
        first.update("a", 0.0, GiftTests.null_gift())
        second = Archive(["b", "c"])
        second.update("b", 0.0, GiftTests.null_gift())
        first.merge(second)
        assert first.goal_ids == ["a", "b", "c"]
        assert first.solved_ids == ["a", "b"]
        assert len(first.tests()) == 1

    def test_stored_test_is_a_copy(self):
        archive = Archive()
        test = GiftTests.null_gift()
        archive.update("g", 0.0, test)
        test.statements.pop()
        assert len(archive.solution("g")) == 3


class TestOperators:
    def test_remove_with_dependents(self):
        result = remove_with_dependents(GiftTests.already_contains(), 0)
        assert [s.method_id for s in result.statements] == ["Drawer.Drawer"]

    def test_without_refuses_used_statements(self):
        test = GiftTests.already_contains()
        assert test.without(0) is None
        shorter = test.without(3)
        assert len(shorter) == 4
        assert shorter.statements[-1].receiver == 1
        assert shorter.statements[-1].args[0].ref == 2

    @pytest.mark.parametrize("seed", range(20))
    def test_crossover_children_are_well_formed(self, giftpack, seed):
        rng = random.Random(seed)
        config = SearchConfig()
        factory = TestFactory(giftpack, config, rng, [GIFT_UNWRAP])
        first, second = factory.random_test(), factory.random_test()
        child = crossover(first, second, rng, config.max_test_length)
        assert is_well_formed(child, giftpack)

    @pytest.mark.parametrize("seed", range(20))
    def test_mutants_are_well_formed(self, giftpack, seed):
        rng = random.Random(seed)
        config = SearchConfig()
        factory = TestFactory(giftpack, config, rng, [GIFT_UNWRAP])
        mutator = Mutator(factory, rng, config.max_test_length)
        test = factory.random_test()
        for _ in range(10):
            test = mutator.mutate(test)
            assert is_well_formed(test, giftpack)

    def test_random_tests_are_reproducible(self, giftpack):
        def sample(seed):
            factory = TestFactory(giftpack, SearchConfig(), random.Random(seed), [GIFT_UNWRAP])
            return [factory.random_test().serialize() for _ in range(5)]

        assert sample(11) == sample(11)


class TestEvolve:
    def test_needs_goals(self, giftpack):
        with pytest.raises(ValueError):
            GeneticSearch(giftpack, [], SearchConfig(), random.Random(0))

    def test_unknown_target_method(self, giftpack):
        counter = extract_program(parse_file(corpus_path("counter.sub")))
        with pytest.raises(ValueError):
            evolve(giftpack, objectives_for(counter.contracts)[:1], SearchConfig(fixed_budget=1), random.Random(0))

    def test_archive_entries_are_sound(self, giftpack, gift_extraction, fast_config):
        objectives = objectives_for(gift_extraction.contracts)
        archive = evolve(giftpack, objectives, fast_config, random.Random(fast_config.seed))
        evaluator = FitnessEvaluator(giftpack)
        for objective in objectives:
            entry = archive.best(objective.id)
            assert entry is not None
            trace = execute_test(giftpack, entry.test)
            assert evaluator.evaluate(objective, trace).value == pytest.approx(entry.value)
        # drawer == null always raises NullPointerException
        assert not archive.is_solved(f"{POST_NPE}:violate")
        assert archive.is_solved(f"{POST_EMPTY}:violate")
        assert archive.is_solved(f"{POST_OTHERWISE}:satisfy")

    def test_worker_count_does_not_change_results(self, giftpack, gift_extraction):
        objectives = objectives_for(gift_extraction.contracts)
        results = []
        for workers in (1, 4):
            config = SearchConfig(population_size=12, fixed_budget=4, seed=3, workers=workers)
            results.append(evolve(giftpack, objectives, config, random.Random(3)).to_dict())
        assert results[0] == results[1]

    def test_progress_log_has_one_line_per_generation(self, giftpack, gift_extraction):
        goal = goals_by_id(gift_extraction)[f"{POST_NPE}:violate"]
        stream = io.StringIO()
        config = SearchConfig(population_size=6, fixed_budget=3)
        evolve(giftpack, [goal], config, random.Random(1), progress=ProgressLog(stream=stream), batch_index=0)
        lines = [json.loads(line) for line in stream.getvalue().splitlines()]
        assert [line["generation"] for line in lines] == [0, 1, 2, 3]
        assert all(line["batch"] == 0 for line in lines)
        assert lines[-1]["best"][goal.id] > 0

    @pytest.mark.parametrize("budget", [2, 5])
    def test_doubling_the_budget_keeps_every_solution(self, giftpack, gift_extraction, budget):
        objectives = objectives_for(gift_extraction.contracts)
        config = SearchConfig(population_size=10, fixed_budget=budget)
        short = evolve(giftpack, objectives, config, random.Random(4))
        long = evolve(giftpack, objectives, config.replace(fixed_budget=2 * budget), random.Random(4))
        assert set(short.solved_ids) <= set(long.solved_ids)
        for goal_id in short.goal_ids:
            assert long.best_value(goal_id) <= short.best_value(goal_id)


def test_progress_log_file(tmp_path):
    path = tmp_path / "logs" / "progress.jsonl"
    with ProgressLog(str(path)) as log:
        log.record(0, {"g": 0.5}, 10)
        log.record(1, {"g": 0.0}, 20)
    lines = path.read_text(encoding="utf-8").splitlines()
    assert json.loads(lines[1]) == {"generation": 1, "best": {"g": 0.0}, "evaluations": 20}


class TestSelection:
    def test_minimizer_strips_unneeded_statements(self, giftpack, gift_extraction):
        goal = goals_by_id(gift_extraction)[f"{POST_EMPTY}:violate"]
        padded = TestCase([
            new("Something", 5),
            new("GiftPack", None),
            new("Drawer"),
            call("Drawer", "add", 2, ref(0), returns="bool"),
            call("GiftPack", "unwrapAndSave", 1, ref(2), 153, returns="bool"),
        ])
        minimized = Minimizer(giftpack, SearchConfig()).minimize(goal, padded)
        assert [s.method_id for s in minimized.statements] == ["GiftPack.GiftPack", "Drawer.Drawer", GIFT_UNWRAP]
        assert minimized.focal_index == 2
        assert minimized.focal_contract == POST_EMPTY

    def test_minimizer_rejects_non_solutions(self, giftpack, gift_extraction):
        goal = goals_by_id(gift_extraction)[f"{POST_EMPTY}:satisfy"]
        assert Minimizer(giftpack, SearchConfig()).minimize(goal, GiftTests.null_gift()) is None

    def test_violating_test_is_preferred(self, giftpack, gift_extraction):
        objectives = objectives_for(gift_extraction.contracts)
        archive = Archive(o.id for o in objectives)
        archive.update(f"{POST_CONTAINS}:violate", 0.0, GiftTests.already_contains())
        archive.update(f"{POST_OTHERWISE}:satisfy", 0.0, GiftTests.fresh_drawer())
        solutions = select_solutions(archive, objectives, giftpack)
        assert [(s.contract_id, s.outcome) for s in solutions] == [
            (POST_CONTAINS, VIOLATING),
            (POST_OTHERWISE, SATISFYING),
        ]
        assert all(s.fitness.solved for s in solutions)
        assert solutions[0].test.focal_index == len(solutions[0].test) - 1
