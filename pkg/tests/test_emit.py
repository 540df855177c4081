import os

import pytest

from contragen.emit import (
    ALARM,
    PASS,
    FocalContractMismatch,
    SuiteExporter,
    assign_names,
    attach_oracle,
    build_suite,
    load_manifest,
    replay,
    replay_manifest,
    synthesize_name,
)
from contragen.emit.exporter import MANIFEST
from contragen.fitness import FitnessValue, objectives_for
from contragen.search import SATISFYING, VIOLATING, Solution

from conftest import POST_CONTAINS, POST_EMPTY, POST_NOMORE, POST_NPE, POST_OTHERWISE, PRE_LIMIT, GiftTests


def focused(test, contract_id):
    test.focal_contract = contract_id
    test.focal_index = len(test.statements) - 1
    return test


def solution(extraction, contract_id, mode, test):
    objective = next(o for o in objectives_for(extraction.contracts) if o.id == f"{contract_id}:{mode}")
    outcome = VIOLATING if mode == "violate" else SATISFYING
    test = focused(test, contract_id)
    return Solution(contract_id, test, outcome, FitnessValue(0.0, 0.0, 0.0, test.focal_index), objective)


@pytest.fixture
def gift_suite(gift_extraction):
    solutions = [
        solution(gift_extraction, POST_EMPTY, "violate", GiftTests.null_gift()),
        solution(gift_extraction, POST_NPE, "satisfy", GiftTests.null_drawer()),
        solution(gift_extraction, POST_NOMORE, "satisfy", GiftTests.full_drawer()),
        solution(gift_extraction, POST_CONTAINS, "violate", GiftTests.already_contains()),
        solution(gift_extraction, POST_OTHERWISE, "satisfy", GiftTests.fresh_drawer()),
    ]
    return build_suite(solutions, gift_extraction.contracts)


class TestNaming:
    def test_exception_contract_name(self):
        name = synthesize_name("unwrapAndSave", "gift is null", "EmptyException")
        assert name == "testUnwrapAndSave_EmptyExIfGiftIsNull"

    def test_determiners_and_punctuation_are_dropped(self):
        name = synthesize_name("pop", "the stack is empty, really", "an IllegalStateException")
        assert name == "testPop_IllegalStateExIfStackIsEmptyReally"

    def test_empty_guard_omits_if(self):
        assert synthesize_name("peek", "", "true") == "testPeek_True"

    def test_falls_back_to_contract_id(self):
        assert synthesize_name("peek", "x", "", contract_id="Stack.peek/post1") == "testPeek_Stack_peek_post1"

    def test_collisions_get_an_index(self):
        names = assign_names([
            ("m", "x is null", "false", "A.m/post0"),
            ("m", "x is zero", "false", "A.m/post1"),
            ("m", "x is null", "false", "A.m/post2"),
        ])
        assert names == ["testM_FalseIfXIsNull_0", "testM_FalseIfXIsZero", "testM_FalseIfXIsNull_1"]

    def test_gift_suite_names(self, gift_suite):
        assert [t.name for t in gift_suite] == [
            "testUnwrapAndSave_EmptyExIfGiftIsNull",
            "testUnwrapAndSave_NullPointerExIfDrawerIsNull",
            "testUnwrapAndSave_NoMoreExIfDrawerExceedsLimit",
            "testUnwrapAndSave_FalseIfDrawerAlreadyContainsGiftTrueOtherwise_0",
            "testUnwrapAndSave_FalseIfDrawerAlreadyContainsGiftTrueOtherwise_1",
        ]


class TestOracle:
    def test_exception_oracle(self, gift_suite):
        empty = gift_suite[0]
        assert empty.expected == ALARM
        assert empty.lines == [
            "GiftPack gp0 = new GiftPack(null);",
            "Drawer d0 = new Drawer();",
            "try {",
            "    bool b0 = gp0.unwrapAndSave(d0, 153);",
            '    fail("Expected EmptyException");',
            "} catch (EmptyException e) {",
            "    // expected",
            "}",
        ]

    def test_value_oracle(self, gift_suite):
        contains = gift_suite[3]
        assert contains.lines[-2:] == ["bool b1 = gp0.unwrapAndSave(d0, 153);", "assertFalse(b1);"]
        assert gift_suite[4].lines[-1] == "assertTrue(b0);"
        assert gift_suite[4].expected == PASS

    def test_assume_oracles(self, gift_contracts):
        test = focused(GiftTests.null_gift(), POST_EMPTY)
        emitted = attach_oracle(
            test, gift_contracts[POST_EMPTY], VIOLATING, "t", [gift_contracts[PRE_LIMIT]], assume_oracles=True
        )
        assert emitted.lines[2:4] == ["assume(153 > 0);", "assume(gp0.gift == null);"]

    def test_mismatched_focal_contract(self, gift_contracts):
        test = focused(GiftTests.null_gift(), POST_NPE)
        with pytest.raises(FocalContractMismatch):
            attach_oracle(test, gift_contracts[POST_EMPTY], VIOLATING, "t")


class TestReplay:
    @pytest.mark.parametrize(
        "contract_id, builder, outcome",
        [
            (POST_EMPTY, GiftTests.null_gift, ALARM),
            (POST_NPE, GiftTests.null_drawer, PASS),
            (POST_NOMORE, GiftTests.full_drawer, PASS),
            (POST_CONTAINS, GiftTests.already_contains, ALARM),
            (POST_OTHERWISE, GiftTests.fresh_drawer, PASS),
        ],
    )
    def test_outcomes(self, giftpack, gift_contracts, contract_id, builder, outcome):
        result = replay("t", focused(builder(), contract_id), gift_contracts[contract_id], giftpack)
        assert result.outcome == outcome

    def test_unexpected_exception_is_an_error(self, giftpack, gift_contracts):
        result = replay("t", focused(GiftTests.full_drawer(), POST_OTHERWISE), gift_contracts[POST_OTHERWISE], giftpack)
        assert result.outcome == "error"
        assert "NoMoreException" in result.detail


class TestExporter:
    def test_export_writes_tests_and_manifest(self, tmp_path, gift_suite):
        exporter = SuiteExporter(str(tmp_path))
        directories = exporter.export_by_unit(gift_suite)
        assert directories == [os.path.join(str(tmp_path), "GiftPack")]
        files = sorted(os.listdir(directories[0]))
        assert MANIFEST in files
        assert "testUnwrapAndSave_EmptyExIfGiftIsNull.subtest" in files
        text = (tmp_path / "GiftPack" / "testUnwrapAndSave_EmptyExIfGiftIsNull.subtest").read_text(encoding="utf-8")
        assert "// focal contract: GiftPack.unwrapAndSave/post0" in text
        assert "test testUnwrapAndSave_EmptyExIfGiftIsNull() {" in text
        assert "    } catch (EmptyException e) {" in text

    def test_manifest_replays_to_expected_outcomes(self, tmp_path, giftpack, gift_extraction, gift_suite):
        directory = SuiteExporter(str(tmp_path)).export("GiftPack", gift_suite)
        manifest = load_manifest(directory)
        assert manifest["unit"] == "GiftPack"
        assert len(manifest["tests"]) == 5
        results = replay_manifest(directory, giftpack, gift_extraction.contracts)
        assert [r.outcome for r in results] == [t.expected for t in gift_suite]

    def test_missing_manifest(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            load_manifest(str(tmp_path))
