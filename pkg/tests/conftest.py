"""
Shared fixtures: the bundled corpus, the GiftPack program and hand-built
GiftPack tests.
"""
import os

import pytest

from contragen.config.settings import BUNDLED_CORPUS_DIR
from contragen.contracts.extractor import extract_program
from contragen.lang.parser import parse_file
from contragen.search.config import SearchConfig
from contragen.search.testcase import Arg, Statement, TestCase

GIFT_UNWRAP = "GiftPack.unwrapAndSave"
PRE_LIMIT = "GiftPack.unwrapAndSave/pre0"
POST_EMPTY = "GiftPack.unwrapAndSave/post0"
POST_NPE = "GiftPack.unwrapAndSave/post1"
POST_NOMORE = "GiftPack.unwrapAndSave/post2"
POST_CONTAINS = "GiftPack.unwrapAndSave/post3"
POST_OTHERWISE = "GiftPack.unwrapAndSave/post4"


def corpus_path(name: str) -> str:
    return os.path.join(BUNDLED_CORPUS_DIR, name)


def ref(index: int) -> Arg:
    return Arg.of_ref(index)


def _args(values):
    return tuple(v if isinstance(v, Arg) else Arg.literal(v) for v in values)


def new(unit: str, *args) -> Statement:
    return Statement.construct(unit, _args(args))


def call(unit: str, method: str, receiver: int, *args, returns: str = "void") -> Statement:
    return Statement.call(unit, method, receiver, _args(args), returns)


class GiftTests:
    """Hand-written GiftPack tests; the unwrapAndSave call is always last."""

    @staticmethod
    def null_gift(limit: int = 153) -> TestCase:
        return TestCase([
            new("GiftPack", None),
            new("Drawer"),
            call("GiftPack", "unwrapAndSave", 0, ref(1), limit, returns="bool"),
        ])

    @staticmethod
    def null_drawer(limit: int = 207) -> TestCase:
        return TestCase([
            new("Something", 3),
            new("GiftPack", ref(0)),
            call("GiftPack", "unwrapAndSave", 1, None, limit, returns="bool"),
        ])

    @staticmethod
    def fresh_drawer(limit: int = 153) -> TestCase:
        return TestCase([
            new("Something", 3),
            new("GiftPack", ref(0)),
            new("Drawer"),
            call("GiftPack", "unwrapAndSave", 1, ref(2), limit, returns="bool"),
        ])

    @staticmethod
    def already_contains(limit: int = 153) -> TestCase:
        return TestCase([
            new("Something", 3),
            new("GiftPack", ref(0)),
            new("Drawer"),
            call("Drawer", "add", 2, ref(0), returns="bool"),
            call("GiftPack", "unwrapAndSave", 1, ref(2), limit, returns="bool"),
        ])

    @staticmethod
    def full_drawer() -> TestCase:
        return TestCase([
            new("Something", 3),
            new("GiftPack", ref(0)),
            new("Drawer"),
            new("Something", 4),
            call("Drawer", "add", 2, ref(3), returns="bool"),
            call("GiftPack", "unwrapAndSave", 1, ref(2), 1, returns="bool"),
        ])


@pytest.fixture(scope="session")
def giftpack():
    return parse_file(corpus_path("giftpack.sub"))


@pytest.fixture(scope="session")
def gift_extraction(giftpack):
    return extract_program(giftpack)


@pytest.fixture(scope="session")
def gift_contracts(gift_extraction):
    return {c.id: c for c in gift_extraction.contracts}


@pytest.fixture
def gift_tests():
    return GiftTests


@pytest.fixture
def fast_config():
    """A small configuration that still solves every GiftPack objective."""
    return SearchConfig(population_size=30, fixed_budget=40, seed=7)


@pytest.fixture(scope="session")
def corpus_dir():
    return BUNDLED_CORPUS_DIR
