import pytest

from contragen.contracts.extractor import extract_contracts, extract_program, negate_guard
from contragen.contracts.model import HIGH, LOW, POSTCONDITION, PRECONDITION
from contragen.contracts.patterns import PatternTableError, load_patterns, parse_rule, parse_table
from contragen.contracts.translator import (
    Translation,
    TranslationScope,
    Untranslatable,
    normalize_text,
    translate_condition,
)
from contragen.lang.parser import parse_file

from conftest import (
    POST_CONTAINS,
    POST_EMPTY,
    POST_NOMORE,
    POST_NPE,
    POST_OTHERWISE,
    PRE_LIMIT,
    corpus_path,
)


def sexprs(terms):
    return [t.to_sexpr() for t in terms]


def scope_for(file_name, method_id):
    program = parse_file(corpus_path(file_name))
    return TranslationScope(program, program.method(method_id))


class TestGiftPackExtraction:
    def test_one_precondition_five_postconditions(self, gift_extraction):
        kinds = [c.kind for c in gift_extraction.contracts]
        assert kinds.count(PRECONDITION) == 1
        assert kinds.count(POSTCONDITION) == 5
        assert gift_extraction.skipped == []

    def test_ids_follow_tag_order(self, gift_extraction):
        assert [c.id for c in gift_extraction.contracts] == [
            PRE_LIMIT,
            POST_EMPTY,
            POST_NPE,
            POST_NOMORE,
            POST_CONTAINS,
            POST_OTHERWISE,
        ]

    def test_param_precondition(self, gift_contracts):
        pre = gift_contracts[PRE_LIMIT]
        assert sexprs(pre.guard_terms) == ["(> limit 0)"]
        assert pre.assert_terms == ()
        assert pre.guard_text == "must be positive"

    def test_throws_postconditions(self, gift_contracts):
        empty = gift_contracts[POST_EMPTY]
        assert sexprs(empty.guard_terms) == ["(= this.gift null)"]
        assert sexprs(empty.assert_terms) == ["(instanceof retVal EmptyException)"]
        assert empty.asserts_exception

        npe = gift_contracts[POST_NPE]
        assert sexprs(npe.guard_terms) == ["(= drawer null)"]
        assert sexprs(npe.assert_terms) == ["(instanceof retVal NullPointerException)"]

        nomore = gift_contracts[POST_NOMORE]
        assert sexprs(nomore.guard_terms) == ["(= (call drawer exceeds limit) true)"]
        assert nomore.guard_text == "the drawer exceeds the limit"
        assert nomore.assert_text == "NoMoreException"

    def test_return_tag_gives_a_complementary_pair(self, gift_contracts):
        first = gift_contracts[POST_CONTAINS]
        second = gift_contracts[POST_OTHERWISE]
        assert sexprs(first.guard_terms) == ["(= (call drawer contains this.gift) true)"]
        assert sexprs(first.assert_terms) == ["(= retVal false)"]
        assert sexprs(second.guard_terms) == ["(!= (call drawer contains this.gift) true)"]
        assert sexprs(second.assert_terms) == ["(= retVal true)"]
        assert first.guard_text == second.guard_text
        assert first.assert_text == second.assert_text == "false"
        assert first.confidence == second.confidence == HIGH

    def test_extracts_straight_from_the_source_file(self):
        result = extract_program(parse_file(corpus_path("giftpack.sub")))
        pair = [c for c in result.contracts if c.id in (POST_CONTAINS, POST_OTHERWISE)]
        assert [c.guard_text for c in pair] == ["the drawer already contains the gift, true otherwise"] * 2

    def test_extraction_is_deterministic(self, giftpack, gift_extraction):
        assert extract_program(giftpack).to_dict() == gift_extraction.to_dict()

    def test_undocumented_method_yields_nothing(self, giftpack):
        result = extract_contracts(giftpack.method("GiftPack.checkValidLimit"), giftpack)
        assert result.contracts == []
        assert result.skipped == []


class TestSkipRecords:
    @pytest.fixture(scope="class")
    def weather(self):
        return extract_program(parse_file(corpus_path("weather.sub")))

    def reasons(self, weather):
        return {(s.tag, s.reason) for s in weather.skipped}

    def test_only_translatable_tags_become_contracts(self, weather):
        assert [c.id for c in weather.contracts] == ["Station.record/pre0", "Station.record/post0"]
        assert sexprs(weather.contracts[0].guard_terms) == ["(> hpa 0)"]
        assert sexprs(weather.contracts[1].guard_terms) == ["(< hpa 800)"]

    def test_disjunction_is_reported_with_its_span(self, weather):
        storm = [s for s in weather.skipped if "StormException" in s.text]
        assert len(storm) == 1
        assert storm[0].reason == "no pattern matches"
        assert storm[0].span == "or"

    def test_every_failure_kind_is_recorded(self, weather):
        reasons = self.reasons(weather)
        assert ("param", "constructor documentation") in reasons
        assert ("throws", "unknown exception type") in reasons
        assert ("param", "no condition in parameter description") in reasons
        assert ("param", "unknown parameter") in reasons
        assert ("see", "unsupported tag") in reasons
        assert ("return", "void method documents a return value") in reasons

    def test_return_without_condition_is_skipped(self):
        result = extract_program(parse_file(corpus_path("account.sub")))
        skipped = [s for s in result.skipped if s.method_id == "Account.deposit"]
        assert [s.reason for s in skipped] == ["no condition in return description"]


class TestTranslator:
    def test_normalize_drops_articles_and_hyphens(self):
        assert normalize_text("The limit must be non-negative.") == "limit must be non negative"

    def test_article_named_identifier_is_kept(self):
        assert normalize_text("a is at most m", frozenset({"a", "m"})) == "a is at most m"
        assert normalize_text("a drawer is null", frozenset({"a", "drawer"})) == "drawer is null"
        scope = scope_for("divider.sub", "Divider.fitsWithin")
        outcome = translate_condition("a is at most m", scope)
        assert isinstance(outcome, Translation)
        assert sexprs(outcome.terms) == ["(<= a m)"]

    def test_article_parameter_gives_a_return_pair(self):
        result = extract_program(parse_file(corpus_path("divider.sub")))
        ids = [c.id for c in result.contracts if c.target_method == "Divider.fitsWithin"]
        assert ids == [f"Divider.fitsWithin/{suffix}" for suffix in ("pre0", "post0", "post1", "post2")]
        assert not [s for s in result.skipped if s.method_id == "Divider.fitsWithin"]

    def test_verb_with_argument(self):
        scope = scope_for("giftpack.sub", "GiftPack.unwrapAndSave")
        outcome = translate_condition("the drawer exceeds the limit", scope)
        assert isinstance(outcome, Translation)
        assert sexprs(outcome.terms) == ["(= (call drawer exceeds limit) true)"]
        assert outcome.confidence == HIGH

    def test_implicit_subject(self):
        scope = scope_for("giftpack.sub", "GiftPack.unwrapAndSave")
        outcome = translate_condition("must be positive", scope, subject="limit")
        assert sexprs(outcome.terms) == ["(> limit 0)"]

    def test_conjunction(self):
        scope = scope_for("infeasible.sub", "Gauge.check")
        outcome = translate_condition("x is positive and x is negative", scope)
        assert sexprs(outcome.terms) == ["(> x 0)", "(< x 0)"]

    def test_stripped_verb_is_low_confidence(self):
        scope = scope_for("registry.sub", "Registry.unregister")
        outcome = translate_condition("entries does not contain id", scope)
        assert sexprs(outcome.terms) == ["(= (call this.entries contains id) false)"]
        assert outcome.confidence == LOW

    def test_adjective_predicate(self):
        scope = scope_for("matcher.sub", "Matcher.accept")
        outcome = translate_condition("pair is not valid", scope)
        assert sexprs(outcome.terms) == ["(= (call pair isValid) false)"]

    def test_identifier_as_bound(self):
        scope = scope_for("account.sub", "Account.withdraw")
        outcome = translate_condition("amount is greater than balance", scope)
        assert sexprs(outcome.terms) == ["(> amount this.balance)"]

    @pytest.mark.parametrize(
        "text, span",
        [
            ("the barometer falls or the wind rises", "or"),
            ("the weather looks stable", "weather"),
        ],
    )
    def test_untranslatable_reports_span(self, text, span):
        scope = scope_for("weather.sub", "Station.record")
        outcome = translate_condition(text, scope)
        assert isinstance(outcome, Untranslatable)
        assert outcome.span == span

    def test_unknown_method_does_not_translate(self):
        scope = scope_for("giftpack.sub", "GiftPack.unwrapAndSave")
        assert isinstance(translate_condition("the drawer opens the gift", scope), Untranslatable)


class TestPatternTable:
    def test_shipped_table_loads(self):
        rules = load_patterns()
        assert len(rules) >= 25
        assert sum(1 for r in rules if r.low_confidence) >= 2

    def test_rule_matches_whole_clause(self):
        rule = parse_rule("{X} is at least {N} => {X} >= {N}")
        assert rule.match("count is at least 3") == {"X": "count", "N": "3"}
        assert rule.match("count is at least 3 apples") is None

    @pytest.mark.parametrize(
        "line",
        [
            "{X} is positive",
            "{Z} is positive => {Z} > 0",
            "{X} equals {X} => {X} = 0",
            "{X} is odd => {X} ~ 1",
        ],
    )
    def test_malformed_rules_are_rejected(self, line):
        with pytest.raises(PatternTableError):
            parse_rule(line)

    def test_user_table(self, tmp_path, giftpack):
        path = tmp_path / "rules.txt"
        path.write_text("# only one rule\n{X} is null => {X} = null\n", encoding="utf-8")
        rules = load_patterns(str(path))
        assert len(rules) == 1
        result = extract_program(giftpack, rules)
        assert [c.id for c in result.contracts] == ["GiftPack.unwrapAndSave/post0", "GiftPack.unwrapAndSave/post1"]

    def test_comments_and_blank_lines_are_ignored(self):
        assert parse_table("\n# comment\n\n") == []


def test_negated_conjunction_is_wrapped(gift_contracts):
    pre = gift_contracts[PRE_LIMIT]
    nomore = gift_contracts[POST_NOMORE]
    negated = negate_guard(list(pre.guard_terms) + list(nomore.guard_terms))
    assert sexprs(negated) == ["(= (not (and (> limit 0) (= (call drawer exceeds limit) true))) true)"]
