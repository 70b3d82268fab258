import pytest
from hypothesis import given, settings, strategies as st

from codemix_stance.corpus import LanguageTag
from codemix_stance.langid import (
    ConfigError,
    LexiconSet,
    Rule,
    is_rest,
    load_lexicons,
    tag_token,
    tag_tokens,
    tag_tokens_with_rules,
)
from codemix_stance.preprocess import tokenize

from test_preprocess import EXAMPLE_TWEET

EXAMPLE_TAGS = "hi hi hi rest hi hi hi hi hi rest hi hi rest hi hi hi rest hi hi en hi hi hi rest".split()


@pytest.fixture(scope="module")
def lex():
    return load_lexicons()


def test_example_tweet_content_policy(lex):
    tags = [a.tag.value for a in tag_tokens(tokenize(EXAMPLE_TWEET), lex, "content")]
    assert tags == EXAMPLE_TAGS


def test_example_tweet_rest_policy_differs_only_on_hashtag(lex):
    tags = [a.tag.value for a in tag_tokens(tokenize(EXAMPLE_TWEET), lex, "rest")]
    assert tags == ["rest"] + EXAMPLE_TAGS[1:]


@pytest.mark.parametrize("token, expected", [("#Notebandi", True), (":", True), ("bank", False), ("@RBI", True),
                                             ("https://t.co/x", True), (":)", True), ("2000", True), ("nahi", False)])
def test_is_rest(token, expected):
    assert is_rest(token) is expected


def test_is_rest_named_entity():
    assert is_rest("Modi", frozenset({"modi"}))
    assert not is_rest("Modi")


def test_examples(lex):
    assert [a.tag for a in tag_tokens(["khata", "nahi", "hai"], lex)] == [LanguageTag.HI] * 3
    assert tag_tokens(["bank"], lex)[0].tag is LanguageTag.EN
    assert tag_tokens(["?"], lex)[0].tag is LanguageTag.REST


def test_rule_order():
    lex = LexiconSet.from_words(english=["to", "bank", "modi"], hindi=["to", "nahi"], named_entities=["Modi"])
    assert tag_token("#x", lex) == (LanguageTag.REST, Rule.MARKUP)
    assert tag_token("Modi", lex) == (LanguageTag.REST, Rule.NAMED_ENTITY)
    assert tag_token("to", lex) == (LanguageTag.HI, Rule.HINDI)
    assert tag_token("Bank", lex) == (LanguageTag.EN, Rule.ENGLISH)
    assert tag_token("khulwao", lex) == (LanguageTag.HI, Rule.FALLBACK)


def test_hashtag_content_policy():
    lex = LexiconSet.from_words(english=["black", "money", "bye"], hindi=["note", "nahi"])
    assert tag_token("#ByeByeBlackMoney", lex, "content") == (LanguageTag.EN, Rule.HASHTAG_CONTENT)
    assert tag_token("#NoteNahi", lex, "content") == (LanguageTag.HI, Rule.HASHTAG_CONTENT)
    # tie goes to Hindi
    assert tag_token("#NoteMoney", lex, "content") == (LanguageTag.HI, Rule.HASHTAG_CONTENT)
    # nothing known: still markup
    assert tag_token("#Xyzzy", lex, "content") == (LanguageTag.REST, Rule.MARKUP)


def test_config_errors(lex):
    with pytest.raises(ConfigError):
        tag_tokens(["a"], LexiconSet())
    with pytest.raises(ConfigError):
        tag_tokens(["a"], lex, "dictionary")
    with pytest.raises(ConfigError):
        load_lexicons("/nonexistent/dir")


def test_lexicon_env(tmp_path, monkeypatch):
    for name, words in (("english_words.txt", "bank"), ("hindi_words.txt", "nahi"), ("named_entities.txt", "rbi")):
        (tmp_path / name).write_text(words + "\n", encoding="utf-8")
    monkeypatch.setenv("CODEMIX_LEXICON_DIR", str(tmp_path))
    lex = load_lexicons()
    assert lex.english_words == {"bank"} and lex.named_entities == {"rbi"}


@settings(max_examples=100, deadline=None)
@given(st.lists(st.sampled_from(["bank", "nahi", "#Note", ":)", "?", "Modi", "xyz", "to", "@a"]), max_size=15),
       st.sampled_from(["rest", "content"]))
def test_tagging_properties(tokens, policy):
    lex = load_lexicons()
    out = tag_tokens_with_rules(tokens, lex, policy)
    assert [a.surface for a, _ in out] == tokens
    assert out == tag_tokens_with_rules(tokens, lex, policy)
    assert all(isinstance(rule, Rule) for _, rule in out)
