"""Rule- and dictionary-based token language tagging (en / hi / rest)."""
from __future__ import annotations

import enum
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Optional, Sequence, Union

from .corpus import LanguageTag, TokenAnnotation
from .preprocess import (
    decompose_hashtag,
    is_emoticon,
    is_hashtag,
    is_mention,
    is_url,
    read_word_list,
    resource_path,
)

LEXICON_DIR_ENV = "CODEMIX_LEXICON_DIR"
ENGLISH_FILE = "english_words.txt"
HINDI_FILE = "hindi_words.txt"
NAMED_ENTITY_FILE = "named_entities.txt"

HASHTAG_POLICIES = ("rest", "content")


class ConfigError(ValueError):
    pass


class Rule(enum.IntEnum):
    """Which tagging rule fired for a token."""

    MARKUP = 1  # hashtag, mention, URL, emoticon, punctuation/digits
    NAMED_ENTITY = 2
    HINDI = 3
    ENGLISH = 4
    FALLBACK = 5
    HASHTAG_CONTENT = 6  # only under the "content" hashtag policy


@dataclass(frozen=True)
class LexiconSet:
    english_words: frozenset = frozenset()
    hindi_words: frozenset = frozenset()
    named_entities: frozenset = frozenset()  # stored lowercased

    @classmethod
    def from_words(cls, english=(), hindi=(), named_entities=()) -> "LexiconSet":
        return cls(
            frozenset(w.lower() for w in english),
            frozenset(w.lower() for w in hindi),
            frozenset(w.lower() for w in named_entities),
        )


def default_lexicon_dir() -> Path:
    env = os.environ.get(LEXICON_DIR_ENV)
    if env:
        return Path(env)
    return resource_path(ENGLISH_FILE).parent


def load_lexicons(directory: Optional[Union[str, Path]] = None) -> LexiconSet:
    """Load ``english_words.txt``, ``hindi_words.txt`` and ``named_entities.txt``.

    Defaults to ``$CODEMIX_LEXICON_DIR`` or the bundled lists.
    """
    directory = Path(directory) if directory is not None else default_lexicon_dir()
    files = [directory / ENGLISH_FILE, directory / HINDI_FILE, directory / NAMED_ENTITY_FILE]
    for f in files:
        if not f.is_file():
            raise ConfigError(f"lexicon file not found: {f}")
    return LexiconSet.from_words(*(read_word_list(f) for f in files))


def _is_symbolic(token: str) -> bool:
    # pure punctuation / digit strings
    return not any(c.isalpha() for c in token)


def is_rest(token: str, named_entities: Iterable[str] = frozenset()) -> bool:
    """True for hashtags, mentions, URLs, emoticons, punctuation/digit strings
    and named entities."""
    if is_hashtag(token) or is_mention(token) or is_url(token) or is_emoticon(token):
        return True
    if _is_symbolic(token):
        return True
    return token.lower() in named_entities


def _dictionary_tag(word: str, lexicons: LexiconSet) -> Optional[LanguageTag]:
    low = word.lower()
    if low in lexicons.hindi_words:
        return LanguageTag.HI
    if low in lexicons.english_words:
        return LanguageTag.EN
    return None


def _hashtag_content_tag(token: str, lexicons: LexiconSet) -> Optional[LanguageTag]:
    votes = {LanguageTag.HI: 0, LanguageTag.EN: 0}
    for word in decompose_hashtag(token):
        tag = _dictionary_tag(word, lexicons)
        if tag is not None:
            votes[tag] += 1
    if votes[LanguageTag.HI] == 0 and votes[LanguageTag.EN] == 0:
        return None
    return LanguageTag.HI if votes[LanguageTag.HI] >= votes[LanguageTag.EN] else LanguageTag.EN


def tag_token(token: str, lexicons: LexiconSet, hashtag_policy: str = "rest") -> tuple[LanguageTag, Rule]:
    """Tag one token and report the rule that decided it; first match wins."""
    if hashtag_policy == "content" and is_hashtag(token):
        tag = _hashtag_content_tag(token, lexicons)
        if tag is not None:
            return tag, Rule.HASHTAG_CONTENT
    if is_rest(token):
        return LanguageTag.REST, Rule.MARKUP
    low = token.lower()
    if low in lexicons.named_entities:
        return LanguageTag.REST, Rule.NAMED_ENTITY
    if low in lexicons.hindi_words:
        return LanguageTag.HI, Rule.HINDI
    if low in lexicons.english_words:
        return LanguageTag.EN, Rule.ENGLISH
    return LanguageTag.HI, Rule.FALLBACK


def tag_tokens_with_rules(
    tokens: Sequence[str], lexicons: LexiconSet, hashtag_policy: str = "rest"
) -> list[tuple[TokenAnnotation, Rule]]:
    if hashtag_policy not in HASHTAG_POLICIES:
        raise ConfigError(f"unknown hashtag policy {hashtag_policy!r}")
    if not lexicons.english_words and not lexicons.hindi_words:
        raise ConfigError("dictionary tagging needs a non-empty English or Hindi lexicon")
    out = []
    for token in tokens:
        tag, rule = tag_token(token, lexicons, hashtag_policy)
        out.append((TokenAnnotation(token, tag), rule))
    return out


def tag_tokens(tokens: Sequence[str], lexicons: LexiconSet, hashtag_policy: str = "rest") -> list[TokenAnnotation]:
    return [ann for ann, _ in tag_tokens_with_rules(tokens, lexicons, hashtag_policy)]
