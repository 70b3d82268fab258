"""Tweet tokenization, hashtag decomposition and feature-time noise removal."""
from __future__ import annotations

import hashlib
import re
import unicodedata
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Iterable, Optional, Sequence, Union

from .corpus import LanguageTag, TokenAnnotation, Tweet

DEFAULT_STOPWORD_FILES = ("stopwords_en.txt", "stopwords_hi.txt")

# western emoticons; the eyes set excludes digits so "8)" stays a word + bracket
EMOTICON = r"(?:[:;=][-o^'*]?[)\](\[dDpP/\\|*@$]|<3|[)\]][-o]?[:;=]|\^_*\^|-_+-)(?!\w)"
_EMOTICON_RE = re.compile(EMOTICON + r"\Z")

_PIECE = re.compile(
    r"(?P<tag>[#@]\w+)"
    r"|(?P<emo>" + EMOTICON + r")"
    r"|(?P<word>\w+(?:'\w+)*)"
    r"|(?P<sym>(?P<sym_char>\W)(?P=sym_char)*)"
)


def is_url(token: str) -> bool:
    low = token.lower()
    return low.startswith(("http://", "https://", "www."))


def is_emoticon(token: str) -> bool:
    if _EMOTICON_RE.match(token):
        return True
    # emoji and other pictographic symbols
    return all(unicodedata.category(c) in ("So", "Sk", "Mn", "Cf") for c in token) and any(
        unicodedata.category(c) == "So" for c in token
    )


def is_hashtag(token: str) -> bool:
    return len(token) > 1 and token[0] == "#"


def is_mention(token: str) -> bool:
    return len(token) > 1 and token[0] == "@"


def tokenize(raw_text: str) -> list[str]:
    """Split a tweet into tokens.

    Whitespace delimits chunks. Within a chunk, hashtags, mentions and
    emoticons are kept whole, a run of one repeated punctuation character
    is one token ("!!!", "..."), and punctuation is split off words.
    URLs are kept whole.
    """
    tokens: list[str] = []
    for chunk in raw_text.split():
        if is_url(chunk):
            tokens.append(chunk)
            continue
        tokens.extend(m.group(0) for m in _PIECE.finditer(chunk))
    return tokens


def _char_class(c: str) -> str:
    if c.isdigit():
        return "digit"
    if c.isupper():
        return "upper"
    if c.isalpha():
        return "lower"
    return "other"


def decompose_hashtag(token: str) -> list[str]:
    """Split a camel-case hashtag into words.

    >>> decompose_hashtag("#NoteNahiPMBadlo")
    ['Note', 'Nahi', 'PM', 'Badlo']
    """
    if not token.startswith("#"):
        raise ValueError(f"not a hashtag: {token!r}")
    body = token[1:]
    if not body:
        return []
    classes = [_char_class(c) for c in body]
    words = []
    start = 0
    for i in range(1, len(body)):
        prev, cur = classes[i - 1], classes[i]
        cut = False
        if prev != cur and "digit" in (prev, cur):
            cut = True
        elif prev != cur and "other" in (prev, cur):
            cut = True
        elif prev == "lower" and cur == "upper":
            cut = True
        elif prev == "upper" and cur == "upper" and i + 1 < len(body) and classes[i + 1] == "lower":
            cut = True
        if cut:
            words.append(body[start:i])
            start = i
    words.append(body[start:])
    return words


@dataclass(frozen=True)
class StopwordList:
    words: frozenset
    source: tuple[str, ...] = ()

    def __contains__(self, token: str) -> bool:
        return token.lower() in self.words

    def __len__(self) -> int:
        return len(self.words)

    @property
    def sha256(self) -> str:
        return hashlib.sha256("\n".join(sorted(self.words)).encode("utf-8")).hexdigest()


def read_word_list(path: Union[str, Path]) -> list[str]:
    """One entry per line; blank lines and ``#`` comment lines are skipped."""
    out = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            out.append(line)
    return out


def resource_path(name: str) -> Path:
    return Path(str(resources.files("codemix_stance") / "resources" / name))


def load_stopwords(paths: Optional[Sequence[Union[str, Path]]] = None) -> StopwordList:
    """Load and merge stopword files; the bundled English and Hindi lists by default."""
    if paths is None:
        paths = [resource_path(name) for name in DEFAULT_STOPWORD_FILES]
    words = set()
    for p in paths:
        words.update(w.lower() for w in read_word_list(p))
    return StopwordList(frozenset(words), tuple(str(p) for p in paths))


EMPTY_STOPWORDS = StopwordList(frozenset())


def _has_alnum(s: str) -> bool:
    return any(c.isalnum() for c in s)


def preprocess_annotated(
    tokens: Iterable[TokenAnnotation], stopwords: StopwordList = EMPTY_STOPWORDS
) -> list[TokenAnnotation]:
    """Noise removal over tagged tokens; decomposed hashtag words inherit the hashtag's tag."""
    out = []
    for tok in tokens:
        surface = tok.surface
        if is_url(surface) or is_mention(surface):
            continue
        if is_hashtag(surface):
            pieces = [w for w in decompose_hashtag(surface) if _has_alnum(w)]
        else:
            pieces = [surface]
        for piece in pieces:
            if piece in stopwords:
                continue
            out.append(TokenAnnotation(piece.lower(), tok.tag))
    return out


def preprocess_for_features(
    tweet: Union[Tweet, Sequence[str], Sequence[TokenAnnotation]],
    stopwords: StopwordList = EMPTY_STOPWORDS,
) -> list[str]:
    """Feature-time token stream: URLs, mentions and stopwords dropped,
    hashtags decomposed, everything lowercased.

    Accepts a ``Tweet`` (its raw text is tokenized if it carries no tokens)
    or a plain token list.
    """
    if isinstance(tweet, Tweet):
        tokens = list(tweet.tokens) or [TokenAnnotation(t, LanguageTag.REST) for t in tokenize(tweet.raw_text)]
    else:
        tokens = [t if isinstance(t, TokenAnnotation) else TokenAnnotation(t, LanguageTag.REST) for t in tweet]
    return [t.surface for t in preprocess_annotated(tokens, stopwords)]
