"""Corpus data model and the three-file on-disk format.

A corpus is stored as three UTF-8 files, each a sequence of blank-line
separated records keyed by tweet id:

* text file:   ``<id>\\n<text line>...\\n\\n``
* lang file:   ``<id>\\n<token>\\t<tag>\\n...\\n\\n``
* stance file: ``<id>\\n<FAVOR|AGAINST|NONE>\\n\\n``
"""
from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator, Optional, Sequence, Union

PathLike = Union[str, Path]

TEXT_FILE = "text.txt"
LANG_FILE = "lang.txt"
STANCE_FILE = "stance.txt"


class StanceLabel(enum.Enum):
    FAVOR = "FAVOR"
    AGAINST = "AGAINST"
    NONE = "NONE"

    @classmethod
    def parse(cls, value: str) -> "StanceLabel":
        try:
            return cls(value)
        except ValueError:
            raise ValueError(f"unknown stance label {value!r}") from None


# fixed order used for tie-breaking and matrix layouts
LABELS: tuple[StanceLabel, ...] = (StanceLabel.FAVOR, StanceLabel.AGAINST, StanceLabel.NONE)
LABEL_INDEX = {label: i for i, label in enumerate(LABELS)}


class LanguageTag(enum.Enum):
    EN = "en"
    HI = "hi"
    REST = "rest"

    @classmethod
    def parse(cls, value: str) -> "LanguageTag":
        try:
            return cls(value.lower())
        except ValueError:
            raise ValueError(f"unknown language tag {value!r}") from None


TAGS: tuple[LanguageTag, ...] = (LanguageTag.EN, LanguageTag.HI, LanguageTag.REST)


class CorpusFormatError(ValueError):
    """Malformed corpus file; carries the offending path and 1-based line."""

    def __init__(self, message: str, path: Optional[PathLike] = None, line: Optional[int] = None):
        self.path = None if path is None else str(path)
        self.line = line
        where = ""
        if path is not None:
            where = f"{path}:" + (f"{line}:" if line is not None else "") + " "
        elif line is not None:
            where = f"line {line}: "
        super().__init__(f"{where}{message}")


_WS = re.compile(r"\s")


@dataclass(frozen=True)
class TokenAnnotation:
    surface: str
    tag: LanguageTag

    def __post_init__(self):
        if not self.surface or _WS.search(self.surface):
            raise ValueError(f"invalid token surface {self.surface!r}")


@dataclass(frozen=True)
class Tweet:
    id: str
    raw_text: str
    tokens: tuple[TokenAnnotation, ...] = ()
    stance: Optional[StanceLabel] = None

    @property
    def surfaces(self) -> list[str]:
        return [t.surface for t in self.tokens]


@dataclass(frozen=True)
class Corpus:
    tweets: tuple[Tweet, ...]
    provenance: tuple[str, ...] = field(default=(), compare=False)

    def __post_init__(self):
        seen = set()
        for tw in self.tweets:
            if tw.id in seen:
                raise ValueError(f"duplicate tweet id {tw.id}")
            seen.add(tw.id)
        stanced = {tw.stance is not None for tw in self.tweets}
        tokenized = {bool(tw.tokens) for tw in self.tweets}
        if len(stanced) > 1 or len(tokenized) > 1:
            raise ValueError("tweets carry mixed annotation completeness")

    def __len__(self) -> int:
        return len(self.tweets)

    def __iter__(self) -> Iterator[Tweet]:
        return iter(self.tweets)

    @property
    def ids(self) -> list[str]:
        return [tw.id for tw in self.tweets]

    @property
    def labels(self) -> list[StanceLabel]:
        return [tw.stance for tw in self.tweets]

    @property
    def is_stanced(self) -> bool:
        return all(tw.stance is not None for tw in self.tweets)

    @property
    def is_tokenized(self) -> bool:
        return all(tw.tokens for tw in self.tweets)

    def subset(self, indices: Sequence[int]) -> "Corpus":
        return Corpus(tuple(self.tweets[i] for i in indices), self.provenance)


# --------------------------------------------------------------------------
# parsing

def _records(path: PathLike) -> Iterator[tuple[int, list[tuple[int, str]]]]:
    """Yield (first line number, [(line number, line), ...]) per blank-separated record."""
    text = Path(path).read_text(encoding="utf-8")
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    block: list[tuple[int, str]] = []
    for lineno, line in enumerate(lines, start=1):
        line = line.rstrip("\r")
        if line.strip() == "":
            if block:
                yield block[0][0], block
                block = []
            continue
        block.append((lineno, line))
    if block:
        yield block[0][0], block


def _check_id(raw: str, path: PathLike, lineno: int) -> str:
    tweet_id = raw.strip()
    if not tweet_id or _WS.search(tweet_id):
        raise CorpusFormatError(f"malformed tweet id {raw!r}", path, lineno)
    return tweet_id


def parse_text_file(path: PathLike) -> list[tuple[str, str]]:
    """Read the text file. Multi-line tweet text is joined with ``\\n``."""
    out = []
    for start, block in _records(path):
        tweet_id = _check_id(block[0][1], path, start)
        if len(block) < 2:
            raise CorpusFormatError(f"tweet {tweet_id} has no text", path, start + 1)
        out.append((tweet_id, "\n".join(line for _, line in block[1:])))
    return out


_LANG_LINE = re.compile(r"(\S+)(?:\t[ \t]*| {2,})(\S+)")


def parse_lang_file(path: PathLike) -> list[tuple[str, list[TokenAnnotation]]]:
    """Read the language file: ``token<TAB>tag`` lines under each id.

    Two or more spaces are accepted in place of the TAB.
    """
    out = []
    for start, block in _records(path):
        tweet_id = _check_id(block[0][1], path, start)
        if len(block) < 2:
            raise CorpusFormatError(f"tweet {tweet_id} has no tokens", path, start + 1)
        tokens = []
        for lineno, line in block[1:]:
            m = _LANG_LINE.fullmatch(line.strip(" "))
            if m is None:
                raise CorpusFormatError(f"expected 'token<TAB>tag', got {line!r}", path, lineno)
            try:
                tag = LanguageTag.parse(m.group(2))
            except ValueError as exc:
                raise CorpusFormatError(str(exc), path, lineno) from None
            tokens.append(TokenAnnotation(m.group(1), tag))
        out.append((tweet_id, tokens))
    return out


def parse_stance_file(path: PathLike) -> list[tuple[str, StanceLabel]]:
    out = []
    for start, block in _records(path):
        tweet_id = _check_id(block[0][1], path, start)
        if len(block) != 2:
            lineno = start + 1 if len(block) < 2 else block[2][0]
            raise CorpusFormatError(f"tweet {tweet_id} needs exactly one stance line", path, lineno)
        lineno, line = block[1]
        try:
            label = StanceLabel.parse(line.strip())
        except ValueError as exc:
            raise CorpusFormatError(str(exc), path, lineno) from None
        out.append((tweet_id, label))
    return out


def _index(records, path) -> dict:
    table = {}
    for tweet_id, value in records:
        if tweet_id in table:
            raise CorpusFormatError(f"duplicate tweet id {tweet_id}", path)
        table[tweet_id] = value
    return table


def load_corpus(
    text_path: PathLike,
    lang_path: Optional[PathLike] = None,
    stance_path: Optional[PathLike] = None,
    check_tokenization: bool = False,
) -> Corpus:
    """Join the three files by tweet id, in text-file order.

    With ``check_tokenization`` the annotated tokens must equal
    ``tokenize(raw_text)``; off by default because the published tokens
    were corrected by hand.
    """
    texts = parse_text_file(text_path)
    _index(texts, text_path)
    ids = {tweet_id for tweet_id, _ in texts}
    provenance = [str(text_path)]

    def side(path, parser):
        if path is None:
            return None
        table = _index(parser(path), path)
        dangling = sorted(set(table) - ids)
        if dangling:
            raise CorpusFormatError(f"ids absent from text file: {', '.join(dangling[:5])}", path)
        missing = [tweet_id for tweet_id, _ in texts if tweet_id not in table]
        if missing:
            raise CorpusFormatError(f"ids lacking annotation: {', '.join(missing[:5])}", path)
        provenance.append(str(path))
        return table

    langs = side(lang_path, parse_lang_file)
    stances = side(stance_path, parse_stance_file)

    tweets = []
    for tweet_id, raw in texts:
        tokens = tuple(langs[tweet_id]) if langs is not None else ()
        if check_tokenization and langs is not None:
            from .preprocess import tokenize

            if [t.surface for t in tokens] != tokenize(raw):
                raise CorpusFormatError(f"tokens of {tweet_id} do not match its text", lang_path)
        stance = stances[tweet_id] if stances is not None else None
        tweets.append(Tweet(tweet_id, raw, tokens, stance))
    return Corpus(tuple(tweets), tuple(provenance))


def load_corpus_dir(directory: PathLike, require_annotations: bool = True) -> Corpus:
    directory = Path(directory)
    lang = directory / LANG_FILE
    stance = directory / STANCE_FILE
    if require_annotations:
        for p in (lang, stance):
            if not p.exists():
                raise FileNotFoundError(f"missing corpus file {p}")
    return load_corpus(
        directory / TEXT_FILE,
        lang if lang.exists() else None,
        stance if stance.exists() else None,
    )


# --------------------------------------------------------------------------
# writing

def format_text_file(corpus: Corpus) -> str:
    parts = []
    for tw in corpus:
        if any(line.strip() == "" for line in tw.raw_text.split("\n")):
            raise ValueError(f"tweet {tw.id} text contains a blank line")
        parts.append(f"{tw.id}\n{tw.raw_text}\n\n")
    return "".join(parts)


def format_lang_file(corpus: Corpus) -> str:
    return "".join(
        tw.id + "\n" + "".join(f"{t.surface}\t{t.tag.value}\n" for t in tw.tokens) + "\n"
        for tw in corpus
    )


def format_stance_file(corpus: Corpus) -> str:
    return "".join(f"{tw.id}\n{tw.stance.value}\n\n" for tw in corpus)


def write_corpus(corpus: Corpus, directory: PathLike) -> tuple[Path, Path, Path]:
    """Write ``text.txt``, ``lang.txt`` and ``stance.txt`` into ``directory``."""
    for tw in corpus:
        if tw.stance is None or not tw.tokens:
            raise ValueError(f"tweet {tw.id} is not fully annotated")
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    paths = (directory / TEXT_FILE, directory / LANG_FILE, directory / STANCE_FILE)
    payloads = (format_text_file(corpus), format_lang_file(corpus), format_stance_file(corpus))
    for p, payload in zip(paths, payloads):
        p.write_text(payload, encoding="utf-8")
    return paths


# --------------------------------------------------------------------------
# statistics

@dataclass(frozen=True)
class StatsReport:
    total: int
    favor: int
    against: int
    none: int
    avg_tokens: float
    avg_en: float
    avg_hi: float
    avg_rest: float

    def as_dict(self) -> dict:
        return {
            "total": self.total,
            "favor": self.favor,
            "against": self.against,
            "none": self.none,
            "avg_tokens": self.avg_tokens,
            "avg_en": self.avg_en,
            "avg_hi": self.avg_hi,
            "avg_rest": self.avg_rest,
        }

    def format_kv(self) -> str:
        lines = []
        for key, value in self.as_dict().items():
            lines.append(f"{key}={value:.1f}" if isinstance(value, float) else f"{key}={value}")
        return "\n".join(lines) + "\n"

    def format_table(self) -> str:
        rows = [
            ("Total tweets", str(self.total)),
            ("Tweets in favor", str(self.favor)),
            ("Tweets against", str(self.against)),
            ("Neutral tweets", str(self.none)),
            ("Avg. tokens", f"{self.avg_tokens:.1f}"),
            ("Avg. en tokens", f"{self.avg_en:.1f}"),
            ("Avg. hi tokens", f"{self.avg_hi:.1f}"),
            ("Avg. rest tokens", f"{self.avg_rest:.1f}"),
        ]
        width = max(len(name) for name, _ in rows)
        out = []
        for i, (name, value) in enumerate(rows):
            if i == 4:
                out.append("")
            out.append(f"{name:<{width}}  {value:>6}")
        return "\n".join(out) + "\n"


def corpus_stats(corpus: Corpus) -> StatsReport:
    n = len(corpus)
    counts = {label: 0 for label in LABELS}
    tags = {tag: 0 for tag in TAGS}
    for tw in corpus:
        if tw.stance is not None:
            counts[tw.stance] += 1
        for tok in tw.tokens:
            tags[tok.tag] += 1
    if n == 0:
        return StatsReport(0, 0, 0, 0, 0.0, 0.0, 0.0, 0.0)
    total_tokens = sum(tags.values())
    return StatsReport(
        total=n,
        favor=counts[StanceLabel.FAVOR],
        against=counts[StanceLabel.AGAINST],
        none=counts[StanceLabel.NONE],
        avg_tokens=total_tokens / n,
        avg_en=tags[LanguageTag.EN] / n,
        avg_hi=tags[LanguageTag.HI] / n,
        avg_rest=tags[LanguageTag.REST] / n,
    )
