"""Character n-gram, word n-gram and stance-indicative token features.

All features are binary presence indicators. A :class:`FeatureSpace` is
fitted on training documents only and records a fingerprint of the tweet
ids it saw.
"""
from __future__ import annotations

import enum
import hashlib
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from pathlib import Path
from typing import Iterable, Iterator, Optional, Sequence, Union

import numpy as np

from .corpus import LABELS, Corpus, LanguageTag, StanceLabel, TokenAnnotation
from .preprocess import EMPTY_STOPWORDS, StopwordList, preprocess_annotated, tokenize

FORMAT_VERSION = 1
COUNT_MODES = ("occurrence", "document")


class FeatureKind(enum.Enum):
    CHAR_NGRAM = "char"
    WORD_NGRAM = "word"
    SI_TOKEN = "si"


FAMILIES = {
    "char": (FeatureKind.CHAR_NGRAM,),
    "word": (FeatureKind.WORD_NGRAM,),
    "si": (FeatureKind.SI_TOKEN,),
    "all": (FeatureKind.CHAR_NGRAM, FeatureKind.WORD_NGRAM, FeatureKind.SI_TOKEN),
}


@dataclass(frozen=True, order=True)
class FeatureDescriptor:
    """``payload`` is (gram,) for characters, the token tuple for word
    n-grams and (tag, token) for stance-indicative tokens."""

    kind: FeatureKind = field(compare=False)
    payload: tuple[str, ...] = field(compare=False)
    key: str = field(init=False, repr=False)

    def __post_init__(self):
        n = len(self.payload)
        if self.kind is FeatureKind.CHAR_NGRAM and not (n == 1 and 1 <= len(self.payload[0]) <= 3):
            raise ValueError(f"bad char n-gram {self.payload!r}")
        if self.kind is FeatureKind.WORD_NGRAM and not 1 <= n <= 5:
            raise ValueError(f"bad word n-gram {self.payload!r}")
        if self.kind is FeatureKind.SI_TOKEN:
            if n != 2:
                raise ValueError(f"bad SI token {self.payload!r}")
            LanguageTag(self.payload[0])
        object.__setattr__(self, "key", self.kind.value + "\t" + " ".join(self.payload))

    def __eq__(self, other):
        return isinstance(other, FeatureDescriptor) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    @classmethod
    def char(cls, gram: str) -> "FeatureDescriptor":
        return cls(FeatureKind.CHAR_NGRAM, (gram,))

    @classmethod
    def word(cls, *tokens: str) -> "FeatureDescriptor":
        return cls(FeatureKind.WORD_NGRAM, tuple(tokens))

    @classmethod
    def si(cls, token: str, tag: LanguageTag) -> "FeatureDescriptor":
        return cls(FeatureKind.SI_TOKEN, (tag.value, token))

    @classmethod
    def from_key(cls, key: str) -> "FeatureDescriptor":
        kind, _, rest = key.partition("\t")
        kind = FeatureKind(kind)
        if kind is FeatureKind.CHAR_NGRAM:
            return cls(kind, (rest,))
        return cls(kind, tuple(rest.split(" ")))


@dataclass(frozen=True)
class Document:
    """A preprocessed tweet: lowercased, noise-free tokens with their tags."""

    id: str
    tokens: tuple[TokenAnnotation, ...]
    label: Optional[StanceLabel] = None
    tagged: bool = True  # False when tags were not taken from a language file

    @property
    def surfaces(self) -> list[str]:
        return [t.surface for t in self.tokens]


def prepare_documents(corpus: Corpus, stopwords: StopwordList = EMPTY_STOPWORDS) -> list[Document]:
    """Run feature-time preprocessing over every tweet of ``corpus``."""
    docs = []
    for tw in corpus:
        tokens = tw.tokens or [TokenAnnotation(t, LanguageTag.REST) for t in tokenize(tw.raw_text)]
        docs.append(Document(tw.id, tuple(preprocess_annotated(tokens, stopwords)), tw.stance, bool(tw.tokens)))
    return docs


def corpus_fingerprint(ids: Iterable[str]) -> str:
    return hashlib.sha256("\n".join(sorted(ids)).encode("utf-8")).hexdigest()


# --------------------------------------------------------------------------
# n-gram enumeration

def char_ngrams(tokens: Sequence[str], n_range=(1, 3)) -> Iterator[str]:
    lo, hi = n_range
    for tok in tokens:
        for n in range(lo, hi + 1):
            for i in range(len(tok) - n + 1):
                yield tok[i:i + n]


def word_ngrams(tokens: Sequence[str], n_range=(1, 5)) -> Iterator[tuple[str, ...]]:
    lo, hi = n_range
    for n in range(lo, hi + 1):
        for i in range(len(tokens) - n + 1):
            yield tuple(tokens[i:i + n])


def _as_token_lists(corpus) -> list[list[str]]:
    out = []
    for doc in corpus:
        if isinstance(doc, Document):
            out.append(doc.surfaces)
        else:
            out.append([t.surface if isinstance(t, TokenAnnotation) else t for t in doc])
    return out


def _count(grams_per_doc: Iterable[Iterable], mode: str) -> Counter:
    if mode not in COUNT_MODES:
        raise ValueError(f"unknown count mode {mode!r}")
    counts: Counter = Counter()
    for grams in grams_per_doc:
        counts.update(set(grams) if mode == "document" else grams)
    return counts


def build_char_ngrams(corpus, n_range=(1, 3), min_count: int = 8, mode: str = "occurrence") -> set[FeatureDescriptor]:
    """Character n-grams (within tokens) seen at least ``min_count`` times."""
    counts = _count((char_ngrams(toks, n_range) for toks in _as_token_lists(corpus)), mode)
    return {FeatureDescriptor.char(g) for g, c in counts.items() if c >= min_count}


def build_word_ngrams(corpus, n_range=(1, 5), min_count: int = 10, mode: str = "occurrence") -> set[FeatureDescriptor]:
    counts = _count((word_ngrams(toks, n_range) for toks in _as_token_lists(corpus)), mode)
    return {FeatureDescriptor.word(*g) for g, c in counts.items() if c >= min_count}


# --------------------------------------------------------------------------
# stance-indicative tokens

def _si_counts(docs: Sequence[Document], mode: str) -> dict[tuple[str, LanguageTag], Counter]:
    if mode not in COUNT_MODES:
        raise ValueError(f"unknown count mode {mode!r}")
    table: dict[tuple[str, LanguageTag], Counter] = {}
    for doc in docs:
        if doc.label is None:
            raise ValueError(f"document {doc.id} has no stance label")
        keys = [(t.surface, t.tag) for t in doc.tokens]
        if mode == "document":
            keys = set(keys)
        for key in keys:
            table.setdefault(key, Counter())[doc.label] += 1
    return table


def _score(per_label: Counter) -> Fraction:
    return Fraction(max(per_label[label] for label in LABELS), sum(per_label.values()))


def si_score(token: str, docs: Sequence[Document], tag: Optional[LanguageTag] = None, mode: str = "occurrence") -> Fraction:
    """Largest share of the token's occurrences falling under one stance label.

    With ``tag`` only occurrences carrying that language tag are counted.
    """
    per_label: Counter = Counter()
    for (surface, t), counts in _si_counts(docs, mode).items():
        if surface == token and (tag is None or t == tag):
            per_label.update(counts)
    if not per_label:
        raise KeyError(f"token {token!r} does not occur in the corpus")
    return _score(per_label)


def build_si_tokens(
    docs: Sequence[Document], min_score: float = 0.6, min_count: int = 5, mode: str = "occurrence"
) -> set[FeatureDescriptor]:
    """Tokens, per language tag, with frequency >= ``min_count`` and score >= ``min_score``."""
    if not all(doc.tagged for doc in docs):
        raise ValueError("stance-indicative tokens need language-tagged tweets")
    threshold = Fraction(str(min_score))
    out = set()
    for (surface, tag), counts in _si_counts(docs, mode).items():
        if sum(counts.values()) >= min_count and _score(counts) >= threshold:
            out.add(FeatureDescriptor.si(surface, tag))
    return out


# --------------------------------------------------------------------------
# feature space

@dataclass(frozen=True)
class Thresholds:
    char_min: int = 8
    word_min: int = 10
    si_min_count: int = 5
    si_min_score: float = 0.6
    count_mode: str = "occurrence"

    def format(self) -> str:
        return (
            f"char_min={self.char_min} word_min={self.word_min} si_min_count={self.si_min_count} "
            f"si_min_score={self.si_min_score!r} count_mode={self.count_mode}"
        )

    @classmethod
    def parse(cls, text: str) -> "Thresholds":
        kv = dict(item.split("=", 1) for item in text.split())
        return cls(
            int(kv["char_min"]),
            int(kv["word_min"]),
            int(kv["si_min_count"]),
            float(kv["si_min_score"]),
            kv["count_mode"],
        )


@dataclass(frozen=True)
class FeatureVector:
    indices: tuple[int, ...]
    size: int
    space: str = ""  # fingerprint of the FeatureSpace the indices refer to

    def __post_init__(self):
        if any(b <= a for a, b in zip(self.indices, self.indices[1:])):
            raise ValueError("indices must be sorted and unique")
        if self.indices and not (0 <= self.indices[0] and self.indices[-1] < self.size):
            raise ValueError("index out of range")

    def dense(self) -> np.ndarray:
        x = np.zeros(self.size, dtype=np.uint8)
        x[list(self.indices)] = 1
        return x


@dataclass(frozen=True)
class FeatureSpace:
    descriptors: tuple[FeatureDescriptor, ...]
    thresholds: Thresholds = Thresholds()
    fitted_on: str = ""
    stopwords_sha256: str = ""
    fitted_ids: tuple[str, ...] = field(default=(), compare=False, repr=False)
    index: dict = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        index = {d.key: i for i, d in enumerate(self.descriptors)}
        if len(index) != len(self.descriptors):
            raise ValueError("duplicate descriptors")
        object.__setattr__(self, "index", index)
        self._set_lookups()

    def _set_lookups(self):
        max_char = max_word = 0
        has_si = False
        for d in self.descriptors:
            if d.kind is FeatureKind.CHAR_NGRAM:
                max_char = max(max_char, len(d.payload[0]))
            elif d.kind is FeatureKind.WORD_NGRAM:
                max_word = max(max_word, len(d.payload))
            else:
                has_si = True
        object.__setattr__(self, "_lookups", (max_char, max_word, has_si))

    def __len__(self) -> int:
        return len(self.descriptors)

    @cached_property
    def fingerprint(self) -> str:
        h = hashlib.sha256()
        h.update(f"v{FORMAT_VERSION}\n{self.thresholds.format()}\n{self.fitted_on}\n{self.stopwords_sha256}\n".encode())
        for d in self.descriptors:
            h.update(d.key.encode("utf-8") + b"\n")
        return h.hexdigest()

    @property
    def kinds(self) -> set[FeatureKind]:
        return {d.kind for d in self.descriptors}

    def subspace(self, keep: Sequence[int]) -> "FeatureSpace":
        """A space of the descriptors at ``keep``, in that order."""
        return FeatureSpace(
            tuple(self.descriptors[i] for i in keep),
            self.thresholds,
            self.fitted_on,
            self.stopwords_sha256,
            self.fitted_ids,
        )

    # -- serialization ----------------------------------------------------
    def dumps(self) -> str:
        lines = [
            f"# codemix-stance feature space v{FORMAT_VERSION}",
            f"thresholds {self.thresholds.format()}",
            f"fitted_on {self.fitted_on or '-'}",
            f"stopwords {self.stopwords_sha256 or '-'}",
            f"size {len(self)}",
        ]
        lines.extend(d.key for d in self.descriptors)
        return "\n".join(lines) + "\n"

    @classmethod
    def loads(cls, text: str) -> "FeatureSpace":
        lines = text.split("\n")
        if lines and lines[-1] == "":
            lines.pop()
        if len(lines) < 5 or lines[0] != f"# codemix-stance feature space v{FORMAT_VERSION}":
            raise ValueError("not a feature space file (or unsupported version)")
        header = {}
        for line in lines[1:5]:
            name, _, value = line.partition(" ")
            header[name] = value
        size = int(header["size"])
        body = lines[5:]
        if len(body) != size:
            raise ValueError(f"expected {size} descriptors, found {len(body)}")
        dash = lambda v: "" if v == "-" else v  # noqa: E731
        return cls(
            tuple(FeatureDescriptor.from_key(k) for k in body),
            Thresholds.parse(header["thresholds"]),
            dash(header["fitted_on"]),
            dash(header["stopwords"]),
        )

    def save(self, path: Union[str, Path]) -> None:
        Path(path).write_text(self.dumps(), encoding="utf-8")

    @classmethod
    def load(cls, path: Union[str, Path]) -> "FeatureSpace":
        return cls.loads(Path(path).read_text(encoding="utf-8"))


def fit_feature_space(
    docs: Sequence[Document],
    families: Iterable[FeatureKind] = FAMILIES["all"],
    thresholds: Thresholds = Thresholds(),
    stopwords_sha256: str = "",
) -> FeatureSpace:
    """Build the selected feature families over ``docs`` (training split only)."""
    families = set(families)
    descriptors: set[FeatureDescriptor] = set()
    if FeatureKind.CHAR_NGRAM in families:
        descriptors |= build_char_ngrams(docs, (1, 3), thresholds.char_min, thresholds.count_mode)
    if FeatureKind.WORD_NGRAM in families:
        descriptors |= build_word_ngrams(docs, (1, 5), thresholds.word_min, thresholds.count_mode)
    if FeatureKind.SI_TOKEN in families:
        descriptors |= build_si_tokens(docs, thresholds.si_min_score, thresholds.si_min_count, thresholds.count_mode)
    ids = tuple(doc.id for doc in docs)
    return FeatureSpace(
        tuple(sorted(descriptors, key=lambda d: d.key)),
        thresholds,
        corpus_fingerprint(ids),
        stopwords_sha256,
        ids,
    )


_CHAR = FeatureKind.CHAR_NGRAM.value + "\t"
_WORD = FeatureKind.WORD_NGRAM.value + "\t"
_SI = FeatureKind.SI_TOKEN.value + "\t"


def active_indices(doc: Document, space: FeatureSpace) -> list[int]:
    max_char, max_word, has_si = space._lookups
    surfaces = doc.surfaces
    keys = set()
    if max_char:
        keys.update(_CHAR + g for g in char_ngrams(surfaces, (1, max_char)))
    if max_word:
        keys.update(_WORD + " ".join(g) for g in word_ngrams(surfaces, (1, max_word)))
    if has_si:
        keys.update(f"{_SI}{t.tag.value} {t.surface}" for t in doc.tokens)
    index = space.index
    return sorted(index[k] for k in keys if k in index)


def vectorize(doc: Document, space: FeatureSpace) -> FeatureVector:
    """Binary presence vector of ``doc`` in ``space``; unseen n-grams are ignored."""
    return FeatureVector(tuple(active_indices(doc, space)), len(space), space.fingerprint)


def vectorize_matrix(docs: Sequence[Document], space: FeatureSpace) -> np.ndarray:
    """Dense ``(len(docs), len(space))`` uint8 presence matrix."""
    X = np.zeros((len(docs), len(space)), dtype=np.uint8)
    for row, doc in enumerate(docs):
        X[row, active_indices(doc, space)] = 1
    return X


def to_matrix(vectors: Sequence[FeatureVector], size: Optional[int] = None) -> np.ndarray:
    if size is None:
        size = vectors[0].size if vectors else 0
    X = np.zeros((len(vectors), size), dtype=np.uint8)
    for row, v in enumerate(vectors):
        X[row, list(v.indices)] = 1
    return X
