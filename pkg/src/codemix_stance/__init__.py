"""Stance detection toolkit for English-Hindi code-mixed tweets."""
from .corpus import Corpus, LanguageTag, StanceLabel, TokenAnnotation, Tweet, load_corpus, write_corpus

__version__ = "0.1.0"

__all__ = [
    "Corpus",
    "LanguageTag",
    "StanceLabel",
    "TokenAnnotation",
    "Tweet",
    "load_corpus",
    "write_corpus",
]
