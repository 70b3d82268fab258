"""Seeded generator of code-mixed stance corpora for tests and benchmarks.

Tweets are drawn from a shared pool of Hindi/English filler plus a
stance-specific pool; ``signal`` is the per-token probability of drawing
from the stance pool, so lower values give a harder task.
"""
from __future__ import annotations

import random
from typing import Optional

from .corpus import Corpus, StanceLabel, Tweet
from .langid import LexiconSet, load_lexicons, tag_tokens
from .preprocess import tokenize

FILLER = (
    "ka ki ke hai ko se ne bhi to ye wo aur kya kar raha rahe log sab ab kuch par mein "
    "notebandi note paisa sarkar desh bank atm cash money din aaj kal hum aap ji bhai "
    "the is for and government people india modi"
).split()

STANCE_WORDS = {
    StanceLabel.FAVOR: (
        "samarthan thanks support sahi faisla accha badhai kaladhan khatam great step "
        "#IAmWithModi #ByeByeBlackMoney deshbhakt vikas jai hind proud"
    ).split(),
    StanceLabel.AGAINST: (
        "pareshan dikkat garib mushkil lambi line wapas problem suffering chaos "
        "#StopDemonetisation #NoteNahiPMBadlo #ModiSurgicalStrikeOnCommonMan dard majboor failure"
    ).split(),
    StanceLabel.NONE: (
        "rajniti news sawal hindu muslim neta samajh kaise shayad pata dekho baat "
        "update report question soch"
    ).split(),
}

MENTIONS = ("@narendramodi", "@PMOIndia", "@RBI", "@arunjaitley", "@ndtv")
PUNCT = (".", ",", "?", "!!!", "...", ":")
EMOTICONS = (":)", ":(", ":D")

PUBLISHED_COUNTS = {StanceLabel.FAVOR: 964, StanceLabel.AGAINST: 647, StanceLabel.NONE: 1934}


def _tweet_text(rng: random.Random, stance: StanceLabel, signal: float, length: tuple[int, int]) -> str:
    parts = []
    if rng.random() < 0.35:
        parts.append(rng.choice(MENTIONS))
    for _ in range(rng.randint(*length)):
        pool = STANCE_WORDS[stance] if rng.random() < signal else FILLER
        word = rng.choice(pool)
        if rng.random() < 0.15:
            word = word.capitalize() if not word.startswith("#") else word
        if rng.random() < 0.12:
            word += rng.choice(PUNCT)
        parts.append(word)
    if rng.random() < 0.15:
        parts.append(rng.choice(EMOTICONS))
    if rng.random() < 0.2:
        parts.append(f"https://t.co/{rng.randrange(16**6):06x}")
    return " ".join(parts)


def synthetic_corpus(
    counts: Optional[dict] = None,
    seed: int = 0,
    signal: float = 0.25,
    length: tuple[int, int] = (10, 22),
    lexicons: Optional[LexiconSet] = None,
    hashtag_policy: str = "content",
) -> Corpus:
    """A fully annotated corpus with ``counts[label]`` tweets per label, shuffled."""
    counts = counts or PUBLISHED_COUNTS
    lexicons = lexicons or load_lexicons()
    rng = random.Random(seed)
    stances = [label for label, n in counts.items() for _ in range(n)]
    rng.shuffle(stances)
    tweets = []
    for i, stance in enumerate(stances):
        text = _tweet_text(rng, stance, signal, length)
        tokens = tag_tokens(tokenize(text), lexicons, hashtag_policy)
        tweets.append(Tweet(str(800000000000000000 + i * 7919), text, tuple(tokens), stance))
    return Corpus(tuple(tweets))
