"""Tokenization, syllable estimation and the four per-question complexity measures.

All counting is done on lowercased tokens. A token is a maximal run of
letters/digits, optionally joined by internal apostrophes ("don't"). Sentences
are the segments between '.', '!' and '?' that contain at least one token.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

from .errors import EmptyText

FKGL_SENTENCE_WEIGHT = 0.39
FKGL_SYLLABLE_WEIGHT = 11.8
FKGL_OFFSET = 15.59

_TOKEN_RE = re.compile(r"[^\W_]+(?:['’][^\W_]+)*")
_SENTENCE_SPLIT_RE = re.compile(r"[.!?]")
_VOWEL_GROUP_RE = re.compile(r"[aeiouy]+")
_VOWELS = frozenset("aeiouy")


@dataclass(frozen=True)
class TokenizedText:
    tokens: tuple[str, ...]
    sentence_count: int
    syllable_counts: tuple[int, ...]
    content_flags: tuple[bool, ...]

    @property
    def n_words(self) -> int:
        return len(self.tokens)

    @property
    def n_syllables(self) -> int:
        return sum(self.syllable_counts)

    @property
    def n_unique(self) -> int:
        return len(set(self.tokens))

    @property
    def n_content(self) -> int:
        return sum(self.content_flags)


@dataclass(frozen=True)
class TextMetrics:
    length_l: int
    fkgl: float
    ttr: float
    ld: float

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (float(self.length_l), self.fkgl, self.ttr, self.ld)


METRIC_NAMES = ("L", "FKGL", "TTR", "LD")


@lru_cache(maxsize=1)
def stopwords() -> frozenset[str]:
    """The embedded stopword list (``data/stopwords.txt``)."""
    text = resources.files("bloomclf").joinpath("data/stopwords.txt").read_text("utf-8")
    words = (line.strip() for line in text.splitlines())
    return frozenset(w for w in words if w and not w.startswith("#"))


def is_content_word(word: str) -> bool:
    return word not in stopwords()


def count_syllables(word: str) -> int:
    """Estimate syllables as vowel groups, minus one for a silent final 'e'.

    A final 'e' is not silent after consonant + 'l' ("table"). The result is
    never below 1.
    """
    count = len(_VOWEL_GROUP_RE.findall(word))
    if word.endswith("e"):
        consonant_le = len(word) >= 3 and word.endswith("le") and word[-3] not in _VOWELS
        if not consonant_le and count > 1:
            count -= 1
    return max(count, 1)


def _word_tokens(text: str) -> list[str]:
    return [m.group(0).lower().replace("’", "'") for m in _TOKEN_RE.finditer(text)]


def tokenize(text: str) -> TokenizedText:
    tokens = _word_tokens(text)
    if not tokens:
        raise EmptyText(f"no word tokens in {text!r}")
    sentences = sum(1 for seg in _SENTENCE_SPLIT_RE.split(text) if _TOKEN_RE.search(seg))
    return TokenizedText(
        tokens=tuple(tokens),
        sentence_count=max(sentences, 1),
        syllable_counts=tuple(count_syllables(t) for t in tokens),
        content_flags=tuple(is_content_word(t) for t in tokens),
    )


def flesch_kincaid_grade(n_words: int, n_sentences: int, n_syllables: int) -> float:
    return (
        FKGL_SENTENCE_WEIGHT * (n_words / n_sentences)
        + FKGL_SYLLABLE_WEIGHT * (n_syllables / n_words)
        - FKGL_OFFSET
    )


def compute_metrics(t: TokenizedText) -> TextMetrics:
    n = t.n_words
    if n == 0:
        raise EmptyText("cannot compute metrics of an empty token sequence")
    return TextMetrics(
        length_l=n,
        fkgl=flesch_kincaid_grade(n, t.sentence_count, t.n_syllables),
        ttr=t.n_unique / n,
        ld=t.n_content / n,
    )


def text_metrics(text: str) -> TextMetrics:
    """Shortcut for ``compute_metrics(tokenize(text))``."""
    return compute_metrics(tokenize(text))
