"""Synthetic labeled questions from level-specific action verbs and templates."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from importlib import resources

import numpy as np

from .dataset import BloomLevel, QuestionRecord
from .errors import BankFormatError, EmptyBank, UnknownLabel

log = logging.getLogger(__name__)

VERB_SLOT = "{verb}"
TOPIC_SLOT = "{topic}"
TOPIC_TAG = "topic"


@dataclass(frozen=True)
class Banks:
    verbs: dict[BloomLevel, tuple[str, ...]]
    templates: dict[BloomLevel, tuple[str, ...]]
    topics: tuple[str, ...]

    def combinations(self, level: BloomLevel) -> int:
        return len(self.verbs[level]) * len(self.templates[level]) * len(self.topics)

    def validate(self) -> None:
        for level in BloomLevel:
            if not self.verbs.get(level):
                raise EmptyBank(f"no verbs for level {level.label}")
            if not self.templates.get(level):
                raise EmptyBank(f"no templates for level {level.label}")
        if not self.topics:
            raise EmptyBank("topic pool is empty")
        owner = {}
        for level, verbs in self.verbs.items():
            for v in verbs:
                if owner.setdefault(v, level) != level:
                    raise BankFormatError(
                        f"verb {v!r} appears under both {owner[v].label} and {level.label}")


def parse_banks(text: str) -> Banks:
    verbs = {lv: [] for lv in BloomLevel}
    templates = {lv: [] for lv in BloomLevel}
    topics = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.rstrip("\r\n")
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        tag, sep, value = line.partition("\t")
        value = value.strip()
        if not sep or not value:
            raise BankFormatError("expected LEVEL<TAB>value", lineno)
        if tag.strip().lower() == TOPIC_TAG:
            topics.append(value)
            continue
        try:
            level = BloomLevel.parse(tag)
        except UnknownLabel:
            raise BankFormatError(f"unknown level {tag!r}", lineno) from None
        if VERB_SLOT in value:
            if value.count(VERB_SLOT) != 1 or value.count(TOPIC_SLOT) != 1:
                raise BankFormatError("template needs exactly one {verb} and one {topic} slot", lineno)
            if not value.startswith(VERB_SLOT):
                raise BankFormatError("template must start with the {verb} slot", lineno)
            templates[level].append(value)
        else:
            if len(value.split()) != 1 or not value.isalpha():
                raise BankFormatError(f"verb must be a single word, got {value!r}", lineno)
            verbs[level].append(value.lower())
    banks = Banks(
        {lv: tuple(v) for lv, v in verbs.items()},
        {lv: tuple(t) for lv, t in templates.items()},
        tuple(topics),
    )
    banks.validate()
    return banks


def load_banks(path=None) -> Banks:
    """Read a bank file; without a path, the bundled ``data/banks.tsv``."""
    if path is None:
        text = resources.files("bloomclf").joinpath("data/banks.tsv").read_text("utf-8")
    else:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    return parse_banks(text)


def render(template: str, verb: str, topic: str) -> str:
    return template.replace(VERB_SLOT, verb.capitalize()).replace(TOPIC_SLOT, topic)


def generate(n_per_level: int, seed: int, banks: Banks | None = None) -> list[QuestionRecord]:
    """Exactly ``n_per_level`` questions for each Bloom level, in level order.

    (verb, template, topic) triples are drawn without replacement from each
    level's combination space; only once that space is used up do repeats
    appear, and a warning is logged.
    """
    if n_per_level < 1:
        raise ValueError("n_per_level must be >= 1")
    banks = banks or load_banks()
    banks.validate()
    rng = np.random.default_rng(seed)
    out = []
    for level in BloomLevel:
        verbs, temps = banks.verbs[level], banks.templates[level]
        shape = (len(verbs), len(temps), len(banks.topics))
        space = shape[0] * shape[1] * shape[2]
        picks = []
        while len(picks) < n_per_level:
            picks.extend(rng.permutation(space)[: n_per_level - len(picks)].tolist())
        if n_per_level > space:
            log.warning("level %s: %d questions requested but only %d distinct combinations; "
                        "duplicates generated", level.label, n_per_level, space)
        for vi, ti, pi in zip(*np.unravel_index(picks, shape)):
            out.append(QuestionRecord(render(temps[ti], verbs[vi], banks.topics[pi]), level))
    return out


def leading_verb(text: str) -> str:
    return text.split(maxsplit=1)[0].lower()
