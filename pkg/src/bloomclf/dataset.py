"""Question corpora: Bloom levels, label schemes, loading, balancing and splitting.

All randomness goes through ``numpy.random.default_rng(seed)`` (PCG64), so a
given seed reproduces the same balanced subset and the same split.
"""

from __future__ import annotations

import csv
import enum
import io
import json
import math
from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import ClassTooSmall, EmptyCorpus, NotACoarsening, ParseError, UnknownLabel

RNG_ALGORITHM = "numpy.random.PCG64"


class BloomLevel(enum.IntEnum):
    KNOWLEDGE = 0
    COMPREHENSION = 1
    APPLICATION = 2
    ANALYSIS = 3
    SYNTHESIS = 4
    EVALUATION = 5

    @property
    def label(self) -> str:
        return self.name.capitalize()

    @classmethod
    def parse(cls, name: str) -> "BloomLevel":
        try:
            return cls[name.strip().upper()]
        except KeyError:
            raise UnknownLabel(name) from None


@dataclass(frozen=True)
class QuestionRecord:
    text: str
    level: BloomLevel


@dataclass(frozen=True)
class LabelScheme:
    """Surjective map from the six Bloom levels onto ``class_names``."""

    name: str
    class_names: tuple[str, ...]
    mapping: tuple[int, ...]  # indexed by BloomLevel

    def __post_init__(self):
        if len(self.mapping) != len(BloomLevel):
            raise ValueError("mapping must cover all six Bloom levels")
        if sorted(set(self.mapping)) != list(range(len(self.class_names))):
            raise ValueError(f"scheme {self.name} is not surjective onto its classes")

    @property
    def n_classes(self) -> int:
        return len(self.class_names)

    def __call__(self, level: BloomLevel) -> int:
        return self.mapping[level]

    def encode(self, levels: Iterable[BloomLevel]) -> np.ndarray:
        return np.array([self.mapping[lv] for lv in levels], dtype=np.int64)


FULL6 = LabelScheme(
    "Full6",
    tuple(lv.label for lv in BloomLevel),
    (0, 1, 2, 3, 4, 5),
)
MERGED4 = LabelScheme(
    "Merged4",
    ("Knowledge", "Comprehension", "Application", "Higher-Order"),
    (0, 1, 2, 3, 3, 3),
)
MERGED3 = LabelScheme(
    "Merged3",
    ("Knowledge", "Mid-Order", "Higher-Order"),
    (0, 1, 1, 2, 2, 2),
)
SCHEMES = {s.name: s for s in (FULL6, MERGED4, MERGED3)}


def get_scheme(name: str) -> LabelScheme:
    for key, scheme in SCHEMES.items():
        if key.lower() == name.lower():
            return scheme
    raise KeyError(f"unknown label scheme {name!r}; choose from {', '.join(SCHEMES)}")


def apply_scheme(level: BloomLevel, scheme: LabelScheme) -> int:
    return scheme.mapping[level]


def coarsening_map(fine: LabelScheme, coarse: LabelScheme) -> np.ndarray:
    """Class-index map from ``fine`` to ``coarse``.

    Raises NotACoarsening when some fine class would have to land in two
    coarse classes.
    """
    out = np.full(fine.n_classes, -1, dtype=np.int64)
    for level in BloomLevel:
        f, c = fine.mapping[level], coarse.mapping[level]
        if out[f] not in (-1, c):
            raise NotACoarsening(f"{coarse.name} does not coarsen {fine.name}")
        out[f] = c
    return out


# -- loading ---------------------------------------------------------------

def _record(text, label, row) -> QuestionRecord:
    if not isinstance(text, str) or not text.strip():
        raise ParseError("empty question text", row)
    if not isinstance(label, str):
        raise ParseError("label must be a string", row)
    try:
        level = BloomLevel.parse(label)
    except UnknownLabel:
        raise UnknownLabel(label, row) from None
    return QuestionRecord(text, level)


def _read_csv(fh) -> list[QuestionRecord]:
    reader = csv.reader(fh)
    try:
        header = next(reader)
    except StopIteration:
        raise EmptyCorpus("corpus file is empty") from None
    header = [h.strip().lower() for h in header]
    if "text" not in header or "label" not in header:
        raise ParseError(f"header must contain 'text' and 'label', got {header}", 1)
    ti, li = header.index("text"), header.index("label")
    records = []
    try:
        for row in reader:
            line = reader.line_num
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != len(header):
                raise ParseError(f"expected {len(header)} fields, got {len(row)}", line)
            records.append(_record(row[ti], row[li], line))
    except csv.Error as exc:
        raise ParseError(str(exc), reader.line_num) from None
    return records


def _read_jsonl(fh) -> list[QuestionRecord]:
    records = []
    for lineno, line in enumerate(fh, start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc.msg}", lineno) from None
        if not isinstance(obj, dict) or "text" not in obj or "label" not in obj:
            raise ParseError("object must have 'text' and 'label' fields", lineno)
        records.append(_record(obj["text"], obj["label"], lineno))
    return records


def infer_format(path) -> str:
    return "jsonl" if Path(path).suffix.lower() in (".jsonl", ".ndjson") else "csv"


def load_corpus(path, format: str | None = None) -> list[QuestionRecord]:
    """Read a labeled corpus from CSV (``text,label`` header) or JSON lines."""
    fmt = format or infer_format(path)
    with open(path, encoding="utf-8", newline="") as fh:
        if fmt == "csv":
            records = _read_csv(fh)
        elif fmt == "jsonl":
            records = _read_jsonl(fh)
        else:
            raise ValueError(f"unsupported corpus format {fmt!r}")
    if not records:
        raise EmptyCorpus(f"no records in {path}")
    return records


def dumps_corpus_csv(corpus: Sequence[QuestionRecord]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["text", "label"])
    for rec in corpus:
        writer.writerow([rec.text, rec.level.label])
    return buf.getvalue()


def save_corpus(corpus: Sequence[QuestionRecord], path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(dumps_corpus_csv(corpus))


# -- statistics, balancing, splitting ---------------------------------------

def class_distribution(corpus: Sequence[QuestionRecord]) -> dict[BloomLevel, int]:
    if not corpus:
        raise EmptyCorpus("empty corpus")
    counts = Counter(rec.level for rec in corpus)
    return {lv: counts.get(lv, 0) for lv in BloomLevel}


def _indices_by_level(corpus) -> dict[BloomLevel, list[int]]:
    groups: dict[BloomLevel, list[int]] = {lv: [] for lv in BloomLevel}
    for i, rec in enumerate(corpus):
        groups[rec.level].append(i)
    return groups


def balance(corpus: Sequence[QuestionRecord], seed: int) -> list[QuestionRecord]:
    """Downsample every Bloom level to the size of the smallest one.

    Levels are visited in taxonomy order, each drawing a seeded permutation of
    its members; the kept records are returned in their original order.
    """
    if not corpus:
        raise EmptyCorpus("cannot balance an empty corpus")
    groups = _indices_by_level(corpus)
    missing = [lv.label for lv, idx in groups.items() if not idx]
    if missing:
        raise EmptyCorpus(f"levels without records: {', '.join(missing)}")
    target = min(len(idx) for idx in groups.values())
    rng = np.random.default_rng(seed)
    keep = []
    for lv in BloomLevel:
        idx = np.asarray(groups[lv])
        keep.extend(idx[rng.permutation(len(idx))[:target]].tolist())
    return [corpus[i] for i in sorted(keep)]


@dataclass(frozen=True)
class SplitDataset:
    train: list[QuestionRecord]
    validation: list[QuestionRecord]
    seed: int
    fraction: float


def validation_size(count: int, fraction: float) -> int:
    # rounding guards products like 0.29 * 100 = 28.999999999999996
    return max(1, math.floor(round(fraction * count, 9)))


def stratified_split(corpus: Sequence[QuestionRecord], fraction: float = 0.2, seed: int = 0) -> SplitDataset:
    """Stratified train/validation split by Bloom level.

    Each non-empty level sends ``max(1, floor(fraction * count))`` records to
    validation. Both halves keep the input order.
    """
    if not 0.0 < fraction < 1.0:
        raise ValueError(f"fraction must lie in (0, 1), got {fraction}")
    if not corpus:
        raise EmptyCorpus("cannot split an empty corpus")
    groups = _indices_by_level(corpus)
    rng = np.random.default_rng(seed)
    val = set()
    for lv in BloomLevel:
        idx = groups[lv]
        if not idx:
            continue
        if len(idx) < 2:
            raise ClassTooSmall(lv.label, len(idx))
        n_val = validation_size(len(idx), fraction)
        chosen = rng.permutation(len(idx))[:n_val]
        val.update(idx[j] for j in chosen)
    train = [rec for i, rec in enumerate(corpus) if i not in val]
    validation = [rec for i, rec in enumerate(corpus) if i in val]
    return SplitDataset(train, validation, seed, fraction)
