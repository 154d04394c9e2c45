"""Feature extraction: complexity metrics, TF-IDF, raw term counts.

Modes:

* ``metrics`` -- the dense 4-vector (L, FKGL, TTR, LD), optionally z-scored
  with training statistics;
* ``tfidf``   -- L2-normalized TF-IDF over a unigram vocabulary;
* ``both``    -- TF-IDF columns followed by the 4 metric columns;
* ``counts``  -- raw term counts, for the multinomial naive Bayes model.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
import scipy.sparse as sp

from .errors import EmptyVocabulary
from .textmetrics import TokenizedText, compute_metrics

MODES = ("metrics", "tfidf", "both", "counts")
STD_FLOOR = 1e-12


@dataclass(frozen=True)
class FeatureConfig:
    mode: str = "tfidf"
    sublinear_tf: bool = False
    min_df: int = 1
    metric_scaling: str = "zscore"

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"unknown feature mode {self.mode!r}")
        if self.min_df < 1:
            raise ValueError("min_df must be >= 1")
        if self.metric_scaling not in ("zscore", "none"):
            raise ValueError(f"unknown metric scaling {self.metric_scaling!r}")

    @property
    def uses_vocabulary(self) -> bool:
        return self.mode != "metrics"

    @property
    def uses_metrics(self) -> bool:
        return self.mode in ("metrics", "both")


@dataclass(frozen=True)
class Vocabulary:
    terms: tuple[str, ...]  # sorted; position is the column index
    document_frequency: tuple[int, ...]
    document_count: int
    term_to_index: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "term_to_index", {t: i for i, t in enumerate(self.terms)})

    def __len__(self):
        return len(self.terms)

    def idf(self) -> np.ndarray:
        df = np.asarray(self.document_frequency, dtype=np.float64)
        return np.log((1.0 + self.document_count) / (1.0 + df)) + 1.0


def fit_vocabulary(train_texts: Sequence[TokenizedText], config: FeatureConfig) -> Vocabulary:
    if not train_texts:
        raise EmptyVocabulary("no training documents")
    df = Counter()
    for doc in train_texts:
        df.update(set(doc.tokens))
    terms = sorted(t for t, c in df.items() if c >= config.min_df)
    if not terms:
        raise EmptyVocabulary(f"no term reaches min_df={config.min_df}")
    return Vocabulary(tuple(terms), tuple(df[t] for t in terms), len(train_texts))


def _term_counts(doc: TokenizedText, vocab: Vocabulary) -> tuple[list[int], list[float]]:
    counts = Counter(t for t in doc.tokens if t in vocab.term_to_index)
    cols = sorted(vocab.term_to_index[t] for t in counts)
    inv = vocab.terms
    return cols, [float(counts[inv[c]]) for c in cols]


def _tfidf_entries(doc, vocab, config, idf) -> tuple[list[int], list[float]]:
    cols, tf = _term_counts(doc, vocab)
    if config.sublinear_tf:
        tf = [1.0 + math.log(c) for c in tf]
    vals = [v * idf[c] for c, v in zip(cols, tf)]
    norm = math.sqrt(sum(v * v for v in vals))
    if norm > 0:
        vals = [v / norm for v in vals]
    return cols, vals


def transform_tfidf(doc: TokenizedText, vocab: Vocabulary, config: FeatureConfig) -> sp.csr_matrix:
    """One L2-normalized TF-IDF row; out-of-vocabulary tokens are dropped."""
    cols, vals = _tfidf_entries(doc, vocab, config, vocab.idf())
    return sp.csr_matrix((vals, ([0] * len(cols), cols)), shape=(1, len(vocab)))


@dataclass(frozen=True)
class FittedFeatures:
    """Everything needed to turn new documents into model inputs."""

    config: FeatureConfig
    vocabulary: Vocabulary | None = None
    metric_mean: tuple[float, ...] | None = None
    metric_std: tuple[float, ...] | None = None

    @property
    def n_features(self) -> int:
        n = len(self.vocabulary) if self.vocabulary is not None else 0
        return n + (4 if self.config.uses_metrics else 0)

    def feature_names(self) -> list[str]:
        names = list(self.vocabulary.terms) if self.vocabulary is not None else []
        if self.config.uses_metrics:
            names += ["__L", "__FKGL", "__TTR", "__LD"]
        return names


def _raw_metrics(docs: Sequence[TokenizedText]) -> np.ndarray:
    return np.array([compute_metrics(d).as_tuple() for d in docs], dtype=np.float64).reshape(-1, 4)


def fit_features(train_docs: Sequence[TokenizedText], config: FeatureConfig) -> FittedFeatures:
    vocab = fit_vocabulary(train_docs, config) if config.uses_vocabulary else None
    mean = std = None
    if config.uses_metrics and config.metric_scaling == "zscore":
        raw = _raw_metrics(train_docs)
        mu = raw.mean(axis=0)
        sd = raw.std(axis=0)
        sd = np.where(sd < STD_FLOOR, 1.0, sd)
        mean, std = tuple(mu.tolist()), tuple(sd.tolist())
    return FittedFeatures(config, vocab, mean, std)


def transform_metrics(doc: TokenizedText, state: FittedFeatures) -> np.ndarray:
    """(L, FKGL, TTR, LD), z-scored when the state carries train statistics."""
    x = np.array(compute_metrics(doc).as_tuple(), dtype=np.float64)
    if state.metric_mean is not None:
        x = (x - np.asarray(state.metric_mean)) / np.asarray(state.metric_std)
    return x


def transform(state: FittedFeatures, docs: Sequence[TokenizedText]) -> sp.csr_matrix:
    """Feature matrix with row ``i`` built from ``docs[i]``."""
    blocks = []
    cfg = state.config
    if state.vocabulary is not None:
        vocab = state.vocabulary
        idf = vocab.idf()
        rows, cols, vals = [], [], []
        for i, doc in enumerate(docs):
            if cfg.mode == "counts":
                c, v = _term_counts(doc, vocab)
            else:
                c, v = _tfidf_entries(doc, vocab, cfg, idf)
            rows.extend([i] * len(c))
            cols.extend(c)
            vals.extend(v)
        blocks.append(sp.csr_matrix((vals, (rows, cols)), shape=(len(docs), len(vocab))))
    if cfg.uses_metrics:
        dense = np.vstack([transform_metrics(d, state) for d in docs]) if docs else np.zeros((0, 4))
        blocks.append(sp.csr_matrix(dense))
    x = blocks[0] if len(blocks) == 1 else sp.hstack(blocks, format="csr")
    return sp.csr_matrix(x, dtype=np.float64)
