"""Confusion matrices, per-class reports, corpus statistics and report rendering."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .dataset import BloomLevel, LabelScheme, coarsening_map
from .errors import EmptyMatrix, IndexOutOfRange, InsufficientData, LengthMismatch
from .textmetrics import METRIC_NAMES, TextMetrics


@dataclass(frozen=True)
class ConfusionMatrix:
    counts: np.ndarray  # rows = gold, cols = predicted
    class_names: tuple[str, ...]

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    def __eq__(self, other):
        return (isinstance(other, ConfusionMatrix)
                and self.class_names == other.class_names
                and np.array_equal(self.counts, other.counts))


def confusion(gold, pred, k: int, class_names: Sequence[str] | None = None) -> ConfusionMatrix:
    gold = np.asarray(gold, dtype=np.int64).ravel()
    pred = np.asarray(pred, dtype=np.int64).ravel()
    if gold.shape != pred.shape:
        raise LengthMismatch(f"{gold.size} gold labels vs {pred.size} predictions")
    for arr in (gold, pred):
        if arr.size and (arr.min() < 0 or arr.max() >= k):
            raise IndexOutOfRange(f"class indices must lie in [0, {k})")
    counts = np.zeros((k, k), dtype=np.int64)
    np.add.at(counts, (gold, pred), 1)
    names = tuple(class_names) if class_names is not None else tuple(str(i) for i in range(k))
    return ConfusionMatrix(counts, names)


@dataclass
class EvalReport:
    class_names: tuple[str, ...]
    precision: list[float]
    recall: list[float]
    f1: list[float]
    support: list[int]
    accuracy: float
    macro_precision: float
    macro_recall: float
    macro_f1: float
    confusion: ConfusionMatrix
    zero_division: bool = False
    metadata: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "class_names": list(self.class_names),
            "per_class": [
                {"class": c, "precision": p, "recall": r, "f1": f, "support": s}
                for c, p, r, f, s in zip(self.class_names, self.precision, self.recall, self.f1, self.support)
            ],
            "accuracy": self.accuracy,
            "macro_precision": self.macro_precision,
            "macro_recall": self.macro_recall,
            "macro_f1": self.macro_f1,
            "confusion": self.confusion.counts.tolist(),
            "zero_division": self.zero_division,
            "metadata": self.metadata,
        }

    @classmethod
    def from_dict(cls, obj: dict) -> "EvalReport":
        names = tuple(obj["class_names"])
        rows = obj["per_class"]
        return cls(
            class_names=names,
            precision=[r["precision"] for r in rows],
            recall=[r["recall"] for r in rows],
            f1=[r["f1"] for r in rows],
            support=[r["support"] for r in rows],
            accuracy=obj["accuracy"],
            macro_precision=obj["macro_precision"],
            macro_recall=obj["macro_recall"],
            macro_f1=obj["macro_f1"],
            confusion=ConfusionMatrix(np.array(obj["confusion"], dtype=np.int64).reshape(len(names), len(names)), names),
            zero_division=obj["zero_division"],
            metadata=obj["metadata"],
        )


def _ratio(num, den) -> tuple[float, bool]:
    return (num / den, False) if den else (0.0, True)


def classification_report(cm: ConfusionMatrix, metadata: dict | None = None) -> EvalReport:
    """Per-class precision/recall/F1 from a confusion matrix.

    Undefined ratios (empty column or row) are reported as 0 and set the
    ``zero_division`` flag.
    """
    counts = cm.counts
    total = counts.sum()
    if total == 0:
        raise EmptyMatrix("confusion matrix has no entries")
    diag = np.diag(counts)
    colsum, rowsum = counts.sum(axis=0), counts.sum(axis=1)
    precision, recall, f1 = [], [], []
    flagged = False
    for k in range(len(diag)):
        p, zp = _ratio(int(diag[k]), int(colsum[k]))
        r, zr = _ratio(int(diag[k]), int(rowsum[k]))
        f, zf = _ratio(2 * p * r, p + r)
        flagged |= zp or zr or zf
        precision.append(p)
        recall.append(r)
        f1.append(f)
    k = len(diag)
    return EvalReport(
        class_names=cm.class_names,
        precision=precision,
        recall=recall,
        f1=f1,
        support=[int(s) for s in rowsum],
        accuracy=float(diag.sum() / total),
        macro_precision=sum(precision) / k,
        macro_recall=sum(recall) / k,
        macro_f1=sum(f1) / k,
        confusion=cm,
        zero_division=flagged,
        metadata=dict(metadata or {}),
    )


def evaluate(gold, pred, scheme: LabelScheme, metadata: dict | None = None) -> EvalReport:
    cm = confusion(gold, pred, scheme.n_classes, scheme.class_names)
    return classification_report(cm, metadata)


def merge_report(gold, pred, from_scheme: LabelScheme, to_scheme: LabelScheme,
                 metadata: dict | None = None) -> EvalReport:
    """Map gold and predicted classes through a coarsening, then report."""
    cmap = coarsening_map(from_scheme, to_scheme)
    gold = cmap[np.asarray(gold, dtype=np.int64)]
    pred = cmap[np.asarray(pred, dtype=np.int64)]
    meta = {"scheme": to_scheme.name, "merged_from": from_scheme.name, **(metadata or {})}
    return evaluate(gold, pred, to_scheme, meta)


# -- exploratory statistics -----------------------------------------------

@dataclass
class CorpusStats:
    counts: dict[str, int]
    means: dict[str, dict[str, float]]  # level -> metric -> mean
    stds: dict[str, dict[str, float]]
    correlations: dict[str, float | None]  # "L~FKGL" -> r, None when undefined
    n_records: int


def pearson_r(x, y) -> float | None:
    """Pearson correlation; None when either variable has zero variance."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.shape != y.shape:
        raise LengthMismatch("x and y differ in length")
    if x.size < 2:
        raise InsufficientData("correlation needs at least two observations")
    dx, dy = x - x.mean(), y - y.mean()
    sxx, syy = float(dx @ dx), float(dy @ dy)
    scale = max(float(np.abs(x).max()), float(np.abs(y).max()), 1.0)
    # variance below rounding noise counts as zero
    if sxx <= (1e-12 * scale) ** 2 * x.size or syy <= (1e-12 * scale) ** 2 * y.size:
        return None
    r = float(dx @ dy) / math.sqrt(sxx * syy)
    return max(-1.0, min(1.0, r))


CORRELATION_PAIRS = (("L", "FKGL"), ("L", "LD"), ("L", "TTR"), ("FKGL", "LD"))


def corpus_stats(levels: Sequence[BloomLevel], metrics: Sequence[TextMetrics]) -> CorpusStats:
    if len(levels) != len(metrics):
        raise LengthMismatch("one metrics row per record is required")
    if len(levels) < 2:
        raise InsufficientData("corpus statistics need at least two records")
    table = np.array([m.as_tuple() for m in metrics], dtype=np.float64)
    lv = np.array([int(v) for v in levels])
    counts, means, stds = {}, {}, {}
    for level in BloomLevel:
        rows = table[lv == level]
        counts[level.label] = int(rows.shape[0])
        if rows.shape[0] == 0:
            continue
        means[level.label] = dict(zip(METRIC_NAMES, rows.mean(axis=0).tolist()))
        stds[level.label] = dict(zip(METRIC_NAMES, rows.std(axis=0).tolist()))
    col = {name: table[:, i] for i, name in enumerate(METRIC_NAMES)}
    correlations = {f"{a}~{b}": pearson_r(col[a], col[b]) for a, b in CORRELATION_PAIRS}
    return CorpusStats(counts, means, stds, correlations, len(levels))


# -- rendering -------------------------------------------------------------

def _fmt(x: float) -> str:
    return f"{x:.2f}"


def report_table(report: EvalReport, title: str | None = None) -> str:
    lines = []
    if title:
        lines += [f"### {title}", ""]
    lines += ["| Level | Precision | Recall | F1-score |", "|---|---|---|---|"]
    for name, p, r, f in zip(report.class_names, report.precision, report.recall, report.f1):
        lines.append(f"| {name} | {_fmt(p)} | {_fmt(r)} | {_fmt(f)} |")
    lines.append(f"| Accuracy | | | {_fmt(report.accuracy)} |")
    return "\n".join(lines) + "\n"


def comparative_table(reports: Sequence[EvalReport]) -> str:
    lines = ["| Experiment | Method | Accuracy | Notes |", "|---|---|---|---|"]
    for i, rep in enumerate(reports, start=1):
        m = rep.metadata
        experiment = m.get("experiment", f"Run {i}")
        method = m.get("method", m.get("model", ""))
        notes = m.get("notes", "; ".join(f"{k}={m[k]}" for k in ("scheme", "features") if k in m))
        lines.append(f"| {experiment} | {method} | {_fmt(rep.accuracy)} | {notes} |")
    return "\n".join(lines) + "\n"


def _title(report: EvalReport) -> str | None:
    m = report.metadata
    if not m:
        return None
    parts = [m.get("experiment"), " / ".join(str(m[k]) for k in ("model", "features", "scheme") if k in m)]
    return ": ".join(p for p in parts if p) or None


def emit_report(reports: EvalReport | Sequence[EvalReport], format: str = "markdown") -> str:
    """Render one or more reports as markdown tables or as JSON."""
    if isinstance(reports, EvalReport):
        reports = [reports]
    reports = list(reports)
    if format == "json":
        payload = reports[0].to_dict() if len(reports) == 1 else [r.to_dict() for r in reports]
        return json.dumps(payload, indent=2) + "\n"
    if format != "markdown":
        raise ValueError(f"unknown report format {format!r}")
    parts = [report_table(r, _title(r)) for r in reports]
    if len(reports) > 1:
        parts.append("### Comparative results\n\n" + comparative_table(reports))
    return "\n".join(parts)


def parse_report(text: str) -> EvalReport | list[EvalReport]:
    obj = json.loads(text)
    if isinstance(obj, list):
        return [EvalReport.from_dict(o) for o in obj]
    return EvalReport.from_dict(obj)


def stats_summary_csv(stats: CorpusStats) -> str:
    """Per-level mean and standard deviation of each metric, one row per level."""
    header = ["level", "count"] + [f"{m}_{s}" for m in METRIC_NAMES for s in ("mean", "std")]
    rows = [",".join(header)]
    for level in BloomLevel:
        name = level.label
        if name not in stats.means:
            continue
        vals = [f"{stats.means[name][m]!r},{stats.stds[name][m]!r}" for m in METRIC_NAMES]
        rows.append(",".join([name, str(stats.counts[name])] + vals))
    return "\n".join(rows) + "\n"


def stats_summary_text(stats: CorpusStats) -> str:
    lines = [f"records: {stats.n_records}", "", "level           n      L   FKGL    TTR     LD"]
    for level in BloomLevel:
        name = level.label
        if name not in stats.means:
            continue
        m = stats.means[name]
        lines.append(f"{name:<13} {stats.counts[name]:>4} {m['L']:>6.2f} {m['FKGL']:>6.2f} {m['TTR']:>6.3f} {m['LD']:>6.3f}")
    lines.append("")
    for pair, r in stats.correlations.items():
        lines.append(f"pearson r {pair}: {'absent' if r is None else f'{r:.4f}'}")
    return "\n".join(lines) + "\n"
