"""Figures for the analysis and experiment reports.

Uses the object-oriented matplotlib API with the Agg canvas, so nothing here
touches pyplot's global state.
"""

from __future__ import annotations

from typing import Sequence

import matplotlib
import numpy as np
from matplotlib.backends.backend_agg import FigureCanvasAgg
from matplotlib.figure import Figure

from .dataset import BloomLevel
from .evaluation import EvalReport
from .textmetrics import METRIC_NAMES, TextMetrics

STYLE = {
    "font.size": 9,
    "axes.labelsize": 9,
    "axes.titlesize": 10,
    "xtick.labelsize": 8,
    "ytick.labelsize": 8,
    "axes.spines.top": False,
    "axes.spines.right": False,
    "savefig.dpi": 150,
}

METRIC_LABELS = {
    "L": "Question length (words)",
    "FKGL": "Flesch-Kincaid grade level",
    "TTR": "Type-token ratio",
    "LD": "Lexical density",
}


def _save(fig: Figure, path) -> None:
    FigureCanvasAgg(fig)
    # no Software/date chunks, so identical figures give identical bytes
    fig.savefig(path, metadata={"Software": None})


def metric_by_level_figure(levels: Sequence[BloomLevel], metrics: Sequence[TextMetrics],
                           metric: str, path) -> None:
    """Box plot of one metric per Bloom level."""
    col = METRIC_NAMES.index(metric)
    values = np.array([m.as_tuple()[col] for m in metrics])
    lv = np.array([int(v) for v in levels])
    present = [level for level in BloomLevel if np.any(lv == level)]
    with matplotlib.rc_context(STYLE):
        fig = Figure(figsize=(5.5, 3.4))
        ax = fig.add_subplot()
        ax.boxplot([values[lv == level] for level in present], showmeans=True)
        ax.set_xticks(range(1, len(present) + 1), [level.label for level in present], rotation=20)
        ax.set_ylabel(METRIC_LABELS[metric])
        ax.set_title(f"{metric} by Bloom level")
        fig.tight_layout()
        _save(fig, path)


def length_grade_figure(metrics: Sequence[TextMetrics], r: float | None, path) -> None:
    x = np.array([m.length_l for m in metrics], dtype=float)
    y = np.array([m.fkgl for m in metrics])
    with matplotlib.rc_context(STYLE):
        fig = Figure(figsize=(4.5, 3.4))
        ax = fig.add_subplot()
        ax.scatter(x, y, s=6, alpha=0.5, linewidths=0)
        ax.set_xlabel(METRIC_LABELS["L"])
        ax.set_ylabel(METRIC_LABELS["FKGL"])
        ax.set_title("L vs FKGL" + ("" if r is None else f" (r = {r:.2f})"))
        fig.tight_layout()
        _save(fig, path)


def confusion_figure(report: EvalReport, path) -> None:
    counts = report.confusion.counts
    names = report.class_names
    with matplotlib.rc_context(STYLE):
        fig = Figure(figsize=(1.2 + 0.8 * len(names), 1.0 + 0.7 * len(names)))
        ax = fig.add_subplot()
        im = ax.imshow(counts, cmap="Blues")
        ax.set_xticks(range(len(names)), names, rotation=30, ha="right")
        ax.set_yticks(range(len(names)), names)
        ax.set_xlabel("Predicted")
        ax.set_ylabel("Gold")
        threshold = counts.max() / 2 if counts.size else 0
        for (i, j), c in np.ndenumerate(counts):
            ax.text(j, i, str(c), ha="center", va="center",
                    color="white" if c > threshold else "black", fontsize=8)
        fig.colorbar(im, ax=ax, fraction=0.046, pad=0.04)
        fig.tight_layout()
        _save(fig, path)


def analysis_figures(levels, metrics, r_length_grade, out_dir) -> list:
    from pathlib import Path

    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = []
    for metric in METRIC_NAMES:
        p = out / f"{metric.lower()}_by_level.png"
        metric_by_level_figure(levels, metrics, metric, p)
        paths.append(p)
    p = out / "length_vs_fkgl.png"
    length_grade_figure(metrics, r_length_grade, p)
    paths.append(p)
    return paths
