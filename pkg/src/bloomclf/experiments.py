"""The five classical experiment presets and the pipeline that runs them.

Pipeline: load corpus -> (balance) -> stratified split -> fit features on the
training half -> train -> evaluate on the validation half. Every input that
affects the outputs is written to a run manifest, from which the run can be
replayed.
"""

from __future__ import annotations

import contextlib
import dataclasses
import hashlib
import json
from dataclasses import dataclass
from pathlib import Path

from . import __version__
from .dataset import RNG_ALGORITHM, balance, get_scheme, load_corpus, stratified_split
from .evaluation import EvalReport, emit_report, evaluate
from .features import FeatureConfig, fit_features, transform
from .models import LOGREG_DEFAULTS, NB_DEFAULTS, SVC_DEFAULTS, TrainedModel, dumps_model, train
from .textmetrics import tokenize


@dataclass(frozen=True)
class Preset:
    name: str
    model: str
    features: str
    scheme: str
    balance: bool
    method: str
    notes: str


PRESETS = {
    p.name: p
    for p in (
        Preset("exp1", "logreg", "metrics", "Full6", True,
               "Multinomial Logistic Regression", "six levels, balanced"),
        Preset("exp2", "logreg", "metrics", "Merged4", True,
               "Multinomial Logistic Regression (Merged Categories)",
               "Analysis, Synthesis and Evaluation merged into Higher-Order"),
        Preset("exp3", "logreg", "metrics", "Merged3", True,
               "Multinomial Logistic Regression (Refined Merged Categories)",
               "Comprehension and Application merged into Mid-Order"),
        Preset("exp4", "naive_bayes", "counts", "Full6", False,
               "Naive-Bayes", "multinomial event model, Laplace smoothing"),
        Preset("exp5", "linear_svc", "tfidf", "Full6", False,
               "Linear Support Vector Classifier", "one-vs-rest hinge loss"),
    )
}

HYPERPARAMETER_DEFAULTS = {
    "logreg": LOGREG_DEFAULTS,
    "naive_bayes": NB_DEFAULTS,
    "linear_svc": SVC_DEFAULTS,
}


@dataclass
class RunConfig:
    """Fully resolved settings of one run; serialized as the run manifest."""

    experiment: str
    corpus: str
    corpus_sha256: str
    seed: int
    split_fraction: float
    scheme: str
    model: str
    features: dict
    balance: bool
    hyperparameters: dict
    rng: str = RNG_ALGORITHM
    tool: str = "bloomclf"
    tool_version: str = __version__

    def to_json(self) -> str:
        return json.dumps(dataclasses.asdict(self), indent=2) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "RunConfig":
        return cls(**json.loads(text))


@dataclass
class RunResult:
    config: RunConfig
    report: EvalReport
    model: TrainedModel


def file_sha256(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            h.update(chunk)
    return h.hexdigest()


def resolve(experiment: str, corpus, seed: int = 0, split_fraction: float = 0.2, *,
            scheme: str | None = None, model: str | None = None, features: str | None = None,
            balance: bool | None = None, sublinear_tf: bool = False, min_df: int = 1,
            metric_scaling: str = "zscore", **hyperparameters) -> RunConfig:
    """Merge a preset with explicit overrides into a RunConfig.

    Hyperparameters not used by the chosen model kind are dropped.
    """
    preset = PRESETS[experiment]
    kind = model or preset.model
    if kind not in HYPERPARAMETER_DEFAULTS:
        raise ValueError(f"unknown model kind {kind!r}")
    defaults = HYPERPARAMETER_DEFAULTS[kind]
    hp = {k: (hyperparameters[k] if hyperparameters.get(k) is not None else v) for k, v in defaults.items()}
    feat = FeatureConfig(features or preset.features, sublinear_tf, min_df, metric_scaling)
    return RunConfig(
        experiment=experiment,
        corpus=str(corpus),
        corpus_sha256=file_sha256(corpus),
        seed=seed,
        split_fraction=split_fraction,
        scheme=get_scheme(scheme or preset.scheme).name,
        model=kind,
        features=dataclasses.asdict(feat),
        balance=preset.balance if balance is None else balance,
        hyperparameters=hp,
    )


@contextlib.contextmanager
def stage(name: str):
    """Tag any exception escaping the block with the pipeline stage name."""
    try:
        yield
    except Exception as exc:
        if not hasattr(exc, "stage"):
            exc.stage = name
        raise


def run(cfg: RunConfig) -> RunResult:
    preset = PRESETS.get(cfg.experiment)
    scheme = get_scheme(cfg.scheme)
    feat_cfg = FeatureConfig(**cfg.features)
    with stage("load"):
        corpus = load_corpus(cfg.corpus)
    if cfg.balance:
        with stage("balance"):
            corpus = balance(corpus, cfg.seed)
    with stage("split"):
        split = stratified_split(corpus, cfg.split_fraction, cfg.seed)
    with stage("features"):
        train_docs = [tokenize(r.text) for r in split.train]
        val_docs = [tokenize(r.text) for r in split.validation]
        state = fit_features(train_docs, feat_cfg)
        x_train, x_val = transform(state, train_docs), transform(state, val_docs)
        y_train = scheme.encode(r.level for r in split.train)
        y_val = scheme.encode(r.level for r in split.validation)
    with stage("train"):
        params = train(cfg.model, x_train, y_train, scheme.n_classes, cfg.hyperparameters, cfg.seed)
    model = TrainedModel(cfg.model, params, scheme, state,
                         metadata={"experiment": cfg.experiment, "seed": cfg.seed, "rng": cfg.rng})
    with stage("evaluate"):
        meta = {
            "experiment": cfg.experiment,
            "method": preset.method if preset and cfg.model == preset.model else cfg.model,
            "notes": preset.notes if preset else "",
            "model": cfg.model,
            "features": feat_cfg.mode,
            "scheme": scheme.name,
            "seed": cfg.seed,
            "balance": cfg.balance,
            "split_fraction": cfg.split_fraction,
            "n_train": len(split.train),
            "n_validation": len(split.validation),
            "hyperparameters": cfg.hyperparameters,
            "rng": cfg.rng,
        }
        report = evaluate(y_val, model.predict(x_val), scheme, meta)
    return RunResult(cfg, report, model)


def write_artifacts(result: RunResult, out_dir, fmt: str = "both", figures: bool = False) -> list[Path]:
    """Write report(s), manifest and model into ``out_dir``; returns the paths."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []

    def put(name, text):
        path = out / name
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        written.append(path)

    if fmt in ("markdown", "both"):
        put("report.md", emit_report(result.report, "markdown"))
    if fmt in ("json", "both"):
        put("report.json", emit_report(result.report, "json"))
    put("manifest.json", result.config.to_json())
    put("model.json", dumps_model(result.model))
    if figures:
        from .plotting import confusion_figure

        path = out / "confusion.png"
        confusion_figure(result.report, path)
        written.append(path)
    return written
