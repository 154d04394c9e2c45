"""Softmax regression, multinomial naive Bayes and one-vs-rest linear SVM.

All three share the same surface: ``decision_function(x)`` returns a
``(n, K)`` score matrix and ``predict(x)`` its row-wise argmax, with ties going
to the lowest class index. Inputs may be dense arrays or scipy sparse
matrices.
"""

from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
import scipy.sparse as sp
from scipy.special import logsumexp

from .dataset import LabelScheme
from .errors import (
    CorruptFile,
    DimensionMismatch,
    NegativeCount,
    NonFiniteLoss,
    SingleClass,
    VersionMismatch,
)
from .features import FeatureConfig, FittedFeatures, Vocabulary, transform
from .textmetrics import tokenize

log = logging.getLogger(__name__)

FORMAT_VERSION = 1
KINDS = ("logreg", "naive_bayes", "linear_svc")

LOGREG_DEFAULTS = {"l2_lambda": 1e-3, "learning_rate": 0.5, "max_iters": 500, "tol": 1e-7}
SVC_DEFAULTS = {"l2_lambda": 1e-4, "epochs": 20}
NB_DEFAULTS = {"alpha": 1.0}


def _check_xy(x, y, n_classes=None):
    y = np.asarray(y, dtype=np.int64)
    if x.shape[0] != y.shape[0]:
        raise DimensionMismatch(f"x has {x.shape[0]} rows but y has {y.shape[0]} labels")
    if np.unique(y).size < 2:
        raise SingleClass("training data must contain at least two classes")
    k = int(y.max()) + 1 if n_classes is None else n_classes
    if y.min() < 0 or y.max() >= k:
        raise DimensionMismatch(f"labels must lie in [0, {k})")
    return y, k


def _check_dim(x, d):
    if x.shape[1] != d:
        raise DimensionMismatch(f"model expects {d} features, got {x.shape[1]}")


def _scores(x, w, b) -> np.ndarray:
    return np.asarray(x @ w.T) + b


def softmax(z: np.ndarray) -> np.ndarray:
    z = z - z.max(axis=1, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=1, keepdims=True)


# -- softmax regression ----------------------------------------------------

def logreg_objective(w, b, x, y, l2_lambda):
    """Mean cross-entropy + (l2_lambda/2)*||w||^2, with its gradient.

    Returns ``(loss, grad_w, grad_b)``. The bias is not regularized.
    """
    n = x.shape[0]
    z = _scores(x, w, b)
    logp = z - logsumexp(z, axis=1, keepdims=True)
    loss = -logp[np.arange(n), y].mean() + 0.5 * l2_lambda * float(np.sum(w * w))
    resid = np.exp(logp)
    resid[np.arange(n), y] -= 1.0
    resid /= n
    grad_w = np.asarray(x.T @ resid).T + l2_lambda * w
    grad_b = resid.sum(axis=0)
    return float(loss), grad_w, grad_b


@dataclass
class LogRegModel:
    weights: np.ndarray
    bias: np.ndarray
    l2_lambda: float = 1e-3
    learning_rate: float = 0.5
    max_iters: int = 500
    tol: float = 1e-7
    seed: int = 0
    iterations: int = 0
    final_loss: float = float("nan")

    kind = "logreg"

    def decision_function(self, x) -> np.ndarray:
        _check_dim(x, self.weights.shape[1])
        return _scores(x, self.weights, self.bias)

    def predict_proba(self, x) -> np.ndarray:
        return softmax(self.decision_function(x))

    def predict(self, x) -> np.ndarray:
        return np.argmax(self.decision_function(x), axis=1)

    def hyperparameters(self) -> dict:
        return {"l2_lambda": self.l2_lambda, "learning_rate": self.learning_rate,
                "max_iters": self.max_iters, "tol": self.tol, "seed": self.seed}


def train_logreg(x, y, n_classes=None, l2_lambda=1e-3, learning_rate=0.5,
                 max_iters=500, tol=1e-7, seed=0, history=None) -> LogRegModel:
    """Full-batch gradient descent from zero weights.

    A step that would raise the loss is retried with half the step size, so
    the accepted loss sequence never increases. Training stops after
    ``max_iters`` accepted steps or once the loss improves by less than
    ``tol``. Pass a list as ``history`` to collect the accepted losses.
    """
    y, k = _check_xy(x, y, n_classes)
    d = x.shape[1]
    w = np.zeros((k, d))
    b = np.zeros(k)
    loss, gw, gb = logreg_objective(w, b, x, y, l2_lambda)
    if history is not None:
        history.append(loss)
    lr = learning_rate
    it = 0
    while it < max_iters:
        for _ in range(60):
            # overflow surfaces as a non-finite loss below
            with np.errstate(over="ignore", invalid="ignore"):
                w_new, b_new = w - lr * gw, b - lr * gb
                new_loss, new_gw, new_gb = logreg_objective(w_new, b_new, x, y, l2_lambda)
            if not math.isfinite(new_loss):
                raise NonFiniteLoss(f"loss became {new_loss} at iteration {it + 1}")
            if new_loss <= loss:
                break
            lr *= 0.5
        else:
            break
        it += 1
        improvement = loss - new_loss
        w, b, loss, gw, gb = w_new, b_new, new_loss, new_gw, new_gb
        if history is not None:
            history.append(loss)
        if improvement < tol:
            break
    return LogRegModel(w, b, l2_lambda, learning_rate, max_iters, tol, seed, it, loss)


# -- multinomial naive Bayes -----------------------------------------------

@dataclass
class NaiveBayesModel:
    log_prior: np.ndarray
    log_likelihood: np.ndarray
    alpha: float = 1.0

    kind = "naive_bayes"

    def decision_function(self, x) -> np.ndarray:
        """Unnormalized log posterior, log P(k) + sum_t x_t log P(t|k)."""
        _check_dim(x, self.log_likelihood.shape[1])
        return np.asarray(x @ self.log_likelihood.T) + self.log_prior

    def predict_log_proba(self, x) -> np.ndarray:
        joint = self.decision_function(x)
        return joint - logsumexp(joint, axis=1, keepdims=True)

    def predict_proba(self, x) -> np.ndarray:
        return np.exp(self.predict_log_proba(x))

    def predict(self, x) -> np.ndarray:
        return np.argmax(self.decision_function(x), axis=1)

    def hyperparameters(self) -> dict:
        return {"alpha": self.alpha}


def train_naive_bayes(x, y, n_classes=None, alpha=1.0) -> NaiveBayesModel:
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    y, k = _check_xy(x, y, n_classes)
    if (x.min() if x.shape[0] * x.shape[1] else 0) < 0:
        raise NegativeCount("naive Bayes needs nonnegative term counts")
    v = x.shape[1]
    onehot = np.zeros((x.shape[0], k))
    onehot[np.arange(x.shape[0]), y] = 1.0
    counts = np.asarray(x.T @ onehot).T  # (k, v)
    n_k = onehot.sum(axis=0)
    with np.errstate(divide="ignore"):
        log_prior = np.log(n_k) - math.log(len(y))
    smoothed = counts + alpha
    log_likelihood = np.log(smoothed) - np.log(smoothed.sum(axis=1, keepdims=True))
    assert log_likelihood.shape == (k, v)
    return NaiveBayesModel(log_prior, log_likelihood, alpha)


# -- one-vs-rest linear SVM ------------------------------------------------

@dataclass
class LinearSvcModel:
    weights: np.ndarray
    bias: np.ndarray
    l2_lambda: float = 1e-4
    epochs: int = 20
    seed: int = 0

    kind = "linear_svc"

    def decision_function(self, x) -> np.ndarray:
        _check_dim(x, self.weights.shape[1])
        return _scores(x, self.weights, self.bias)

    def predict(self, x) -> np.ndarray:
        return np.argmax(self.decision_function(x), axis=1)

    def hyperparameters(self) -> dict:
        return {"l2_lambda": self.l2_lambda, "epochs": self.epochs, "seed": self.seed}


def train_linear_svc(x, y, n_classes=None, l2_lambda=1e-4, epochs=20, seed=0) -> LinearSvcModel:
    """Pegasos-style stochastic subgradient descent, one binary problem per class.

    Each class k minimizes (l2_lambda/2)(||w_k||^2 + b_k^2) + mean hinge(y_k (w_k.x + b_k))
    with y_k = +1 for class k and -1 otherwise. All K problems see the same
    seeded sample order; step t uses eta = 1/(l2_lambda * t).

    The bias is shrunk together with the weights (a constant feature of 1).
    Left unregularized, it keeps the full size of the first steps, which are
    of order 1/l2_lambda, and swamps w.x.
    """
    if l2_lambda <= 0:
        raise ValueError("l2_lambda must be positive")
    y, k = _check_xy(x, y, n_classes)
    xd = x.toarray() if sp.issparse(x) else np.asarray(x, dtype=np.float64)
    n, d = xd.shape
    signs = np.where(np.arange(k)[None, :] == y[:, None], 1.0, -1.0)
    w = np.zeros((k, d))
    b = np.zeros(k)
    rng = np.random.default_rng(seed)
    t = 0
    for _ in range(epochs):
        for i in rng.permutation(n):
            t += 1
            pegasos_step(w, b, xd[i], signs[i], 1.0 / (l2_lambda * t), l2_lambda)
    return LinearSvcModel(w, b, l2_lambda, epochs, seed)


def pegasos_step(w, b, xi, yi, eta, l2_lambda) -> np.ndarray:
    """In-place subgradient step on all K binary problems for one sample.

    Only problems whose margin is below 1 receive a data term; the rest just
    shrink. Returns the mask of problems that got the data term.
    """
    active = yi * (w @ xi + b) < 1.0
    shrink = 1.0 - eta * l2_lambda
    w *= shrink
    b *= shrink
    if active.any():
        step = eta * yi[active]
        w[active] += step[:, None] * xi[None, :]
        b[active] += step
    return active


def hinge_objective(w, b, x, signs, l2_lambda) -> np.ndarray:
    """Per-class training objective for ``signs`` in {-1, +1}."""
    margins = signs * _scores(x, w, b)
    reg = 0.5 * l2_lambda * (np.sum(w * w, axis=1) + b * b)
    return reg + np.maximum(0.0, 1.0 - margins).mean(axis=0)


# -- bundled model ---------------------------------------------------------

@dataclass
class TrainedModel:
    """A fitted classifier together with its label scheme and feature state."""

    kind: str
    params: LogRegModel | NaiveBayesModel | LinearSvcModel
    scheme: LabelScheme
    features: FittedFeatures
    format_version: int = FORMAT_VERSION
    metadata: dict = field(default_factory=dict)

    def featurize(self, texts: Sequence[str]):
        return transform(self.features, [tokenize(t) for t in texts])

    def predict(self, x) -> np.ndarray:
        return self.params.predict(x)

    def predict_proba(self, x) -> np.ndarray | None:
        if self.kind == "linear_svc":
            return None
        return self.params.predict_proba(x)

    def predict_texts(self, texts: Sequence[str]) -> list[str]:
        return [self.scheme.class_names[i] for i in self.predict(self.featurize(texts))]


def train(kind: str, x, y, n_classes: int, hyperparameters: dict | None = None, seed: int = 0):
    hp = dict(hyperparameters or {})
    if kind == "logreg":
        return train_logreg(x, y, n_classes, seed=seed, **{**LOGREG_DEFAULTS, **hp})
    if kind == "naive_bayes":
        return train_naive_bayes(x, y, n_classes, **{**NB_DEFAULTS, **hp})
    if kind == "linear_svc":
        return train_linear_svc(x, y, n_classes, seed=seed, **{**SVC_DEFAULTS, **hp})
    raise ValueError(f"unknown model kind {kind!r}; choose from {', '.join(KINDS)}")


# -- persistence -----------------------------------------------------------

def _matrix(a) -> dict:
    a = np.atleast_2d(np.asarray(a, dtype=np.float64))
    return {"rows": a.shape[0], "cols": a.shape[1], "values": a.tolist()}


def _vector(a) -> dict:
    a = np.asarray(a, dtype=np.float64)
    return {"length": a.shape[0], "values": a.tolist()}


def _read_matrix(obj) -> np.ndarray:
    a = np.array(obj["values"], dtype=np.float64).reshape(obj["rows"], obj["cols"])
    return a


def _read_vector(obj) -> np.ndarray:
    a = np.array(obj["values"], dtype=np.float64)
    if a.shape != (obj["length"],):
        raise ValueError("vector length does not match its declared length")
    return a


def model_to_dict(model: TrainedModel) -> dict:
    p = model.params
    if model.kind == "naive_bayes":
        params = {"log_prior": _vector(p.log_prior), "log_likelihood": _matrix(p.log_likelihood)}
    else:
        params = {"weights": _matrix(p.weights), "bias": _vector(p.bias)}
    training = {"hyperparameters": p.hyperparameters()}
    if model.kind == "logreg":
        training.update(iterations=p.iterations, final_loss=p.final_loss)
    fs = model.features
    vocab = None
    if fs.vocabulary is not None:
        v = fs.vocabulary
        vocab = {
            "document_count": v.document_count,
            "size": len(v),
            "terms": [[t, i, df] for i, (t, df) in enumerate(zip(v.terms, v.document_frequency))],
        }
    scaling = None
    if fs.metric_mean is not None:
        scaling = {"mean": list(fs.metric_mean), "std": list(fs.metric_std)}
    return {
        "format_version": model.format_version,
        "kind": model.kind,
        "label_scheme": {
            "name": model.scheme.name,
            "class_names": list(model.scheme.class_names),
            "mapping": list(model.scheme.mapping),
        },
        "feature_config": {
            "mode": fs.config.mode,
            "sublinear_tf": fs.config.sublinear_tf,
            "min_df": fs.config.min_df,
            "metric_scaling": fs.config.metric_scaling,
        },
        "vocabulary": vocab,
        "scaling": scaling,
        "parameters": params,
        "training": training,
        "metadata": model.metadata,
    }


def model_from_dict(obj: dict) -> TrainedModel:
    version = obj["format_version"]
    if not isinstance(version, int) or version > FORMAT_VERSION or version < 1:
        raise VersionMismatch(f"unsupported model format_version {version!r} (supported: {FORMAT_VERSION})")
    kind = obj["kind"]
    if kind not in KINDS:
        raise ValueError(f"unknown model kind {kind!r}")
    ls = obj["label_scheme"]
    scheme = LabelScheme(ls["name"], tuple(ls["class_names"]), tuple(ls["mapping"]))
    config = FeatureConfig(**obj["feature_config"])
    vocab = None
    if obj["vocabulary"] is not None:
        v = obj["vocabulary"]
        triples = v["terms"]
        if len(triples) != v["size"] or [t[1] for t in triples] != list(range(len(triples))):
            raise ValueError("vocabulary indices must run 0..V-1 in order")
        vocab = Vocabulary(tuple(t[0] for t in triples), tuple(int(t[2]) for t in triples), v["document_count"])
    mean = std = None
    if obj["scaling"] is not None:
        mean, std = tuple(obj["scaling"]["mean"]), tuple(obj["scaling"]["std"])
    features = FittedFeatures(config, vocab, mean, std)
    params = obj["parameters"]
    hp = obj["training"]["hyperparameters"]
    if kind == "naive_bayes":
        model = NaiveBayesModel(_read_vector(params["log_prior"]), _read_matrix(params["log_likelihood"]), **hp)
    elif kind == "logreg":
        model = LogRegModel(_read_matrix(params["weights"]), _read_vector(params["bias"]), **hp,
                            iterations=obj["training"]["iterations"],
                            final_loss=obj["training"]["final_loss"])
    else:
        model = LinearSvcModel(_read_matrix(params["weights"]), _read_vector(params["bias"]), **hp)
    return TrainedModel(kind, model, scheme, features, version, obj.get("metadata", {}))


def dumps_model(model: TrainedModel) -> str:
    return json.dumps(model_to_dict(model), indent=1) + "\n"


def save_model(model: TrainedModel, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(dumps_model(model))


def loads_model(data: bytes) -> TrainedModel:
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise CorruptFile("model file is not valid UTF-8", exc.start) from None
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        offset = len(text[: exc.pos].encode("utf-8"))
        raise CorruptFile(f"model file is not valid JSON: {exc.msg}", offset) from None
    if not isinstance(obj, dict) or next(iter(obj), None) != "format_version":
        raise CorruptFile("model file must start with a format_version field", 0)
    try:
        return model_from_dict(obj)
    except VersionMismatch:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise CorruptFile(f"malformed model file: {exc!r}", 0) from None


def load_model(path) -> TrainedModel:
    with open(path, "rb") as fh:
        return loads_model(fh.read())
