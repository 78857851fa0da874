"""Fitting, scoring and persistence of the perception detector."""
from __future__ import annotations

import dataclasses
import hashlib
import json
from dataclasses import dataclass
from typing import Iterator, NamedTuple

import numpy as np

from . import nfa
from .preprocess import (
    FeatureStandardization,
    IntegerizationConfig,
    UnivariateCenter,
    check_metric,
    distance_to_median,
    fit_center,
    fit_integerization,
    integerize,
    median_deviation,
    standardize,
    standardize_fit,
)

__all__ = [
    "FORMAT_NAME",
    "FORMAT_VERSION",
    "ModelFormatError",
    "PerceptionModel",
    "ScoredPoint",
    "Predictions",
    "fit",
    "predict",
    "deviations",
    "incremental_update",
    "to_document",
    "from_document",
    "save",
    "load",
]

FORMAT_NAME = "perceptad-model"
FORMAT_VERSION = 1


class ModelFormatError(ValueError):
    """A model document that cannot be turned back into a model."""


@dataclass(frozen=True)
class PerceptionModel:
    S: int
    W: int
    center: UnivariateCenter
    integerization: IntegerizationConfig
    dim: int = 1
    metric: str = "euclidean"
    standardization: FeatureStandardization | None = None

    def __post_init__(self):
        if self.S < 0 or self.W < 1:
            raise ValueError(f"need S >= 0 and W >= 1, got S={self.S}, W={self.W}")
        if not self.integerization.frozen:
            raise ValueError("integerization must carry a fitted scale_exponent")
        check_metric(self.metric)
        if (self.standardization is not None) != (self.dim > 1):
            raise ValueError("standardization is required exactly when dim > 1")
        if self.standardization is not None and self.standardization.dim != self.dim:
            raise ValueError("standardization width does not match dim")

    @property
    def degenerate(self) -> bool:
        return self.S == 0

    def expectation(self, n: int) -> float:
        if n > self.S:
            return 0.0
        return nfa.tuple_expectation(self.S, self.W, n)

    def score(self, n: int) -> float:
        return nfa.perception_score(self.S, self.W, n)


class ScoredPoint(NamedTuple):
    index: int
    score: float
    flag: bool


class Predictions:
    """Row-aligned scores and flags (``flag == score > 0``)."""

    def __init__(self, scores: np.ndarray):
        self.scores = np.asarray(scores, dtype=float)
        self.flags = self.scores > 0

    def __len__(self):
        return len(self.scores)

    def __iter__(self) -> Iterator[ScoredPoint]:
        for i, (z, f) in enumerate(zip(self.scores.tolist(), self.flags.tolist())):
            yield ScoredPoint(i, z, f)

    def __getitem__(self, i) -> ScoredPoint:
        i = range(len(self))[i]
        return ScoredPoint(i, float(self.scores[i]), bool(self.flags[i]))

    @property
    def flagged(self) -> np.ndarray:
        return np.flatnonzero(self.flags)


def _as_rows(X) -> np.ndarray:
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X[:, None]
    if X.ndim != 2:
        raise ValueError(f"expected a vector or a matrix, got {X.ndim} dimensions")
    return X


def fit(X, acc: int = 4, metric: str = "euclidean") -> PerceptionModel:
    """Fit on an l x m matrix (or a plain vector when m == 1)."""
    check_metric(metric)
    X = _as_rows(X)
    l, m = X.shape
    if l < 2 or m < 1:
        raise ValueError(f"need at least 2 rows and 1 column, got shape {X.shape}")
    standardization = None
    if m > 1:
        standardization, Xs = standardize_fit(X)
        x = distance_to_median(Xs, standardization, metric)
    else:
        x = X[:, 0]
    cfg = fit_integerization(x, acc)
    ints = integerize(x, cfg)
    center = fit_center(ints)
    dev = median_deviation(ints, center)
    return PerceptionModel(
        S=int(dev.sum()),
        W=int(dev.size),
        center=center,
        integerization=cfg,
        dim=m,
        metric=metric,
        standardization=standardization,
    )


def deviations(model: PerceptionModel, X) -> np.ndarray:
    """Integer deviation counts for each row under the frozen transform."""
    X = _as_rows(X)
    if X.shape[0] == 0:
        return np.zeros(0, dtype=np.int64)
    if X.shape[1] != model.dim:
        raise ValueError(f"model expects {model.dim} features, got {X.shape[1]}")
    if model.standardization is not None:
        Xs = standardize(X, model.standardization)
        x = distance_to_median(Xs, model.standardization, model.metric)
    else:
        x = X[:, 0]
    return median_deviation(integerize(x, model.integerization), model.center)


def predict(model: PerceptionModel, X) -> Predictions:
    if not isinstance(model, PerceptionModel):
        raise TypeError("predict needs a fitted PerceptionModel")
    n = deviations(model, X)
    return Predictions(nfa.perception_scores(model.S, model.W, n))


def incremental_update(model: PerceptionModel, new_deviation_sum: int) -> PerceptionModel:
    """Absorb one more window: W + 1 and S + its deviation count."""
    if new_deviation_sum < 0:
        raise ValueError("deviation sums are nonnegative")
    return dataclasses.replace(model, S=model.S + int(new_deviation_sum), W=model.W + 1)


def _checksum(body: dict) -> str:
    canon = json.dumps(body, sort_keys=True, separators=(",", ":"))
    return "sha256:" + hashlib.sha256(canon.encode()).hexdigest()


def to_document(model: PerceptionModel) -> dict:
    st = model.standardization
    body = {
        "format": FORMAT_NAME,
        "version": FORMAT_VERSION,
        "S": model.S,
        "W": model.W,
        "dim": model.dim,
        "metric": model.metric,
        "integerization": {
            "acc": model.integerization.acc,
            "scale_exponent": model.integerization.scale_exponent,
        },
        "center": {"med": model.center.med},
        "standardization": None
        if st is None
        else {
            "mu": [float(v) for v in st.mu],
            "sigma": [float(v) for v in st.sigma],
            "multi_dim_median": [float(v) for v in st.multi_dim_median],
        },
        "sentinels": {
            "saturated": nfa.SATURATED_SCORE,
            "degenerate": nfa.DEGENERATE_SCORE,
        },
    }
    body["checksum"] = _checksum(body)
    return body


def _require(doc: dict, key: str, kind):
    if key not in doc:
        raise ModelFormatError(f"model document is missing {key!r}")
    value = doc[key]
    if kind is int and (isinstance(value, bool) or not isinstance(value, int)):
        raise ModelFormatError(f"{key!r} must be an integer")
    if kind is not int and not isinstance(value, kind):
        raise ModelFormatError(f"{key!r} has the wrong type")
    return value


def _vector(block: dict, key: str, dim: int) -> np.ndarray:
    values = block.get(key)
    if not isinstance(values, list) or len(values) != dim:
        raise ModelFormatError(f"standardization.{key} must be a list of {dim} numbers")
    return np.array(values, dtype=float)


def from_document(doc: dict) -> PerceptionModel:
    if not isinstance(doc, dict):
        raise ModelFormatError("model document must be a JSON object")
    if doc.get("format") != FORMAT_NAME:
        raise ModelFormatError(f"not a {FORMAT_NAME} document")
    if doc.get("version") != FORMAT_VERSION:
        raise ModelFormatError(
            f"unsupported model version {doc.get('version')!r} (expected {FORMAT_VERSION})"
        )
    body = {k: v for k, v in doc.items() if k != "checksum"}
    if doc.get("checksum") != _checksum(body):
        raise ModelFormatError("model checksum mismatch")

    dim = _require(doc, "dim", int)
    integ = _require(doc, "integerization", dict)
    center = _require(doc, "center", dict)
    st = doc.get("standardization")
    try:
        standardization = None
        if dim > 1:
            if not isinstance(st, dict):
                raise ModelFormatError("multivariate model without a standardization block")
            standardization = FeatureStandardization(
                _vector(st, "mu", dim),
                _vector(st, "sigma", dim),
                _vector(st, "multi_dim_median", dim),
            )
        elif st is not None:
            raise ModelFormatError("univariate model must not carry a standardization block")
        return PerceptionModel(
            S=_require(doc, "S", int),
            W=_require(doc, "W", int),
            center=UnivariateCenter(_require(center, "med", int)),
            integerization=IntegerizationConfig(
                _require(integ, "acc", int), _require(integ, "scale_exponent", int)
            ),
            dim=dim,
            metric=_require(doc, "metric", str),
            standardization=standardization,
        )
    except ModelFormatError:
        raise
    except ValueError as exc:
        raise ModelFormatError(str(exc)) from exc


def save(model: PerceptionModel, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(to_document(model), fh, indent=2)
        fh.write("\n")


def load(path) -> PerceptionModel:
    with open(path, encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ModelFormatError(f"malformed model document: {exc}") from exc
    return from_document(doc)
