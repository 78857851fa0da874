"""Classical univariate outlier rules: z-score, modified z-score, Tukey fences.

Every model exposes ``fit``, ``score`` and ``predict`` so that the harness can
treat them like the perception detector. Scores rank points; the flag is
``score > threshold`` for the z rules and ``score > 0`` for the fences.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

__all__ = [
    "Detection",
    "ZScoreModel",
    "ModifiedZModel",
    "IqrModel",
    "BASELINES",
    "zscore_fit_predict",
    "modified_zscore_fit_predict",
    "iqr_fit_predict",
]


class Detection(NamedTuple):
    flags: np.ndarray
    scores: np.ndarray


def _univariate(values) -> np.ndarray:
    v = np.asarray(values, dtype=float)
    if v.ndim == 2 and v.shape[1] == 1:
        v = v[:, 0]
    if v.ndim != 1:
        raise ValueError("baselines only accept univariate data")
    if not np.all(np.isfinite(v)):
        raise ValueError("baselines need finite values")
    return v


@dataclass(frozen=True)
class ZScoreModel:
    mean: float
    std: float
    threshold: float = 3.0

    @classmethod
    def fit(cls, values) -> "ZScoreModel":
        v = _univariate(values)
        if v.size < 2:
            raise ValueError("z-score needs at least 2 values")
        # population standard deviation
        return cls(float(v.mean()), float(v.std()))

    @property
    def degenerate(self) -> bool:
        return self.std == 0

    def score(self, values) -> np.ndarray:
        v = _univariate(values)
        if self.degenerate:
            return np.zeros_like(v)
        return np.abs(v - self.mean) / self.std

    def predict(self, values) -> Detection:
        s = self.score(values)
        return Detection(s > self.threshold, s)

    def cutoffs(self):
        if self.degenerate:
            return None
        return self.mean - self.threshold * self.std, self.mean + self.threshold * self.std


@dataclass(frozen=True)
class ModifiedZModel:
    """Iglewicz-Hoaglin rule ``|0.6745 (x - median) / MAD| > 3.5``."""

    median: float
    mad: float
    consistency_constant: float = 0.6745
    threshold: float = 3.5

    @classmethod
    def fit(cls, values) -> "ModifiedZModel":
        v = _univariate(values)
        if v.size < 2:
            raise ValueError("modified z-score needs at least 2 values")
        med = float(np.median(v))
        return cls(med, float(np.median(np.abs(v - med))))

    @property
    def degenerate(self) -> bool:
        return self.mad == 0

    def score(self, values) -> np.ndarray:
        v = _univariate(values)
        if self.degenerate:
            return np.zeros_like(v)
        return np.abs(self.consistency_constant * (v - self.median) / self.mad)

    def predict(self, values) -> Detection:
        s = self.score(values)
        return Detection(s > self.threshold, s)

    def cutoffs(self):
        if self.degenerate:
            return None
        half = self.threshold * self.mad / self.consistency_constant
        return self.median - half, self.median + half


@dataclass(frozen=True)
class IqrModel:
    """Tukey fences ``[q1 - 1.5 IQR, q3 + 1.5 IQR]``, linearly interpolated quartiles."""

    q1: float
    q3: float
    multiplier: float = 1.5

    @classmethod
    def fit(cls, values) -> "IqrModel":
        v = _univariate(values)
        if v.size < 4:
            raise ValueError("IQR fences need at least 4 values")
        q1, q3 = np.percentile(v, [25, 75])
        return cls(float(q1), float(q3))

    @property
    def iqr(self) -> float:
        return self.q3 - self.q1

    def cutoffs(self):
        return self.q1 - self.multiplier * self.iqr, self.q3 + self.multiplier * self.iqr

    def score(self, values) -> np.ndarray:
        """Distance past the nearest fence, zero between the fences."""
        v = _univariate(values)
        lo, hi = self.cutoffs()
        return np.maximum(np.maximum(lo - v, v - hi), 0.0)

    def predict(self, values) -> Detection:
        s = self.score(values)
        return Detection(s > 0, s)


BASELINES = {
    "zscore": ZScoreModel,
    "modified-zscore": ModifiedZModel,
    "iqr": IqrModel,
}


def zscore_fit_predict(values) -> Detection:
    return ZScoreModel.fit(values).predict(values)


def modified_zscore_fit_predict(values) -> Detection:
    return ModifiedZModel.fit(values).predict(values)


def iqr_fit_predict(values) -> Detection:
    return IqrModel.fit(values).predict(values)
