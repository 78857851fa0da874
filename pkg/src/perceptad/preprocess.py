"""Data conditioning ahead of scoring.

Real values become integers (rounded to a fixed number of decimals and
scaled by a power of ten), then absolute deviations from a rounded median.
Multivariate rows are first standardised and collapsed to their distance
from the column-wise median.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from decimal import Decimal, ROUND_FLOOR

import numpy as np

__all__ = [
    "METRICS",
    "IntegerizationConfig",
    "FeatureStandardization",
    "UnivariateCenter",
    "round_half_up",
    "check_finite",
    "fit_integerization",
    "integerize",
    "fit_center",
    "median_deviation",
    "standardize_fit",
    "standardize",
    "distance_to_median",
    "check_metric",
]

METRICS = ("euclidean", "manhattan", "chebyshev")

_INT64_LIMIT = 2.0**62


@dataclass(frozen=True)
class IntegerizationConfig:
    """Decimal accuracy plus the power of ten fixed when the model was fitted."""

    acc: int = 4
    scale_exponent: int | None = None

    def __post_init__(self):
        if int(self.acc) != self.acc or self.acc < 1:
            raise ValueError(f"acc must be a positive integer, got {self.acc!r}")
        se = self.scale_exponent
        if se is not None and not 0 <= se <= self.acc:
            raise ValueError(f"scale_exponent must lie in [0, acc], got {se}")

    @property
    def frozen(self) -> bool:
        return self.scale_exponent is not None


@dataclass(frozen=True)
class FeatureStandardization:
    mu: np.ndarray
    sigma: np.ndarray
    multi_dim_median: np.ndarray

    def __post_init__(self):
        shapes = {np.shape(self.mu), np.shape(self.sigma), np.shape(self.multi_dim_median)}
        if len(shapes) != 1 or np.ndim(self.mu) != 1:
            raise ValueError("mu, sigma and multi_dim_median must be 1-D and equally long")
        if np.any(np.asarray(self.sigma) <= 0):
            raise ValueError("sigma entries must be positive")

    @property
    def dim(self) -> int:
        return len(self.mu)


@dataclass(frozen=True)
class UnivariateCenter:
    med: int


def check_finite(values: np.ndarray) -> None:
    bad = np.flatnonzero(~np.isfinite(values))
    if bad.size:
        raise ValueError(
            f"non-finite value at index {int(bad[0])} ({bad.size} non-finite in total)"
        )


def round_half_up(x):
    """Round to the nearest integer, ties toward +infinity.

    Ties going the same way regardless of sign keeps integer shifts of the
    data exact: ``round_half_up(x + c) == round_half_up(x) + c``.
    """
    return math.floor(x + 0.5)


def _decimal_round(value: float, acc: int) -> int:
    d = Decimal(repr(float(value))).scaleb(acc) + Decimal("0.5")
    return int(d.to_integral_value(rounding=ROUND_FLOOR))


def _scaled_round(values: np.ndarray, acc: int) -> np.ndarray:
    """``values`` rounded to ``acc`` decimals, expressed in units of 10**-acc.

    Rounding is decided on the shortest decimal representation of each float
    (so 2.675 rounds to 2.68); only near-ties take the slow exact path.
    """
    scaled = values * 10.0**acc
    if scaled.size and np.abs(scaled).max() >= _INT64_LIMIT:
        raise ValueError(f"values too large to integerize at acc={acc}")
    out = np.floor(scaled + 0.5)
    frac = scaled - np.floor(scaled)
    tol = np.maximum(1e-6, 16 * np.spacing(np.abs(scaled)))
    near_tie = np.flatnonzero(np.abs(frac - 0.5) < tol)
    out = out.astype(np.int64)
    for i in near_tie:
        out[i] = _decimal_round(values[i], acc)
    return out


def _decimal_places(k: np.ndarray, acc: int) -> int:
    """Largest number of significant decimals among ``k * 10**-acc``."""
    for e in range(acc + 1):
        if not np.any(k % 10 ** (acc - e)):
            return e
    return acc


def fit_integerization(values, acc: int = 4) -> IntegerizationConfig:
    """Freeze the power of ten for ``values`` rounded to ``acc`` decimals."""
    v = np.asarray(values, dtype=float).ravel()
    check_finite(v)
    k = _scaled_round(v, acc)
    return IntegerizationConfig(acc, _decimal_places(k, acc))


def integerize(values, cfg: IntegerizationConfig) -> np.ndarray:
    """Round to ``cfg.acc`` decimals and scale by ``10**scale_exponent``.

    With an unfrozen config the exponent is discovered from ``values``.
    Values finer than the frozen exponent are rounded onto its grid.
    """
    v = np.asarray(values, dtype=float).ravel()
    check_finite(v)
    k = _scaled_round(v, cfg.acc)
    se = cfg.scale_exponent if cfg.frozen else _decimal_places(k, cfg.acc)
    d = 10 ** (cfg.acc - se)
    if d == 1:
        return k
    return (k + d // 2) // d


def fit_center(ints) -> UnivariateCenter:
    ints = np.asarray(ints)
    if ints.size == 0:
        raise ValueError("cannot take the median of an empty array")
    return UnivariateCenter(int(round_half_up(float(np.median(ints)))))


def median_deviation(ints, center: UnivariateCenter) -> np.ndarray:
    return np.abs(np.asarray(ints, dtype=np.int64) - center.med)


def check_metric(metric: str) -> str:
    if metric not in METRICS:
        raise ValueError(f"unknown metric {metric!r}; expected one of {METRICS}")
    return metric


def _as_matrix(X) -> np.ndarray:
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X[:, None]
    if X.ndim != 2 or X.size == 0:
        raise ValueError("expected a non-empty 2-D matrix")
    return X


def standardize_fit(X):
    """Column z-scores with population standard deviation.

    Constant columns keep sigma = 1 so they standardise to zero on the
    training matrix. Returns ``(FeatureStandardization, X_s)``.
    """
    X = _as_matrix(X)
    check_finite(X)
    mu = X.mean(axis=0)
    sigma = X.std(axis=0)
    sigma = np.where(sigma > 0, sigma, 1.0)
    Xs = (X - mu) / sigma
    return FeatureStandardization(mu, sigma, np.median(Xs, axis=0)), Xs


def standardize(X, fs: FeatureStandardization) -> np.ndarray:
    X = _as_matrix(X)
    check_finite(X)
    if X.shape[1] != fs.dim:
        raise ValueError(f"expected {fs.dim} features, got {X.shape[1]}")
    return (X - fs.mu) / fs.sigma


def distance_to_median(Xs, fs: FeatureStandardization, metric: str = "euclidean") -> np.ndarray:
    check_metric(metric)
    Xs = _as_matrix(Xs)
    if Xs.shape[1] != fs.dim:
        raise ValueError(f"expected {fs.dim} features, got {Xs.shape[1]}")
    diff = np.abs(Xs - fs.multi_dim_median)
    if metric == "euclidean":
        return np.sqrt(np.einsum("ij,ij->i", diff, diff))
    if metric == "manhattan":
        return diff.sum(axis=1)
    return diff.max(axis=1)
