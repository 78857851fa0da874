"""Histogram bins and per-detector cut values for external plotting."""
from __future__ import annotations

import numpy as np

from . import baselines, nfa
from . import model as pmodel

__all__ = ["perception_boundary", "perception_cutoffs", "histogram", "plot_data"]


def perception_boundary(model: pmodel.PerceptionModel) -> int | None:
    """Smallest deviation count scored as anomalous, ``None`` for S == 0.

    ln E(C_n) is concave in n and nonnegative at n = 0, so the flagged
    counts form one upper range and a bisection finds its start.
    """
    S, W = model.S, model.W
    if S == 0:
        return None
    if nfa.perception_score(S, W, S) <= 0:
        return S + 1
    lo, hi = 0, S
    while lo < hi:
        mid = (lo + hi) // 2
        if nfa.perception_score(S, W, mid) > 0:
            hi = mid
        else:
            lo = mid + 1
    return lo


def perception_cutoffs(model: pmodel.PerceptionModel):
    """Value-axis cut points ``(lower, upper)`` for a univariate model.

    Values at or beyond either cut are flagged.
    """
    if model.dim != 1:
        raise ValueError("cut points exist for univariate models only")
    n_star = perception_boundary(model)
    if n_star is None:
        return None
    scale = 10.0**model.integerization.scale_exponent
    med = model.center.med
    return (med - n_star) / scale, (med + n_star) / scale


def histogram(values, bins="auto"):
    v = np.asarray(values, dtype=float).ravel()
    if v.size and v.min() == v.max():
        bins = 1
    counts, edges = np.histogram(v, bins=bins)
    return {"edges": edges.tolist(), "counts": counts.tolist()}


def _cut(pair, inclusive):
    if pair is None:
        return None
    lo, hi = pair
    return {"lower": float(lo), "upper": float(hi), "inclusive": inclusive}


def plot_data(values, acc: int = 4, bins="auto") -> dict:
    """Histogram plus each detector's two-sided thresholds for ``values``."""
    v = np.asarray(values, dtype=float).ravel()
    if v.size < 4:
        raise ValueError("plot data needs at least 4 values")
    model = pmodel.fit(v, acc=acc)
    return {
        "n": int(v.size),
        "histogram": histogram(v, bins),
        "thresholds": {
            "perception": _cut(perception_cutoffs(model), True),
            "zscore": _cut(baselines.ZScoreModel.fit(v).cutoffs(), False),
            "modified-zscore": _cut(baselines.ModifiedZModel.fit(v).cutoffs(), False),
            "iqr": _cut(baselines.IqrModel.fit(v).cutoffs(), False),
        },
    }
