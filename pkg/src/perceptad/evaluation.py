"""Metrics and the benchmark harness.

Detectors are run on labelled datasets and summarised by precision, recall,
F1, ROC AUC and lifecycle runtime. Scores of detectors that are not
implemented here can be supplied as row-aligned CSV files.
"""
from __future__ import annotations

import csv
import json
import logging
import math
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Callable, NamedTuple

import numpy as np
from scipy.stats import rankdata

from . import baselines
from . import model as pmodel
from .io import read_table

log = logging.getLogger(__name__)

__all__ = [
    "Confusion",
    "confusion_metrics",
    "auc",
    "LabeledDataset",
    "DatasetSpec",
    "EvalReport",
    "DETECTORS",
    "read_manifest",
    "load_dataset",
    "read_external_scores",
    "run_benchmark",
    "write_report_csv",
    "write_report_json",
]


class Confusion(NamedTuple):
    precision: float
    recall: float
    f1: float


def _binary(a, name) -> np.ndarray:
    a = np.asarray(a)
    if a.ndim != 1:
        raise ValueError(f"{name} must be one-dimensional")
    return a.astype(bool)


def confusion_metrics(flags, labels) -> Confusion:
    """Precision, recall and F1 of ``flags`` against 0/1 ``labels`` (0/0 -> 0)."""
    f, y = _binary(flags, "flags"), _binary(labels, "labels")
    if f.shape != y.shape:
        raise ValueError(f"length mismatch: {f.size} flags vs {y.size} labels")
    tp = int(np.sum(f & y))
    fp = int(np.sum(f & ~y))
    fn = int(np.sum(~f & y))
    precision = tp / (tp + fp) if tp + fp else 0.0
    recall = tp / (tp + fn) if tp + fn else 0.0
    f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
    return Confusion(precision, recall, f1)


def auc(scores, labels) -> float:
    """ROC AUC as P(score_pos > score_neg) + P(tie) / 2 (Mann-Whitney U)."""
    s = np.asarray(scores, dtype=float)
    y = _binary(labels, "labels")
    if s.shape != y.shape:
        raise ValueError(f"length mismatch: {s.size} scores vs {y.size} labels")
    n_pos = int(y.sum())
    n_neg = y.size - n_pos
    if n_pos == 0 or n_neg == 0:
        raise ValueError("AUC needs both positive and negative labels")
    ranks = rankdata(s)
    u = ranks[y].sum() - n_pos * (n_pos + 1) / 2.0
    return float(u / (n_pos * n_neg))


@dataclass
class LabeledDataset:
    name: str
    X: np.ndarray
    labels: np.ndarray
    anomaly_fraction: float | None = None
    X_fit: np.ndarray | None = None

    def __post_init__(self):
        if len(self.labels) != len(self.X):
            raise ValueError(f"{self.name}: {len(self.labels)} labels for {len(self.X)} rows")
        frac = float(np.mean(self.labels)) if len(self.labels) else 0.0
        if not 0 < frac < 0.5:
            raise ValueError(f"{self.name}: anomaly fraction {frac:.3f} outside (0, 0.5)")

    @property
    def train(self) -> np.ndarray:
        return self.X if self.X_fit is None else self.X_fit


@dataclass
class DatasetSpec:
    """One manifest entry.

    ``path`` is a CSV (``label_column`` names the 0/1 column) or a MATLAB
    ``.mat`` file (arrays ``x_key``/``y_key``). ``fit_path``/``fit_key`` point
    at separate unlabelled training rows when the detectors should be fitted
    on something other than the evaluated rows.
    """

    name: str
    path: str
    label_column: str | int | None = None
    anomaly_fraction: float | None = None
    x_key: str = "X"
    y_key: str = "y"
    fit_path: str | None = None
    fit_key: str | None = None
    external_scores: dict[str, str] = field(default_factory=dict)
    external_runtime: dict[str, float] = field(default_factory=dict)
    contamination: float = 0.1


@dataclass
class EvalReport:
    dataset: str
    detector: str
    precision: float = math.nan
    recall: float = math.nan
    f1: float = math.nan
    auc: float = math.nan
    runtime: float = math.nan
    status: str = "ok"


def _resolve(base: Path, p):
    if p is None:
        return None
    p = Path(p)
    return str(p if p.is_absolute() else base / p)


def read_manifest(path) -> list[DatasetSpec]:
    """Read a JSON manifest: a list of entries or ``{"datasets": [...]}``."""
    path = Path(path)
    doc = json.loads(path.read_text(encoding="utf-8"))
    entries = doc.get("datasets") if isinstance(doc, dict) else doc
    if not isinstance(entries, list):
        raise ValueError("manifest must be a list of datasets or hold a 'datasets' list")
    if not entries:
        raise ValueError("manifest lists no datasets")
    base = path.parent
    specs = []
    for e in entries:
        e = dict(e)
        e["path"] = _resolve(base, e["path"])
        e["fit_path"] = _resolve(base, e.get("fit_path"))
        e["external_scores"] = {
            k: _resolve(base, v) for k, v in e.get("external_scores", {}).items()
        }
        specs.append(DatasetSpec(**e))
    return specs


def _load_mat(path, key):
    from scipy.io import loadmat

    mat = loadmat(path)
    if key not in mat:
        raise ValueError(f"{path}: no array named {key!r}")
    return np.asarray(mat[key], dtype=float)


def load_dataset(spec: DatasetSpec) -> LabeledDataset:
    if spec.path.endswith(".mat"):
        X = _load_mat(spec.path, spec.x_key)
        y = _load_mat(spec.path, spec.y_key).ravel().astype(int)
    else:
        table = read_table(spec.path, spec.label_column)
        if table.labels is None:
            raise ValueError(f"{spec.name}: no label column configured")
        X, y = table.X, table.labels
    X_fit = None
    if spec.fit_path is not None:
        if spec.fit_path.endswith(".mat"):
            X_fit = _load_mat(spec.fit_path, spec.fit_key or spec.x_key)
        else:
            X_fit = read_table(spec.fit_path, None).X
    return LabeledDataset(spec.name, X, y, spec.anomaly_fraction, X_fit)


def read_external_scores(path, n_rows: int, contamination: float = 0.1):
    """Scores (and flags) of an external detector, one row per dataset row.

    A ``flag`` column is used when present; otherwise the top
    ``contamination`` fraction of scores is flagged.
    """
    table = read_table(path)
    if table.n_rows != n_rows:
        raise ValueError(f"{path}: {table.n_rows} score rows for {n_rows} dataset rows")
    cols = [c.lower() for c in table.columns]
    s_idx = cols.index("score") if "score" in cols else 0
    scores = table.X[:, s_idx]
    if "flag" in cols:
        flags = table.X[:, cols.index("flag")] > 0
    else:
        cut = np.quantile(scores, 1.0 - contamination)
        flags = scores > cut
    return scores, flags


# name -> callable(X_fit, X_test) returning (scores, flags)
Detector = Callable[[np.ndarray, np.ndarray], tuple]


def _perception(X_fit, X_test):
    p = pmodel.predict(pmodel.fit(X_fit), X_test)
    return p.scores, p.flags


def _baseline(cls):
    def run(X_fit, X_test):
        det = cls.fit(X_fit).predict(X_test)
        return det.scores, det.flags

    return run


DETECTORS: dict[str, Detector] = {
    "perception": _perception,
    "zscore": _baseline(baselines.ZScoreModel),
    "modified-zscore": _baseline(baselines.ModifiedZModel),
    "iqr": _baseline(baselines.IqrModel),
}


def _evaluate(name, dataset, scores, flags, runtime) -> EvalReport:
    c = confusion_metrics(flags, dataset.labels)
    return EvalReport(dataset.name, name, c.precision, c.recall, c.f1,
                      auc(scores, dataset.labels), runtime)


def _timed(fn, *args):
    t0 = time.perf_counter()
    out = fn(*args)
    return out, time.perf_counter() - t0


def run_benchmark(
    specs: list[DatasetSpec],
    detectors: dict[str, Detector] | None = None,
    time_budget: float | None = None,
    warmup: bool = True,
) -> list[EvalReport]:
    """Evaluate every detector on every dataset.

    Runtime covers fit and predict on a monotonic clock; with ``warmup`` one
    untimed run precedes the timed one. Cells that fail or exceed
    ``time_budget`` seconds keep NaN metrics and say why in ``status``.
    Unreadable datasets are reported and skipped.
    """
    if not specs:
        raise ValueError("no datasets to benchmark")
    detectors = DETECTORS if detectors is None else detectors
    reports = []
    for spec in specs:
        try:
            ds = load_dataset(spec)
        except (OSError, ValueError) as exc:
            log.warning("skipping dataset %s: %s", spec.name, exc)
            reports.append(EvalReport(spec.name, "*", status=f"unavailable: {exc}"))
            continue
        for name, det in detectors.items():
            try:
                if warmup:
                    _, first = _timed(det, ds.train, ds.X)
                    if time_budget is not None and first > time_budget:
                        reports.append(EvalReport(ds.name, name, runtime=first, status="timeout"))
                        continue
                (scores, flags), runtime = _timed(det, ds.train, ds.X)
            except ValueError as exc:
                reports.append(EvalReport(ds.name, name, status=f"n/a: {exc}"))
                continue
            if time_budget is not None and runtime > time_budget:
                reports.append(EvalReport(ds.name, name, runtime=runtime, status="timeout"))
                continue
            reports.append(_evaluate(name, ds, scores, flags, runtime))
        for name, path in spec.external_scores.items():
            try:
                scores, flags = read_external_scores(path, len(ds.labels), spec.contamination)
            except (OSError, ValueError) as exc:
                reports.append(EvalReport(ds.name, name, status=f"n/a: {exc}"))
                continue
            runtime = spec.external_runtime.get(name, math.nan)
            reports.append(_evaluate(name, ds, scores, flags, runtime))
    return reports


_FIELDS = ["dataset", "detector", "precision", "recall", "f1", "auc", "runtime", "status"]


def write_report_csv(reports: list[EvalReport], path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.DictWriter(fh, fieldnames=_FIELDS)
        w.writeheader()
        for r in reports:
            w.writerow(asdict(r))


def _json_safe(value):
    if isinstance(value, float) and not math.isfinite(value):
        return None
    return value


def write_report_json(reports: list[EvalReport], path) -> None:
    rows = [{k: _json_safe(v) for k, v in asdict(r).items()} for r in reports]
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(rows, fh, indent=2)
        fh.write("\n")
