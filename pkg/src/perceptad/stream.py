"""Window counts over a binary indicator stream and online detection.

A stream of 0/1 indicators is cut into windows of length ``L``; the window
sums ``V`` give the model's total mass ``S = sum(V)`` and window count
``W = len(V)``. A window holding ``n`` indicators is unexpected when fewer
than one such window is expected under uniform random placement.
"""
from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from typing import Iterable, Literal

import numpy as np

from . import nfa

__all__ = [
    "IndicatorWindowing",
    "StreamAlert",
    "StreamDetector",
    "as_indicators",
    "window_counts",
    "fit_stream",
    "test_window",
    "sliding_alerts",
]

Mode = Literal["adjacent", "sliding"]


@dataclass(frozen=True)
class IndicatorWindowing:
    L: int
    mode: Mode
    stream_length: int
    window_sums: np.ndarray

    @property
    def W(self) -> int:
        return len(self.window_sums)

    @property
    def S(self) -> int:
        return int(self.window_sums.sum())

    def span(self, i: int) -> tuple[int, int]:
        """Half-open stream positions covered by window ``i``."""
        start = i * self.L if self.mode == "adjacent" else i
        return start, min(start + self.L, self.stream_length)


@dataclass(frozen=True)
class StreamAlert:
    window_index: int
    n: int
    score: float
    expectation: float
    start: int
    stop: int

    def to_json(self) -> dict:
        return {
            "window_index": self.window_index,
            "n": self.n,
            "expectation": self.expectation,
            "score": self.score,
            "start": self.start,
            "stop": self.stop,
        }


def as_indicators(stream) -> np.ndarray:
    """Validate a 0/1 sequence; the first offending position is reported."""
    a = np.asarray(stream)
    if a.ndim != 1:
        raise ValueError("an indicator stream must be one-dimensional")
    bad = np.flatnonzero((a != 0) & (a != 1))
    if bad.size:
        i = int(bad[0])
        raise ValueError(f"non-binary indicator {a[i]!r} at position {i}")
    return a.astype(np.int64)


def window_counts(stream, L: int, mode: Mode = "adjacent") -> IndicatorWindowing:
    """Count indicators per window.

    Adjacent windows partition the stream and zero-pad the last one; sliding
    windows start at every position that leaves a full window (one window
    when the stream is shorter than ``L``).
    """
    if L < 1:
        raise ValueError(f"window length must be >= 1, got {L}")
    d = as_indicators(stream)
    N = d.size
    if mode == "adjacent":
        W = math.ceil(N / L)
        padded = np.zeros(W * L, dtype=np.int64)
        padded[:N] = d
        V = padded.reshape(W, L).sum(axis=1)
    elif mode == "sliding":
        if N == 0:
            V = np.zeros(0, dtype=np.int64)
        elif N <= L:
            V = np.array([d.sum()])
        else:
            c = np.concatenate(([0], np.cumsum(d)))
            V = c[L:] - c[:-L]
    else:
        raise ValueError(f"unknown window mode {mode!r}")
    return IndicatorWindowing(L, mode, N, V)


def fit_stream(windowing: IndicatorWindowing) -> tuple[int, int]:
    """Return ``(S, W)`` for an adjacent-window partition."""
    if windowing.mode != "adjacent":
        raise ValueError("the model is fitted on adjacent windows")
    if windowing.W < 1:
        raise ValueError("at least one window is needed to fit")
    return windowing.S, windowing.W


def test_window(S: int, W: int, n: int, window_index: int = 0, span=(0, 0)) -> StreamAlert | None:
    """Alert when the expected number of windows holding ``n`` is below one."""
    if n < 0:
        raise ValueError("window counts are nonnegative")
    score = nfa.perception_score(S, W, n)
    if score <= 0:
        return None
    expectation = 0.0 if n > S else nfa.tuple_expectation(S, W, n)
    return StreamAlert(window_index, int(n), score, expectation, *span)


# Imported into test modules; keep pytest from collecting it.
test_window.__test__ = False


def sliding_alerts(windowing: IndicatorWindowing, S: int, W: int) -> list[StreamAlert]:
    """Test every sliding window and merge overlapping alerts.

    Each run of overlapping alerting windows becomes one alert spanning all
    of them and reporting the window with the largest count.
    """
    if windowing.mode != "sliding":
        raise ValueError("sliding_alerts needs sliding windows")
    V = windowing.window_sums
    if V.size == 0:
        return []
    z = nfa.perception_scores(S, W, V)
    hits = np.flatnonzero(z > 0)
    alerts = []
    i = 0
    while i < hits.size:
        j = i
        while j + 1 < hits.size and hits[j + 1] - hits[j] < windowing.L:
            j += 1
        group = hits[i : j + 1]
        best = int(group[np.argmax(V[group])])
        n = int(V[best])
        start = windowing.span(int(group[0]))[0]
        stop = windowing.span(int(group[-1]))[1]
        alerts.append(
            StreamAlert(
                best,
                n,
                float(z[best]),
                0.0 if n > S else nfa.tuple_expectation(S, W, n),
                start,
                stop,
            )
        )
        i = j + 1
    return alerts


class StreamDetector:
    """Running (S, W) state fed one window at a time.

    Each window is tested against the state that excludes it, then absorbed.
    Updates are serialised by a lock; :attr:`state` is an atomic snapshot.
    """

    def __init__(self, S: int, W: int, L: int):
        if S < 0 or W < 1 or L < 1:
            raise ValueError("need S >= 0, W >= 1 and L >= 1")
        self.L = L
        self._state = (int(S), int(W))
        self._lock = threading.Lock()

    @classmethod
    def from_windowing(cls, windowing: IndicatorWindowing) -> "StreamDetector":
        S, W = fit_stream(windowing)
        return cls(S, W, windowing.L)

    @property
    def state(self) -> tuple[int, int]:
        return self._state

    @property
    def S(self) -> int:
        return self._state[0]

    @property
    def W(self) -> int:
        return self._state[1]

    def ingest(self, window, offset: int = 0) -> StreamAlert | None:
        """Test then absorb one window of at most ``L`` indicators.

        Short windows are zero-padded. ``offset`` is the stream position of the
        window's first indicator and only feeds the alert's span.
        """
        w = as_indicators(window)
        if w.size > self.L:
            raise ValueError(f"window of {w.size} indicators exceeds L={self.L}")
        n = int(w.sum())
        with self._lock:
            S, W = self._state
            alert = test_window(S, W, n, W, (offset, offset + w.size))
            self._state = (S + n, W + 1)
        return alert

    def ingest_stream(self, stream: Iterable[int], offset: int = 0) -> list[StreamAlert]:
        d = as_indicators(np.asarray(stream if hasattr(stream, "__len__") else list(stream)))
        alerts = []
        for start in range(0, d.size, self.L):
            alert = self.ingest(d[start : start + self.L], offset + start)
            if alert is not None:
                alerts.append(alert)
        return alerts
