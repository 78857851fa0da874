"""Parameter-free anomaly detection by expectation of unexpected counts.

A value is flagged when, treating it as the number of indicators that fell
into one of ``W`` windows out of a total of ``S``, fewer than one such window
would be expected under uniform random placement.
"""
from .model import PerceptionModel, Predictions, ScoredPoint, fit, incremental_update, load, predict, save
from .nfa import perception_score, tuple_expectation
from .stream import StreamDetector, window_counts

__all__ = [
    "PerceptionModel",
    "Predictions",
    "ScoredPoint",
    "StreamDetector",
    "fit",
    "incremental_update",
    "load",
    "perception_score",
    "predict",
    "save",
    "tuple_expectation",
    "window_counts",
]

__version__ = "0.1.0"
