"""Expectation kernel for a-contrario detection.

Everything here is a pure function of its arguments. Counting quantities are
handled in the log domain so that binomial coefficients with arguments in the
millions never have to be materialised.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

__all__ = [
    "STIRLING_CUTOFF",
    "SATURATED_SCORE",
    "DEGENERATE_SCORE",
    "EpsilonMeaningfulQuery",
    "Meaningfulness",
    "log_factorial",
    "log_factorial_exact",
    "log_binomial",
    "log_expectation",
    "tuple_expectation",
    "perception_score",
    "perception_scores",
    "binomial_tail",
    "is_epsilon_meaningful",
    "expected_run_occurrences",
]

#: Arguments up to and including this value use the exact table.
STIRLING_CUTOFF = 20

#: Score given to counts larger than the total mass the model was fitted on.
SATURATED_SCORE = 1e9

#: Score given to every point when the model carries no mass (S == 0).
DEGENERATE_SCORE = -1e9

_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)

# ln(m!) for m = 0..STIRLING_CUTOFF, accumulated as a running sum of ln(i).
_EXACT_TABLE = np.concatenate(
    ([0.0], np.cumsum(np.log(np.arange(1, STIRLING_CUTOFF + 1, dtype=float))))
)


def _stirling(m):
    return m * np.log(m) - m + 0.5 * np.log(m) + _HALF_LOG_2PI


def log_factorial(m):
    """Return ln(m!) for a nonnegative integer or an integer array.

    Small arguments are looked up in an exact table; larger ones use the
    Stirling expansion ``m ln m - m + ln(m)/2 + ln(2 pi)/2``.
    """
    if np.ndim(m) == 0:
        m = int(m)
        if m < 0:
            raise ValueError(f"log_factorial needs m >= 0, got {m}")
        if m <= STIRLING_CUTOFF:
            return float(_EXACT_TABLE[m])
        return float(_stirling(float(m)))

    m = np.asarray(m)
    if m.size and m.min() < 0:
        raise ValueError("log_factorial needs m >= 0")
    out = np.empty(m.shape, dtype=float)
    small = m <= STIRLING_CUTOFF
    out[small] = _EXACT_TABLE[m[small]]
    big = ~small
    if big.any():
        out[big] = _stirling(m[big].astype(float))
    return out


def log_factorial_exact(m):
    """ln(m!) without the asymptotic expansion (via ``lgamma``)."""
    if np.ndim(m) == 0:
        m = int(m)
        if m < 0:
            raise ValueError(f"log_factorial needs m >= 0, got {m}")
        return math.lgamma(m + 1)
    m = np.asarray(m)
    if m.size and m.min() < 0:
        raise ValueError("log_factorial needs m >= 0")
    return np.array([math.lgamma(int(v) + 1) for v in m.ravel()]).reshape(m.shape)


def _lf(exact):
    return log_factorial_exact if exact else log_factorial


def log_binomial(S, n, exact: bool = False):
    """ln C(S, n) from three log-factorials.

    ``n`` may be an integer array; every entry must satisfy ``0 <= n <= S``.
    """
    S = int(S)
    lf = _lf(exact)
    if np.ndim(n) == 0:
        n = int(n)
        if n < 0 or n > S:
            raise ValueError(f"log_binomial needs 0 <= n <= S, got S={S}, n={n}")
        if n == 0 or n == S:
            return 0.0
        return lf(S) - lf(S - n) - lf(n)
    n = np.asarray(n, dtype=np.int64)
    if n.size and (n.min() < 0 or n.max() > S):
        raise ValueError(f"log_binomial needs 0 <= n <= S (S={S})")
    out = lf(S) - lf(S - n) - lf(n)
    out[(n == 0) | (n == S)] = 0.0
    return out


def log_expectation(S: int, W: int, n: int, exact: bool = False) -> float:
    """ln E(C_n) = ln C(S, n) - (n - 1) ln W."""
    if W < 1:
        raise ValueError(f"W must be >= 1, got {W}")
    return log_binomial(S, n, exact) - (int(n) - 1) * math.log(W)


def tuple_expectation(S: int, W: int, n: int, exact: bool = False) -> float:
    """Expected number of n-tuples sharing one of W windows among S items.

    Returns ``math.inf`` when the value overflows a double.
    """
    if S < 0 or n < 0:
        raise ValueError(f"S and n must be nonnegative, got S={S}, n={n}")
    if W < 1:
        raise ValueError(f"W must be >= 1, got {W}")
    if n <= 1 and n <= S:
        # closed forms: C(S, 0) * W and C(S, 1)
        return float(W) if n == 0 else float(S)
    le = log_expectation(S, W, n, exact)
    if le > 709.0:
        return math.inf
    return math.exp(le)


def perception_score(S: int, W: int, n: int, exact: bool = False) -> float:
    """Score ``-(ln C(S, n) - (n - 1) ln W) / S``; positive means anomalous."""
    if W < 1:
        raise ValueError(f"W must be >= 1, got {W}")
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    if S <= 0:
        return DEGENERATE_SCORE
    if n > S:
        return SATURATED_SCORE
    return -log_expectation(S, W, n, exact) / S


def perception_scores(S: int, W: int, n, exact: bool = False) -> np.ndarray:
    """Vectorised :func:`perception_score` over an integer array of counts."""
    n = np.asarray(n, dtype=np.int64)
    if W < 1:
        raise ValueError(f"W must be >= 1, got {W}")
    if n.size and n.min() < 0:
        raise ValueError("counts must be nonnegative")
    S = int(S)
    if S <= 0:
        return np.full(n.shape, DEGENERATE_SCORE)
    over = n > S
    inside = np.where(over, 0, n)
    z = -(log_binomial(S, inside, exact) - (inside - 1) * math.log(W)) / S
    z[over] = SATURATED_SCORE
    return z


def binomial_tail(N: int, k: int, p: float) -> float:
    """P(X >= k) for X ~ Binomial(N, p).

    Terms are formed in log space, rescaled by the largest term of the whole
    distribution and summed largest first. The common rescaling keeps the
    result exactly nonincreasing in ``k``.
    """
    N, k = int(N), int(k)
    if N < 0 or k < 0 or k > N:
        raise ValueError(f"binomial_tail needs 0 <= k <= N, got N={N}, k={k}")
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    if k == 0:
        return 1.0
    if p == 0.0:
        return 0.0
    if p == 1.0:
        return 1.0

    lp, lq = math.log(p), math.log1p(-p)
    lgN = math.lgamma(N + 1)

    def log_term(i):
        return lgN - math.lgamma(i + 1) - math.lgamma(N - i + 1) + i * lp + (N - i) * lq

    mode = min(N, max(0, int(math.floor((N + 1) * p))))
    ref = max(log_term(mode), log_term(max(mode - 1, 0)))
    terms = [math.exp(log_term(i) - ref) for i in range(k, N + 1)]
    terms.sort(reverse=True)
    total = math.fsum(terms) * math.exp(ref)
    return min(1.0, max(0.0, total))


@dataclass(frozen=True)
class EpsilonMeaningfulQuery:
    N_conf: int
    N: int
    k: int
    p: float
    epsilon: float = 1.0

    def __post_init__(self):
        if self.N_conf < 1:
            raise ValueError("N_conf must be >= 1")
        if self.N < 1 or not 0 <= self.k <= self.N:
            raise ValueError("need N >= 1 and 0 <= k <= N")
        if not 0.0 <= self.p <= 1.0:
            raise ValueError("p must lie in [0, 1]")
        if not self.epsilon > 0:
            raise ValueError("epsilon must be positive")


class Meaningfulness(NamedTuple):
    meaningful: bool
    nfa: float


def is_epsilon_meaningful(q: EpsilonMeaningfulQuery) -> Meaningfulness:
    """Number of false alarms ``N_conf * B(N, k, p)`` and the test ``NFA < eps``."""
    nfa = q.N_conf * binomial_tail(q.N, q.k, q.p)
    return Meaningfulness(nfa < q.epsilon, nfa)


def expected_run_occurrences(trials: int, run_length: int, p_success: float) -> float:
    """Expected number of length-``run_length`` success runs in ``trials`` draws."""
    if trials < 1 or run_length < 1:
        raise ValueError("trials and run_length must be positive")
    if run_length > trials:
        raise ValueError(f"run_length {run_length} exceeds trials {trials}")
    if not 0.0 <= p_success <= 1.0:
        raise ValueError("p_success must lie in [0, 1]")
    return (trials - (run_length - 1)) * p_success**run_length
