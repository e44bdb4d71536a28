"""Expected maximum of n draws, and its plug-in variance, from a score pool."""

import math
from dataclasses import dataclass

import numpy as np

from .combinatorics import EstimatorKind, cumulative_ratio_table, cumulative_ratios

# Above this pool size sums switch to math.fsum.
COMPENSATED_SUM_THRESHOLD = 10_000


class ScorePool:
    """Immutable, ascending-sorted collection of finite trial scores.

    Ties are kept; order statistics are positional.
    """

    __slots__ = ("_scores",)

    def __init__(self, scores):
        arr = np.array(scores, dtype=np.float64).ravel()
        if arr.size == 0:
            raise ValueError("score pool is empty")
        if not np.all(np.isfinite(arr)):
            raise ValueError("score pool contains non-finite values")
        arr.sort(kind="stable")
        arr.flags.writeable = False
        self._scores = arr

    @classmethod
    def coerce(cls, pool):
        return pool if isinstance(pool, cls) else cls(pool)

    @property
    def scores(self):
        return self._scores

    @property
    def B(self):
        return self._scores.size

    def __len__(self):
        return self._scores.size

    def __iter__(self):
        return iter(self._scores.tolist())

    def __eq__(self, other):
        if not isinstance(other, ScorePool):
            return NotImplemented
        return np.array_equal(self._scores, other._scores)

    def __repr__(self):
        return f"ScorePool(B={self.B}, min={self._scores[0]!r}, max={self._scores[-1]!r})"


@dataclass(frozen=True)
class WeightVector:
    """P(max of n draws = i-th smallest score) for i = 1..B."""

    kind: EstimatorKind
    n: int
    B: int
    masses: np.ndarray


def weight_vector(kind, n, B):
    kind = EstimatorKind.parse(kind)
    masses = np.diff(cumulative_ratios(kind, n, B))
    masses.flags.writeable = False
    return WeightVector(kind, int(n), int(B), masses)


def weight_matrix(kind, B):
    """Masses for every n at once: row ``n - 1`` is ``weight_vector(kind, n, B).masses``."""
    return np.diff(cumulative_ratio_table(kind, B), axis=1)


def _weighted_sum(x, w):
    if x.size > COMPENSATED_SUM_THRESHOLD:
        return math.fsum((x * w).tolist())
    total = 0.0
    for xi, wi in zip(x.tolist(), w.tolist()):
        total += xi * wi
    return total


def _weights_for(kind, pool, n):
    n = int(n)
    if not 1 <= n <= pool.B:
        raise ValueError(f"n must satisfy 1 <= n <= B={pool.B}, got {n}")
    return weight_vector(kind, n, pool.B).masses


def _clamp_to_range(value, pool):
    # convex combination of the pool; rounding can step just outside
    return min(max(value, float(pool.scores[0])), float(pool.scores[-1]))


def expected_max(kind, pool, n):
    """Estimate of E[max of n draws] from the pool.

    Parameters
    ----------
    kind : EstimatorKind or str
        Counting model (``u``, ``v`` or ``w``).
    pool : ScorePool or sequence of float
        The B observed scores; sorted internally if a plain sequence.
    n : int
        Sub-budget, ``1 <= n <= B``.
    """
    pool = ScorePool.coerce(pool)
    w = _weights_for(kind, pool, n)
    return _clamp_to_range(_weighted_sum(pool.scores, w), pool)


def variance_of_max(kind, pool, n):
    """Plug-in variance of the maximum under the same weights as the mean.

    Evaluated in centred form, sum_i w_i (x_i - m)**2, which equals the
    second moment minus the squared mean without the cancellation.
    """
    return mean_and_variance(kind, pool, n)[1]


def mean_and_variance(kind, pool, n):
    """``(expected_max, variance_of_max)`` sharing one weight vector."""
    pool = ScorePool.coerce(pool)
    return _mean_var_from_weights(pool, _weights_for(kind, pool, n))


def _mean_var_from_weights(pool, w):
    mean = _clamp_to_range(_weighted_sum(pool.scores, w), pool)
    dev = pool.scores - mean
    return mean, max(_weighted_sum(dev * dev, w), 0.0)
