"""Expected-maximum curves over every sub-budget n = 1..B."""

from dataclasses import dataclass

import numpy as np

from .combinatorics import KINDS, EstimatorKind
from .estimators import ScorePool, _mean_var_from_weights, weight_matrix


@dataclass(frozen=True)
class EvpPoint:
    n: int
    mean: float
    variance: float


@dataclass(frozen=True)
class EvpCurve:
    kind: EstimatorKind
    B: int
    points: tuple

    @property
    def means(self):
        return np.array([p.mean for p in self.points])

    @property
    def variances(self):
        return np.array([p.variance for p in self.points])


def evp_curve(kind, pool):
    """Mean and plug-in variance of the best-of-n score for n = 1..B.

    >>> evp_curve("u", [1, 2, 3, 4]).means.tolist()[-1]
    4.0
    """
    kind = EstimatorKind.parse(kind)
    pool = ScorePool.coerce(pool)
    weights = weight_matrix(kind, pool.B)
    points = []
    for n in range(1, pool.B + 1):
        mean, var = _mean_var_from_weights(pool, weights[n - 1])
        points.append(EvpPoint(n, mean, var))
    return EvpCurve(kind, pool.B, tuple(points))


def evp_curve_all(pool):
    """Curves for u, v and w, in that order."""
    pool = ScorePool.coerce(pool)
    return tuple(evp_curve(kind, pool) for kind in KINDS)
