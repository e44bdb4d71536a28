"""How often does an estimator rank the worse of two models first?

Given full result pools for two models, repeatedly draw a budget-B
subsample from each, evaluate an estimator at n = B on both, and count the
draws where the truly better model comes out strictly lower. Ties are
counted separately.
"""

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import kernels
from ._parallel import map_blocks
from .combinatorics import KINDS, EstimatorKind
from .estimators import ScorePool, expected_max, weight_vector
from .rng import as_source

TRUTH_FROM_POOLS = "full-pool u at n=B"
TRUTH_OVERRIDE = "override"


class IndeterminateTruthError(ValueError):
    """Neither pool is better at full-pool resolution and no override was given."""


def _label(label):
    key = str(label).strip().upper()
    if key not in ("A", "B"):
        raise ValueError(f"truth label must be 'A' or 'B', got {label!r}")
    return key


def determine_truth(pool_a, pool_b, B, override=None):
    """Return ``"A"`` or ``"B"``: the pool with the larger u-estimate at n = B.

    ``override`` short-circuits the comparison.
    """
    pool_a = ScorePool.coerce(pool_a)
    pool_b = ScorePool.coerce(pool_b)
    if not 1 <= B <= min(pool_a.B, pool_b.B):
        raise ValueError(f"budget {B} must be in 1..{min(pool_a.B, pool_b.B)}")
    if override is not None:
        return _label(override)
    ua = expected_max(EstimatorKind.COMBINATIONS, pool_a, B)
    ub = expected_max(EstimatorKind.COMBINATIONS, pool_b, B)
    if ua == ub:
        raise IndeterminateTruthError(
            f"pools tie at budget {B} (u-estimate {ua!r}); pass an explicit truth label"
        )
    return "A" if ua > ub else "B"


def _resampled_estimates(pool_a, pool_b, B, resamples, rng, kinds, replace, threads, mirror):
    """Estimates at n = B on paired subsamples: two arrays of shape (resamples, len(kinds))."""
    weights = np.stack([weight_vector(k, B, B).masses for k in kinds])
    streams = (1, 0) if mirror else (0, 1)

    def side(pool, stream):
        values = pool.scores
        src = rng.spawn(stream)

        def block(i, size):
            u = src.spawn(i).uniform((size, B))
            rows = kernels.gather_sorted(values, kernels.draw_indices(u, values.size, replace))
            return kernels.weighted_sums(rows, weights)

        return np.concatenate(map_blocks(block, resamples, threads))

    return side(pool_a, streams[0]), side(pool_b, streams[1])


@dataclass(frozen=True)
class ConclusionRate:
    kind: EstimatorKind
    B: int
    resamples: int
    incorrect: int
    ties: int

    @property
    def rate(self):
        return self.incorrect / self.resamples

    @property
    def stderr(self):
        p = self.rate
        return math.sqrt(p * (1.0 - p) / self.resamples)


def _count(est_a, est_b, truth):
    better, worse = (est_a, est_b) if truth == "A" else (est_b, est_a)
    return np.count_nonzero(better < worse, axis=0), np.count_nonzero(better == worse, axis=0)


def _check_inputs(pool_a, pool_b, B, resamples):
    if resamples < 1:
        raise ValueError(f"resamples must be >= 1, got {resamples}")
    if not 1 <= B <= min(pool_a.B, pool_b.B):
        raise ValueError(f"budget {B} must be in 1..{min(pool_a.B, pool_b.B)}")


def incorrect_conclusion_rate(pool_a, pool_b, kind, B, resamples, rng, truth=None,
                              replace=False, threads=1, mirror=False):
    """Fraction of budget-B resamples where ``kind`` ranks the worse pool strictly higher.

    Subsamples are drawn without replacement unless ``replace`` is set.
    ``truth`` overrides the full-pool ground truth. ``mirror`` swaps which
    random stream feeds which pool; comparing (A, B, truth) against
    (B, A, swapped truth, mirror=True) reproduces identical draws.
    """
    pool_a = ScorePool.coerce(pool_a)
    pool_b = ScorePool.coerce(pool_b)
    kind = EstimatorKind.parse(kind)
    _check_inputs(pool_a, pool_b, B, resamples)
    label = determine_truth(pool_a, pool_b, B, truth)
    est_a, est_b = _resampled_estimates(pool_a, pool_b, B, resamples, as_source(rng),
                                        (kind,), replace, threads, mirror)
    incorrect, ties = _count(est_a[:, 0], est_b[:, 0], label)
    return ConclusionRate(kind, B, resamples, int(incorrect), int(ties))


@dataclass
class ComparisonReport:
    """Incorrect-conclusion rates for each budget and estimator.

    ``rates`` is ordered by budget, then by estimator (u, v, w).
    ``truth`` maps budget to the label of the better pool; it is empty for
    reports parsed back from the delimited format.
    """

    budgets: tuple
    rates: tuple
    truth: dict = field(default_factory=dict)
    truth_source: Optional[str] = None

    def rate(self, kind, B):
        kind = EstimatorKind.parse(kind)
        for r in self.rates:
            if r.kind is kind and r.B == B:
                return r
        raise KeyError((kind, B))


def comparison_report(pool_a, pool_b, budgets, resamples, rng, truth=None, replace=False,
                      threads=1):
    """Run :func:`incorrect_conclusion_rate` for every budget and all three estimators.

    All estimators share the subsamples drawn for a given budget.
    """
    pool_a = ScorePool.coerce(pool_a)
    pool_b = ScorePool.coerce(pool_b)
    rng = as_source(rng)
    budgets = tuple(int(b) for b in budgets)
    labels = {}
    rates = []
    for B in budgets:
        _check_inputs(pool_a, pool_b, B, resamples)
        labels[B] = determine_truth(pool_a, pool_b, B, truth)
        est_a, est_b = _resampled_estimates(pool_a, pool_b, B, resamples, rng.spawn(B),
                                            KINDS, replace, threads, False)
        incorrect, ties = _count(est_a, est_b, labels[B])
        rates.extend(
            ConclusionRate(kind, B, resamples, int(incorrect[k]), int(ties[k]))
            for k, kind in enumerate(KINDS)
        )
    source = TRUTH_OVERRIDE if truth is not None else TRUTH_FROM_POOLS
    return ComparisonReport(budgets, tuple(rates), labels, source)
