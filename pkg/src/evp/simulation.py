"""Synthetic bias / variance / MSE study of the expected-max estimators.

A large bag of scores drawn from a truncated normal stands in for the
unknown score distribution. Ground truth for each n is the Monte-Carlo
average of the maximum of n draws from the bag; each estimator is then
applied to many pools of size B drawn from the same bag.
"""

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import kernels
from ._parallel import map_blocks
from .combinatorics import KINDS, EstimatorKind
from .estimators import weight_matrix
from .rng import as_source

# Streams below a RandomSource passed to bias_variance_mse_report.
_TRUTH_STREAM = 0
_POOL_STREAM = 1

MIN_ACCEPTANCE = 1e-6


@dataclass(frozen=True)
class TruncatedNormal:
    mu: float = 0.6
    sigma: float = 0.07
    lo: float = 0.0
    hi: float = 1.0

    def mass(self):
        """Probability of [lo, hi] under Normal(mu, sigma)."""
        a = (self.lo - self.mu) / (self.sigma * math.sqrt(2.0))
        b = (self.hi - self.mu) / (self.sigma * math.sqrt(2.0))
        if a >= 0.0:
            return 0.5 * (math.erfc(a) - math.erfc(b))
        if b <= 0.0:
            return 0.5 * (math.erfc(-b) - math.erfc(-a))
        return 1.0 - 0.5 * (math.erfc(b) + math.erfc(-a))


class ValueBag:
    """Finite multiset of scores standing in for a score distribution."""

    __slots__ = ("_values", "lo", "hi")

    def __init__(self, values, lo=None, hi=None):
        arr = np.array(values, dtype=np.float64).ravel()
        if arr.size == 0:
            raise ValueError("value bag is empty")
        if not np.all(np.isfinite(arr)):
            raise ValueError("value bag contains non-finite values")
        if lo is not None and arr.min() < lo or hi is not None and arr.max() > hi:
            raise ValueError("value bag has values outside its bounds")
        arr.flags.writeable = False
        self._values = arr
        self.lo = lo
        self.hi = hi

    @classmethod
    def coerce(cls, bag):
        return bag if isinstance(bag, cls) else cls(bag)

    @property
    def values(self):
        return self._values

    def __len__(self):
        return self._values.size

    def __repr__(self):
        return f"ValueBag(size={len(self)}, lo={self.lo}, hi={self.hi})"


def sample_truncated_normal(mu, sigma, lo, hi, count, rng):
    """Draw ``count`` values from Normal(mu, sigma) restricted to [lo, hi].

    Rejection sampling from the untruncated normal. Raises ``ValueError``
    when the interval is empty, sigma is not positive, or the interval's
    probability (the acceptance rate) is below 1e-6.
    """
    if not sigma > 0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    if not lo < hi:
        raise ValueError(f"need lo < hi, got [{lo}, {hi}]")
    if count < 0:
        raise ValueError(f"count must be non-negative, got {count}")
    params = TruncatedNormal(mu, sigma, lo, hi)
    mass = params.mass()
    if mass < MIN_ACCEPTANCE:
        raise ValueError(
            f"truncation [{lo}, {hi}] keeps only {mass:.3g} of Normal({mu}, {sigma}); "
            f"rejection sampling would stall"
        )
    gen = as_source(rng).generator()
    chunks = []
    have = 0
    while have < count:
        need = count - have
        batch = int(min(need / mass * 1.05 + 64, 1 << 24))
        draws = gen.normal(mu, sigma, batch)
        kept = draws[(draws >= lo) & (draws <= hi)]
        chunks.append(kept)
        have += kept.size
    values = np.concatenate(chunks)[:count] if chunks else np.empty(0)
    return ValueBag(values, lo, hi)


def build_bag_two_stage(source_count, subsample_count, params=TruncatedNormal(), rng=0,
                        replace=False):
    """Draw ``source_count`` truncated-normal values, then keep a subsample.

    The subsample is drawn without replacement unless ``replace`` is set.
    """
    if not 1 <= subsample_count:
        raise ValueError("subsample_count must be >= 1")
    if not replace and subsample_count > source_count:
        raise ValueError(
            f"cannot subsample {subsample_count} of {source_count} without replacement"
        )
    rng = as_source(rng)
    source = sample_truncated_normal(params.mu, params.sigma, params.lo, params.hi,
                                     source_count, rng.spawn(0))
    gen = rng.spawn(1).generator()
    idx = gen.choice(source_count, size=subsample_count, replace=replace)
    return ValueBag(source.values[idx], params.lo, params.hi)


def _max_samples(bag, n, reps, rng, threads):
    values = bag.values

    def block(i, size):
        u = rng.spawn(i).uniform((size, n))
        return kernels.gather_row_max(values, kernels.draw_indices(u, values.size, True))

    return np.concatenate(map_blocks(block, reps, threads))


def mc_true_evp(bag, n, reps, rng, threads=1, return_stderr=False):
    """Average maximum of ``n`` with-replacement draws from ``bag``, over ``reps`` repetitions."""
    bag = ValueBag.coerce(bag)
    if n < 1 or reps < 1:
        raise ValueError(f"need n >= 1 and reps >= 1, got n={n}, reps={reps}")
    maxes = _max_samples(bag, int(n), int(reps), as_source(rng), threads)
    mean = float(maxes.mean())
    if not return_stderr:
        return mean
    stderr = float(maxes.std(ddof=1) / math.sqrt(reps)) if reps > 1 else math.nan
    return mean, stderr


def estimator_samples(bag, B, trials, rng, kinds=KINDS, replace=True, threads=1):
    """Estimator values on ``trials`` random pools of size B.

    Returns an array of shape (trials, len(kinds), B); entry [t, k, n-1] is
    ``expected_max(kinds[k], pool_t, n)``. The pools depend only on
    ``rng``, so every kind sees the same pools.
    """
    bag = ValueBag.coerce(bag)
    kinds = tuple(EstimatorKind.parse(k) for k in kinds)
    if B < 1:
        raise ValueError(f"B must be >= 1, got {B}")
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    if not replace and B > len(bag):
        raise ValueError(f"cannot draw pools of {B} without replacement from a bag of {len(bag)}")
    rng = as_source(rng)
    weights = np.concatenate([weight_matrix(k, B) for k in kinds])
    values = bag.values

    def block(i, size):
        u = rng.spawn(i).uniform((size, B))
        rows = kernels.gather_sorted(values, kernels.draw_indices(u, values.size, replace))
        return kernels.weighted_sums(rows, weights)

    est = np.concatenate(map_blocks(block, trials, threads))
    return est.reshape(trials, len(kinds), B)


@dataclass(frozen=True)
class SamplingMoments:
    kind: EstimatorKind
    mean: np.ndarray
    variance: np.ndarray


def estimator_sampling_moments(bag, kind, B, trials, rng, replace=True, threads=1):
    """Across-pool mean and unbiased variance of one estimator, for n = 1..B."""
    if trials < 2:
        raise ValueError(f"variance needs at least 2 trials, got {trials}")
    kind = EstimatorKind.parse(kind)
    est = estimator_samples(bag, B, trials, rng, (kind,), replace, threads)[:, 0, :]
    return SamplingMoments(kind, est.mean(axis=0), est.var(axis=0, ddof=1))


@dataclass
class SimulationReport:
    """Per-estimator, per-n summary; array fields have shape (len(kinds), B).

    ``mse`` is bias**2 plus the population variance (divisor ``trials``) of
    the estimates, so it equals the directly averaged squared error
    ``mse_direct``. ``variance`` uses divisor ``trials - 1``. ``stderr`` is
    the Monte-Carlo standard error of ``bias``.

    Reports parsed back from the delimited format carry only the written
    columns; ``truth``, ``truth_stderr`` and ``mse_direct`` are then None.
    """

    B: int
    kinds: tuple
    mean: np.ndarray
    bias: np.ndarray
    variance: np.ndarray
    mse: np.ndarray
    stderr: np.ndarray
    trials: Optional[int] = None
    truth_reps: Optional[int] = None
    truth: Optional[np.ndarray] = None
    truth_stderr: Optional[np.ndarray] = None
    mse_direct: Optional[np.ndarray] = None

    def index(self, kind):
        return self.kinds.index(EstimatorKind.parse(kind))

    def column(self, field, kind):
        """Values of ``field`` for ``kind`` as an array over n = 1..B."""
        return getattr(self, field)[self.index(kind)]


MSE_RTOL = 1e-9
_MSE_ATOL = 1e-24


def bias_variance_mse_report(bag, B, trials, truth_reps, rng, replace=True, threads=1):
    """Empirical bias, variance and MSE of u, v and w for n = 1..B.

    Truth is ``mc_true_evp`` at each n with ``truth_reps`` repetitions. All
    three estimators are evaluated on the same ``trials`` pools.
    """
    if trials < 2:
        raise ValueError(f"variance needs at least 2 trials, got {trials}")
    if truth_reps < 2:
        raise ValueError(f"truth_reps must be >= 2, got {truth_reps}")
    bag = ValueBag.coerce(bag)
    rng = as_source(rng)
    truth = np.empty(B)
    truth_se = np.empty(B)
    truth_rng = rng.spawn(_TRUTH_STREAM)
    for n in range(1, B + 1):
        truth[n - 1], truth_se[n - 1] = mc_true_evp(
            bag, n, truth_reps, truth_rng.spawn(n), threads, return_stderr=True
        )

    est = estimator_samples(bag, B, trials, rng.spawn(_POOL_STREAM), KINDS, replace, threads)
    mean = est.mean(axis=0)
    variance = est.var(axis=0, ddof=1)
    bias = mean - truth
    mse = bias * bias + variance * ((trials - 1) / trials)
    err = est - truth
    mse_direct = (err * err).mean(axis=0)
    if not np.allclose(mse, mse_direct, rtol=MSE_RTOL, atol=_MSE_ATOL):
        worst = np.max(np.abs(mse - mse_direct) / np.maximum(mse_direct, _MSE_ATOL))
        raise ArithmeticError(f"MSE decomposition disagrees with direct average (rel {worst:.3g})")
    stderr = np.sqrt(variance / trials + truth_se**2)
    return SimulationReport(
        B=B, kinds=KINDS, mean=mean, bias=bias, variance=variance, mse=mse, stderr=stderr,
        trials=trials, truth_reps=truth_reps, truth=truth, truth_stderr=truth_se,
        mse_direct=mse_direct,
    )
