"""Cumulative selection ratios for the three counting models.

For a pool of ``B`` sorted scores, ``cumulative_ratio(kind, i, n, B)`` is the
probability that the maximum of a size-``n`` selection is at most the
``i``-th smallest score, where "selection" means

* ``STRINGS``: ordered, with repetition (``B**n`` of them),
* ``COMBINATIONS``: unordered, without repetition (``C(B, n)``),
* ``MULTISETS``: unordered, with repetition (``C(B + n - 1, n)``).

Ordered selections without repetition give the same ratios as combinations,
so there is no separate kind for them.

Ratios are computed as running products of per-factor fractions, each in
[0, 1]. No factorial or binomial is ever formed, so nothing overflows for
large ``B``.
"""

import enum

import numpy as np


class EstimatorKind(enum.Enum):
    """Counting model behind an expected-maximum estimator."""

    STRINGS = "v"
    COMBINATIONS = "u"
    MULTISETS = "w"

    @property
    def letter(self):
        return self.value

    @classmethod
    def parse(cls, label):
        """Accept ``u``/``v``/``w`` (any case) or a member name."""
        if isinstance(label, cls):
            return label
        key = str(label).strip().lower()
        for kind in cls:
            if key in (kind.value, kind.name.lower()):
                return kind
        raise ValueError(f"unknown estimator {label!r}; expected one of u, v, w")


# Canonical output order: u, v, w.
KINDS = (EstimatorKind.COMBINATIONS, EstimatorKind.STRINGS, EstimatorKind.MULTISETS)


def _check_args(i, n, B):
    if B < 1:
        raise ValueError(f"B must be >= 1, got {B}")
    if not 1 <= n <= B:
        raise ValueError(f"n must satisfy 1 <= n <= B={B}, got {n}")
    if not 0 <= i <= B:
        raise ValueError(f"i must satisfy 0 <= i <= B={B}, got {i}")


def _factor(kind, i, j, B):
    if kind is EstimatorKind.STRINGS:
        return i / B
    if kind is EstimatorKind.COMBINATIONS:
        return max(i - j, 0) / (B - j)
    return (i + j) / (B + j)


def cumulative_ratio(kind, i, n, B):
    """P(max of an n-selection <= i-th smallest of B) under ``kind``.

    Raises ``ValueError`` when the arguments are outside
    ``0 <= i <= B``, ``1 <= n <= B``.

    >>> cumulative_ratio(EstimatorKind.COMBINATIONS, 3, 2, 4)
    0.5
    """
    kind = EstimatorKind.parse(kind)
    i, n, B = int(i), int(n), int(B)
    _check_args(i, n, B)
    ratio = 1.0
    for j in range(n):
        ratio *= _factor(kind, i, j, B)
    return ratio


def _factor_column(kind, j, B):
    i = np.arange(B + 1, dtype=np.float64)
    if kind is EstimatorKind.STRINGS:
        return i / B
    if kind is EstimatorKind.COMBINATIONS:
        return np.maximum(i - j, 0.0) / (B - j)
    return (i + j) / (B + j)


def cumulative_ratios(kind, n, B):
    """``cumulative_ratio(kind, i, n, B)`` for every ``i`` in ``0..B``.

    Bit-identical to the scalar version: the factors are multiplied in the
    same order.
    """
    kind = EstimatorKind.parse(kind)
    _check_args(0, n, B)
    ratios = np.ones(B + 1)
    for j in range(n):
        ratios *= _factor_column(kind, j, B)
    return ratios


def cumulative_ratio_table(kind, B):
    """Array of shape (B, B + 1); row ``n - 1`` holds ``cumulative_ratios(kind, n, B)``.

    Built incrementally in n, which is O(B**2) and gives the same bits as
    calling :func:`cumulative_ratios` for each n.
    """
    kind = EstimatorKind.parse(kind)
    _check_args(0, 1, B)
    table = np.empty((B, B + 1))
    ratios = np.ones(B + 1)
    for j in range(B):
        ratios = ratios * _factor_column(kind, j, B)
        table[j] = ratios
    return table
