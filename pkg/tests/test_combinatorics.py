import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from evp.combinatorics import (
    KINDS,
    EstimatorKind,
    cumulative_ratio,
    cumulative_ratio_table,
    cumulative_ratios,
)
from oracles import SELECTORS, exact_cumulative

U, V, W = EstimatorKind.COMBINATIONS, EstimatorKind.STRINGS, EstimatorKind.MULTISETS


def enumerated_cumulative(kind, i, n, B):
    sels = list(SELECTORS[kind.letter](B, n))
    return Fraction(sum(max(s) < i for s in sels), len(sels))


@pytest.mark.parametrize(
    "kind, i, n, B, expected",
    [
        (V, 2, 3, 4, 0.125),
        (U, 3, 2, 4, 0.5),
        (W, 1, 2, 4, 0.1),
        (U, 1, 2, 4, 0.0),
    ],
)
def test_examples(kind, i, n, B, expected):
    assert enumerated_cumulative(kind, i, n, B) == Fraction(expected).limit_denominator(1000)
    assert cumulative_ratio(kind, i, n, B) == pytest.approx(expected, abs=1e-15)


@pytest.mark.parametrize("kind", KINDS)
@pytest.mark.parametrize("B", [1, 2, 7, 63, 200, 1000])
def test_boundaries_bit_exact(kind, B):
    for n in {1, min(2, B), max(B // 2, 1), B}:
        assert cumulative_ratio(kind, B, n, B) == 1.0
        assert cumulative_ratio(kind, 0, n, B) == 0.0
        r = cumulative_ratios(kind, n, B)
        assert r[-1] == 1.0 and r[0] == 0.0
        assert not np.signbit(r).any()


@pytest.mark.parametrize("kind", KINDS)
def test_matches_enumeration_small(kind):
    for B in range(1, 6):
        for n in range(1, B + 1):
            for i in range(B + 1):
                assert cumulative_ratio(kind, i, n, B) == pytest.approx(
                    float(enumerated_cumulative(kind, i, n, B)), rel=1e-14, abs=1e-16
                )


@pytest.mark.parametrize("kind", KINDS)
def test_closed_form_oracle_B_le_20(kind):
    for B in range(1, 21):
        for n in range(1, B + 1):
            r = cumulative_ratios(kind, n, B)
            exact = [float(exact_cumulative(kind.letter, i, n, B)) for i in range(B + 1)]
            np.testing.assert_allclose(r, exact, rtol=1e-12, atol=0)


def test_large_B_does_not_overflow():
    # C(1000, 500) ~ 1e299; the factor product never forms it
    r = cumulative_ratio(U, 999, 500, 1000)
    assert r == pytest.approx(0.5, rel=1e-12)
    assert 0.0 < cumulative_ratio(W, 500, 700, 1000) < 1.0


@pytest.mark.parametrize("kind", KINDS)
def test_vector_and_table_bit_identical_to_scalar(kind):
    B = 37
    table = cumulative_ratio_table(kind, B)
    for n in range(1, B + 1):
        vec = cumulative_ratios(kind, n, B)
        assert np.array_equal(table[n - 1], vec)
        assert vec.tolist() == [cumulative_ratio(kind, i, n, B) for i in range(B + 1)]


@pytest.mark.parametrize(
    "args",
    [(2, 3, 2), (4, 1, 3), (-1, 1, 3), (1, 0, 3), (1, 4, 3), (0, 1, 0)],
)
def test_rejects_out_of_range(args):
    i, n, B = args
    with pytest.raises(ValueError):
        cumulative_ratio(U, i, n, B)


def test_kind_parse():
    assert EstimatorKind.parse("U") is U
    assert EstimatorKind.parse("strings") is V
    assert EstimatorKind.parse(W) is W
    with pytest.raises(ValueError):
        EstimatorKind.parse("permutations")
    assert len(EstimatorKind) == 3


admissible = st.integers(1, 120).flatmap(
    lambda B: st.tuples(st.integers(0, B), st.integers(1, B), st.just(B))
)


@given(admissible, st.sampled_from(KINDS))
def test_range_and_monotonicity(args, kind):
    i, n, B = args
    r = cumulative_ratio(kind, i, n, B)
    assert 0.0 <= r <= 1.0
    if i < B:
        assert r <= cumulative_ratio(kind, i + 1, n, B)
    if n < B:
        assert cumulative_ratio(kind, i, n + 1, B) <= r


@given(admissible)
def test_domination(args):
    k, n, B = args
    if not 1 <= k < B:
        return
    assert cumulative_ratio(U, k, n, B) <= cumulative_ratio(V, k, n, B)
    assert cumulative_ratio(V, k, n, B) < cumulative_ratio(W, k, n, B) or n == 1


def test_permutation_identity_exact():
    # ordered selections without repetition give the same ratios as combinations
    for B in range(1, 8):
        for n in range(1, B + 1):
            perms = list(itertools.permutations(range(B), n))
            for i in range(B + 1):
                frac = Fraction(sum(max(p) < i for p in perms), len(perms))
                assert frac == exact_cumulative("u", i, n, B)
