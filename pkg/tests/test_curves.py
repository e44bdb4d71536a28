import numpy as np
import pytest

from evp import KINDS, EstimatorKind, evp_curve, evp_curve_all, expected_max, variance_of_max
from oracles import enumerate_max_moments


def test_u_curve_pool4():
    curve = evp_curve("u", [1, 2, 3, 4])
    expected = [enumerate_max_moments("u", [1, 2, 3, 4], n)[0] for n in range(1, 5)]
    assert expected == pytest.approx([2.5, 10 / 3, 3.75, 4.0], abs=1e-15)
    np.testing.assert_allclose(curve.means, expected, atol=1e-12)
    assert curve.points[-1].mean == 4.0 and curve.points[-1].variance == 0.0


def test_v_curve_last_point():
    curve = evp_curve("v", [4, 3, 2, 1])
    # 1*1 + 2*15 + 3*65 + 4*175 = 926 over 4**4 strings
    assert enumerate_max_moments("v", [1, 2, 3, 4], 4)[0] == 926 / 256
    assert curve.points[3].mean == pytest.approx(926 / 256, abs=1e-12)


def test_single_point_curves():
    curves = evp_curve_all([0.7])
    assert [c.kind for c in curves] == list(KINDS)
    for c in curves:
        assert c.B == 1 and len(c.points) == 1
        assert (c.points[0].n, c.points[0].mean, c.points[0].variance) == (1, 0.7, 0.0)


def test_two_point_means():
    u, v, w = evp_curve_all([0.0, 1.0])
    assert u.means[1] == pytest.approx(1.0)
    assert v.means[1] == pytest.approx(0.75)
    assert w.means[1] == pytest.approx(2 / 3)


def test_curve_matches_pointwise_ops():
    rng = np.random.default_rng(8)
    x = rng.uniform(0.3, 0.5, 25)
    for kind in KINDS:
        curve = evp_curve(kind, x)
        assert [p.n for p in curve.points] == list(range(1, 26))
        for p in curve.points:
            assert p.mean == expected_max(kind, x, p.n)
            assert p.variance == variance_of_max(kind, x, p.n)


def test_curve_invariants_random_pools():
    rng = np.random.default_rng(9)
    for _ in range(30):
        x = rng.normal(0.6, 0.07, rng.integers(1, 60))
        u, v, w = evp_curve_all(x)
        for c in (u, v, w):
            assert np.all(np.diff(c.means) >= -1e-15)
            assert np.all(c.variances >= 0)
        assert np.all(w.means <= v.means + 1e-15)
        assert np.all(v.means <= u.means + 1e-15)
        assert u.means[-1] == x.max() and u.variances[-1] == 0.0


def test_kind_label_accepted():
    assert evp_curve(EstimatorKind.MULTISETS, [1, 2]).kind is EstimatorKind.MULTISETS
    with pytest.raises(ValueError):
        evp_curve("u", [])
