from fractions import Fraction

import numpy as np
import pytest

import oracles
from projtrim.depth import Exact2D
from projtrim.errors import EmptyRegionError, GeneralPositionError, InputError
from projtrim.trim import (ConstantWeight, PowerWeight, ProjectionTrimmedMean, TrimSpec, alpha_d,
                           alpha_d_details, breakdown_point, breakdown_probe, breakdown_report, ptm,
                           ptm_fit, resolve_alpha)
from projtrim.univariate import LocationScalePair

DIAMOND = np.array([[1.0, 0], [-1, 0], [0, 1], [0, -1]])


def polygon(m, r=1.0):
    t = 2 * np.pi * np.arange(m) / m
    return r * np.column_stack([np.cos(t), np.sin(t)])


@pytest.mark.parametrize("n,d,k,expected", [(20, 2, 3, Fraction(9, 20)), (10, 1, 1, Fraction(5, 10)),
                                            (10, 2, 3, Fraction(4, 10))])
def test_breakdown_point_values(n, d, k, expected):
    assert breakdown_point(n, d, k) == expected


def test_breakdown_point_rejects_bad_arguments():
    for args in ((0, 2, 1), (10, 2, 11), (2, 2, 1), (10, 1.5, 1)):
        with pytest.raises(InputError):
            breakdown_point(*args)


def test_breakdown_report():
    rep = breakdown_report(polygon(20), k=3)
    assert rep.bp == Fraction(9, 20) and rep.count == 9 and 0 < rep.alpha_d < 1 / 3


def test_ptm_diamond_and_small_alpha_mean():
    assert np.allclose(ptm(DIAMOND, TrimSpec(0.2)), 0, atol=1e-12)
    X = np.random.default_rng(0).normal(size=(30, 2))
    assert np.allclose(ptm(X, TrimSpec(1e-9)), X.mean(axis=0), atol=1e-12)


def test_ptm_normal_sample():
    X = np.random.default_rng(1).normal(size=(900, 2))
    assert np.linalg.norm(ptm(X, TrimSpec(0.36))) < 0.15


def test_ptm_centrosymmetric_consistency():
    rng = np.random.default_rng(2)
    H = rng.normal(size=(15, 2))
    X = np.vstack([H, -H]) + [3.0, -1.0]
    for spec in (TrimSpec(0.2), TrimSpec(0.3, PowerWeight(2.0))):
        assert np.allclose(ptm(X, spec, strategy=Exact2D()), [3.0, -1.0], atol=1e-10)


def test_trimming_is_monotone_in_alpha():
    X = np.random.default_rng(3).standard_t(3, size=(60, 2))
    sizes = [ptm_fit(X, TrimSpec(a)).support.sum() for a in (0.05, 0.15, 0.25, 0.35)]
    assert all(a >= b for a, b in zip(sizes, sizes[1:]))


def test_weights():
    assert ConstantWeight()(np.array([0.1, 0.9])).tolist() == [1.0, 1.0]
    w = PowerWeight(2.0)
    assert w(np.array([0.5])) == pytest.approx(0.25) and w.derivative(np.array([0.5])) == pytest.approx(1.0)
    with pytest.raises(InputError):
        TrimSpec(1.5)


def test_alpha_d_regular_pentagon_vs_grid():
    P = polygon(5)
    assert alpha_d(P) == pytest.approx(oracles.alpha_d_grid(P), abs=1e-4)
    assert alpha_d(P) <= oracles.alpha_d_grid(P) + 1e-12


def test_alpha_d_affine_invariance_and_bound():
    rng = np.random.default_rng(4)
    X = rng.normal(size=(25, 2))
    a0 = alpha_d(X)
    assert 0 < a0 <= 1 / 3
    for _ in range(3):
        A, b = oracles.random_affine(rng)
        assert alpha_d(X @ A.T + b) == pytest.approx(a0, rel=1e-6)
    det = alpha_d_details(X)
    assert det.exact and np.linalg.norm(det.direction) == pytest.approx(1.0)


def test_alpha_d_higher_dimension_and_errors():
    X = np.random.default_rng(5).normal(size=(20, 3))
    det = alpha_d_details(X, n_random=2000)
    assert not det.exact and 0 < det.alpha_d <= 1 / 3
    with pytest.raises(GeneralPositionError):
        alpha_d(np.column_stack([np.arange(5.0), np.arange(5.0)]))
    with pytest.raises(InputError):
        alpha_d(np.arange(5.0)[:, None])


def test_resolve_auto_alpha():
    P = polygon(20)
    assert resolve_alpha("auto", P) == pytest.approx(min(0.1, 0.9 * alpha_d(P)))
    assert resolve_alpha("auto", np.arange(5.0)[:, None]) == 0.1


def test_empty_region_context():
    X = np.random.default_rng(6).normal(size=(30, 2))
    with pytest.raises(EmptyRegionError) as err:
        ptm(X, TrimSpec(0.95))
    ctx = err.value.context
    assert {"alpha", "max_data_depth", "alpha_star", "alpha_d"} <= set(ctx)


def test_breakdown_probe_polygon():
    P = polygon(20)
    spec = TrimSpec(0.9 * alpha_d(P))
    assert breakdown_probe(P, spec, m=0) < 1e-12
    # fewer than the breakdown count: bounded; enough points: trimmed set empties or moves
    assert breakdown_probe(P, spec, m=8, magnitude=1e8) < 10
    with pytest.raises(InputError):
        breakdown_probe(P, TrimSpec(0.5), m=1)


def test_breakdown_probe_gaussian_large_magnitude():
    # alpha_d is tiny for Gaussian clouds; at extreme magnitudes the far site is still trimmed
    X = np.random.default_rng(7).normal(size=(20, 2))
    spec = TrimSpec(0.9 * alpha_d(X))
    for mag in (1e6, 1e8):
        assert breakdown_probe(X, spec, m=8, magnitude=mag) < 5


def test_estimator_api():
    X = np.random.default_rng(8).normal(size=(40, 2))
    est = ProjectionTrimmedMean(alpha=0.2, weight="power", power=2.0).fit(X)
    assert est.location_.shape == (2,) and est.alpha_ == 0.2 and est.support_.dtype == bool
    assert est.depth_.shape == (40,) and est.n_features_in_ == 2
    assert np.allclose(est.location_, ptm(X, TrimSpec(0.2, PowerWeight(2.0))))
    assert ProjectionTrimmedMean(alpha="auto").fit(X).alpha_ <= 0.1
    with pytest.raises(ValueError):
        ProjectionTrimmedMean(weight="huber").fit(X)
    est = ProjectionTrimmedMean(pair="meansd").fit(X)
    assert np.all(np.isfinite(est.location_))
    assert ProjectionTrimmedMean().get_params()["alpha"] == 0.1
