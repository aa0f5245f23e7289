import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from projtrim.univariate import LocationScalePair, evaluate_pair, mad_k, mean_sd, med_k


@pytest.mark.parametrize("xs,k,expected", [
    ([1, 2, 3], 1, 2.0),
    ([1, 2, 3, 4], 1, 2.5),
    ([1, 2, 3, 4], 3, 3.5),
])
def test_med_k_values(xs, k, expected):
    assert med_k(xs, k) == expected


@pytest.mark.parametrize("xs,expected", [([-1, 0, 1], 1.0), ([0, 0, 0, 10], 0.0)])
def test_mad_k_values(xs, expected):
    assert mad_k(xs, 1) == expected


def test_mad_normal_population_value():
    x = np.random.default_rng(0).standard_normal(10**6)
    assert abs(mad_k(x, 1) - 0.6745) < 0.01


@pytest.mark.parametrize("xs,expected", [([1, 1, 1], (1, 0)), ([0, 2], (1, 1)), ([-3, 0, 3], (0, np.sqrt(6)))])
def test_mean_sd_values(xs, expected):
    assert mean_sd(xs) == pytest.approx(expected, abs=1e-15)


def test_evaluate_pair_dispatch():
    assert evaluate_pair(LocationScalePair("medmad", 1), [-1, 0, 1]) == (0, 1)
    assert evaluate_pair(LocationScalePair("meansd"), [0, 2]) == (1, 1)
    assert evaluate_pair(LocationScalePair("medmad", 3), [1, 2, 3, 4]) == (2.5, 1.5)


def test_default_k():
    p = LocationScalePair()
    assert p.resolve_k(1) == 1 and p.resolve_k(2) == 3 and p.resolve_k(5) == 6
    assert LocationScalePair("medmad", 2).resolve_k(7) == 2


@pytest.mark.parametrize("bad", [[], [1.0, np.nan], [np.inf]])
def test_rejects_bad_samples(bad):
    with pytest.raises(ValueError):
        med_k(bad)
    with pytest.raises(ValueError):
        mean_sd(bad)


def test_rejects_k_out_of_range():
    with pytest.raises(ValueError):
        med_k([1, 2, 3], 4)
    with pytest.raises(ValueError):
        mad_k([1, 2, 3], 0)
    with pytest.raises(ValueError):
        LocationScalePair("medmad", 0)
    with pytest.raises(ValueError):
        LocationScalePair("trimmed")


def test_mad_zero_on_degenerate_samples():
    # at least floor((n+k+1)/2) deviations vanish -> MAD_k = 0
    assert mad_k([5, 5, 5, 5, 9], 1) == 0
    assert mad_k([5, 5, 5, 9, 9], 2) > 0
    assert mad_k([2, 2, 2, 2, 2, 7], 3) == 0


samples = st.lists(st.floats(-1e3, 1e3, allow_nan=False), min_size=1, max_size=40)


@settings(max_examples=200, deadline=None)
@given(samples, st.floats(-50, 50).filter(lambda s: abs(s) > 1e-3), st.floats(-100, 100), st.integers(1, 4))
def test_location_scale_equivariance(xs, s, c, k):
    x = np.array(xs)
    k = min(k, x.size)
    y = s * x + c
    tol = 1e-9 * (1 + np.abs(y).max())
    # Med_k with k > 1 averages upper-middle order statistics: equivariant for s > 0 only
    if s > 0 or k == 1:
        assert abs(med_k(y, k) - (s * med_k(x, k) + c)) <= tol
    assert abs(mad_k(y, k) - abs(s) * mad_k(x, k)) <= tol
    m, sd = mean_sd(x)
    my, sdy = mean_sd(y)
    assert abs(my - (s * m + c)) <= tol and abs(sdy - abs(s) * sd) <= tol


@settings(max_examples=100, deadline=None)
@given(samples, st.randoms(use_true_random=False))
def test_permutation_invariance(xs, rnd):
    ys = list(xs)
    rnd.shuffle(ys)
    assert med_k(xs) == med_k(ys)
    assert mad_k(xs) == mad_k(ys)
