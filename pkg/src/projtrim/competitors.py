"""Comparison estimators: Stahel-Donoho weighted mean, halfspace depth and median."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np
from sklearn.base import BaseEstimator

from ._validation import check_cloud, check_points
from .depth import DepthFunction, _random_sphere, fit_depth, make_strategy
from .errors import InputError
from .univariate import LocationScalePair

__all__ = [
    "SDWeight",
    "stahel_donoho",
    "halfspace_depth",
    "halfspace_count",
    "halfspace_median",
    "HalfspaceMedianResult",
    "StahelDonohoMean",
    "HalfspaceMedian",
]


@dataclass(frozen=True)
class SDWeight:
    """Depth-to-weight map ``w(r) = min(1, (r / r0)^power)``.

    ``r0=None`` uses the median of the sample depths.
    """

    r0: Optional[float] = None
    power: float = 2.0

    def __call__(self, depth):
        depth = np.asarray(depth, dtype=float)
        r0 = float(np.median(depth)) if self.r0 is None else float(self.r0)
        if r0 <= 0:
            return np.ones_like(depth)
        return np.minimum(depth / r0, 1.0) ** self.power


def stahel_donoho(data, pair=None, strategy=None, weight: Optional[SDWeight] = None) -> np.ndarray:
    """Projection-depth weighted mean ``sum w(PD_i) X_i / sum w(PD_i)``.

    Parameters
    ----------
    data : array_like of shape (n, d) or DepthFunction
    weight : SDWeight, default full weight above the median depth and a
        quadratic down-weighting below it.
    """
    f = data if isinstance(data, DepthFunction) else fit_depth(data, pair, strategy)
    X = f.data
    n, d = X.shape
    if n < d + 1:
        raise InputError(f"need at least d+1={d + 1} points, got {n}", n=n, d=d)
    w = (weight or SDWeight())(f.data_depth())
    if w.sum() <= 0:
        raise InputError("all Stahel-Donoho weights are zero")
    return (w[:, None] * X).sum(axis=0) / w.sum()


# ---------------------------------------------------------------------------
# halfspace depth


def _planar_counts(P, X, chunk=512):
    """Exact ``min_u #{i : u'(X_i - p) >= 0}`` for every row ``p`` of ``P`` (d=2).

    For each probe the critical directions are perpendicular to ``X_i - p``;
    the count is constant on the open arcs between them and the minimum is
    attained on an arc, so one evaluation per arc midpoint suffices.  Counts
    use a single ``searchsorted`` over row-offset, triplicated sorted angles.
    """
    n = len(X)
    out = np.empty(len(P), dtype=np.int64)
    two_pi = 2 * np.pi
    for lo in range(0, len(P), chunk):
        p = P[lo:lo + chunk]
        m = len(p)
        V = X[None, :, :] - p[:, None, :]
        same = (V[..., 0] == 0) & (V[..., 1] == 0)
        n_same = same.sum(axis=1)
        ang = np.arctan2(V[..., 1], V[..., 0]) % two_pi
        ang = np.where(same, np.inf, ang)
        ang.sort(axis=1)  # coincident points sorted last as inf
        with np.errstate(invalid="ignore"):
            crit = np.concatenate([ang + 0.5 * np.pi, ang - 0.5 * np.pi], axis=1) % two_pi
        crit.sort(axis=1)  # inf % 2pi is nan, sorted last
        # valid critical angles occupy the first 2*(n - n_same) slots after sorting (nan last)
        nxt = np.roll(crit, -1, axis=1)
        k = 2 * (n - n_same)
        idx = np.arange(2 * n)[None, :]
        last = idx == (k[:, None] - 1)
        nxt = np.where(last, crit[:, :1] + two_pi, nxt)
        mid = (0.5 * (crit + nxt)) % two_pi
        valid = idx < k[:, None]
        # triplicate sorted angles with offsets so rows do not overlap
        fa = np.where(np.isfinite(ang), ang, 7 * np.pi)
        trip = np.concatenate([fa, fa + two_pi, fa + 2 * two_pi], axis=1)
        off = (8 * np.pi * np.arange(m))[:, None]
        flat = np.sort(trip + off, axis=1).ravel()
        qlo = (mid - 0.5 * np.pi + two_pi) + off
        qhi = (mid + 0.5 * np.pi + two_pi) + off
        cnt = np.searchsorted(flat, qhi.ravel(), side="right") - np.searchsorted(flat, qlo.ravel(), side="left")
        cnt = cnt.reshape(m, 2 * n)
        cnt = np.where(valid, cnt, n + 1)
        best = cnt.min(axis=1)
        best = np.where(k == 0, 0, best)
        out[lo:lo + chunk] = best + n_same
    return out


def halfspace_count(x, data, n_directions: int = 2000, seed: int = 0) -> np.ndarray:
    """Minimum number of points in a closed halfspace containing ``x`` on its boundary."""
    X = check_cloud(data)
    n, d = X.shape
    P, single = check_points(x, d)
    if d == 1:
        c = np.minimum((X[:, 0][None, :] >= P[:, :1]).sum(axis=1), (X[:, 0][None, :] <= P[:, :1]).sum(axis=1))
    elif d == 2:
        c = _planar_counts(P, X)
    else:
        U = _random_sphere(n_directions, d, seed)
        proj = X @ U.T
        c = np.array([((proj >= p @ U.T)).sum(axis=0).min() for p in P])
    return int(c[0]) if single else c


def halfspace_depth(x, data, n_directions: int = 2000, seed: int = 0):
    """Tukey halfspace depth ``min_u #{i : u'X_i >= u'x} / n``.

    Exact for ``d <= 2``; for ``d >= 3`` the minimum over ``n_directions``
    random directions (an upper bound on the depth).
    """
    X = check_cloud(data)
    c = halfspace_count(x, X, n_directions, seed)
    return c / len(X)


@dataclass
class HalfspaceMedianResult:
    location: np.ndarray
    depth: float
    n_probes: int


def halfspace_median(data, n_grid: int = 40, n_refine: int = 3, max_pairs: int = 1000,
                     seed: int = 0) -> HalfspaceMedianResult:
    """Deepest point of the halfspace depth in the plane (heuristic search).

    Probes: the data, pairwise midpoints (subsampled), a grid over the central
    box, then ``n_refine`` zoomed grids over the current max-depth probes.
    The result is the centroid of all probes attaining the maximum depth;
    depth regions are convex so the centroid attains it too (checked).
    """
    X = check_cloud(data)
    n, d = X.shape
    if d != 2:
        if d == 1:
            loc = np.array([np.median(X[:, 0])])
            return HalfspaceMedianResult(loc, float(halfspace_depth(loc, X)), 1)
        raise NotImplementedError("halfspace median is implemented for d <= 2")
    rng = np.random.Generator(np.random.Philox(key=seed))
    i, j = np.triu_indices(n, 1)
    if len(i) > max_pairs:
        sel = np.sort(rng.choice(len(i), max_pairs, replace=False))
        i, j = i[sel], j[sel]
    lo, hi = np.quantile(X, [0.1, 0.9], axis=0)
    g = [np.linspace(lo[c], hi[c], n_grid) for c in range(2)]
    grid = np.stack(np.meshgrid(*g), -1).reshape(-1, 2)
    probes = np.vstack([X, 0.5 * (X[i] + X[j]), grid])
    counts = _planar_counts(probes, X)
    total = len(probes)
    for _ in range(n_refine):
        top = probes[counts == counts.max()]
        a, b = top.min(axis=0), top.max(axis=0)
        pad = 0.25 * (b - a) + 1e-9 * (1 + np.abs(a))
        g = [np.linspace(a[c] - pad[c], b[c] + pad[c], 30) for c in range(2)]
        new = np.stack(np.meshgrid(*g), -1).reshape(-1, 2)
        probes = np.vstack([probes, new])
        counts = np.concatenate([counts, _planar_counts(new, X)])
        total += len(new)
    best = counts.max()
    loc = probes[counts == best].mean(axis=0)
    c_loc = _planar_counts(loc[None, :], X)[0]
    if c_loc < best:  # numerical edge case; fall back to a probe
        loc = probes[int(np.argmax(counts))]
        c_loc = best
    return HalfspaceMedianResult(loc, c_loc / n, total)


# ---------------------------------------------------------------------------
# estimators


class StahelDonohoMean(BaseEstimator):
    """Projection-depth weighted mean (Stahel-Donoho type).

    Parameters
    ----------
    r0 : float or None
        Depth above which points get full weight (None: median depth).
    power : float, default=2.0
    pair, k, strategy, random_state : depth configuration
    """

    def __init__(self, r0=None, power=2.0, pair="medmad", k=None, strategy="auto", random_state=0):
        self.r0 = r0
        self.power = power
        self.pair = pair
        self.k = k
        self.strategy = strategy
        self.random_state = random_state

    def fit(self, X, y=None):
        X = check_cloud(X)
        f = fit_depth(X, LocationScalePair(self.pair, self.k),
                      make_strategy(self.strategy, X.shape[1], seed=self.random_state))
        self.location_ = stahel_donoho(f, weight=SDWeight(self.r0, self.power))
        self.n_features_in_ = X.shape[1]
        return self


class HalfspaceMedian(BaseEstimator):
    """Tukey (halfspace) median in the plane."""

    def __init__(self, n_grid=40, n_refine=3, random_state=0):
        self.n_grid = n_grid
        self.n_refine = n_refine
        self.random_state = random_state

    def fit(self, X, y=None):
        X = check_cloud(X)
        res = halfspace_median(X, self.n_grid, self.n_refine, seed=self.random_state)
        self.location_ = res.location
        self.depth_ = res.depth
        self.n_features_in_ = X.shape[1]
        return self
