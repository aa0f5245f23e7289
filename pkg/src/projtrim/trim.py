"""Projection-depth trimmed mean, trimming threshold and breakdown tools.

``PTM = sum_i w(PD_i) X_i 1{PD_i >= alpha} / sum_i w(PD_i) 1{PD_i >= alpha}``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Union

import numpy as np
from scipy.optimize import minimize, minimize_scalar
from sklearn.base import BaseEstimator

from ._validation import check_cloud
from .depth import DepthFunction, _random_sphere, fit_depth, make_strategy
from .errors import EmptyRegionError, GeneralPositionError, InputError
from .regions import projection_median
from .univariate import LocationScalePair

__all__ = [
    "ConstantWeight",
    "PowerWeight",
    "TrimSpec",
    "TrimResult",
    "AlphaD",
    "BreakdownReport",
    "ptm",
    "ptm_fit",
    "alpha_d",
    "alpha_d_details",
    "resolve_alpha",
    "breakdown_point",
    "breakdown_report",
    "breakdown_probe",
    "ProjectionTrimmedMean",
]


# ---------------------------------------------------------------------------
# weights


@dataclass(frozen=True)
class ConstantWeight:
    """``w(r) = 1``."""

    def __call__(self, r):
        return np.ones_like(np.asarray(r, dtype=float))

    def derivative(self, r):
        return np.zeros_like(np.asarray(r, dtype=float))

    @property
    def is_constant(self) -> bool:
        return True

    def tag(self) -> str:
        return "constant"


@dataclass(frozen=True)
class PowerWeight:
    """``w(r) = r**p`` with ``p >= 0``; ``p = 0`` is the constant weight."""

    p: float = 1.0

    def __post_init__(self):
        if not self.p >= 0:
            raise ValueError("power weight needs p >= 0")

    def __call__(self, r):
        return np.power(np.asarray(r, dtype=float), self.p)

    def derivative(self, r):
        r = np.asarray(r, dtype=float)
        if self.p == 0:
            return np.zeros_like(r)
        return self.p * np.power(r, self.p - 1)

    @property
    def is_constant(self) -> bool:
        return self.p == 0

    def tag(self) -> str:
        return f"power({self.p:g})"


Weight = Union[ConstantWeight, PowerWeight]


@dataclass(frozen=True)
class TrimSpec:
    """Trimming level and weight; ``alpha`` may be ``"auto"``."""

    alpha: Union[float, str] = 0.1
    weight: Weight = ConstantWeight()

    def __post_init__(self):
        if self.alpha != "auto":
            a = float(self.alpha)
            if not 0 < a < 1:
                raise InputError(f"alpha must lie in (0, 1), got {self.alpha!r}", alpha=a)

    @property
    def beta(self) -> float:
        a = float(self.alpha)
        return (1.0 - a) / a


# ---------------------------------------------------------------------------
# alpha_d


@dataclass
class AlphaD:
    """Data-dependent trimming threshold and its certificate."""

    alpha_d: float
    ratio: float
    direction: np.ndarray
    exact: bool
    method: str


def _spread_ratio(X, U, d):
    P = np.sort(X @ U.T, axis=0)
    rng = P[-1] - P[0]
    win = (P[d:] - P[:-d]).min(axis=0)
    with np.errstate(divide="ignore", invalid="ignore"):
        return rng, win, np.where(win > 0, rng / (0.5 * win), np.inf)


def alpha_d_details(data, n_grid: int = 4096, n_random: int = 20000, seed: int = 0) -> AlphaD:
    """Compute the trimming threshold ``alpha_d`` with its maximising direction.

    ``(1 - alpha_d) / alpha_d`` is the maximum over directions of the range of
    the projections divided by half the smallest spread of ``d + 1``
    projected points.  In the plane the maximum is taken over a 4096-angle
    grid plus every angle where two projections coincide, then refined by
    bounded scalar search; for ``d >= 3`` random directions with simplex
    refinement give a lower bound on the ratio (an upper bound on
    ``alpha_d``).
    """
    X = check_cloud(data)
    n, d = X.shape
    if d < 2:
        raise InputError("alpha_d is defined for d >= 2")
    if n < d + 1:
        raise InputError(f"alpha_d needs at least d+1={d + 1} points, got {n}", n=n, d=d)
    Xc = X - np.median(X, axis=0)
    scale = float(np.abs(Xc).max()) + 1e-300

    if d == 2:
        i, j = np.triu_indices(n, 1)
        V = Xc[i] - Xc[j]
        ev = (np.arctan2(V[:, 1], V[:, 0]) + 0.5 * np.pi) % np.pi
        th = np.unique(np.concatenate([np.arange(n_grid) * np.pi / n_grid, ev]))
        U = np.column_stack([np.cos(th), np.sin(th)])
        rng, win, ratio = _spread_ratio(Xc, U, d)
        if np.any(win <= 1e-12 * scale):
            raise GeneralPositionError("data are not in general position (d+1 points on a line)",
                                       n=n, d=d)

        def neg(t):
            return -_spread_ratio(Xc, np.array([[np.cos(t), np.sin(t)]]), d)[2][0]

        # refine around the largest local maxima on the cyclic angle list
        prev, nxt = np.roll(ratio, 1), np.roll(ratio, -1)
        peaks = np.nonzero((ratio >= prev) & (ratio >= nxt))[0]
        peaks = peaks[np.argsort(-ratio[peaks])][:32]
        best_t, best = th[int(np.argmax(ratio))], float(ratio.max())
        thx = np.concatenate([[th[-1] - np.pi], th, [th[0] + np.pi]])
        for p in peaks:
            lo, hi = thx[p], thx[p + 2]
            res = minimize_scalar(neg, bounds=(lo, hi), method="bounded",
                                  options={"xatol": 1e-13})
            if -res.fun > best:
                best, best_t = -float(res.fun), float(res.x)
        u = np.array([np.cos(best_t), np.sin(best_t)])
        return AlphaD(1.0 / (1.0 + best), best, u, True, "grid+events+refine")

    U = _random_sphere(n_random, d, seed)
    rng, win, ratio = _spread_ratio(Xc, U, d)
    if np.any(win <= 1e-12 * scale):
        raise GeneralPositionError("data are not in general position", n=n, d=d)
    order = np.argsort(-ratio)[:8]
    best_u, best = U[order[0]], float(ratio[order[0]])

    def neg(z):
        nz = np.linalg.norm(z)
        if nz == 0:
            return 0.0
        return -_spread_ratio(Xc, (z / nz)[None, :], d)[2][0]

    for o in order:
        res = minimize(neg, U[o], method="Nelder-Mead",
                       options=dict(maxiter=400, xatol=1e-10, fatol=1e-12))
        if -res.fun > best:
            best, best_u = -float(res.fun), res.x / np.linalg.norm(res.x)
    return AlphaD(1.0 / (1.0 + best), best, best_u, False, f"random_sphere({n_random})+simplex")


def alpha_d(data) -> float:
    """Largest trimming level with the breakdown guarantee (see :func:`alpha_d_details`)."""
    return alpha_d_details(data).alpha_d


def resolve_alpha(alpha, data) -> float:
    """Numeric ``alpha``; ``"auto"`` means ``min(0.1, 0.9 * alpha_d)`` (0.1 when d=1)."""
    if alpha != "auto":
        return float(alpha)
    X = check_cloud(data)
    if X.shape[1] == 1:
        return 0.1
    return min(0.1, 0.9 * alpha_d(X))


# ---------------------------------------------------------------------------
# trimmed mean


@dataclass
class TrimResult:
    """PTM together with the depths and the trimmed-in set."""

    location: np.ndarray
    alpha: float
    depth: np.ndarray
    support: np.ndarray
    weights: np.ndarray
    method: str = ""

    @property
    def n_trimmed(self) -> int:
        return int((~self.support).sum())


def _inside(O, beta):
    return O <= beta + 1e-12 * max(1.0, beta)


def ptm_fit(data, spec: Optional[TrimSpec] = None, pair=None, strategy=None) -> TrimResult:
    """Projection-depth trimmed mean with diagnostics (see :func:`ptm`)."""
    spec = spec or TrimSpec()
    f = data if isinstance(data, DepthFunction) else fit_depth(data, pair, strategy)
    X = f.data
    a = resolve_alpha(spec.alpha, X)
    beta = (1.0 - a) / a
    O = f.outlyingness(X)
    with np.errstate(over="ignore"):
        depth = np.where(np.isinf(O), 0.0, 1.0 / (1.0 + O))
    keep = _inside(O, beta)
    if not keep.any():
        ctx = {"alpha": a, "max_data_depth": float(depth.max())}
        try:
            ctx["alpha_star"] = projection_median(f).depth_at_center
        except Exception:  # noqa: BLE001 - context only
            pass
        if X.shape[1] >= 2:
            try:
                ctx["alpha_d"] = alpha_d(X)
            except Exception:  # noqa: BLE001
                pass
        raise EmptyRegionError(f"no data point has depth >= alpha={a:g}; see alpha_d for a safe level", **ctx)
    w = np.where(keep, spec.weight(depth), 0.0)
    if w.sum() <= 0:
        raise EmptyRegionError("all trimmed-in weights are zero", alpha=a)
    loc = (w[:, None] * X).sum(axis=0) / w.sum()
    return TrimResult(loc, a, depth, keep, w, f.method)


def ptm(data, spec: Optional[TrimSpec] = None, pair=None, strategy=None) -> np.ndarray:
    """Projection-depth trimmed mean.

    Parameters
    ----------
    data : array_like of shape (n, d) or DepthFunction
    spec : TrimSpec, default=TrimSpec(0.1)
    pair : LocationScalePair, default=(Med, MAD_k)
    strategy : direction strategy, default exact sweep in the plane

    Returns
    -------
    ndarray of shape (d,)

    Raises
    ------
    EmptyRegionError
        If no data point has depth at least ``alpha``.
    """
    return ptm_fit(data, spec, pair, strategy).location


# ---------------------------------------------------------------------------
# breakdown


@dataclass
class BreakdownReport:
    n: int
    d: int
    k: int
    bp: Fraction
    alpha_d: Optional[float] = None

    @property
    def count(self) -> int:
        """Smallest number of replaced points that can break the estimator."""
        return int(self.bp * self.n)


def breakdown_point(n: int, d: int, k: int) -> Fraction:
    """Finite-sample replacement breakdown point of PTM as an exact fraction.

    ``d = 1``: ``floor((n-k+2)/2)/n``; ``d > 1``:
    ``min(floor((n+k+1-2d)/2), floor((n-k+2)/2))/n``.
    """
    for name, v in (("n", n), ("d", d), ("k", k)):
        if int(v) != v or v < 1:
            raise InputError(f"{name} must be a positive integer, got {v!r}")
    n, d, k = int(n), int(d), int(k)
    if k > n:
        raise InputError(f"k={k} exceeds n={n}", n=n, k=k)
    if d > 1 and n < d + 1:
        raise InputError(f"need n >= d+1 for d > 1, got n={n}, d={d}", n=n, d=d)
    if d == 1:
        num = (n - k + 2) // 2
    else:
        num = min((n + k + 1 - 2 * d) // 2, (n - k + 2) // 2)
    if num <= 0:
        raise InputError("no positive breakdown point for this (n, d, k)", n=n, d=d, k=k)
    return Fraction(num, n)


def breakdown_report(data, k: Optional[int] = None) -> BreakdownReport:
    X = check_cloud(data)
    n, d = X.shape
    k = LocationScalePair("medmad", k).resolve_k(d)
    ad = alpha_d(X) if d >= 2 else None
    return BreakdownReport(n, d, k, breakdown_point(n, d, k), ad)


def breakdown_probe(data, spec: Optional[TrimSpec] = None, m: int = 0, magnitude: float = 1e8,
                    seed: int = 0, pair=None, strategy=None) -> float:
    """Norm of PTM after moving ``m`` points to one far site.

    ``m`` points chosen at random (seeded) are replaced by the single site
    ``magnitude * v`` for a random unit vector ``v``.  If the trimmed set of
    the contaminated sample is empty the estimator has broken down and
    ``inf`` is returned.
    """
    X = check_cloud(data)
    n, d = X.shape
    if not 0 <= m < n:
        raise InputError(f"m must satisfy 0 <= m < n, got m={m}", m=m, n=n)
    spec = spec or TrimSpec("auto")
    a = resolve_alpha(spec.alpha, X)
    if d >= 2:
        ad = alpha_d(X)
        if a > ad * (1 + 1e-12):
            raise InputError(f"alpha={a:g} exceeds alpha_d={ad:g}", alpha=a, alpha_d=ad)
    rng = np.random.Generator(np.random.Philox(key=int(seed) % (1 << 64)))
    idx = rng.choice(n, size=m, replace=False)
    v = rng.standard_normal(d)
    v /= np.linalg.norm(v)
    Z = X.copy()
    Z[idx] = magnitude * v
    try:
        T = ptm(Z, TrimSpec(a, spec.weight), pair, strategy)
    except EmptyRegionError:
        return float("inf")
    return float(np.linalg.norm(T))


# ---------------------------------------------------------------------------
# estimator


def _make_weight(weight, power):
    if weight == "constant":
        return ConstantWeight()
    if weight == "power":
        return PowerWeight(power)
    if isinstance(weight, (ConstantWeight, PowerWeight)):
        return weight
    raise ValueError(f"unknown weight {weight!r}")


class ProjectionTrimmedMean(BaseEstimator):
    """Projection-depth trimmed mean estimator.

    Parameters
    ----------
    alpha : float or "auto", default=0.1
        Depth trimming level; ``"auto"`` uses ``min(0.1, 0.9 * alpha_d)``.
    weight : {"constant", "power"}, default="constant"
    power : float, default=1.0
        Exponent of the power weight ``w(r) = r**power``.
    pair : {"medmad", "meansd"}, default="medmad"
    k : int or None, default=None
    strategy : str or strategy object, default="auto"
    random_state : int, default=0

    Attributes
    ----------
    location_ : ndarray of shape (d,)
    alpha_ : float
        Trimming level actually used.
    depth_ : ndarray of shape (n,)
        Depth of each training point.
    support_ : ndarray of bool
        Trimmed-in points.
    n_features_in_ : int

    Examples
    --------
    >>> import numpy as np
    >>> X = np.array([[1, 0], [-1, 0], [0, 1], [0, -1.]])
    >>> ProjectionTrimmedMean(alpha=0.2).fit(X).location_
    array([0., 0.])
    """

    def __init__(self, alpha=0.1, weight="constant", power=1.0, pair="medmad", k=None,
                 strategy="auto", random_state=0):
        self.alpha = alpha
        self.weight = weight
        self.power = power
        self.pair = pair
        self.k = k
        self.strategy = strategy
        self.random_state = random_state

    def fit(self, X, y=None):
        X = check_cloud(X)
        f = fit_depth(X, LocationScalePair(self.pair, self.k),
                      make_strategy(self.strategy, X.shape[1], seed=self.random_state))
        res = ptm_fit(f, TrimSpec(self.alpha, _make_weight(self.weight, self.power)))
        self.location_ = res.location
        self.alpha_ = res.alpha
        self.depth_ = res.depth
        self.support_ = res.support
        self.n_features_in_ = X.shape[1]
        return self
