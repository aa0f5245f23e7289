"""Sample depth regions: deepest point, directional radii and contours.

The region ``{x : PD(x) >= alpha}`` equals ``{x : O(x) <= beta}`` with
``beta = (1 - alpha) / alpha``; all comparisons below are made on the
outlyingness scale.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.optimize import linprog, minimize
from sklearn.base import BaseEstimator

from ._validation import check_alpha, check_cloud
from .depth import DepthFunction, _SlabFamily, _depth_from_out, _random_sphere, fit_depth, make_strategy
from .errors import EmptyRegionError, InputError
from .univariate import LocationScalePair

__all__ = [
    "CenterEstimate",
    "RadiusProfile",
    "projection_median",
    "max_depth",
    "directional_radius",
    "radius_profile",
    "write_contour_csv",
    "read_contour_csv",
    "ProjectionMedian",
]

SCHEMA_VERSION = 1


@dataclass
class CenterEstimate:
    """Deepest point found and its depth."""

    location: np.ndarray
    depth_at_center: float
    method: str = ""

    @property
    def outlyingness(self) -> float:
        return 1.0 / self.depth_at_center - 1.0


@dataclass
class RadiusProfile:
    """Directional radii of a depth region around its center."""

    alpha: float
    center: np.ndarray
    directions: np.ndarray
    radii: np.ndarray
    n_dirs: int
    seed: int = 0
    method: str = ""
    thetas: Optional[np.ndarray] = None

    @property
    def points(self) -> np.ndarray:
        """Boundary points ``center + r u``."""
        return self.center + self.radii[:, None] * self.directions


_START_SAMPLE = 500


def _as_depth_function(data, pair, strategy) -> DepthFunction:
    if isinstance(data, DepthFunction):
        return data
    return fit_depth(data, pair, strategy)


def _lp_center(f: DepthFunction):
    """Minimise ``max_j |A_j x - b_j| / s_j`` as a linear program."""
    A, b, s = f.slabs
    d = A.shape[1]
    ok = s > f._impl.zero_tol
    G = A[ok] / s[ok, None]
    h = b[ok] / s[ok]
    ones = np.ones((len(h), 1))
    A_ub = np.vstack([np.hstack([G, -ones]), np.hstack([-G, -ones])])
    b_ub = np.concatenate([h, -h])
    A_eq = b_eq = None
    if (~ok).any():
        A_eq = np.hstack([A[~ok], np.zeros(((~ok).sum(), 1))])
        b_eq = b[~ok]
    c = np.zeros(d + 1)
    c[-1] = 1.0
    bounds = [(None, None)] * d + [(0, None)]
    res = linprog(c, A_ub=A_ub, b_ub=b_ub, A_eq=A_eq, b_eq=b_eq, bounds=bounds, method="highs")
    if res.status != 0:
        return None
    return res.x[:d]


def _nelder_mead_center(f: DepthFunction, starts, scale, maxiter=500):
    best_x, best_o = None, np.inf
    d = f.d
    for x0 in starts:
        simplex = np.vstack([x0, x0 + 0.1 * scale * np.eye(d)])
        res = minimize(lambda z: float(f.outlyingness(z[None, :])[0]), x0, method="Nelder-Mead",
                       options=dict(maxiter=maxiter, xatol=1e-10 * scale, fatol=1e-12,
                                    initial_simplex=simplex, adaptive=False))
        if res.fun < best_o:
            best_x, best_o = res.x, float(res.fun)
    return best_x


def projection_median(data, pair=None, strategy=None, method: str = "auto") -> CenterEstimate:
    """Deepest point of the sample projection depth.

    Parameters
    ----------
    data : array_like of shape (n, d) or DepthFunction
    pair, strategy : see :func:`projtrim.depth.fit_depth`
    method : {"auto", "lp", "nelder-mead"}
        ``"lp"`` is exact when the outlyingness is a max over finitely many
        slabs (exact sweep, finite direction sets); ``"nelder-mead"`` runs a
        simplex search from three starts (coordinatewise median, mean and the
        deepest data point).

    Returns
    -------
    CenterEstimate
    """
    f = _as_depth_function(data, pair, strategy)
    X = f.data
    n, d = X.shape
    if n < d + 1 and d > 1:
        raise InputError(f"the deepest point needs at least d+1={d + 1} points, got {n}", n=n, d=d)
    if f.pair.kind == "meansd":
        loc = X.mean(axis=0)
        return CenterEstimate(loc, float(f.depth(loc[None, :])[0]), "mean")

    # deepest data point under the unrefined family, on a subsample for large n
    S = X if n <= _START_SAMPLE else X[np.linspace(0, n - 1, _START_SAMPLE).astype(int)]
    O_data = f._impl.evaluate(S, False)[0]
    starts = [np.median(X, axis=0), X.mean(axis=0), S[int(np.argmin(O_data))]]
    probes = list(starts)
    used = "nelder-mead"
    if method in ("auto", "lp") and isinstance(f._impl, _SlabFamily) and f._impl.poles is None:
        x = _lp_center(f)
        if x is not None:
            probes.append(x)
            if f.is_polyhedral:
                used = "lp"
            else:
                # refined depth: polish the optimum of the underlying finite family
                starts = [x]
    if used != "lp":
        scale = f.scale_hint()
        probes.append(_nelder_mead_center(f, starts, scale))
    P = np.vstack(probes)
    O = f.outlyingness(P)
    i = int(np.argmin(O))
    return CenterEstimate(P[i].copy(), float(_depth_from_out(O[i])), used)


def max_depth(data, pair=None, strategy=None) -> float:
    """Sample maximum depth ``alpha*`` (depth at the projection median)."""
    return projection_median(data, pair, strategy).depth_at_center


def _bisect_radii(f: DepthFunction, center, beta, U, rtol=1e-9):
    m = len(U)
    lo = np.zeros(m)
    hi = np.full(m, max(f.scale_hint(), 1e-12))
    for _ in range(2100):
        inside = f.outlyingness(center + hi[:, None] * U) <= beta
        if not inside.any():
            break
        lo = np.where(inside, hi, lo)
        hi = np.where(inside, 2.0 * hi, hi)
        if not np.all(np.isfinite(hi)):
            raise EmptyRegionError("depth region is unbounded along some direction")
    active = hi - lo >= rtol * (1.0 + lo)
    while active.any():
        mid = 0.5 * (lo + hi)
        ins = f.outlyingness(center + mid[active, None] * U[active]) <= beta
        idx = np.nonzero(active)[0]
        lo[idx[ins]] = mid[idx[ins]]
        hi[idx[~ins]] = mid[idx[~ins]]
        active = hi - lo >= rtol * (1.0 + lo)
    return lo


def _slab_radii(f: DepthFunction, center, beta, U):
    A, b, s = f.slabs
    AU = U @ A.T
    base = (A @ center - b)[None, :]
    with np.errstate(divide="ignore", invalid="ignore"):
        up = (beta * s - base) / AU
        dn = (-beta * s - base) / AU
    r = np.where(AU > 0, up, np.where(AU < 0, dn, np.inf))
    return np.maximum(r.min(axis=1), 0.0)


def _resolve_center(f, center):
    if center is None:
        return projection_median(f)
    if isinstance(center, CenterEstimate):
        return center
    c = np.asarray(center, dtype=float).ravel()
    return CenterEstimate(c, float(f.depth(c[None, :])[0]), "given")


def directional_radius(u, alpha, data, pair=None, strategy=None, center=None, method: str = "bisection"):
    """Distance from the center to the boundary of ``{PD >= alpha}`` along ``u``.

    Parameters
    ----------
    u : array_like of shape (d,) or (m, d)
        Direction(s); normalised internally.
    alpha : float
        Depth level, ``0 < alpha < alpha* - 1e-6``.
    data : array_like or DepthFunction
    center : point or CenterEstimate, optional
        Defaults to the projection median.
    method : {"bisection", "slab"}
        ``"slab"`` intersects the ray with every slab of a polyhedral depth
        function in closed form.

    Returns
    -------
    float or ndarray
    """
    f = _as_depth_function(data, pair, strategy)
    alpha = check_alpha(alpha)
    ce = _resolve_center(f, center)
    if alpha >= ce.depth_at_center - 1e-6:
        raise EmptyRegionError(
            f"empty region: alpha={alpha} is not below the maximum depth {ce.depth_at_center:.6g}",
            alpha=alpha, alpha_star=ce.depth_at_center)
    U = np.atleast_2d(np.asarray(u, dtype=float))
    if U.shape[1] != f.d:
        raise InputError(f"direction has dimension {U.shape[1]}, expected {f.d}")
    U = U / np.linalg.norm(U, axis=1, keepdims=True)
    beta = (1.0 - alpha) / alpha
    if method == "slab":
        if not f.is_polyhedral:
            raise ValueError("closed-form radii need a polyhedral depth function")
        r = _slab_radii(f, ce.location, beta, U)
    elif method == "bisection":
        r = _bisect_radii(f, ce.location, beta, U)
    else:
        raise ValueError(f"unknown radius method {method!r}")
    return float(r[0]) if np.ndim(u) == 1 else r


def radius_profile(alpha, data, pair=None, strategy=None, n_dirs: int = 360, seed: int = 0,
                   center=None, method: str = "bisection") -> RadiusProfile:
    """Radii at ``n_dirs`` equally spaced angles (d=2) or sampled directions (d>2)."""
    f = _as_depth_function(data, pair, strategy)
    ce = _resolve_center(f, center)
    thetas = None
    if f.d == 1:
        U = np.array([[1.0], [-1.0]])
        thetas = np.array([0.0, np.pi])
    elif f.d == 2:
        thetas = 2 * np.pi * np.arange(n_dirs) / n_dirs
        U = np.column_stack([np.cos(thetas), np.sin(thetas)])
    else:
        U = _random_sphere(n_dirs, f.d, seed)
    r = directional_radius(U, alpha, f, center=ce, method=method)
    return RadiusProfile(float(alpha), ce.location, U, np.asarray(r), len(U), seed, f.method, thetas)


def write_contour_csv(profile: RadiusProfile, path) -> None:
    """Write ``theta,radius,x,y`` rows preceded by a ``#``-prefixed JSON header."""
    if profile.center.size > 2:
        raise ValueError("contour export is for d <= 2")
    header = {
        "schema_version": SCHEMA_VERSION,
        "alpha": profile.alpha,
        "center": profile.center.tolist(),
        "n_dirs": profile.n_dirs,
        "seed": profile.seed,
        "method": profile.method,
    }
    pts = profile.points
    if pts.shape[1] == 1:
        pts = np.column_stack([pts, np.zeros(len(pts))])
    with open(path, "w") as fh:
        fh.write("# " + json.dumps(header) + "\n")
        fh.write("theta,radius,x,y\n")
        for t, r, (x, y) in zip(profile.thetas, profile.radii, pts):
            fh.write(f"{float(t)!r},{float(r)!r},{float(x)!r},{float(y)!r}\n")


def read_contour_csv(path):
    """Read a contour file; returns ``(header dict, (m, 4) array)``."""
    with open(path) as fh:
        first = fh.readline()
        if not first.startswith("#"):
            raise InputError("contour file lacks its JSON header")
        header = json.loads(first[1:])
        rows = np.loadtxt(fh, delimiter=",", skiprows=1, ndmin=2)
    return header, rows


class ProjectionMedian(BaseEstimator):
    """Projection median estimator (deepest point of the projection depth).

    Parameters
    ----------
    pair : {"medmad", "meansd"}, default="medmad"
    k : int or None, default=None
    strategy : str or strategy object, default="auto"
    random_state : int, default=0

    Attributes
    ----------
    location_ : ndarray of shape (d,)
    depth_ : float
    """

    def __init__(self, pair="medmad", k=None, strategy="auto", random_state=0):
        self.pair = pair
        self.k = k
        self.strategy = strategy
        self.random_state = random_state

    def fit(self, X, y=None):
        X = check_cloud(X)
        f = fit_depth(X, LocationScalePair(self.pair, self.k),
                      make_strategy(self.strategy, X.shape[1], seed=self.random_state))
        ce = projection_median(f)
        self.location_ = ce.location
        self.depth_ = ce.depth_at_center
        self.n_features_in_ = X.shape[1]
        return self
