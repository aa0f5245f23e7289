"""Projection outlyingness and projection depth.

``O(x) = sup_u |u'x - mu(u'X)| / sigma(u'X)`` and ``PD(x) = 1 / (1 + O(x))``.

The supremum is realised in one of three ways:

* (mean, SD): closed form, the Mahalanobis distance from the sample mean
  under the divisor-``n`` covariance.
* (Med, MAD_k) in the plane: an exact angular sweep.  Between consecutive
  breakpoints the active order statistics are index-stable, so ``g`` is a
  ratio of two sinusoids and monotone; the sup is attained at a breakpoint.
  The breakpoints do not depend on the query point, so once found the depth
  of any number of points is a maximum over a finite family of slabs.
* Otherwise: the maximum over a finite direction set (a lower bound).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from ._validation import check_cloud, check_direction, check_points
from .univariate import LocationScalePair, columnwise_location_scale, evaluate_pair

__all__ = [
    "Exact2D",
    "RandomSphere",
    "DataDriven",
    "Combined",
    "default_strategy",
    "DepthEvaluation",
    "DepthFunction",
    "fit_depth",
    "direction_set",
    "g_deviation",
    "outlyingness",
    "projection_depth",
    "sweep_exact_2d",
    "ProjectionDepth",
]

_TWO_PI = 2.0 * np.pi


# ---------------------------------------------------------------------------
# direction strategies


@dataclass(frozen=True)
class RandomSphere:
    """``count`` directions uniform on the sphere (normalised Gaussian draws).

    Directions come from a Philox stream keyed by ``seed`` and are generated
    sequentially, so direction ``i`` depends only on ``(seed, i)``.
    """

    count: int = 500
    seed: int = 0

    def tag(self) -> str:
        return f"random_sphere({self.count},seed={self.seed})"


@dataclass(frozen=True)
class DataDriven:
    """Normalised pairwise differences (and their perpendiculars when d=2)."""

    cap: Optional[int] = 500
    seed: int = 0

    def tag(self) -> str:
        return f"data_driven({self.cap},seed={self.seed})"


@dataclass(frozen=True)
class Combined:
    """Union of several finite direction strategies."""

    parts: tuple = ()

    def tag(self) -> str:
        return "+".join(p.tag() for p in self.parts)


@dataclass(frozen=True)
class Exact2D:
    """Exact angular sweep for (Med, MAD_k) in the plane.

    Above ``max_n`` points the evaluator falls back to
    ``DataDriven(fallback_cap) + RandomSphere(fallback_count)`` followed by a
    golden-section refinement of the best direction of every query point.
    """

    max_n: int = 200
    fallback_cap: int = 500
    fallback_count: int = 300
    seed: int = 0
    refine: bool = True

    def tag(self) -> str:
        return "exact2d"

    def fallback(self) -> Combined:
        return Combined((DataDriven(self.fallback_cap, self.seed),
                         RandomSphere(self.fallback_count, self.seed)))


Strategy = Union[Exact2D, RandomSphere, DataDriven, Combined]


def default_strategy(n: int, d: int, seed: int = 0) -> Strategy:
    """Exact sweep in the plane, directions from data plus the sphere otherwise."""
    if d == 2:
        return Exact2D(seed=seed)
    return Combined((DataDriven(500, seed), RandomSphere(300, seed)))


def _random_sphere(count: int, d: int, seed: int) -> np.ndarray:
    rng = np.random.Generator(np.random.Philox(key=int(seed) % (1 << 64)))
    Z = rng.standard_normal((int(count), d))
    nrm = np.linalg.norm(Z, axis=1, keepdims=True)
    nrm[nrm == 0] = 1.0
    return Z / nrm


def _data_driven(X: np.ndarray, cap, seed: int) -> np.ndarray:
    n, d = X.shape
    if cap is not None and n * (n - 1) // 2 > _MAX_PAIRS:
        # too many pairs to enumerate: sample index pairs directly
        rng = np.random.Generator(np.random.Philox(key=int(seed) % (1 << 64)))
        i, j = rng.integers(0, n, size=(2, 2 * int(cap)))
        V = X[i] - X[j]
        nrm = np.linalg.norm(V, axis=1)
        keep = nrm > 0
        V = V[keep] / nrm[keep, None]
        if d == 2:
            V = np.column_stack([V, -V[:, 1], V[:, 0]]).reshape(-1, 2)
        return V[:int(cap)]
    i, j = np.triu_indices(n, 1)
    V = X[i] - X[j]
    nrm = np.linalg.norm(V, axis=1)
    keep = nrm > 0
    V = V[keep] / nrm[keep, None]
    if d == 2:
        V = np.vstack([V, np.column_stack([-V[:, 1], V[:, 0]])])
    if cap is not None and len(V) > cap:
        rng = np.random.Generator(np.random.Philox(key=int(seed) % (1 << 64)))
        idx = np.sort(rng.choice(len(V), size=int(cap), replace=False))
        V = V[idx]
    return V


def direction_set(strategy: Strategy, data) -> np.ndarray:
    """Directions (rows) realised by a finite strategy on ``data``.

    For ``d = 1`` every strategy yields exactly ``{+1, -1}``.
    """
    X = check_cloud(data)
    d = X.shape[1]
    if d == 1:
        return np.array([[1.0], [-1.0]])
    if isinstance(strategy, RandomSphere):
        return _random_sphere(strategy.count, d, strategy.seed)
    if isinstance(strategy, DataDriven):
        V = _data_driven(X, strategy.cap, strategy.seed)
        return V if len(V) else _random_sphere(1, d, strategy.seed)
    if isinstance(strategy, Combined):
        return np.vstack([direction_set(p, X) for p in strategy.parts])
    if isinstance(strategy, Exact2D):
        return direction_set(strategy.fallback(), X)
    raise TypeError(f"unknown direction strategy {strategy!r}")


# ---------------------------------------------------------------------------
# results


@dataclass
class DepthEvaluation:
    """Outlyingness, depth and a witness direction of one point."""

    outlyingness: float
    depth: float
    witness: np.ndarray
    method: str
    multiple_witnesses: bool = False

    @property
    def is_infinite(self) -> bool:
        return bool(np.isinf(self.outlyingness))


def _depth_from_out(O):
    O = np.asarray(O, dtype=float)
    with np.errstate(over="ignore"):
        return np.where(np.isinf(O), 0.0, 1.0 / (1.0 + O))


# ---------------------------------------------------------------------------
# evaluators


class _SlabFamily:
    """``O(x) = max_j |a_j'x - b_j| / s_j`` over finitely many directions.

    Rows with ``s_j = 0`` follow the zero convention (0 if the numerator
    vanishes, +inf otherwise).  ``poles`` optionally supply one-sided limits
    ``|p_j'(x - m_j)| / |p_j'w_j|`` used where both numerator and scale vanish.
    """

    def __init__(self, A, b, s, scale, poles=None):
        self.A = np.asarray(A, dtype=float)
        self.b = np.asarray(b, dtype=float)
        self.s = np.asarray(s, dtype=float)
        self.scale = float(scale)
        self.zero_tol = 1e-13 * self.scale
        self.degenerate = self.s <= self.zero_tol
        self.poles = poles

    def __len__(self):
        return len(self.b)

    def _g(self, P):
        num = P @ self.A.T - self.b
        with np.errstate(divide="ignore", invalid="ignore"):
            g = np.abs(num) / np.where(self.degenerate, 1.0, self.s)
        if self.degenerate.any():
            deg = np.broadcast_to(self.degenerate, g.shape)
            tiny = np.abs(num) <= 1e-12 * (self.scale + np.abs(P).max(axis=1, keepdims=True))
            g = np.where(deg & tiny, 0.0, np.where(deg, np.inf, g))
        return num, g

    def evaluate(self, P, want_witness=True, chunk: int = 4_000_000):
        q, d = P.shape
        E = len(self.b)
        O = np.empty(q)
        W = np.zeros((q, d))
        multi = np.zeros(q, dtype=bool)
        step = max(1, chunk // max(E, 1))
        for lo in range(0, q, step):
            Pc = P[lo:lo + step]
            num, g = self._g(Pc)
            if self.poles is not None:
                gp, np_idx = self._pole_limits(Pc)
                better = gp > g.max(axis=1)
            o = g.max(axis=1)
            if want_witness:
                w, mm = self._witness(num, g, o, d)
                W[lo:lo + step] = w
                multi[lo:lo + step] = mm
            if self.poles is not None:
                o = np.where(better, gp, o)
                if want_witness and better.any():
                    pu = self.poles[0][np_idx[better]]
                    W[lo:lo + step][better] = pu
            O[lo:lo + step] = o
        return O, W, multi

    def _witness(self, num, g, o, d):
        rows = np.arange(len(o))
        tied = g >= o[:, None] * (1 - 1e-12) - 1e-300
        sgn = np.where(num >= 0, 1.0, -1.0)
        if d == 2:
            ang = np.arctan2(self.A[:, 1][None, :] * sgn, self.A[:, 0][None, :] * sgn) % _TWO_PI
            ang_t = np.where(tied, ang, np.inf)
            j = np.argmin(ang_t, axis=1)
            lo_ang = ang_t[rows, j]
            spread = np.where(tied, ang, -np.inf).max(axis=1) - lo_ang
            multi = (spread > 1e-9) & (spread < _TWO_PI - 1e-9)
        else:
            j = np.argmax(tied, axis=1)
            multi = tied.sum(axis=1) > 1
            if multi.any():
                # distinct directions only
                Wt = self.A[None, :, :] * sgn[:, :, None]
                ref = Wt[rows, j]
                dist = np.linalg.norm(Wt - ref[:, None, :], axis=2)
                multi = ((dist > 1e-9) & tied).any(axis=1)
        W = self.A[j] * sgn[rows, j][:, None]
        return W, multi

    def _pole_limits(self, P):
        pu, pperp, pm, pw = self.poles
        diff = P[:, None, :] - pm[None, :, :]
        num0 = np.einsum("qpd,pd->qp", diff, pu)
        num1 = np.einsum("qpd,pd->qp", diff, pperp)
        den1 = np.abs(np.einsum("pd,pd->p", pw, pperp))
        tiny = np.abs(num0) <= 1e-12 * (self.scale + np.abs(P).max(axis=1, keepdims=True))
        with np.errstate(divide="ignore", invalid="ignore"):
            lim = np.where(den1 > 0, np.abs(num1) / den1, 0.0)
        lim = np.where(tiny, lim, 0.0)
        idx = np.argmax(lim, axis=1)
        return lim[np.arange(len(P)), idx], idx


class _Mahalanobis:
    """Closed-form (mean, SD) outlyingness."""

    def __init__(self, X):
        self.mean = X.mean(axis=0)
        C = (X - self.mean).T @ (X - self.mean) / len(X)
        lam, V = np.linalg.eigh(C)
        tol = max(lam.max(), 0.0) * 1e-12 * len(lam)
        self.pos = lam > tol
        self.lam = lam
        self.V = V
        self.scale = float(np.abs(X).max() + 1.0)

    def evaluate(self, P, want_witness=True):
        Z = (P - self.mean) @ self.V
        Zp = Z[:, self.pos]
        Zn = Z[:, ~self.pos]
        O = np.sqrt(np.sum(Zp ** 2 / self.lam[self.pos], axis=1))
        null_out = np.abs(Zn).max(axis=1) > 1e-12 * self.scale if Zn.shape[1] else np.zeros(len(P), bool)
        O = np.where(null_out, np.inf, O)
        W = np.zeros_like(P)
        if want_witness:
            coef = np.zeros_like(Z)
            coef[:, self.pos] = np.where(null_out[:, None], 0.0, Zp / self.lam[self.pos])
            coef[:, ~self.pos] = np.where(null_out[:, None], Zn, 0.0)
            W = coef @ self.V.T
            nrm = np.linalg.norm(W, axis=1)
            W = np.where(nrm[:, None] > 0, W / np.where(nrm > 0, nrm, 1)[:, None], 0.0)
            W[nrm == 0, 0] = 1.0
            if P.shape[1] == 1:
                W = np.where(W >= 0, 1.0, -1.0)
        return O, W, O == 0


# ---------------------------------------------------------------------------
# exact sweep for (Med, MAD_k) in the plane


def _perp_angles(V):
    """Angles in ``[0, pi)`` of the directions orthogonal to the rows of ``V``."""
    return (np.arctan2(V[..., 1], V[..., 0]) + 0.5 * np.pi) % np.pi


def _sweep_breakpoints(X: np.ndarray, k: int, delta: float = 1e-10) -> np.ndarray:
    """Angles in ``[0, pi]`` where the active (Med, MAD_k) formula can change.

    Kinetic sweep: only the elements occupying the two median positions and
    the two MAD_k positions are tracked.  Their identities are read just after
    the current angle (at ``theta + delta``); the next breakpoint is their
    earliest crossing with any other projected value or absolute deviation,
    or a sign change of a tracked deviation.
    """
    n = len(X)
    p1, p2 = (n + 1) // 2 - 1, (n + 2) // 2 - 1
    q1, q2 = (n + k) // 2 - 1, (n + k + 1) // 2 - 1
    scale = float(np.linalg.norm(X, axis=1).max()) + 1e-300
    zero = 1e-14 * scale
    diff = X[:, None, :] - X[None, :, :]
    pair_ang = _perp_angles(diff)
    pair_ang[np.abs(diff).max(axis=2) <= zero] = np.inf
    x0, x1 = X[:, 0], X[:, 1]
    theta = 0.0
    out = [0.0]
    eps = 1e-12
    for _ in range(50 * n * n + 1000):
        c, s = np.cos(theta + delta), np.sin(theta + delta)
        p = x0 * c + x1 * s
        part = np.argpartition(p, (p1, p2))
        ma, mb = part[p1], part[p2]
        m = 0.5 * (X[ma] + X[mb])
        dev = np.abs(p - (m[0] * c + m[1] * s))
        dpart = np.argpartition(dev, (q1, q2))
        ca, cb = dpart[q1], dpart[q2]
        V = np.concatenate([X[[ca, cb]][:, None, :] + X[None, :, :] - 2.0 * m,
                            (X[[ca, cb]] - m)[:, None, :]], axis=1).reshape(-1, 2)
        a_dev = _perp_angles(V)
        a_dev[np.abs(V).max(axis=1) <= zero] = np.inf
        a = np.concatenate([pair_ang[[ma, mb, ca, cb]].ravel(), a_dev])
        a = np.where(a > theta + eps, a, a + np.pi)
        nxt = float(a.min())
        if nxt >= np.pi:
            break
        out.append(nxt)
        theta = nxt
    out.append(np.pi)
    return np.unique(np.asarray(out))


def _direct_med_mad(X, theta, k):
    """Direct (Med, MAD_k) of the projections on ``u(theta)`` for many angles."""
    U = np.column_stack([np.cos(theta), np.sin(theta)])
    return columnwise_location_scale(X @ U.T, LocationScalePair("medmad", k), 2)


def _arc_formulas(X, k, lo, hi):
    """Median point ``m`` and scale vector ``w`` valid on each arc ``[lo, hi]``.

    On the arc ``mu = u'm`` and ``sigma = u'w``.
    """
    n = len(X)
    mid = 0.5 * (lo + hi)
    U = np.column_stack([np.cos(mid), np.sin(mid)])
    P = X @ U.T
    cols = np.arange(P.shape[1])
    p1, p2 = (n + 1) // 2 - 1, (n + 2) // 2 - 1
    order = np.argpartition(P, (p1, p2), axis=0)
    m = 0.5 * (X[order[p1]] + X[order[p2]])
    R = P - np.einsum("ad,ad->a", m, U)
    q1, q2 = (n + k) // 2 - 1, (n + k + 1) // 2 - 1
    dorder = np.argpartition(np.abs(R), (q1, q2), axis=0)
    c1, c2 = dorder[q1], dorder[q2]
    s1 = np.sign(R[c1, cols])[:, None]
    s2 = np.sign(R[c2, cols])[:, None]
    w = 0.5 * (s1 * (X[c1] - m) + s2 * (X[c2] - m))
    return m, w


def _exact_slabs(X: np.ndarray, k: int):
    """Build the exact slab family for (Med, MAD_k) in the plane."""
    center = np.median(X, axis=0)
    Xc = X - center
    scale = float(np.abs(Xc).max()) + 1e-300
    bp = _sweep_breakpoints(Xc, k)
    # verify arc formulas against direct evaluation; split arcs that disagree
    n_split = 0
    for _ in range(60):
        lo, hi = bp[:-1], bp[1:]
        m, w = _arc_formulas(Xc, k, lo, hi)
        mu_b, sg_b = _direct_med_mad(Xc, bp, k)
        U = np.column_stack([np.cos(bp), np.sin(bp)])
        tol = 1e-9 * scale
        bad = ((np.abs(np.einsum("ad,ad->a", U[:-1], m) - mu_b[:-1]) > tol)
               | (np.abs(np.einsum("ad,ad->a", U[:-1], w) - sg_b[:-1]) > tol)
               | (np.abs(np.einsum("ad,ad->a", U[1:], m) - mu_b[1:]) > tol)
               | (np.abs(np.einsum("ad,ad->a", U[1:], w) - sg_b[1:]) > tol))
        bad &= (hi - lo) > 1e-13
        if not bad.any():
            break
        n_split += int(bad.sum())
        bp = np.unique(np.concatenate([bp, 0.5 * (lo[bad] + hi[bad])]))
    theta = bp[:-1]  # u(pi) = -u(0) gives the same |g|
    mu, sg = mu_b[:-1], sg_b[:-1]
    A = np.column_stack([np.cos(theta), np.sin(theta)])
    b = mu + A @ center
    poles = None
    deg = sg <= 1e-13 * scale
    if deg.any():
        # one-sided limits from the arcs adjacent to every degenerate breakpoint
        idx = np.nonzero(deg)[0]
        pu, pperp, pm, pw = [], [], [], []
        for i in idx:
            t = bp[i]
            u = np.array([np.cos(t), np.sin(t)])
            up = np.array([-np.sin(t), np.cos(t)])
            for arc in (i - 1 if i > 0 else len(bp) - 2, i):
                pu.append(u)
                pperp.append(up)
                pm.append(m[arc] + center)
                pw.append(w[arc])
        poles = tuple(np.array(a) for a in (pu, pperp, pm, pw))
    fam = _SlabFamily(A, b, sg, scale + float(np.abs(center).max()), poles)
    fam.n_split = n_split
    fam.breakpoints = bp
    return fam


# ---------------------------------------------------------------------------
# fitted depth function


class DepthFunction:
    """Sample projection depth fitted to a point cloud.

    Use :func:`fit_depth` to construct.  The object is immutable and can be
    queried for any number of points.
    """

    def __init__(self, X, pair: LocationScalePair, strategy, method: str, impl, refine=False):
        self.data = X
        self.pair = pair
        self.strategy = strategy
        self.method = method
        self._impl = impl
        self._refine = refine

    @property
    def n(self) -> int:
        return self.data.shape[0]

    @property
    def d(self) -> int:
        return self.data.shape[1]

    @property
    def is_polyhedral(self) -> bool:
        """True when the outlyingness is a max over a finite slab family."""
        return isinstance(self._impl, _SlabFamily) and not self._refine and self._impl.poles is None

    @property
    def slabs(self):
        """``(A, b, s)`` with ``O(x) = max_j |A_j x - b_j| / s_j``."""
        f = self._impl
        return f.A, f.b, f.s

    def evaluate(self, points, want_witness: bool = True):
        """Outlyingness, witness directions and tie flags for ``(q, d)`` points."""
        P, _ = check_points(points, self.d)
        O, W, multi = self._impl.evaluate(P, want_witness)
        if self._refine:
            O, W = _golden_refine(self.data, self.pair.resolve_k(2), P, O, W)
        return O, W, multi

    def outlyingness(self, points) -> np.ndarray:
        return self.evaluate(points, want_witness=False)[0]

    def depth(self, points) -> np.ndarray:
        return _depth_from_out(self.outlyingness(points))

    def data_depth(self) -> np.ndarray:
        """Depth of every data point (cached)."""
        if not hasattr(self, "_data_depth"):
            self._data_depth = self.depth(self.data)
        return self._data_depth

    def point(self, x) -> DepthEvaluation:
        P, _ = check_points(x, self.d)
        if len(P) != 1:
            raise ValueError("point() expects a single point")
        O, W, multi = self.evaluate(P)
        return DepthEvaluation(float(O[0]), float(_depth_from_out(O)[0]), W[0], self.method, bool(multi[0]))

    def scale_hint(self) -> float:
        """Typical projected scale of the data (used to bracket radii)."""
        if isinstance(self._impl, _SlabFamily):
            s = self._impl.s
            s = s[s > 0]
            return float(np.median(s)) if s.size else 1.0
        lam = self._impl.lam[self._impl.pos]
        return float(np.sqrt(np.median(lam))) if lam.size else 1.0


_PRESCAN = 9
_WITNESS_SAMPLE = 300
_WITNESS_BUDGET = 1_500_000  # cap on sample size x data size for witness sharing
_MAX_PAIRS = 2_000_000


def _golden_refine(X, k, P, O, W, iters: int = 40, max_cells: int = 4_000_000):
    """Golden-section refinement of the witness angle of each query point."""
    step = max(1, max_cells // max(len(X), 1))
    if len(P) > step:
        parts = [_golden_refine(X, k, P[i:i + step], O[i:i + step], W[i:i + step], iters, max_cells)
                 for i in range(0, len(P), step)]
        return np.concatenate([p[0] for p in parts]), np.vstack([p[1] for p in parts])
    pair = LocationScalePair("medmad", k)
    th0 = np.arctan2(W[:, 1], W[:, 0])
    gr = (np.sqrt(5.0) - 1) / 2

    def gval(th):
        U = np.column_stack([np.cos(th), np.sin(th)])
        mu, sg = columnwise_location_scale(X @ U.T, pair, 2)
        num = np.einsum("qd,qd->q", P, U) - mu
        with np.errstate(divide="ignore", invalid="ignore"):
            g = np.abs(num) / sg
        return np.where(sg > 0, g, np.where(np.abs(num) > 0, np.inf, 0.0))

    # g is only piecewise smooth: locate the best cell on a local grid first
    width, m = 0.05, _PRESCAN
    step = 2 * width / (m - 1)
    offs = np.linspace(-width, width, m)
    G = np.stack([gval(th0 + o) for o in offs])
    best = th0 + offs[np.argmax(G, axis=0)]
    a, b = best - step, best + step
    c = b - gr * (b - a)
    e = a + gr * (b - a)
    fc, fe = gval(c), gval(e)
    for _ in range(iters):
        left = fc > fe  # maximum lies in [a, e]
        a = np.where(left, a, c)
        b = np.where(left, e, b)
        c_new = np.where(left, b - gr * (b - a), e)
        e_new = np.where(left, c, a + gr * (b - a))
        probe = np.where(left, c_new, e_new)
        fp = gval(probe)
        fc, fe = np.where(left, fp, fe), np.where(left, fc, fp)
        c, e = c_new, e_new
    th = 0.5 * (a + b)
    g = gval(th)
    better = g > O
    O = np.where(better, g, O)
    U = np.column_stack([np.cos(th), np.sin(th)])
    W = np.where(better[:, None], U, W)
    return O, W


def fit_depth(data, pair: Optional[LocationScalePair] = None, strategy: Optional[Strategy] = None) -> DepthFunction:
    """Fit the sample projection depth of ``data``.

    Parameters
    ----------
    data : array_like of shape (n, d)
    pair : LocationScalePair, default=(Med, MAD_k) with the default ``k``
    strategy : direction strategy, default chosen by :func:`default_strategy`

    Returns
    -------
    DepthFunction
    """
    X = check_cloud(data)
    n, d = X.shape
    pair = (pair or LocationScalePair()).resolved(d)
    if strategy is None:
        strategy = default_strategy(n, d)
    if pair.kind == "meansd":
        return DepthFunction(X, pair, strategy, "mahalanobis", _Mahalanobis(X))
    k = pair.resolve_k(d)
    if k > n:
        raise ValueError(f"k={k} exceeds the sample size n={n}")
    if isinstance(strategy, Exact2D) and d == 2:
        if n < 2:
            raise ValueError("the exact sweep needs at least 2 points")
        if n <= strategy.max_n:
            return DepthFunction(X, pair, strategy, "exact2d", _exact_slabs(X, k))
        U = direction_set(strategy.fallback(), X)
        if not strategy.refine:
            return DepthFunction(X, pair, strategy, f"exact2d-fallback[{strategy.fallback().tag()}]",
                                 _finite_family(X, U, pair))
        # sup directions are mostly data features (kinks of Med/MAD in u) shared by many
        # points: add the refined witnesses of the data points to the candidate set
        S = X
        m = int(np.clip(_WITNESS_BUDGET // n, 20, _WITNESS_SAMPLE))
        if n > m:
            rng = np.random.Generator(np.random.Philox(key=strategy.seed))
            S = X[np.sort(rng.choice(n, m, replace=False))]
        O, W, _ = _finite_family(X, U, pair).evaluate(S, True)
        _, W = _golden_refine(X, k, S, O, W)
        U = np.vstack([U, W])
        method = f"exact2d-fallback[{strategy.fallback().tag()}+witnesses+golden]"
        return DepthFunction(X, pair, strategy, method, _finite_family(X, U, pair), refine=True)
    if isinstance(strategy, Exact2D):
        if d != 2 and d != 1:
            raise ValueError("Exact2D requires d = 2")
    U = direction_set(strategy, X)
    return DepthFunction(X, pair, strategy, "directions" if d > 1 else "exact1d", _finite_family(X, U, pair))


def _finite_family(X, U, pair):
    mu, sg = columnwise_location_scale(X @ U.T, pair, X.shape[1])
    return _SlabFamily(U, mu, sg, float(np.abs(X).max()) + 1.0)


# ---------------------------------------------------------------------------
# functional API


def g_deviation(x, u, data, pair: Optional[LocationScalePair] = None) -> float:
    """Generalised standard deviation ``(u'x - mu) / sigma`` with the zero convention."""
    X = check_cloud(data)
    d = X.shape[1]
    pair = pair or LocationScalePair()
    xv = np.asarray(x, dtype=float).ravel()
    uv = check_direction(u, d)
    mu, sg = evaluate_pair(pair, X @ uv, d)
    num = float(xv @ uv - mu)
    if sg == 0:
        if num == 0:
            return 0.0
        return float(np.copysign(np.inf, num))
    return num / sg


def outlyingness(x, data, pair=None, strategy=None) -> DepthEvaluation:
    """Projection outlyingness of a single point (see :func:`fit_depth`)."""
    return fit_depth(data, pair, strategy).point(x)


def projection_depth(x, data, pair=None, strategy=None) -> DepthEvaluation:
    """Projection depth ``1 / (1 + O)`` of a single point."""
    return outlyingness(x, data, pair, strategy)


def sweep_exact_2d(x, data, k: int = 3) -> DepthEvaluation:
    """Exact outlyingness for (Med, MAD_k) in the plane."""
    X = check_cloud(data, min_points=2)
    if X.shape[1] != 2:
        raise ValueError("the exact sweep requires d = 2")
    return fit_depth(X, LocationScalePair("medmad", k), Exact2D(max_n=np.iinfo(np.int64).max)).point(x)


# ---------------------------------------------------------------------------
# estimator


class ProjectionDepth(TransformerMixin, BaseEstimator):
    """Projection depth transformer.

    Parameters
    ----------
    pair : {"medmad", "meansd"}, default="medmad"
    k : int or None, default=None
        ``k`` of ``MAD_k``; ``None`` uses 1 for d=1 and d+1 otherwise.
    strategy : {"auto", "exact", "random", "data"}, default="auto"
    n_directions : int, default=500
        Direction count for the finite strategies.
    random_state : int, default=0

    Attributes
    ----------
    depth_function_ : DepthFunction
    n_features_in_ : int
    """

    def __init__(self, pair="medmad", k=None, strategy="auto", n_directions=500, random_state=0):
        self.pair = pair
        self.k = k
        self.strategy = strategy
        self.n_directions = n_directions
        self.random_state = random_state

    def fit(self, X, y=None):
        X = check_cloud(X)
        self.depth_function_ = fit_depth(X, LocationScalePair(self.pair, self.k),
                                         make_strategy(self.strategy, X.shape[1], self.n_directions,
                                                       self.random_state))
        self.n_features_in_ = X.shape[1]
        return self

    def outlyingness(self, X):
        check_is_fitted(self)
        return self.depth_function_.outlyingness(X)

    def score_samples(self, X):
        """Projection depth of each row of ``X``."""
        check_is_fitted(self)
        return self.depth_function_.depth(X)

    def transform(self, X):
        return self.score_samples(X)[:, None]


def make_strategy(name, d: int, n_directions: int = 500, seed: int = 0) -> Strategy:
    """Strategy from a short name: auto, exact, random, data, combined."""
    if not isinstance(name, str):
        return name
    if name == "auto":
        return default_strategy(0, d, seed)
    if name == "exact":
        return Exact2D(seed=seed)
    if name == "random":
        return RandomSphere(n_directions, seed)
    if name == "data":
        return DataDriven(n_directions, seed)
    if name == "combined":
        return Combined((DataDriven(n_directions, seed), RandomSphere(n_directions, seed)))
    raise ValueError(f"unknown strategy {name!r}")
