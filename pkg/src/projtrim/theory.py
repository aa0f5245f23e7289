"""Influence functions and asymptotic efficiency at elliptical models.

Everything here is population-level: the sample enters only through the
Monte Carlo used for the asymptotic variance.  Conventions: ``sign(0) = 0``
and indicators ``I(a <= b)`` include the boundary.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy import integrate, optimize, special, stats

from .errors import InputError, UndefinedInfluenceError
from .trim import ConstantWeight, PowerWeight
from .univariate import LocationScalePair

__all__ = [
    "ZSpec",
    "EllipticalModel",
    "IFConstants",
    "if_constants",
    "if_radius",
    "contaminated_functionals",
    "contaminated_radius",
    "jacobian",
    "if_ptm",
    "IFTerms",
    "gre",
    "GreResult",
    "score_functions",
    "ScoreValues",
    "asy_variance",
    "AsyVariance",
    "are_vs_mean",
]

M0 = float(stats.norm.ppf(0.75))

MEDMAD = LocationScalePair("medmad", 1)
MEANSD = LocationScalePair("meansd")


# ---------------------------------------------------------------------------
# model


@dataclass(frozen=True)
class ZSpec:
    """Generator ``Z`` of an elliptical family (``u'(X - theta) ~ sqrt(u'Su) Z``).

    ``h0``, ``hm0`` are the density of ``Z`` at 0 and at ``m0 = MAD(Z)``.
    """

    h0: float
    hm0: float
    m0: float
    sigma_z: float = 1.0
    name: str = "custom"

    @classmethod
    def standard_normal(cls) -> "ZSpec":
        return cls(float(stats.norm.pdf(0.0)), float(stats.norm.pdf(M0)), M0, 1.0, "normal")

    @property
    def is_normal(self) -> bool:
        return self.name == "normal"

    def scaled_densities(self, s: float) -> "ZSpec":
        """Same ``m0``/``sigma_z`` with both density values multiplied by ``s``."""
        return ZSpec(self.h0 * s, self.hm0 * s, self.m0, self.sigma_z, self.name + "*")


@dataclass
class EllipticalModel:
    """Elliptical distribution ``F_{theta, Sigma}`` with generator ``z``."""

    theta: Optional[np.ndarray] = None
    sigma: Optional[np.ndarray] = None
    z: ZSpec = field(default_factory=ZSpec.standard_normal)
    d: int = 2

    def __post_init__(self):
        if self.sigma is not None:
            S = np.atleast_2d(np.asarray(self.sigma, dtype=float))
            if S.shape[0] != S.shape[1] or not np.allclose(S, S.T):
                raise InputError("sigma must be a symmetric matrix")
            w, V = np.linalg.eigh(S)
            if w.min() <= 0:
                raise InputError("sigma must be positive definite")
            self.sigma = S
            self.d = S.shape[0]
            self._half = (V * np.sqrt(w)) @ V.T
            self._ihalf = (V / np.sqrt(w)) @ V.T
        else:
            self._half = self._ihalf = None
        if self.theta is not None:
            self.theta = np.asarray(self.theta, dtype=float).ravel()
            self.d = self.theta.size

    @classmethod
    def standard(cls, d: int = 2) -> "EllipticalModel":
        return cls(d=d)

    @property
    def is_standard(self) -> bool:
        return self._half is None and (self.theta is None or not np.any(self.theta))

    def standardize(self, x):
        """``Sigma^{-1/2}(x - theta)`` for rows of ``x``."""
        x = np.asarray(x, dtype=float)
        if self.theta is not None:
            x = x - self.theta
        return x if self._ihalf is None else x @ self._ihalf

    def unstandardize_direction(self, v):
        return v if self._half is None else v @ self._half

    def inv(self):
        return np.eye(self.d) if self.sigma is None else np.linalg.inv(self.sigma)

    def density_at_radius(self, r):
        """Density of the standardized normal model at radius ``r``."""
        if not self.z.is_normal:
            raise NotImplementedError("density only available for the normal generator")
        r = np.asarray(r, dtype=float)
        return np.exp(-0.5 * r * r) / (2 * np.pi) ** (self.d / 2)


def _sign(v):
    return np.sign(v)


# ---------------------------------------------------------------------------
# radius influence


def _check_direction(u, d):
    u = np.asarray(u, dtype=float)
    n = np.linalg.norm(u, axis=-1, keepdims=True)
    if u.shape[-1] != d or np.any(n == 0):
        raise InputError(f"direction must be a nonzero {d}-vector")
    return u / n


def _if_radius_std(t, s, beta, alpha, z, pair):
    """Radius IF with ``t = u'S^{-1}x`` and ``s = ||S^{-1/2}u||`` (vectorised)."""
    if pair.kind == "medmad":
        return (beta * _sign(np.abs(t) - s * z.m0) / (4 * z.hm0) + _sign(t) / (2 * z.h0)) / s
    sz = z.sigma_z
    return ((1 - alpha) * (t * t - (s * sz) ** 2) / (2 * alpha * s * sz) + t) / (s * s)


def if_radius(x, u, alpha: float, model: Optional[EllipticalModel] = None, pair=MEDMAD,
              tol: float = 1e-12):
    """Influence function of the directional radius ``R^alpha(u, F)`` at ``x``.

    For (Med, MAD) the value is a step function of ``x`` and is undefined where
    ``u'S^{-1}x = 0`` or ``|u'S^{-1}x| = ||S^{-1/2}u|| m0`` (``x != 0``); such
    points raise :class:`UndefinedInfluenceError`.

    Parameters
    ----------
    x : array_like of shape (d,)
    u : array_like of shape (d,) or (m, d)
    alpha : float
    model : EllipticalModel, default standard normal in the plane
    pair : LocationScalePair
    tol : float
        Half-width of the excluded band around the jump set.

    Returns
    -------
    float or ndarray of shape (m,)
    """
    x = np.asarray(x, dtype=float).ravel()
    model = model or EllipticalModel(d=x.size)
    U = _check_direction(u, x.size)
    Si = model.inv()
    xc = x if model.theta is None else x - model.theta
    t = np.atleast_2d(U) @ Si @ xc
    s = np.sqrt(np.einsum("ij,jk,ik->i", np.atleast_2d(U), Si, np.atleast_2d(U)))
    beta = (1 - alpha) / alpha
    if pair.kind == "medmad" and np.any(xc):
        bad = (np.abs(t) <= tol) | (np.abs(np.abs(t) - s * model.z.m0) <= tol)
        if bad.any():
            raise UndefinedInfluenceError("radius influence function undefined at this (x, u)",
                                          x=x.tolist())
    out = _if_radius_std(t, s, beta, alpha, model.z, pair)
    return float(out[0]) if U.ndim == 1 else out


def _folded_quantile(p, shift):
    """Quantile of ``|Z - shift|`` for standard normal ``Z``."""
    cdf = lambda q: stats.norm.cdf(shift + q) - stats.norm.cdf(shift - q) - p
    hi = abs(shift) + 10.0
    return optimize.brentq(cdf, 0.0, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps)


def contaminated_functionals(u, eps: float, x, model: Optional[EllipticalModel] = None):
    """Median and MAD of the projection of ``(1 - eps) F + eps delta_x`` onto ``u``.

    Exact for the normal generator: both are medians of three candidates,
    the lower/upper ``a``/``b``-quantiles of the clean part and the projected
    contaminating point.
    """
    if not 0 < eps < 0.5:
        raise InputError(f"eps must lie in (0, 1/2), got {eps}")
    x = np.asarray(x, dtype=float).ravel()
    model = model or EllipticalModel(d=x.size)
    if not model.z.is_normal:
        raise NotImplementedError("contaminated functionals need the normal generator")
    u = _check_direction(u, x.size)
    S = np.eye(x.size) if model.sigma is None else model.sigma
    s = float(np.sqrt(u @ S @ u))
    xc = x if model.theta is None else x - model.theta
    ux = float(u @ xc)
    a = (1 - 2 * eps) / (2 * (1 - eps))
    b = 1 / (2 * (1 - eps))
    mu = float(np.median([s * stats.norm.ppf(a), ux, s * stats.norm.ppf(b)]))
    shift = mu / s
    sig = float(np.median([s * _folded_quantile(a, shift), abs(ux - mu),
                           s * _folded_quantile(b, shift)]))
    return mu, sig


def contaminated_radius(x, u, alpha: float, eps: float):
    """Radius along ``u`` of the (Med, MAD) region of ``(1-eps) N(0, I) + eps delta_x``.

    Uses the first-order characterisation ``R = beta sigma_eps(u) + mu_eps(u)``
    (the maximising direction at ``R u`` is ``u`` itself at ``N(0, I)``).
    """
    beta = (1 - alpha) / alpha
    mu, sig = contaminated_functionals(u, eps, x)
    return beta * sig + mu


# ---------------------------------------------------------------------------
# PTM influence


def jacobian(u, r: float, d: Optional[int] = None) -> float:
    """Polar-coordinate Jacobian ``r^{d-1} prod_i sin^{d-1-i}(theta_i)``.

    The angles are the hyperspherical coordinates of ``u``; ``d = 2`` gives
    ``r`` and ``d = 1`` gives 1.
    """
    u = np.atleast_1d(np.asarray(u, dtype=float))
    d = d or u.size
    if r < 0:
        raise InputError("r must be nonnegative")
    if d == 1:
        return 1.0
    u = u / np.linalg.norm(u)
    tails = np.sqrt(np.cumsum((u * u)[::-1])[::-1])  # ||u_{i:}||
    out = r ** (d - 1)
    for i in range(d - 2):
        sin_i = tails[i + 1] / tails[i] if tails[i] > 0 else 0.0
        out *= sin_i ** (d - 2 - i)
    return float(out)


@dataclass
class IFConstants:
    """Normalising constants of the PTM influence function."""

    alpha: float
    beta: float
    c_alpha: float
    c0: float
    c1: float


def _abs_u1_mean(d):
    return special.gamma(d / 2) / (np.sqrt(np.pi) * special.gamma((d + 1) / 2))


def if_constants(alpha: float, d: int = 2, weight=ConstantWeight(), pair=MEDMAD,
                 z: Optional[ZSpec] = None) -> IFConstants:
    """``c0`` (trimmed mass under ``w``) and ``c1`` (depth-weight correction) at ``N_d(0, I)``.

    ``c1`` is zero for constant weights.  For (Med, MAD) the correction term
    of the IF is ``c1 x / ||x||``; for (mean, SD) it is ``c1 x``.
    """
    if not 0 < alpha < 1:
        raise InputError(f"alpha must lie in (0, 1), got {alpha}")
    z = z or ZSpec.standard_normal()
    beta = (1 - alpha) / alpha
    scale = z.m0 if pair.kind == "medmad" else z.sigma_z
    c = beta * scale
    chi = stats.chi(d)
    pd = lambda r: 1.0 / (1.0 + r / scale)
    if getattr(weight, "is_constant", True):
        c0 = float(chi.cdf(c)) * float(weight(1.0))
        return IFConstants(alpha, beta, c, c0, 0.0)
    c0 = integrate.quad(lambda r: weight(pd(r)) * chi.pdf(r), 0, c, epsabs=1e-13, limit=200)[0]
    if pair.kind == "medmad":
        g = lambda r: r * _abs_u1_mean(d) * weight.derivative(pd(r)) / (2 * z.h0 * scale * (1 + r / scale) ** 2)
    else:
        g = lambda r: r * weight.derivative(pd(r)) / (d * scale * (1 + r / scale) ** 2)
    c1 = integrate.quad(lambda r: g(r) * chi.pdf(r), 0, c, epsabs=1e-13, limit=200)[0]
    return IFConstants(alpha, beta, c, float(c0), float(c1))


@dataclass
class IFTerms:
    """The three additive parts of the PTM influence function."""

    l1: np.ndarray
    l2: np.ndarray
    l3: np.ndarray

    @property
    def total(self) -> np.ndarray:
        return self.l1 + self.l2 + self.l3


def _circle_l1(X, alpha, z, pair, nodes):
    """``int_0^{2pi} u IF_R(x, u) dtheta`` for rows of standardized ``X`` (d=2).

    Uniform trapezoid; for the step-function (Med, MAD) integrand the jump
    angles are inserted as extra nodes and the step value is taken at each
    sub-interval midpoint, so no node ever sits on the exclusion set.
    """
    beta = (1 - alpha) / alpha
    grid = 2 * np.pi * np.arange(nodes) / nodes
    out = np.empty_like(X)
    if pair.kind == "meansd":
        U = np.column_stack([np.cos(grid), np.sin(grid)])
        vals = _if_radius_std(X @ U.T, 1.0, beta, alpha, z, pair)
        return (2 * np.pi / nodes) * vals @ U
    for lo in range(0, len(X), 256):
        xb = X[lo:lo + 256]
        m = len(xb)
        rho = np.hypot(xb[:, 0], xb[:, 1])
        phi = np.arctan2(xb[:, 1], xb[:, 0])
        A = np.arccos(np.clip(z.m0 / np.where(rho > 0, rho, 1.0), -1, 1))
        jumps = np.column_stack([phi + 0.5 * np.pi, phi - 0.5 * np.pi,
                                 phi + A, phi - A, phi + np.pi + A, phi + np.pi - A])
        jumps[rho == 0] = 0.0
        jumps[rho <= z.m0, 2:] = 0.0
        t = np.sort(np.concatenate([np.broadcast_to(grid, (m, nodes)), jumps % (2 * np.pi)], axis=1), axis=1)
        t = np.concatenate([t, np.full((m, 1), 2 * np.pi)], axis=1)
        h = np.diff(t, axis=1)
        mid = 0.5 * (t[:, :-1] + t[:, 1:])
        proj = np.cos(mid) * xb[:, :1] + np.sin(mid) * xb[:, 1:]
        s = _if_radius_std(proj, 1.0, beta, alpha, z, pair)
        cx = 0.5 * (np.cos(t[:, :-1]) + np.cos(t[:, 1:]))
        sx = 0.5 * (np.sin(t[:, :-1]) + np.sin(t[:, 1:]))
        out[lo:lo + 256, 0] = (h * s * cx).sum(axis=1)
        out[lo:lo + 256, 1] = (h * s * sx).sum(axis=1)
    return out


def if_ptm(x, alpha: float, model: Optional[EllipticalModel] = None, weight=ConstantWeight(),
           pair=MEDMAD, nodes: int = 2048, return_terms: bool = False):
    """Influence function of the projection-depth trimmed mean at a normal model.

    Evaluated as ``l1 + l2 + l3``: the boundary term (sphere integral of the
    radius IF, trapezoid rule with ``nodes`` angles), the depth-weight term
    (zero for constant weights) and the direct term ``x w(PD(x)) I(x in
    region)``, each divided by the trimmed weight mass.  General
    ``(theta, Sigma)`` is reduced to the standard model by
    ``Sigma^{1/2} IF(Sigma^{-1/2}(x - theta))``.

    Parameters
    ----------
    x : array_like of shape (d,) or (m, d)
    alpha : float
    model : EllipticalModel, default N_2(0, I)
    weight : ConstantWeight or PowerWeight
    pair : LocationScalePair
    nodes : int
        Quadrature nodes on the circle (>= 64).
    return_terms : bool
        Return :class:`IFTerms` instead of the sum.
    """
    if nodes < 64:
        raise InputError(f"quadrature needs at least 64 nodes, got {nodes}")
    if not 0 < alpha < 1:
        raise InputError(f"alpha must lie in (0, 1), got {alpha}")
    X = np.asarray(x, dtype=float)
    single = X.ndim == 1
    X = np.atleast_2d(X)
    model = model or EllipticalModel(d=X.shape[1])
    if X.shape[1] != 2:
        raise NotImplementedError("PTM influence function is implemented for d = 2")
    if not model.z.is_normal:
        raise NotImplementedError("PTM influence function needs the normal generator")
    if not isinstance(weight, (ConstantWeight, PowerWeight)):
        raise InputError("weight must be ConstantWeight or PowerWeight")
    if isinstance(weight, PowerWeight) and 0 < weight.p < 1:
        raise InputError("power weights need p >= 1 (continuous derivative)")
    d = 2
    Z = model.standardize(X)
    z = model.z
    k = if_constants(alpha, d, weight, pair, z)
    scale = z.m0 if pair.kind == "medmad" else z.sigma_z
    R = k.c_alpha
    lead = R * float(weight(alpha)) * float(model.density_at_radius(R)) * jacobian(np.array([1.0, 0.0]), R)
    l1 = lead * _circle_l1(Z, alpha, z, pair, nodes) / k.c0
    rho = np.linalg.norm(Z, axis=1)
    if k.c1:
        if pair.kind == "medmad":
            with np.errstate(invalid="ignore", divide="ignore"):
                dirn = np.where(rho[:, None] > 0, Z / np.where(rho > 0, rho, 1.0)[:, None], 0.0)
            l2 = k.c1 * dirn / k.c0
        else:
            l2 = k.c1 * Z / k.c0
    else:
        l2 = np.zeros_like(Z)
    inside = rho <= R
    l3 = Z * (weight(1.0 / (1.0 + rho / scale)) * inside)[:, None] / k.c0
    terms = [model.unstandardize_direction(t) for t in (l1, l2, l3)]
    if return_terms:
        if single:
            terms = [t[0] for t in terms]
        return IFTerms(*terms)
    total = terms[0] + terms[1] + terms[2]
    return total[0] if single else total


# ---------------------------------------------------------------------------
# gross-error sensitivity


@dataclass
class GreResult:
    """Gross-error sensitivity; ``infinite`` when the IF keeps growing."""

    value: float
    infinite: bool
    sup_by_radius: dict

    def as_float(self) -> float:
        return float("inf") if self.infinite else self.value


def gre(if_evaluator: Callable, d: int = 2, n_angles: int = 64, inner_radius: float = 10.0,
        n_inner: int = 200, checks=(100.0, 1000.0), growth: float = 1.5) -> GreResult:
    """Sup of ``||IF(x)||`` over a polar grid with divergence detection.

    The grid covers ``||x|| <= 2 max(checks)``: ``n_inner`` radii up to
    ``inner_radius`` and a geometric tail beyond.  For each ``R`` in
    ``checks`` the sup over the circle of radius ``2R`` is compared with the
    sup over radius ``R``; a ratio above ``growth`` at every check flags +inf.
    """
    rmax = 2 * max(checks)
    radii = np.concatenate([np.linspace(0, inner_radius, n_inner),
                            np.geomspace(inner_radius, rmax, 120)[1:],
                            np.asarray(checks, float), 2 * np.asarray(checks, float)])
    radii = np.unique(radii)
    if d == 2:
        th = (np.arange(n_angles) + 0.5) * 2 * np.pi / n_angles
        U = np.column_stack([np.cos(th), np.sin(th)])
    else:
        from .depth import _random_sphere
        U = _random_sphere(n_angles, d, 0)
    P = (radii[:, None, None] * U[None]).reshape(-1, d)
    norms = np.linalg.norm(np.asarray(if_evaluator(P), dtype=float).reshape(len(P), -1), axis=1)
    per_r = norms.reshape(len(radii), len(U)).max(axis=1)
    ring = {float(r): float(per_r[np.searchsorted(radii, r)]) for r in list(checks) + [2 * c for c in checks]}
    grows = all(ring[2 * R] > growth * ring[R] for R in checks)
    return GreResult(float(per_r.max()), bool(grows), ring)


# ---------------------------------------------------------------------------
# score functions and asymptotic variance


@dataclass
class ScoreValues:
    f1: float
    f2: float
    k: float
    alpha: float


def score_functions(x, u, alpha: float, model: Optional[EllipticalModel] = None) -> ScoreValues:
    """Scores of the projected median (``f1``), MAD (``f2``) and the radius (``k``).

    ``f1 = s (1/2 - I(u'x <= 0)) / h(0)``, ``f2 = s (1/2 - I(|u'x| <= s m0)) / (2 h(m0))``
    with ``s = sqrt(u'Su)``, and ``k = f1 + beta f2``.
    Vectorised over rows of ``x``.
    """
    X = np.asarray(x, dtype=float)
    model = model or EllipticalModel(d=X.shape[-1])
    u = _check_direction(u, X.shape[-1])
    S = np.eye(X.shape[-1]) if model.sigma is None else model.sigma
    s = float(np.sqrt(u @ S @ u))
    Xc = X if model.theta is None else X - model.theta
    t = Xc @ u
    z = model.z
    f1 = s * (0.5 - (t <= 0)) / z.h0
    f2 = s * (0.5 - (np.abs(t) <= s * z.m0)) / (2 * z.hm0)
    beta = (1 - alpha) / alpha
    return ScoreValues(f1, f2, f1 + beta * f2, alpha)


@dataclass
class AsyVariance:
    """``V = b / a`` per coordinate, with the Monte Carlo standard error of ``b``."""

    a: float
    b: float
    V: float
    se_b: float = 0.0
    method: str = ""


def _cos_range_sum(lo, hi, h):
    """``sum_{j=lo}^{hi} cos(j h)`` (zero when ``hi < lo``)."""
    s = (np.sin((hi + 0.5) * h) - np.sin((lo - 0.5) * h)) / (2 * np.sin(0.5 * h))
    return np.where(hi >= lo, s, 0.0)


def _arc_cos_sum(center, half, h):
    """Sum of ``cos(theta_j)`` over uniform nodes strictly inside ``center +- half``."""
    lo = np.floor((center - half) / h) + 1
    hi = np.ceil((center + half) / h) - 1
    return _cos_range_sum(lo, hi, h)


def asy_variance(alpha: float, d: int = 2, draws: int = 10**6, nodes: int = 2048, seed: int = 0,
                 method: str = "mc") -> AsyVariance:
    """Asymptotic variance of the constant-weight (Med, MAD) PTM at ``N_d(0, I)``.

    ``a = P(chi2_d <= c^2)^2`` with ``c = beta m0``.  ``b`` is the second
    moment of the first coordinate of the influence function.

    ``method="mc"`` (d = 2): ``draws`` normal draws in antithetic pairs, the
    inner circle integral evaluated by the ``nodes``-point trapezoid rule
    (summed in closed form per draw).  ``method="closed"``: the inner
    integral reduces to ``K x1 / ||x||`` so ``b = E[(rho I(rho <= c) + K)^2] / d``
    with ``rho ~ chi_d``.
    """
    if not 0 < alpha < 1:
        raise InputError(f"alpha must lie in (0, 1), got {alpha}")
    z = ZSpec.standard_normal()
    beta = (1 - alpha) / alpha
    c = beta * z.m0
    chi = stats.chi(d)
    a = float(stats.chi2(d).cdf(c * c)) ** 2
    dens = np.exp(-0.5 * c * c) / (2 * np.pi) ** (d / 2)
    if method == "closed" or d != 2:
        area = 2 * np.pi ** (d / 2) / special.gamma(d / 2)
        K = c * dens * c ** (d - 1) * area * _abs_u1_mean(d) / (2 * z.h0)
        m1 = integrate.quad(lambda r: r * chi.pdf(r), 0, c, epsabs=1e-14)[0]
        m2 = integrate.quad(lambda r: r * r * chi.pdf(r), 0, c, epsabs=1e-14)[0]
        b = (m2 + 2 * K * m1 + K * K) / d
        return AsyVariance(a, b, b / a, 0.0, "closed")
    if method != "mc":
        raise ValueError(f"unknown method {method!r}")
    if nodes < 64:
        raise InputError("quadrature needs at least 64 nodes")
    rng = np.random.Generator(np.random.Philox(key=seed))
    h = 2 * np.pi / nodes
    lead = c * c * dens * h
    total = total_sq = 0.0
    half = draws // 2
    done = 0
    while done < half:
        m = min(200_000, half - done)
        G = rng.standard_normal((m, 2))
        vals = []
        for X in (G, -G):
            rho = np.hypot(X[:, 0], X[:, 1])
            phi = np.arctan2(X[:, 1], X[:, 0])
            s_mu = _arc_cos_sum(phi, 0.5 * np.pi, h) - _arc_cos_sum(phi + np.pi, 0.5 * np.pi, h)
            t = np.clip(z.m0 / rho, 0, 1)
            A = np.arccos(t)
            far = _arc_cos_sum(phi, A, h) + _arc_cos_sum(phi + np.pi, A, h)
            s_sig = np.where(rho > z.m0, 2 * far, 0.0)  # sum of cos over all nodes is 0
            inner = lead * (beta * s_sig / (4 * z.hm0) + s_mu / (2 * z.h0))
            vals.append((X[:, 0] * (rho <= c) + inner) ** 2)
        pair_mean = 0.5 * (vals[0] + vals[1])
        total += float(pair_mean.sum())
        total_sq += float((pair_mean ** 2).sum())
        done += m
    b = total / half
    se = np.sqrt(max(total_sq / half - b * b, 0.0) / half)
    return AsyVariance(a, b, b / a, float(se), f"mc({2 * half}, nodes={nodes})")


def are_vs_mean(alpha: float, d: int = 2, **kwargs) -> float:
    """Asymptotic efficiency ``a sigma_z^2 / b`` of the PTM relative to the mean at ``N_d(0, I)``."""
    av = asy_variance(alpha, d, **kwargs)
    return av.a / av.b
