"""Input validation helpers."""

from __future__ import annotations

import numpy as np

from .errors import InputError


def check_cloud(data, min_points: int = 1, name: str = "data") -> np.ndarray:
    """Return ``data`` as a finite float array of shape ``(n, d)``.

    One-dimensional input is read as ``n`` univariate observations.
    """
    X = np.asarray(data, dtype=float)
    if X.ndim == 1:
        X = X[:, None]
    if X.ndim != 2:
        raise InputError(f"{name} must be a 2-D array, got shape {X.shape}", shape=list(X.shape))
    n, d = X.shape
    if d < 1:
        raise InputError(f"{name} has no coordinates", shape=[n, d])
    if n < min_points:
        raise InputError(f"{name} needs at least {min_points} points, got {n}", n=n, required=min_points)
    if not np.all(np.isfinite(X)):
        bad = np.argwhere(~np.isfinite(X))[0]
        raise InputError(f"{name} contains a non-finite value at row {bad[0]}, column {bad[1]}",
                         row=int(bad[0]), column=int(bad[1]))
    return X


def check_points(x, d: int, name: str = "x") -> tuple[np.ndarray, bool]:
    """Return query points as ``(q, d)`` plus a flag telling if a single point was given."""
    P = np.asarray(x, dtype=float)
    single = P.ndim <= 1 and (P.size == d)
    if P.ndim == 0:
        P = P.reshape(1, 1)
    elif P.ndim == 1:
        P = P.reshape(1, d) if single else P.reshape(-1, 1)
    if P.ndim != 2 or P.shape[1] != d:
        raise InputError(f"{name} has dimension {P.shape[-1]}, expected {d}", expected=d)
    if not np.all(np.isfinite(P)):
        raise InputError(f"{name} contains non-finite values")
    return P, single


def check_direction(u, d: int) -> np.ndarray:
    v = np.asarray(u, dtype=float).ravel()
    if v.size != d:
        raise InputError(f"direction has dimension {v.size}, expected {d}", expected=d)
    nrm = np.linalg.norm(v)
    if not np.isfinite(nrm) or nrm == 0:
        raise InputError("direction must be a nonzero finite vector")
    return v / nrm


def check_alpha(alpha, upper: float = 1.0) -> float:
    a = float(alpha)
    if not (0.0 < a < upper):
        raise InputError(f"alpha must lie in (0, {upper}), got {alpha!r}", alpha=a)
    return a
