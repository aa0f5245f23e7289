"""Univariate location/scale functionals applied to projected samples.

Two pairs are supported: the (median, MAD_k) pair and the (mean, SD) pair.
``Med_k`` averages the ``floor((n+k)/2)``-th and ``floor((n+k+1)/2)``-th
order statistics (1-based); ``MAD_k`` is ``Med_k`` of the absolute deviations
from the ordinary median.  The SD uses divisor ``n``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

__all__ = [
    "LocationScalePair",
    "med_k",
    "mad_k",
    "mean_sd",
    "evaluate_pair",
    "columnwise_location_scale",
]


def _as_sample(xs) -> np.ndarray:
    x = np.asarray(xs, dtype=float).ravel()
    if x.size == 0:
        raise ValueError("empty sample")
    if not np.all(np.isfinite(x)):
        raise ValueError("sample contains non-finite values")
    return x


def _check_k(k, n: int) -> int:
    if int(k) != k or k < 1:
        raise ValueError(f"k must be a positive integer, got {k!r}")
    k = int(k)
    if k > n:
        raise ValueError(f"k={k} exceeds the sample size n={n}")
    return k


def _order_positions(n: int, k: int) -> tuple[int, int]:
    """0-based positions of the two order statistics averaged by Med_k."""
    return (n + k) // 2 - 1, (n + k + 1) // 2 - 1


def med_k(xs, k: int = 1) -> float:
    """Modified median ``Med_k``.

    Parameters
    ----------
    xs : array_like
        Finite sample of size ``n >= 1``.
    k : int, default=1
        Shift of the averaged order statistics, ``1 <= k <= n``. ``k=1`` is
        the ordinary median.

    Returns
    -------
    float
    """
    x = _as_sample(xs)
    k = _check_k(k, x.size)
    i, j = _order_positions(x.size, k)
    part = np.partition(x, (i, j))
    return 0.5 * (part[i] + part[j])


def mad_k(xs, k: int = 1) -> float:
    """``Med_k`` of absolute deviations from the ordinary median (unscaled)."""
    x = _as_sample(xs)
    k = _check_k(k, x.size)
    return med_k(np.abs(x - med_k(x, 1)), k)


def mean_sd(xs) -> tuple[float, float]:
    """Sample mean and standard deviation with divisor ``n``."""
    x = _as_sample(xs)
    mu = float(np.mean(x))
    return mu, float(np.sqrt(np.mean((x - mu) ** 2)))


@dataclass(frozen=True)
class LocationScalePair:
    """Selector for the univariate (location, scale) functionals.

    Parameters
    ----------
    kind : {"medmad", "meansd"}
    k : int or None
        ``k`` of ``MAD_k``.  ``None`` means the dimension-dependent default:
        1 when ``d == 1`` and ``d + 1`` otherwise.  Ignored for ``"meansd"``.
    """

    kind: str = "medmad"
    k: Optional[int] = None

    def __post_init__(self):
        if self.kind not in ("medmad", "meansd"):
            raise ValueError(f"unknown pair kind {self.kind!r}")
        if self.k is not None and (int(self.k) != self.k or self.k < 1):
            raise ValueError(f"k must be a positive integer, got {self.k!r}")

    @classmethod
    def medmad(cls, k: Optional[int] = None) -> "LocationScalePair":
        return cls("medmad", k)

    @classmethod
    def meansd(cls) -> "LocationScalePair":
        return cls("meansd", None)

    @property
    def is_medmad(self) -> bool:
        return self.kind == "medmad"

    def resolve_k(self, d: int) -> int:
        """``k`` actually used for data of dimension ``d``."""
        if self.k is not None:
            return int(self.k)
        return 1 if d == 1 else d + 1

    def resolved(self, d: int) -> "LocationScalePair":
        if self.kind == "meansd":
            return self
        return LocationScalePair("medmad", self.resolve_k(d))

    def tag(self, d: int = 2) -> str:
        if self.kind == "meansd":
            return "meansd"
        return f"medmad(k={self.resolve_k(d)})"


def evaluate_pair(pair: LocationScalePair, xs, d: int = 1) -> tuple[float, float]:
    """Evaluate ``(mu, sigma)`` of a projected sample.

    ``d`` is the dimension of the underlying point cloud; it only matters for
    resolving the default ``k``.
    """
    if pair.kind == "meansd":
        return mean_sd(xs)
    k = pair.resolve_k(d)
    return med_k(xs, 1), mad_k(xs, k)


def columnwise_location_scale(proj: np.ndarray, pair: LocationScalePair, d: int):
    """Vectorised ``(mu, sigma)`` of every column of an ``(n, m)`` array.

    Each column holds the projections of the sample onto one direction.
    """
    proj = np.asarray(proj, dtype=float)
    n = proj.shape[0]
    if pair.kind == "meansd":
        mu = proj.mean(axis=0)
        return mu, np.sqrt(np.mean((proj - mu) ** 2, axis=0))
    k = _check_k(pair.resolve_k(d), n)
    i, j = _order_positions(n, 1)
    part = np.partition(proj, (i, j), axis=0)
    mu = 0.5 * (part[i] + part[j])
    i, j = _order_positions(n, k)
    dev = np.partition(np.abs(proj - mu), (i, j), axis=0)
    return mu, 0.5 * (dev[i] + dev[j])
