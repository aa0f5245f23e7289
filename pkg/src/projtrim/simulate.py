"""Monte Carlo harness: model sampling, EMSE / relative-efficiency studies,
radius-consistency and normality exports.

Every replicate draws from its own counter-based stream keyed by
``(seed, n, replicate)``, so results do not depend on the number of worker
threads or on the order in which replicates run.
"""

from __future__ import annotations

import csv
import io
import json
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np
from scipy import stats

from .competitors import halfspace_median, stahel_donoho
from .depth import Combined, DataDriven, Exact2D, RandomSphere, fit_depth
from .errors import EmptyRegionError, InputError, ProjTrimError
from .regions import _slab_radii, projection_median
from .trim import TrimSpec, ptm_fit, resolve_alpha
from .univariate import LocationScalePair

__all__ = [
    "Component",
    "ModelSpec",
    "normal_model",
    "mixture_model",
    "MODEL_PRESETS",
    "sample",
    "emse",
    "StudyConfig",
    "EmseReport",
    "run_study",
    "ESTIMATORS",
    "study_strategy",
    "radius_consistency_study",
    "normality_study",
    "NormalityReport",
    "SCHEMA_VERSION",
]

SCHEMA_VERSION = 1
M0 = float(stats.norm.ppf(0.75))


# ---------------------------------------------------------------------------
# models


@dataclass(frozen=True)
class Component:
    """Mixture component ``mean + scale * Z`` with ``Z`` standard normal or
    multivariate t (``df`` set)."""

    weight: float
    mean: tuple
    scale: float = 1.0
    df: Optional[float] = None


@dataclass(frozen=True)
class ModelSpec:
    """Mixture with fixed-count contamination.

    Component ``j >= 1`` receives exactly ``floor(weight_j * n)`` points and
    the first component the remainder.
    """

    d: int
    components: tuple
    name: str = "custom"

    def __post_init__(self):
        w = [c.weight for c in self.components]
        if not self.components or abs(sum(w) - 1) > 1e-12 or min(w) < 0:
            raise InputError("mixture weights must be nonnegative and sum to 1")
        for c in self.components:
            if len(c.mean) != self.d or c.scale <= 0:
                raise InputError("component mean must have length d and scale > 0")

    def counts(self, n: int) -> list:
        rest = [int(np.floor(c.weight * n + 1e-9)) for c in self.components[1:]]
        return [n - sum(rest)] + rest

    def to_dict(self) -> dict:
        return {"name": self.name, "d": self.d, "components": [asdict(c) for c in self.components]}

    @classmethod
    def from_dict(cls, obj: dict) -> "ModelSpec":
        comps = tuple(Component(c["weight"], tuple(c["mean"]), c.get("scale", 1.0), c.get("df"))
                      for c in obj["components"])
        return cls(int(obj["d"]), comps, obj.get("name", "custom"))


def normal_model(d: int = 2) -> ModelSpec:
    return ModelSpec(d, (Component(1.0, (0.0,) * d),), f"normal{d}")


def mixture_model(eps: float, mu: float = 10.0, sigma: float = 5.0, d: int = 2) -> ModelSpec:
    """``(1 - eps) N_d(0, I) + eps N_d(mu 1, sigma^2 I)``."""
    if eps == 0:
        return normal_model(d)
    return ModelSpec(d, (Component(1 - eps, (0.0,) * d), Component(eps, (mu,) * d, sigma)),
                     f"mixture(eps={eps:g},mu={mu:g},sigma={sigma:g})")


MODEL_PRESETS = {
    "normal": normal_model(2),
    "mix10": mixture_model(0.1),
    "mix20": mixture_model(0.2),
}


def _stream(seed: int, *key: int) -> np.random.Generator:
    ss = np.random.SeedSequence(int(seed), spawn_key=tuple(int(k) for k in key))
    return np.random.Generator(np.random.Philox(ss))


def sample(model: ModelSpec, n: int, seed: int = 0, replicate: int = 0) -> np.ndarray:
    """Draw ``n`` points; deterministic in ``(seed, n, replicate)``."""
    if n < 1:
        raise InputError("n must be positive")
    rng = _stream(seed, n, replicate)
    parts = []
    for c, cnt in zip(model.components, model.counts(n)):
        if cnt == 0:
            continue
        Z = rng.standard_normal((cnt, model.d))
        if c.df is not None:
            Z = Z / np.sqrt(rng.chisquare(c.df, size=(cnt, 1)) / c.df)
        parts.append(np.asarray(c.mean) + c.scale * Z)
    return np.vstack(parts)


def emse(estimates, theta=None) -> float:
    """Empirical mean squared error ``sum ||T_i - theta||^2 / m``."""
    T = np.atleast_2d(np.asarray(estimates, dtype=float))
    if T.size == 0:
        raise InputError("no estimates")
    theta = np.zeros(T.shape[1]) if theta is None else np.asarray(theta, dtype=float)
    return float(np.sum(np.sum((T - theta) ** 2, axis=1)) / len(T))


# ---------------------------------------------------------------------------
# estimators


def study_strategy(n: int, d: int, seed: int = 0, refine: bool = True):
    """Exact sweep for ``n <= 400`` in the plane, else data + random directions.

    Up to a few hundred points the sweep is both exact and faster than the
    refined fallback.
    """
    if d == 2:
        return Exact2D(max_n=400, seed=seed, refine=refine)
    return Combined((DataDriven(500, seed), RandomSphere(300, seed)))


def _est_mean(X, ctx):
    return X.mean(axis=0)


def _est_ptm(X, ctx):
    return ptm_fit(ctx.depth(), TrimSpec(ctx.alpha)).location


def _est_sd(X, ctx):
    return stahel_donoho(ctx.depth())


def _est_pm(X, ctx):
    return projection_median(ctx.depth()).location


def _est_hm(X, ctx):
    return halfspace_median(X).location


ESTIMATORS: dict[str, Callable] = {
    "ptm": _est_ptm,
    "sd": _est_sd,
    "pm": _est_pm,
    "hm": _est_hm,
    "mean": _est_mean,
}


class _Context:
    """Lazily fitted depth shared by all estimators on one sample."""

    def __init__(self, X, pair, alpha, seed):
        self.X = X
        self.pair = pair
        self.seed = seed
        self._f = None
        self.alpha = resolve_alpha(alpha, X)

    def depth(self):
        if self._f is None:
            n, d = self.X.shape
            self._f = fit_depth(self.X, self.pair, study_strategy(n, d, self.seed))
        return self._f


# ---------------------------------------------------------------------------
# EMSE studies


@dataclass
class StudyConfig:
    """Fully resolved configuration of an efficiency study."""

    model: ModelSpec = field(default_factory=normal_model)
    n_list: tuple = (20, 40, 60, 80, 100)
    m: int = 1000
    estimators: tuple = ("ptm", "sd", "pm", "hm", "mean")
    alpha: object = 0.1
    k: int = 1
    seed: int = 0
    theta: Optional[tuple] = None

    def to_dict(self) -> dict:
        return {
            "model": self.model.to_dict(),
            "n_list": list(self.n_list),
            "m": self.m,
            "estimators": list(self.estimators),
            "alpha": self.alpha,
            "k": self.k,
            "seed": self.seed,
            "theta": list(self.theta) if self.theta is not None else [0.0] * self.model.d,
            "depth_strategy": "exact2d (n<=400), data(500)+sphere(300)+witnesses+golden otherwise",
        }

    @classmethod
    def from_dict(cls, obj: dict) -> "StudyConfig":
        return cls(ModelSpec.from_dict(obj["model"]), tuple(obj["n_list"]), int(obj["m"]),
                   tuple(obj["estimators"]), obj["alpha"], int(obj.get("k", 1)), int(obj["seed"]),
                   tuple(obj["theta"]) if obj.get("theta") is not None else None)


@dataclass
class EmseReport:
    """Per-``n`` EMSE and efficiency relative to the sample mean."""

    config: dict
    rows: list
    schema_version: int = SCHEMA_VERSION

    def row(self, n: int) -> dict:
        for r in self.rows:
            if r["n"] == n:
                return r
        raise KeyError(n)

    def to_json(self) -> str:
        return json.dumps({"schema_version": self.schema_version, "config": self.config,
                           "rows": self.rows}, indent=2)

    @classmethod
    def from_json(cls, text: str) -> "EmseReport":
        obj = json.loads(text)
        return cls(obj["config"], obj["rows"], obj.get("schema_version", SCHEMA_VERSION))

    def to_csv(self) -> str:
        """Table layout: one row per ``n``, cells ``RE (EMSE x 1e3)``."""
        names = self.config["estimators"]
        buf = io.StringIO()
        buf.write(f"# schema_version={self.schema_version}\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n"] + names)
        for r in self.rows:
            cells = []
            for name in names:
                e = r["estimators"][name]
                cells.append(f"{e['re']:.5g} ({1e3 * e['emse']:.5g})")
            w.writerow([r["n"]] + cells)
        return buf.getvalue()


def _replicate(cfg: StudyConfig, n: int, rep: int, theta):
    X = sample(cfg.model, n, cfg.seed, rep)
    pair = LocationScalePair("medmad", cfg.k)
    out = {}
    try:
        ctx = _Context(X, pair, cfg.alpha, cfg.seed)
    except ProjTrimError as exc:
        ctx = None
        err = exc
    for name in cfg.estimators:
        try:
            if ctx is None and name != "mean":
                raise err
            out[name] = ESTIMATORS[name](X, ctx)
        except (ProjTrimError, ValueError, np.linalg.LinAlgError):
            out[name] = None
    return out


def _threads(threads: Optional[int]) -> int:
    if threads is None:
        threads = int(os.environ.get("PROJTRIM_THREADS", "1") or 1)
    return max(1, int(threads))


def run_study(cfg: StudyConfig, threads: Optional[int] = None, progress: Optional[Callable] = None) -> EmseReport:
    """Run an efficiency study; all estimators see identical samples.

    Failed fits are excluded and counted; rows with more than 1% failures for
    any estimator are flagged.
    """
    for name in cfg.estimators:
        if name not in ESTIMATORS:
            raise InputError(f"unknown estimator {name!r}; choose from {sorted(ESTIMATORS)}")
    if cfg.m < 1:
        raise InputError("m must be positive")
    names = list(cfg.estimators)
    if "mean" not in names:
        names.append("mean")
    cfg = StudyConfig(cfg.model, tuple(cfg.n_list), cfg.m, tuple(names), cfg.alpha, cfg.k, cfg.seed, cfg.theta)
    theta = np.zeros(cfg.model.d) if cfg.theta is None else np.asarray(cfg.theta, dtype=float)
    rows = []
    nt = _threads(threads)
    for n in cfg.n_list:
        if nt > 1:
            with ThreadPoolExecutor(nt) as ex:
                results = list(ex.map(lambda r: _replicate(cfg, n, r, theta), range(cfg.m)))
        else:
            results = [_replicate(cfg, n, r, theta) for r in range(cfg.m)]
        per = {}
        for name in names:
            est = [res[name] for res in results if res[name] is not None]
            fails = cfg.m - len(est)
            per[name] = {"emse": emse(est, theta) if est else float("nan"), "failures": fails}
        base = per["mean"]["emse"]
        for name in names:
            e = per[name]["emse"]
            per[name]["re"] = 1.0 if name == "mean" else (base / e if e > 0 else float("inf"))
        flagged = any(p["failures"] > 0.01 * cfg.m for p in per.values())
        rows.append({"n": int(n), "estimators": per, "flagged": flagged})
        if progress:
            progress(n)
    return EmseReport(cfg.to_dict(), rows)


# ---------------------------------------------------------------------------
# radius consistency and normality


def radius_consistency_study(alpha: float = 0.5, n_list: Sequence[int] = (100, 400, 1600), reps: int = 20,
                             seed: int = 0, n_angles: int = 4096, k: int = 1) -> list:
    """Sup-over-angles deviation of sample radii from the ``N_2(0, I)`` radius.

    The population region at level ``alpha`` is the disc of radius
    ``beta m0``.  Sample radii are intersections of rays from the projection
    median with the slab family of the sample depth: the exact sweep for
    ``n <= 400`` and data + random directions otherwise.  Rows where
    ``alpha`` is not below the sample maximum depth are marked invalid.

    Returns
    -------
    list of dict with keys ``n``, ``median``, ``values``, ``invalid``
    """
    beta = (1 - alpha) / alpha
    target = beta * M0
    th = 2 * np.pi * np.arange(n_angles) / n_angles
    U = np.column_stack([np.cos(th), np.sin(th)])
    model = normal_model(2)
    pair = LocationScalePair("medmad", k)
    rows = []
    for n in n_list:
        vals, invalid = [], 0
        for r in range(reps):
            X = sample(model, n, seed, r)
            f = fit_depth(X, pair, study_strategy(n, 2, seed, refine=False))
            ce = projection_median(f)
            if alpha >= ce.depth_at_center - 1e-6:
                invalid += 1
                continue
            radii = _slab_radii(f, ce.location, beta, U)
            vals.append(float(np.max(np.abs(radii - target))))
        rows.append({"n": int(n), "median": float(np.median(vals)) if vals else float("nan"),
                     "values": vals, "invalid": invalid})
    return rows


@dataclass
class NormalityReport:
    """PTM replicates at ``N_2(0, I)`` with summary of ``sqrt(n) PTM``."""

    alpha: float
    n: int
    m: int
    seed: int
    estimates: np.ndarray
    variance: np.ndarray
    mean: np.ndarray
    se_mean: np.ndarray
    skewness: np.ndarray
    kurtosis: np.ndarray
    failures: int = 0

    def summary(self) -> dict:
        return {"schema_version": SCHEMA_VERSION, "alpha": self.alpha, "n": self.n, "m": self.m,
                "seed": self.seed, "failures": self.failures,
                "variance_sqrt_n": self.variance.tolist(), "mean": self.mean.tolist(),
                "se_mean": self.se_mean.tolist(), "skewness": self.skewness.tolist(),
                "excess_kurtosis": self.kurtosis.tolist()}

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("# " + json.dumps(self.summary()) + "\n")
        buf.write("x1,x2\n")
        for a, b in self.estimates:
            buf.write(f"{float(a)!r},{float(b)!r}\n")
        return buf.getvalue()


def normality_study(alpha: float = 0.1, n: int = 300, m: int = 2000, seed: int = 0, k: int = 1,
                    threads: Optional[int] = None) -> NormalityReport:
    """Replicate the constant-weight PTM on ``N_2(0, I)`` samples."""
    cfg = StudyConfig(normal_model(2), (n,), m, ("ptm",), alpha, k, seed)
    theta = np.zeros(2)

    def one(r):
        return _replicate(cfg, n, r, theta)["ptm"]

    nt = _threads(threads)
    if nt > 1:
        with ThreadPoolExecutor(nt) as ex:
            res = list(ex.map(one, range(m)))
    else:
        res = [one(r) for r in range(m)]
    T = np.array([t for t in res if t is not None])
    S = np.sqrt(n) * T
    return NormalityReport(alpha, n, m, seed, T, S.var(axis=0), T.mean(axis=0),
                           T.std(axis=0, ddof=1) / np.sqrt(len(T)),
                           stats.skew(S, axis=0), stats.kurtosis(S, axis=0), m - len(T))
