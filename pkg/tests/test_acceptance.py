"""Acceptance suite: twelve end-to-end checks at their stated tolerances.

Each test records one PASS/FAIL line; the lines are printed in the pytest
terminal summary, and ``python tests/test_acceptance.py`` runs the suite
stand-alone.  Monte Carlo checks are marked ``slow`` (a few minutes total).
"""

from __future__ import annotations

import sys
import time
from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest
from scipy import stats

sys.path.insert(0, str(Path(__file__).resolve().parent))

import oracles  # noqa: E402
from projtrim.depth import Exact2D, fit_depth  # noqa: E402
from projtrim.simulate import (MODEL_PRESETS, StudyConfig, normality_study,  # noqa: E402
                               radius_consistency_study, run_study)
from projtrim.theory import (MEANSD, MEDMAD, asy_variance, contaminated_radius,  # noqa: E402
                             if_radius)
from projtrim.trim import TrimSpec, alpha_d, breakdown_point, breakdown_probe, ptm  # noqa: E402
from projtrim.univariate import LocationScalePair  # noqa: E402

RESULTS: dict = {}


def record(num: int, title: str, ok: bool, detail: str) -> None:
    line = f"[{'PASS' if ok else 'FAIL'}] {num:2d}. {title}: {detail}"
    RESULTS[num] = line
    print(line)
    assert ok, line


def _study(model, n_list, m=1000):
    cfg = StudyConfig(MODEL_PRESETS[model], tuple(n_list), m, ("ptm",), 0.1, 1, 0)
    t0 = time.perf_counter()
    rep = run_study(cfg)
    return rep, time.perf_counter() - t0


# ---------------------------------------------------------------------------


@pytest.mark.slow
def test_01_are_table():
    target = {0.05: 0.9990, 0.10: 0.9981, 0.15: 0.9927, 0.20: 0.8856}
    t0 = time.perf_counter()
    got = {}
    for a in target:
        av = asy_variance(a, 2, draws=10**6, nodes=2048, seed=0, method="mc")
        got[a] = av.a / av.b
    dt = time.perf_counter() - t0
    err = max(abs(got[a] - target[a]) for a in target)
    detail = ", ".join(f"{a:g}: {got[a]:.4f} (target {target[a]:.4f})" for a in target)
    record(1, "ARE vs mean", err <= 0.015 and dt <= 120, f"{detail}; max err {err:.4f}; {dt:.1f}s")


@pytest.mark.slow
def test_02_clean_normal_study():
    rep, dt = _study("normal", (40, 100))
    ok, parts = dt <= 600, []
    for n, ref in ((40, 50.0), (100, 20.0)):
        row = rep.row(n)["estimators"]
        re = row["ptm"]["re"]
        e_mean = 1e3 * row["mean"]["emse"]
        ok &= 0.96 <= re <= 1.02 and abs(e_mean - ref) <= 0.1 * ref
        parts.append(f"n={n} RE(ptm)={re:.4f}, EMSE(mean)x1e3={e_mean:.2f} (ref {ref:g})")
    record(2, "clean normal efficiency", ok, "; ".join(parts) + f"; {dt:.0f}s")


@pytest.mark.slow
def test_03_mixture_eps10():
    rep, dt = _study("mix10", (100,))
    row = rep.row(100)["estimators"]
    e_mean = 1e3 * row["mean"]["emse"]
    re = row["ptm"]["re"]
    ref = 1e3 * oracles.fixed_count_mean_emse(100, 0.1)
    ok = all(abs(e_mean - t) <= 0.03 * t for t in (2068.7, ref)) and abs(re - 83.5) <= 0.25 * 83.5
    record(3, "10% mixture, n=100", ok,
           f"EMSE(mean)x1e3={e_mean:.1f} (analytic {ref:.1f}), RE(ptm)={re:.1f} (ref 83.5); {dt:.0f}s")


@pytest.mark.slow
def test_04_mixture_eps20():
    rep, dt = _study("mix20", (40,))
    row = rep.row(40)["estimators"]
    e_mean = 1e3 * row["mean"]["emse"]
    re = row["ptm"]["re"]
    ref = 1e3 * oracles.fixed_count_mean_emse(40, 0.2)
    ok = all(abs(e_mean - t) <= 0.03 * t for t in (8290, ref)) and abs(re - 89.7) <= 0.25 * 89.7
    record(4, "20% mixture, n=40", ok,
           f"EMSE(mean)x1e3={e_mean:.1f} (analytic {ref:.1f}), RE(ptm)={re:.1f} (ref 89.7); {dt:.0f}s")


def test_05_breakdown_dichotomy():
    # regular 20-gon: in general position with a well-conditioned alpha_d
    t = 2 * np.pi * np.arange(20) / 20
    X = np.column_stack([np.cos(t), np.sin(t)])
    diam = max(np.linalg.norm(a - b) for a in X for b in X)
    pair = LocationScalePair("medmad", 3)
    spec = TrimSpec("auto")
    below = max(breakdown_probe(X, spec, 8, mag, s, pair=pair)
                for mag in (1e4, 1e6, 1e8) for s in range(10))
    above = min(breakdown_probe(X, spec, 9, mag, s, pair=pair) / mag
                for mag in (1e4, 1e6, 1e8) for s in range(10))
    bp = breakdown_point(20, 2, 3)
    ok = below <= 2 * diam and above >= 0.1 and bp == Fraction(9, 20)
    record(5, "breakdown dichotomy", ok,
           f"alpha_d={alpha_d(X):.4g}; m=8 max|T|={below:.3g} (bound {2 * diam:.3g}); "
           f"m=9 min|T|/mag={above:.3g}; bp={bp}")


def test_06_radius_if_vs_finite_eps():
    rng = np.random.default_rng(6)
    eps, alpha = 1e-4, 0.2
    r0 = (1 - alpha) / alpha * oracles.M0
    worst, count = 0.0, 0
    while count < 20:
        u = rng.normal(size=2)
        u /= np.linalg.norm(u)
        x = rng.normal(size=2) * 2
        s = abs(u @ x)
        if s < 0.05 or abs(s - oracles.M0) < 0.05:
            continue
        fd = (contaminated_radius(x, u, alpha, eps) - r0) / eps
        ifv = if_radius(x, u, alpha)
        worst = max(worst, abs(fd - ifv) / abs(ifv))
        count += 1
    record(6, "radius IF vs finite-eps oracle", worst <= 0.01, f"max relative error {worst:.2e} over 20 probes")


def test_07_radius_if_closed_forms():
    rng = np.random.default_rng(7)
    u = np.array([1.0, 0.0])
    P = rng.uniform(-3, 3, size=(10, 2))
    P[:, 0] = np.where(np.abs(np.abs(P[:, 0]) - oracles.M0) < 0.05, P[:, 0] + 0.2, P[:, 0])
    e_ms = max(abs(if_radius(p, u, 0.2, pair=MEANSD) - (2 * p[0] ** 2 + p[0] - 2)) for p in P)
    f = stats.norm.pdf
    e_mm = max(abs(if_radius(p, u, 0.2, pair=MEDMAD)
                   - (np.sign(abs(p[0]) - oracles.M0) / f(oracles.M0) + np.sign(p[0]) / (2 * f(0))))
               for p in P)
    record(7, "radius IF closed forms", e_ms <= 1e-10 and e_mm <= 1e-10,
           f"mean/sd max err {e_ms:.1e}; med/mad max err {e_mm:.1e}")


def test_08_exact_sweep_vs_grid():
    rng = np.random.default_rng(8)
    lo_viol = hi_viol = 0.0
    for _ in range(100):
        n = int(rng.integers(5, 51))
        X = rng.normal(size=(n, 2)) * rng.uniform(0.5, 3, size=2)
        x = rng.normal(size=2) * 2
        k = int(rng.integers(1, 4))
        O = fit_depth(X, LocationScalePair("medmad", k), Exact2D()).outlyingness(x)[0]
        grid, refined = oracles.grid_outlyingness(x, X, k)
        lo_viol = max(lo_viol, grid - O)
        hi_viol = max(hi_viol, O - refined)
    record(8, "exact sweep vs 1e5-angle grid", lo_viol <= 1e-9 and hi_viol <= 1e-6,
           f"max(grid - exact)={lo_viol:.2e}, max(exact - refined)={hi_viol:.2e}")


def test_09_affine_equivariance():
    rng = np.random.default_rng(9)
    worst = {"medmad": 0.0, "meansd": 0.0}
    for _ in range(20):
        X = rng.normal(size=(60, 2))
        X[:6] += 8
        A, b = oracles.random_affine(rng)
        Y = X @ A.T + b
        for name, pair, strat in (("medmad", LocationScalePair("medmad"), Exact2D()),
                                  ("meansd", LocationScalePair("meansd"), None)):
            t = ptm(X, TrimSpec(0.3), pair, strat)
            ty = ptm(Y, TrimSpec(0.3), pair, strat)
            worst[name] = max(worst[name], float(np.linalg.norm(ty - (A @ t + b))))
    record(9, "affine equivariance", max(worst.values()) <= 1e-8,
           f"max error med/mad {worst['medmad']:.1e}, mean/sd {worst['meansd']:.1e}")


@pytest.mark.slow
def test_10_radius_consistency():
    rows = radius_consistency_study(0.5, (100, 400, 1600), 20, seed=0)
    med = [r["median"] for r in rows]
    ok = med[0] > med[1] > med[2] and all(r["invalid"] == 0 for r in rows)
    record(10, "radius consistency", ok, "medians " + ", ".join(f"n={r['n']}: {r['median']:.4f}" for r in rows))


@pytest.mark.slow
def test_11_normality_link():
    V = asy_variance(0.1, 2).V
    rep = normality_study(0.1, 300, 2000, seed=0)
    rel = np.abs(rep.variance / V - 1)
    sk = np.abs(rep.skewness)
    ok = bool(np.all(rel <= 0.10) and np.all(sk < 0.15))
    record(11, "normality link", ok,
           f"var(sqrt(n) T)={np.round(rep.variance, 4).tolist()} vs V={V:.4f}; "
           f"|skew|={np.round(sk, 3).tolist()}; failures={rep.failures}")


def test_12_univariate_guarantees():
    rng = np.random.default_rng(12)
    worst = 1.0
    undefined = 0
    for _ in range(100):
        n = int(rng.integers(2, 60))
        x = rng.standard_t(3, size=(n, 1)) * rng.uniform(0.1, 10)
        f = fit_depth(x)
        xm = np.sort(x[:, 0])[(n + 1) // 2 - 1]
        worst = min(worst, float(f.depth([[xm]])[0]))
        for a in (0.05, 0.1, 0.25, 0.4, 0.5):
            try:
                ptm(f, TrimSpec(a))
            except ValueError:
                undefined += 1
    record(12, "d=1 guarantees", worst >= 0.5 and undefined == 0,
           f"min depth of middle order statistic {worst:.4f}; undefined PTM cases {undefined}")


if __name__ == "__main__":
    tests = [v for k, v in sorted(globals().items()) if k.startswith("test_")]
    failed = 0
    for t in tests:
        try:
            t()
        except AssertionError:
            failed += 1
    print(f"\n{len(tests) - failed}/{len(tests)} criteria passed")
    sys.exit(1 if failed else 0)
