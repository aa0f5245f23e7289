"""Command-line interface.

Every command resolves its arguments (including presets) into a plain
config dict; the dict is embedded in the output, and ``--config FILE``
re-runs a saved config (or the config embedded in a saved report).
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from typing import Optional

import numpy as np

from . import __version__
from .errors import InputError, ProjTrimError

SCHEMA_VERSION = 1
ENV_THREADS = "PROJTRIM_THREADS"

PRESETS = {
    "table1": {"command": "are", "alphas": [0.05, 0.10, 0.15, 0.20], "d": 2, "draws": 1_000_000,
               "nodes": 2048, "seed": 0, "method": "mc"},
    "table2": {"command": "simulate", "study": "emse", "model": "normal", "n": [20, 40, 60, 80, 100],
               "m": 1000, "alpha": 0.1, "k": 1, "seed": 0, "estimators": ["ptm", "sd", "pm", "hm", "mean"]},
    "table3": {"command": "simulate", "study": "emse", "model": "mix10", "n": [20, 40, 60, 80, 100],
               "m": 1000, "alpha": 0.1, "k": 1, "seed": 0, "estimators": ["ptm", "sd", "pm", "hm", "mean"]},
    "table4": {"command": "simulate", "study": "emse", "model": "mix20", "n": [20, 40, 60, 80, 100],
               "m": 1000, "alpha": 0.1, "k": 1, "seed": 0, "estimators": ["ptm", "sd", "pm", "hm", "mean"]},
    "fig2": {"command": "if-curve", "target": "radius", "pairs": ["medmad", "meansd"], "alpha": 0.2,
             "u": [1.0, 0.0], "start": [-3.0, 0.0], "stop": [3.0, 0.0], "num": 601, "nodes": 2048},
    "fig3": {"command": "if-curve", "target": "ptm", "pairs": ["medmad", "meansd"], "alpha": 0.2,
             "u": [1.0, 0.0], "start": [-6.0, 0.0], "stop": [6.0, 0.0], "num": 601, "nodes": 2048},
    "fig4": {"command": "simulate", "study": "radius", "alpha": 0.5, "n": [100, 400, 1600], "m": 20,
             "k": 1, "seed": 0, "angles": 4096},
    "fig5": {"command": "simulate", "study": "normality", "alpha": 0.36, "n": [300], "m": 2000,
             "k": 1, "seed": 0},
}


# ---------------------------------------------------------------------------
# input


def _is_number(s: str) -> bool:
    try:
        float(s)
        return True
    except ValueError:
        return False


def parse_points(path) -> np.ndarray:
    """Read a CSV point cloud (rows = points); a non-numeric first row is a header.

    Raises
    ------
    InputError
        Empty file, non-numeric cell (with 1-based row and column) or rows of
        inconsistent length.
    """
    try:
        fh = open(path, newline="")
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}", path=str(path)) from None
    with fh:
        rows = [(i + 1, r) for i, r in enumerate(csv.reader(fh))
                if r and not (len(r) == 1 and not r[0].strip()) and not r[0].lstrip().startswith("#")]
    if not rows:
        raise InputError(f"{path} contains no points", path=str(path))
    line, first = rows[0]
    if not all(_is_number(c) for c in first) and not any(_is_number(c) for c in first):
        rows = rows[1:]
        if not rows:
            raise InputError(f"{path} contains a header but no points", path=str(path))
    width = len(rows[0][1])
    out = []
    for line, r in rows:
        if len(r) != width:
            raise InputError(f"row {line} has {len(r)} values, expected {width}", row=line,
                             found=len(r), expected=width)
        vals = []
        for j, c in enumerate(r):
            try:
                vals.append(float(c))
            except ValueError:
                raise InputError(f"non-numeric value {c!r} at row {line}, column {j + 1}",
                                 row=line, column=j + 1) from None
        out.append(vals)
    X = np.array(out, dtype=float)
    if not np.all(np.isfinite(X)):
        i, j = np.argwhere(~np.isfinite(X))[0]
        raise InputError(f"non-finite value at row {rows[i][0]}, column {j + 1}", row=int(rows[i][0]),
                         column=int(j) + 1)
    return X


# ---------------------------------------------------------------------------
# command implementations: cfg dict -> (json payload | csv text)


def _pair(cfg):
    from .univariate import LocationScalePair
    return LocationScalePair(cfg.get("pair", "medmad"), cfg.get("k"))


def _depth_fn(cfg, X):
    from .depth import fit_depth, make_strategy
    strat = make_strategy(cfg.get("strategy", "auto"), X.shape[1], cfg.get("dirs", 500), cfg.get("seed", 0))
    return fit_depth(X, _pair(cfg), strat)


def _alpha(v):
    if v in (None, "auto"):
        return "auto"
    return float(v)


def _csv_with_header(cfg, header, rows) -> str:
    lines = ["# " + json.dumps({"schema_version": SCHEMA_VERSION, "config": cfg})]
    lines.append(",".join(header))
    lines += [",".join(repr(float(v)) if not isinstance(v, str) else v for v in r) for r in rows]
    return "\n".join(lines) + "\n"


def cmd_depth(cfg):
    X = parse_points(cfg["input"])
    f = _depth_fn(cfg, X)
    P = parse_points(cfg["points"]) if cfg.get("points") else X
    O, W, multi = f.evaluate(P)
    D = 1.0 / (1.0 + O)
    d = X.shape[1]
    header = [f"x{i + 1}" for i in range(d)] + ["outlyingness", "depth"] + \
        [f"w{i + 1}" for i in range(d)] + ["multiple_witnesses", "method"]
    rows = [list(P[i]) + [O[i], D[i]] + list(W[i]) + [str(bool(multi[i])).lower(), f.method]
            for i in range(len(P))]
    return _csv_with_header(cfg, header, rows)


def cmd_estimate(cfg):
    from .competitors import halfspace_median, stahel_donoho
    from .regions import projection_median
    from .trim import ConstantWeight, PowerWeight, TrimSpec, ptm_fit

    X = parse_points(cfg["input"])
    f = _depth_fn(cfg, X)
    which = cfg.get("estimator", "ptm")
    names = ["ptm", "sd", "pm", "hm", "mean"] if which == "all" else [which]
    out = {}
    for name in names:
        if name == "ptm":
            w = ConstantWeight() if cfg.get("weight", "constant") == "constant" else PowerWeight(cfg.get("power", 1.0))
            res = ptm_fit(f, TrimSpec(_alpha(cfg.get("alpha", 0.1)), w))
            out["ptm"] = {"location": res.location.tolist(), "alpha": res.alpha,
                          "n_trimmed": res.n_trimmed, "method": res.method}
        elif name == "sd":
            out["sd"] = {"location": stahel_donoho(f).tolist()}
        elif name == "pm":
            ce = projection_median(f)
            out["pm"] = {"location": ce.location.tolist(), "depth": ce.depth_at_center, "method": ce.method}
        elif name == "hm":
            r = halfspace_median(X)
            out["hm"] = {"location": r.location.tolist(), "depth": r.depth}
        elif name == "mean":
            out["mean"] = {"location": X.mean(axis=0).tolist()}
        else:
            raise InputError(f"unknown estimator {name!r}")
    return {"n": X.shape[0], "d": X.shape[1], "estimates": out}


def cmd_contour(cfg):
    from .regions import radius_profile
    X = parse_points(cfg["input"])
    f = _depth_fn(cfg, X)
    if f.d > 2:
        raise InputError("contour export is for d <= 2")
    prof = radius_profile(float(cfg["alpha"]), f, n_dirs=cfg.get("n_dirs", 360), seed=cfg.get("seed", 0),
                          method=cfg.get("method", "bisection"))
    pts = prof.points if f.d == 2 else np.column_stack([prof.points, np.zeros(len(prof.points))])
    meta = dict(cfg, center=prof.center.tolist(), depth_method=prof.method)
    rows = [[t, r, p[0], p[1]] for t, r, p in zip(prof.thetas, prof.radii, pts)]
    return _csv_with_header(meta, ["theta", "radius", "x", "y"], rows)


def cmd_alpha_d(cfg):
    from .trim import alpha_d_details
    X = parse_points(cfg["input"])
    r = alpha_d_details(X)
    return {"alpha_d": r.alpha_d, "ratio": r.ratio, "direction": r.direction.tolist(),
            "exact": r.exact, "method": r.method}


def cmd_breakdown(cfg):
    from .trim import TrimSpec, alpha_d, breakdown_point, breakdown_probe
    out = {}
    if cfg.get("input"):
        X = parse_points(cfg["input"])
        n, d = X.shape
    else:
        X = None
        n, d = cfg["n"], cfg["d"]
    k = cfg.get("k") or (1 if d == 1 else d + 1)
    bp = breakdown_point(n, d, k)
    out.update(n=n, d=d, k=k, bp=f"{bp.numerator}/{bp.denominator}", bp_float=float(bp),
               count=int(bp * n))
    if X is not None:
        from .univariate import LocationScalePair
        pair = LocationScalePair("medmad", k)
        if d >= 2:
            out["alpha_d"] = alpha_d(X)
        probes = []
        ms = cfg.get("m") or [max(int(bp * n) - 1, 0), int(bp * n)]
        for m in ms:
            for mag in cfg.get("magnitude", [1e4, 1e6, 1e8]):
                vals = [breakdown_probe(X, TrimSpec(_alpha(cfg.get("alpha"))), m, mag, s, pair=pair)
                        for s in range(cfg.get("seeds", 10))]
                probes.append({"m": m, "magnitude": mag, "max_norm": max(vals)})
        out["probes"] = probes
    return out


def cmd_if_curve(cfg):
    from .theory import if_ptm, if_radius
    from .univariate import LocationScalePair
    a = float(cfg["alpha"])
    start, stop = np.asarray(cfg["start"], float), np.asarray(cfg["stop"], float)
    t = np.linspace(0, 1, int(cfg.get("num", 201)))
    P = start + t[:, None] * (stop - start)
    pairs = cfg.get("pairs") or [cfg.get("pair", "medmad")]
    header, cols = ["x1", "x2"], [P[:, 0], P[:, 1]]
    for name in pairs:
        pair = LocationScalePair(name, 1 if name == "medmad" else None)
        if cfg.get("target", "ptm") == "radius":
            u = np.asarray(cfg.get("u", [1.0, 0.0]), float)
            vals = []
            for p in P:
                try:
                    vals.append(if_radius(p, u, a, pair=pair))
                except ProjTrimError:
                    vals.append(float("nan"))
            header += [f"if_{name}"]
            cols += [np.array(vals)]
        else:
            V = if_ptm(P, a, pair=pair, nodes=int(cfg.get("nodes", 2048)))
            suffix = f"_{name}" if len(pairs) > 1 else ""
            header += [f"if1{suffix}", f"if2{suffix}"]
            cols += [V[:, 0], V[:, 1]]
    return _csv_with_header(cfg, header, np.column_stack(cols).tolist())


def cmd_are(cfg):
    from .theory import asy_variance
    rows = []
    for a in cfg["alphas"]:
        av = asy_variance(float(a), int(cfg.get("d", 2)), draws=int(cfg.get("draws", 10**6)),
                          nodes=int(cfg.get("nodes", 2048)), seed=int(cfg.get("seed", 0)),
                          method=cfg.get("method", "mc"))
        rows.append({"alpha": a, "a": av.a, "b": av.b, "V": av.V, "se_b": av.se_b, "are": av.a / av.b,
                     "method": av.method})
    return {"rows": rows}


def cmd_simulate(cfg, threads=None):
    from .simulate import (MODEL_PRESETS, ModelSpec, StudyConfig, normality_study,
                           radius_consistency_study, run_study)
    study = cfg.get("study", "emse")
    if study == "emse":
        model = cfg["model"]
        spec = MODEL_PRESETS[model] if isinstance(model, str) else ModelSpec.from_dict(model)
        sc = StudyConfig(spec, tuple(cfg["n"]), int(cfg["m"]), tuple(cfg["estimators"]),
                         _alpha(cfg.get("alpha", 0.1)), int(cfg.get("k", 1)), int(cfg["seed"]))
        rep = run_study(sc, threads=threads)
        return {"rows": rep.rows, "study_config": rep.config, "table_csv": rep.to_csv()}
    if study == "radius":
        rows = radius_consistency_study(float(cfg["alpha"]), cfg["n"], int(cfg["m"]), int(cfg["seed"]),
                                        int(cfg.get("angles", 4096)), int(cfg.get("k", 1)))
        return {"rows": rows}
    if study == "normality":
        rep = normality_study(float(cfg["alpha"]), int(cfg["n"][0]), int(cfg["m"]), int(cfg["seed"]),
                              int(cfg.get("k", 1)), threads=threads)
        return {"summary": rep.summary(), "estimates": rep.estimates.tolist()}
    raise InputError(f"unknown study {study!r}")


COMMANDS = {
    "depth": cmd_depth,
    "estimate": cmd_estimate,
    "contour": cmd_contour,
    "alpha-d": cmd_alpha_d,
    "breakdown": cmd_breakdown,
    "if-curve": cmd_if_curve,
    "are": cmd_are,
    "simulate": cmd_simulate,
}


def run(cfg: dict, threads: Optional[int] = None):
    """Execute a resolved config; returns a JSON-able dict or CSV text."""
    cmd = cfg.get("command")
    if cmd not in COMMANDS:
        raise InputError(f"unknown command {cmd!r}", choices=sorted(COMMANDS))
    if cmd == "simulate":
        res = cmd_simulate(cfg, threads)
    else:
        res = COMMANDS[cmd](cfg)
    if isinstance(res, str):
        return res
    return {"schema_version": SCHEMA_VERSION, "version": __version__, "config": cfg, "result": res}


# ---------------------------------------------------------------------------
# argument parsing


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        _emit_error({"code": "usage", "message": message, "context": {"prog": self.prog}})
        raise SystemExit(2)


def _floats(s):
    return [float(v) for v in s.split(",")]


def _ints(s):
    return [int(v) for v in s.split(",")]


def _common(p, depth=True):
    p.add_argument("--out", help="output file (default: stdout)")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--preset", choices=sorted(PRESETS))
    if depth:
        p.add_argument("--pair", choices=["medmad", "meansd"], default="medmad")
        p.add_argument("--k", type=int, default=None)
        p.add_argument("--strategy", choices=["auto", "exact", "random", "data", "combined"], default="auto")
        p.add_argument("--dirs", type=int, default=500, help="number of directions for sampled strategies")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="projtrim", description="Projection-depth trimming tools.")
    p.add_argument("--version", action="version", version=__version__)
    p.add_argument("--config", help="re-run a saved config or report (JSON, or CSV with a JSON header)")
    p.add_argument("--threads", type=int, default=None,
                   help=f"worker threads (default ${ENV_THREADS} or 1); results do not depend on it")
    p.add_argument("--out-config", dest="out_config", help=argparse.SUPPRESS)
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    s = sub.add_parser("depth", help="outlyingness, depth and witness direction per point")
    s.add_argument("input")
    s.add_argument("--points", help="query points CSV (default: the data)")
    _common(s)

    s = sub.add_parser("estimate", help="location estimates (JSON)")
    s.add_argument("input")
    s.add_argument("--estimator", choices=["ptm", "sd", "pm", "hm", "mean", "all"], default="ptm")
    s.add_argument("--alpha", default="0.1", help="trimming level or 'auto'")
    s.add_argument("--weight", choices=["constant", "power"], default="constant")
    s.add_argument("--power", type=float, default=1.0)
    _common(s)

    s = sub.add_parser("contour", help="directional radii of a depth region (CSV)")
    s.add_argument("input")
    s.add_argument("--alpha", type=float, required=True)
    s.add_argument("--n-dirs", dest="n_dirs", type=int, default=360)
    s.add_argument("--method", choices=["bisection", "slab"], default="bisection")
    _common(s)

    s = sub.add_parser("alpha-d", help="largest trimming level with the breakdown guarantee")
    s.add_argument("input")
    _common(s, depth=False)

    s = sub.add_parser("breakdown", help="breakdown point formula and probes")
    s.add_argument("input", nargs="?")
    s.add_argument("--n", type=int)
    s.add_argument("--d", type=int)
    s.add_argument("--k", type=int)
    s.add_argument("--alpha", default="auto")
    s.add_argument("--m", type=_ints, help="comma-separated contamination counts")
    s.add_argument("--magnitude", type=_floats, default=[1e4, 1e6, 1e8])
    s.add_argument("--seeds", type=int, default=10)
    _common(s, depth=False)

    s = sub.add_parser("if-curve", help="influence function along a line (CSV)")
    s.add_argument("--target", choices=["radius", "ptm"], default="ptm")
    s.add_argument("--pair", choices=["medmad", "meansd"], default="medmad")
    s.add_argument("--alpha", type=float, default=0.2)
    s.add_argument("--u", type=_floats, default=[1.0, 0.0])
    s.add_argument("--start", type=_floats, default=[-3.0, 0.0])
    s.add_argument("--stop", type=_floats, default=[3.0, 0.0])
    s.add_argument("--num", type=int, default=201)
    s.add_argument("--nodes", type=int, default=2048)
    _common(s, depth=False)

    s = sub.add_parser("are", help="asymptotic efficiency relative to the mean")
    s.add_argument("--alpha", type=_floats, default=[0.05, 0.10, 0.15, 0.20])
    s.add_argument("--d", type=int, default=2)
    s.add_argument("--draws", type=int, default=1_000_000)
    s.add_argument("--nodes", type=int, default=2048)
    s.add_argument("--method", choices=["mc", "closed"], default="mc")
    _common(s, depth=False)

    s = sub.add_parser("simulate", help="Monte Carlo studies")
    s.add_argument("--study", choices=["emse", "radius", "normality"], default=None)
    s.add_argument("--model", choices=["normal", "mix10", "mix20"], default=None)
    s.add_argument("--n", type=_ints, default=None)
    s.add_argument("--m", type=int, default=None)
    s.add_argument("--alpha", default=None)
    s.add_argument("--k", type=int, default=None)
    s.add_argument("--estimators", type=lambda v: v.split(","), default=None)
    s.add_argument("--csv", help="also write the table as CSV")
    _common(s, depth=False)
    return p


_NOT_CONFIG = {"out", "preset", "config", "threads", "csv", "out_config"}


def resolve_config(ns: argparse.Namespace) -> dict:
    """Merge preset values and explicit flags into a complete config.

    With a preset, flags left at their parser default do not override it.
    """
    cmd = ns.command
    cfg = {"command": cmd}
    if ns.preset:
        pre = dict(PRESETS[ns.preset])
        if pre["command"] != cmd:
            raise InputError(f"preset {ns.preset!r} belongs to the {pre['command']!r} command")
        cfg.update(pre)
        cfg["preset"] = ns.preset
    for k, v in vars(ns).items():
        if k in _NOT_CONFIG or k == "command" or v is None:
            continue
        if ns.preset and _is_default(cmd, k, v):
            continue
        if cmd == "are" and k == "alpha":
            k = "alphas"
        elif cmd == "if-curve" and k == "pair":
            k, v = "pairs", [v]
        elif k == "alpha" and cmd in ("estimate", "breakdown", "simulate"):
            v = _alpha(v)
        cfg[k] = v
    if cmd == "simulate":
        base = {"study": "emse", "model": "normal", "n": [100], "m": 1000, "alpha": 0.1, "k": 1,
                "estimators": ["ptm", "sd", "pm", "hm", "mean"]}
        for k, v in base.items():
            cfg.setdefault(k, v)
        if cfg["study"] != "emse":
            for k in ("model", "estimators"):
                cfg.pop(k, None)
    cfg.setdefault("seed", 0)
    return cfg


_DEFAULTS = {}


def _is_default(cmd, key, value):
    if cmd not in _DEFAULTS:
        p = build_parser()
        sub = next(a for a in p._actions if isinstance(a, argparse._SubParsersAction)).choices[cmd]
        _DEFAULTS[cmd] = {a.dest: a.default for a in sub._actions}
    return _DEFAULTS[cmd].get(key, object()) == value


def _load_config(path) -> dict:
    with open(path) as fh:
        text = fh.read()
    if text.startswith("#"):
        obj = json.loads(text.splitlines()[0][1:])
    else:
        obj = json.loads(text)
    cfg = obj.get("config", obj)
    if "command" not in cfg:
        raise InputError(f"{path} holds no command config", path=str(path))
    return cfg


def _emit_error(err: dict):
    sys.stderr.write(json.dumps({"error": err}) + "\n")


def _write(text: str, path: Optional[str]):
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    threads = ns.threads if ns.threads is not None else int(os.environ.get(ENV_THREADS, "1") or 1)
    try:
        if ns.config:
            cfg = _load_config(ns.config)
        elif ns.command is None:
            raise InputError("no command given", choices=sorted(COMMANDS))
        else:
            cfg = resolve_config(ns)
        out = run(cfg, threads=threads)
        out_path = getattr(ns, "out", None)
        if isinstance(out, str):
            _write(out, out_path)
        else:
            if cfg["command"] == "simulate" and getattr(ns, "csv", None) and "table_csv" in out["result"]:
                with open(ns.csv, "w") as fh:
                    fh.write(out["result"]["table_csv"])
            _write(json.dumps(out, indent=2) + "\n", out_path)
    except ProjTrimError as exc:
        _emit_error(exc.to_dict())
        return 2
    except (ValueError, NotImplementedError, KeyError) as exc:
        _emit_error({"code": "invalid_input", "message": str(exc), "context": {}})
        return 2
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
