import json

import numpy as np
import pytest

import oracles
from projtrim.errors import InputError
from projtrim.simulate import (Component, EmseReport, ModelSpec, StudyConfig, emse, mixture_model,
                               normal_model, normality_study, radius_consistency_study, run_study, sample)


def test_sample_determinism_and_counts():
    model = mixture_model(0.2)
    a = sample(model, 50, seed=3, replicate=7)
    assert np.array_equal(a, sample(model, 50, seed=3, replicate=7))
    assert not np.array_equal(a, sample(model, 50, seed=3, replicate=8))
    assert model.counts(50) == [40, 10] and model.counts(7) == [6, 1]
    # contamination block sits last and far away
    assert np.all(a[40:].mean(axis=0) > 5)


def test_model_round_trip_and_validation():
    m = ModelSpec(2, (Component(0.7, (0.0, 0.0)), Component(0.3, (1.0, 1.0), 2.0, 3.0)))
    assert ModelSpec.from_dict(json.loads(json.dumps(m.to_dict()))) == m
    with pytest.raises(InputError):
        ModelSpec(2, (Component(0.5, (0.0, 0.0)),))
    with pytest.raises(InputError):
        ModelSpec(2, (Component(1.0, (0.0,)),))
    assert mixture_model(0.0) == normal_model(2)


def test_emse():
    assert emse([[1.0, 0.0], [0.0, 1.0]]) == pytest.approx(1.0)
    assert emse([[1.0, 1.0]], theta=[1.0, 1.0]) == 0.0
    with pytest.raises(InputError):
        emse(np.empty((0, 2)))


@pytest.mark.parametrize("eps", [0.1, 0.2])
def test_mean_emse_matches_fixed_count_formula(eps):
    cfg = StudyConfig(mixture_model(eps), (20,), 4000, ("mean",), 0.1, 1, 0)
    got = run_study(cfg).row(20)["estimators"]["mean"]["emse"]
    assert got == pytest.approx(oracles.fixed_count_mean_emse(20, eps), rel=0.03)


def test_small_study_threads_invariance_and_round_trip():
    cfg = StudyConfig(mixture_model(0.1), (20, 30), 6, ("ptm", "sd", "pm", "hm"), 0.1, 1, 5)
    r1 = run_study(cfg, threads=1)
    r2 = run_study(cfg, threads=3)
    assert r1.rows == r2.rows
    assert r1.config["estimators"][-1] == "mean"
    row = r1.row(20)
    assert row["estimators"]["mean"]["re"] == 1.0
    assert all(np.isfinite(v["emse"]) for v in row["estimators"].values())
    again = EmseReport.from_json(r1.to_json())
    assert again.rows == r1.rows and StudyConfig.from_dict(again.config).m == 6
    csv = r1.to_csv().splitlines()
    assert csv[0].startswith("# schema_version=") and csv[1] == "n,ptm,sd,pm,hm,mean"
    assert len(csv) == 4


def test_threads_env_var(monkeypatch):
    cfg = StudyConfig(normal_model(2), (15,), 4, ("ptm",), 0.2, 1, 1)
    base = run_study(cfg).rows
    monkeypatch.setenv("PROJTRIM_THREADS", "2")
    assert run_study(cfg).rows == base


def test_failures_are_counted_and_flagged():
    # alpha close to 1 leaves the trimmed set empty in every replicate
    cfg = StudyConfig(normal_model(2), (15,), 3, ("ptm",), 0.95, 1, 0)
    row = run_study(cfg).rows[0]
    assert row["estimators"]["ptm"]["failures"] == 3 and row["flagged"]
    assert np.isnan(row["estimators"]["ptm"]["emse"])


def test_study_validation():
    with pytest.raises(InputError):
        run_study(StudyConfig(estimators=("nope",), m=1))
    with pytest.raises(InputError):
        run_study(StudyConfig(m=0))


def test_radius_consistency_small():
    rows = radius_consistency_study(0.5, n_list=(100,), reps=2, n_angles=64)
    assert rows[0]["n"] == 100 and len(rows[0]["values"]) + rows[0]["invalid"] == 2
    assert 0 < rows[0]["median"] < 1


def test_normality_small():
    rep = normality_study(alpha=0.2, n=40, m=20, seed=1)
    assert rep.estimates.shape == (20, 2) and rep.failures == 0
    lines = rep.to_csv().splitlines()
    head = json.loads(lines[0][2:])
    assert head["m"] == 20 and lines[1] == "x1,x2" and len(lines) == 22
    assert np.allclose(np.array([l.split(",") for l in lines[2:]], float), rep.estimates)
    assert normality_study(alpha=0.2, n=40, m=20, seed=1, threads=2).estimates.tolist() == rep.estimates.tolist()
