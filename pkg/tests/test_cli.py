import json
import subprocess
import sys

import numpy as np
import pytest

from projtrim import __version__
from projtrim.cli import PRESETS, build_parser, main, parse_points, resolve_config
from projtrim.errors import InputError

DIAMOND = "1,0\n-1,0\n0,1\n0,-1\n"


@pytest.fixture
def cloud(tmp_path):
    X = np.random.default_rng(0).normal(size=(30, 2))
    path = tmp_path / "x.csv"
    path.write_text("a,b\n" + "\n".join(f"{float(x)!r},{float(y)!r}" for x, y in X) + "\n")
    return path, X


def run_cli(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_parse_points(tmp_path, cloud):
    path, X = cloud
    assert np.array_equal(parse_points(path), X)
    p = tmp_path / "c.csv"
    p.write_text("# comment\n\n1,2\n3,4\n")
    assert parse_points(p).tolist() == [[1, 2], [3, 4]]


@pytest.mark.parametrize("text,key", [("", None), ("x,y\n", None), ("1,2\n3,oops\n", (2, 2)),
                                      ("1,2\n3\n", None), ("1,2\n3,inf\n", (2, 2))])
def test_parse_points_errors(tmp_path, text, key):
    p = tmp_path / "bad.csv"
    p.write_text(text)
    with pytest.raises(InputError) as err:
        parse_points(p)
    if key:
        assert (err.value.context["row"], err.value.context["column"]) == key
    with pytest.raises(InputError):
        parse_points(tmp_path / "missing.csv")


def test_depth_command(capsys, tmp_path):
    p = tmp_path / "d.csv"
    p.write_text(DIAMOND)
    q = tmp_path / "q.csv"
    q.write_text("2,0\n0,0\n")
    code, out, _ = run_cli(capsys, "depth", p, "--points", q, "--strategy", "exact", "--k", "1")
    assert code == 0
    lines = out.splitlines()
    assert json.loads(lines[0][2:])["config"]["command"] == "depth"
    assert lines[1].startswith("x1,x2,outlyingness,depth,w1,w2")
    first = lines[2].split(",")
    assert float(first[2]) == pytest.approx(4.0) and float(first[3]) == pytest.approx(0.2)
    assert float(lines[3].split(",")[3]) == 1.0


def test_estimate_command(capsys, cloud):
    path, X = cloud
    code, out, _ = run_cli(capsys, "estimate", path, "--estimator", "all", "--alpha", "0.2")
    assert code == 0
    obj = json.loads(out)
    assert obj["schema_version"] == 1 and obj["version"] == __version__
    est = obj["result"]["estimates"]
    assert set(est) == {"ptm", "sd", "pm", "hm", "mean"}
    assert np.allclose(est["mean"]["location"], X.mean(axis=0))
    assert est["ptm"]["alpha"] == 0.2


def test_contour_command_and_config_round_trip(capsys, cloud, tmp_path):
    path, _ = cloud
    out_file = tmp_path / "contour.csv"
    code, _, _ = run_cli(capsys, "contour", path, "--alpha", "0.3", "--n-dirs", "12", "--out", out_file)
    assert code == 0
    text = out_file.read_text()
    rows = np.loadtxt(text.splitlines()[2:], delimiter=",")
    assert rows.shape == (12, 4) and np.all(rows[:, 1] > 0)
    code, again, _ = run_cli(capsys, "--config", out_file)
    assert code == 0 and again.splitlines()[2:] == text.splitlines()[2:]


def test_alpha_d_and_breakdown_commands(capsys, cloud):
    path, _ = cloud
    code, out, _ = run_cli(capsys, "alpha-d", path)
    r = json.loads(out)["result"]
    assert code == 0 and 0 < r["alpha_d"] <= 1 / 3 and r["exact"]
    code, out, _ = run_cli(capsys, "breakdown", "--n", "20", "--d", "2", "--k", "3")
    r = json.loads(out)["result"]
    assert code == 0 and r["bp"] == "9/20" and r["count"] == 9
    code, out, _ = run_cli(capsys, "breakdown", path, "--m", "2", "--magnitude", "1e8", "--seeds", "2")
    r = json.loads(out)["result"]
    assert code == 0 and r["probes"][0]["m"] == 2 and np.isfinite(r["probes"][0]["max_norm"])


def test_if_curve_and_are_commands(capsys):
    code, out, _ = run_cli(capsys, "if-curve", "--target", "radius", "--num", "5", "--start=-2,0",
                           "--stop", "2,0")
    assert code == 0
    lines = out.splitlines()
    assert lines[1] == "x1,x2,if_medmad" and len(lines) == 7
    code, out, _ = run_cli(capsys, "are", "--alpha", "0.1,0.2", "--method", "closed")
    rows = json.loads(out)["result"]["rows"]
    assert code == 0 and [r["alpha"] for r in rows] == [0.1, 0.2] and all(0 < r["are"] <= 1 for r in rows)


def test_simulate_command_threads_invariant(capsys, tmp_path, monkeypatch):
    args = ["simulate", "--model", "mix10", "--n", "20", "--m", "4", "--estimators", "ptm,mean"]
    code, one, _ = run_cli(capsys, "--threads", "1", *args, "--csv", tmp_path / "t.csv")
    assert code == 0 and (tmp_path / "t.csv").read_text().startswith("# schema_version=")
    code, two, _ = run_cli(capsys, "--threads", "2", *args)
    assert json.loads(one)["result"]["rows"] == json.loads(two)["result"]["rows"]
    monkeypatch.setenv("PROJTRIM_THREADS", "3")
    code, three, _ = run_cli(capsys, *args)
    assert json.loads(three)["result"]["rows"] == json.loads(one)["result"]["rows"]
    saved = tmp_path / "report.json"
    saved.write_text(one)
    code, again, _ = run_cli(capsys, "--config", saved)
    assert json.loads(again)["result"]["rows"] == json.loads(one)["result"]["rows"]


def test_presets_resolve():
    p = build_parser()
    for name, pre in PRESETS.items():
        argv = [pre["command"], "--preset", name]
        cfg = resolve_config(p.parse_args(argv))
        for k, v in pre.items():
            assert cfg[k] == v, (name, k)
    cfg = resolve_config(p.parse_args(["simulate", "--preset", "table2", "--m", "7"]))
    assert cfg["m"] == 7 and cfg["model"] == "normal"
    cfg = resolve_config(p.parse_args(["simulate", "--preset", "fig5"]))
    assert cfg["alpha"] == 0.36 and cfg["n"] == [300] and "model" not in cfg


def test_errors_are_json(capsys, tmp_path):
    code, _, err = run_cli(capsys, "are", "--preset", "fig4")
    assert code == 2 and json.loads(err)["error"]["code"] == "invalid_input"
    bad = tmp_path / "bad.csv"
    bad.write_text("1,2\n3,x\n")
    code, _, err = run_cli(capsys, "alpha-d", bad)
    e = json.loads(err)["error"]
    assert code == 2 and e["context"] == {"row": 2, "column": 2}
    p = tmp_path / "d.csv"
    p.write_text(DIAMOND)
    code, _, err = run_cli(capsys, "estimate", p, "--alpha", "0.99")
    assert code == 2 and json.loads(err)["error"]["code"] == "empty_region"
    with pytest.raises(SystemExit) as exc:
        main(["estimate"])
    assert exc.value.code == 2
    assert json.loads(capsys.readouterr().err)["error"]["code"] == "usage"


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "projtrim", "--version"], capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout.strip() == __version__
