import csv
import math
import os

import numpy as np
import pytest

from moebiuskit import cli
from moebiuskit.bound import SQRT3, T0
from moebiuskit.constructions import read_obj_vertices
from moebiuskit.strip_model import load_strip, validate_foliation


def read_csv(path):
    with open(path) as fh:
        return list(csv.DictReader(line for line in fh if not line.startswith("#")))


def test_bound_sweep(tmp_path):
    out = tmp_path / "sweep.csv"
    assert cli.main(["bound", "sweep", "--t-min", "0", "--t-max", "2", "--steps", "2001", "--out", str(out)]) == 0
    first = out.read_text().splitlines()
    assert first[0].startswith("# moebiuskit") and "seed=" in first[0]
    assert first[1] == "t,alpha,beta,lower_bound,branch"
    rows = read_csv(out)
    assert len(rows) == 2002
    exact = [r for r in rows if float(r["t"]) == T0]
    assert len(exact) == 1
    assert float(exact[0]["lower_bound"]) == pytest.approx(1.7320508, abs=1e-7)
    assert exact[0]["branch"] == "both"
    # 17 significant digits
    assert len(exact[0]["lower_bound"].replace(".", "").lstrip("0")) == 17
    assert min(float(r["lower_bound"]) for r in rows) == pytest.approx(SQRT3, abs=1e-15)


def test_bound_sweep_errors(tmp_path):
    assert cli.main(["bound", "sweep", "--steps", "1"]) == 2
    assert cli.main(["bound", "sweep", "--t-min", "2", "--t-max", "1"]) == 2
    assert cli.main(["bound", "sweep", "--out", str(tmp_path / "missing" / "x.csv")]) == 3
    assert cli.main(["bound", "sweep", "--out", str(tmp_path)]) == 3


def test_usage_errors():
    assert cli.main([]) == 2
    assert cli.main(["frobnicate"]) == 2
    assert cli.main(["verify", "--suite", "bnd"]) == 2


def test_construct_triangular(tmp_path):
    mesh, strip = tmp_path / "t.obj", tmp_path / "t.json"
    assert cli.main(["construct", "triangular", "--out-mesh", str(mesh), "--out-strip", str(strip)]) == 0
    V = read_obj_vertices(mesh)
    d = np.linalg.norm(V[:, None] - V[None], axis=2)
    # every vertex sits on one of three corners pairwise 2/sqrt(3) apart
    apart = d[d > 1e-9]
    assert np.allclose(apart, 2 / SQRT3, atol=1e-12)
    assert len(np.unique(np.round(V, 6), axis=0)) == 3
    assert load_strip(strip).lam == pytest.approx(SQRT3)


def test_construct_triangular_default_paths(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    assert cli.main(["construct", "triangular"]) == 0
    assert (tmp_path / "triangular.obj").exists() and (tmp_path / "triangular.json").exists()


def test_construct_errors(tmp_path):
    assert cli.main(["construct", "smoothed", "--eps", "0.4", "--out-mesh", str(tmp_path / "a.obj")]) == 2
    assert cli.main(["construct", "smoothed"]) == 2
    assert cli.main(["construct", "triangular", "--eps", "0.1"]) == 2


def test_construct_smoothed_then_tpattern(tmp_path):
    mesh, strip, report = tmp_path / "s.obj", tmp_path / "s.json", tmp_path / "report.txt"
    assert cli.main(["construct", "smoothed", "--eps", "0.1", "--out-mesh", str(mesh),
                     "--out-strip", str(strip)]) == 0
    assert validate_foliation(load_strip(strip)).ok
    assert cli.main(["tpattern", str(strip), "--out", str(report)]) == 0
    fields = dict(line.split("=", 1) for line in report.read_text().splitlines() if not line.startswith("#"))
    assert abs(float(fields["residual_g"])) < 1e-8 and abs(float(fields["residual_h"])) < 1e-8
    assert float(fields["min_distance"]) > 0
    assert abs(float(fields["t"]) - T0) < 0.05
    assert all(abs(2 * float(w) - round(2 * float(w))) < 1e-6 for w in fields["meridian_windings"].split(","))
    assert "tol=" in report.read_text().splitlines()[0]


def test_tpattern_errors(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert cli.main(["tpattern", str(bad)]) == 2
    assert cli.main(["tpattern", str(tmp_path / "nothing.json")]) == 3
    tri = tmp_path / "tri.json"
    assert cli.main(["construct", "triangular", "--out-mesh", str(tmp_path / "tri.obj"),
                     "--out-strip", str(tri)]) == 0
    # the PL band touches itself, so its strip fails validation
    assert cli.main(["tpattern", str(tri)]) == 5


def test_tpattern_not_found(tmp_path, monkeypatch, smooth_strips):
    from moebiuskit import t_pattern
    from moebiuskit.strip_model import save_strip

    path = tmp_path / "s.json"
    save_strip(smooth_strips[0.2], path)
    real = t_pattern.find_t_pattern

    def shallow(strip, tol=1e-10, config=None, certify=True):
        return real(strip, tol, t_pattern.SearchConfig(n_theta=16, n_phi=8, max_depth=1), certify)

    monkeypatch.setattr(t_pattern, "find_t_pattern", shallow)
    assert cli.main(["tpattern", str(path)]) == 4


def test_limit_study(tmp_path):
    out = tmp_path / "limit.csv"
    assert cli.main(["limit-study", "--eps", "0.2", "--out", str(out)]) == 0
    rows = read_csv(out)
    assert len(rows) == 1
    assert list(rows[0]) == ["eps", "lambda", "t", "H1", "H2", "D1", "D2", "sup_dist"]
    assert cli.main(["limit-study", "--eps", "0.05,0.1"]) == 2
    assert cli.main(["limit-study", "--eps", "0.3"]) == 2
    assert cli.main(["limit-study", "--eps", "abc"]) == 2


def test_threads_env(monkeypatch, tmp_path):
    monkeypatch.setenv("MOEBIUSKIT_THREADS", "zero")
    assert cli.main(["limit-study", "--eps", "0.2"]) == 2
    monkeypatch.setenv("MOEBIUSKIT_THREADS", "2")
    out = tmp_path / "l.csv"
    assert cli.main(["limit-study", "--eps", "0.2,0.1", "--out", str(out)]) == 0
    assert len(read_csv(out)) == 2


def test_verify_bound_suite(capsys):
    assert cli.main(["verify", "--suite", "bound", "--seed", "7"]) == 0
    text = capsys.readouterr().out
    assert "crossing at 0.5773502692" in text
    assert "seed=7" in text.splitlines()[0]


def test_verify_all_is_deterministic(tmp_path):
    a, b = tmp_path / "a.txt", tmp_path / "b.txt"
    assert cli.main(["verify", "--suite", "all", "--seed", "7", "--out", str(a)]) == 0
    assert cli.main(["verify", "--suite", "all", "--seed", "7", "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert "FAIL" not in a.read_text()


def test_verify_reports_failure(monkeypatch):
    from moebiuskit import verify

    def broken(seed):
        return [verify.PropertyResult("line", "always fails", False, 1)]

    monkeypatch.setitem(verify.SUITES, "line", broken)
    assert cli.main(["verify", "--suite", "line"]) == 1


def test_asymptotic_commands(tmp_path):
    out = tmp_path / "trace.csv"
    assert cli.main(["asymptotic", "trace", "--preset", "cylinder", "--p0", "0.1,0.2", "--max-len", "0.3",
                     "--out", str(out)]) == 0
    rows = read_csv(out)
    assert len(rows) == 31
    assert all(float(r["y"]) == pytest.approx(0.2) for r in rows)
    out2 = tmp_path / "conn.csv"
    assert cli.main(["asymptotic", "connector", "--preset", "cone", "--out", str(out2)]) == 0
    assert float(read_csv(out2)[0]["max_ratio"]) < 3
    assert cli.main(["asymptotic", "connector", "--preset", "parabolic-cylinder", "--param", "C=1"]) == 5
    assert cli.main(["asymptotic", "trace", "--preset", "plane"]) == 1
    assert cli.main(["asymptotic", "trace", "--preset", "cone", "--param", "Q=1"]) == 2
    assert cli.main(["asymptotic", "trace", "--preset", "cylinder", "--p0", "0,0.95"]) == 2


def test_atomic_write_leaves_no_temp_files(tmp_path):
    out = tmp_path / "sweep.csv"
    assert cli.main(["bound", "sweep", "--steps", "3", "--out", str(out)]) == 0
    assert os.listdir(tmp_path) == ["sweep.csv"]
    assert not math.isnan(float(read_csv(out)[0]["t"]))
