import json

import numpy as np
import pytest

from tmethod import distributions as D
from tmethod.cli import main
from tmethod.experiments import block_maxima
from tmethod.io import read_csv, validate


@pytest.fixture
def maxima(tmp_path):
    p = tmp_path / "maxima.csv"
    np.savetxt(p, block_maxima(D.normal(), 100, 1000, 3), header="x", comments="")
    return p


def test_fit_writes_json(maxima, tmp_path):
    out, qq = tmp_path / "fit.json", tmp_path / "qq.csv"
    assert main(["fit", "--family", "power", "--input", str(maxima), "--out", str(out),
                 "--qq", str(qq)]) == 0
    fit = json.loads(out.read_text())
    assert {"beta", "a", "b", "loglik", "converged"} <= fit.keys()
    validate(fit, "fit")
    fmt, header, rows = read_csv(qq)
    assert fmt == "tmethod.qq.v1" and len(rows) == 1000


@pytest.mark.parametrize("family", ["classical", "gumbel", "identity", "logpower", "auto"])
def test_fit_families(maxima, tmp_path, family):
    data = maxima
    if family == "logpower":
        data = tmp_path / "ln.csv"
        np.savetxt(data, block_maxima(D.lognormal(), 100, 500, 3))
    out = tmp_path / "fit.json"
    assert main(["fit", "--family", family, "--input", str(data), "--out", str(out)]) == 0
    validate(json.loads(out.read_text()), "fit")


def test_fit_synthetic(tmp_path):
    out = tmp_path / "fit.json"
    assert main(["fit", "--dist", "exponential", "--n", "100", "--m", "300", "--family", "classical",
                 "--out", str(out), "--seed", "2"]) == 0


def test_nonconvergence_exit_code(maxima, tmp_path, capsys):
    out = tmp_path / "fit.json"
    code = main(["fit", "--input", str(maxima), "--out", str(out), "--max-iter", "3",
                 "--restarts", "1"])
    assert code == 3
    assert json.loads(out.read_text())["converged"] is False
    err = json.loads(capsys.readouterr().err)
    validate(err, "error")
    assert err["error"] == "ConvergenceError"


def test_bad_input_reports_rows(tmp_path, capsys):
    p = tmp_path / "bad.csv"
    p.write_text("1.0\nabc\n")
    assert main(["fit", "--input", str(p)]) == 1
    err = json.loads(capsys.readouterr().err)
    validate(err, "error")
    assert err["rows"][0][0] == 2


def test_missing_file(capsys):
    assert main(["fit", "--input", "/nonexistent/file.csv"]) == 1
    assert json.loads(capsys.readouterr().err)["error"]


def test_convergence_csv(tmp_path):
    out = tmp_path / "conv.csv"
    assert main(["convergence", "--dist", "exponential", "--n", "10,100,1000",
                 "--out", str(out)]) == 0
    fmt, header, rows = read_csv(out)
    w = [float(r[header.index("w_n")]) for r in rows]
    np.testing.assert_allclose(w, [0.05, 0.005, 0.0005], rtol=0.05)


def test_convergence_json(capsys):
    assert main(["convergence", "--dist", "gamma:0.5", "--n", "100", "--format", "json"]) == 0
    validate(json.loads(capsys.readouterr().out), "convergence")


def test_suggest(maxima, capsys):
    assert main(["suggest", "--input", str(maxima)]) == 0
    assert json.loads(capsys.readouterr().out)["kind"] == "power"


def test_experiment_is_byte_identical(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for out in (a, b):
        assert main(["experiment", "--preset", "fig2-normal", "--runs", "100", "--seed", "7",
                     "--threads", "4", "--out", str(out)]) == 0
    assert a.read_bytes() == b.read_bytes()
    validate(json.loads(a.read_text()), "mc_summary")


def test_experiment_runs_csv(tmp_path):
    out, runs = tmp_path / "s.json", tmp_path / "runs.csv"
    assert main(["experiment", "--preset", "supp-exponential", "--runs", "3", "--m", "200",
                 "--levels", "1e-3,1e-6", "--out", str(out), "--runs-csv", str(runs)]) == 0
    fmt, header, rows = read_csv(runs)
    assert header == ["run_id", "method", "level", "quantile"] and len(rows) == 12


def test_experiment_disk(tmp_path):
    out = tmp_path / "disk.json"
    assert main(["experiment", "--preset", "fig1-disks", "--seed", "1", "--out", str(out)]) == 0
    validate(json.loads(out.read_text()), "disk_report")


def test_seed_from_environment(tmp_path, monkeypatch):
    monkeypatch.setenv("TMETHOD_SEED", "5")
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    main(["fit", "--dist", "normal", "--m", "200", "--family", "classical", "--out", str(a)])
    main(["fit", "--dist", "normal", "--m", "200", "--family", "classical", "--out", str(b),
          "--seed", "5"])
    assert a.read_bytes() == b.read_bytes()
