import csv
import io
import json

import numpy as np
import pytest
from click.testing import CliRunner

from phasesup import grover
from phasesup.cli import main
from phasesup.core import matrix_to_json, random_density_matrix
from phasesup.estimator import CSV_FIELDS


@pytest.fixture
def run():
    runner = CliRunner()

    def invoke(*args, env=None):
        return runner.invoke(main, list(args), env=env, catch_exceptions=False)

    return invoke


def test_help_documents_exit_codes(run):
    out = run("--help").output
    for code in ("0", "1", "2", "3"):
        assert f"  {code}  " in out


def test_eval_ghz(run):
    res = run("eval", "--catalog", "ghz", "--theta", "zero")
    assert res.exit_code == 0
    obj = json.loads(res.output)
    assert obj["S_theta"] == pytest.approx(0.25)
    assert obj["mean_superposition"] == pytest.approx(1 / 8)


def test_eval_theta_forms(run):
    a = json.loads(run("eval", "--catalog", "qubit:0.6,0,0", "--theta", "0,3.141592653589793").output)
    assert a["S_theta"] == pytest.approx(0.2)
    r1 = run("eval", "--catalog", "w", "--theta", "random:4").output
    assert r1 == run("eval", "--catalog", "w", "--theta", "random:4").output
    assert run("eval", "--catalog", "w", "--theta", "1,2").exit_code == 2


def test_eval_csv(run):
    out = run("eval", "--catalog", "werner:0.5", "--format", "csv").output
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["quantity", "value"]
    assert dict(rows[1:])["S_theta"] == repr(0.125)


def test_input_file_and_invalid_state(run, tmp_path, rng):
    good = tmp_path / "rho.json"
    rho = random_density_matrix(3, rng)
    good.write_text(json.dumps(matrix_to_json(rho)))
    assert run("eval", "--input", str(good)).exit_code == 0
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"d": 2, "re": [[1, 0], [0, 1]], "im": [[0, 0], [0, 0]]}))
    res = CliRunner().invoke(main, ["eval", "--input", str(bad)])
    assert res.exit_code == 2
    assert "trace" in res.output
    nonherm = tmp_path / "nh.json"
    nonherm.write_text(json.dumps({"d": 2, "re": [[0.5, 0.3], [0.1, 0.5]], "im": [[0, 0], [0, 0]]}))
    res = CliRunner().invoke(main, ["extremize", "--input", str(nonherm), "--mode", "max"])
    assert res.exit_code == 2 and "hermitian" in res.output


def test_input_source_required(run):
    assert CliRunner().invoke(main, ["eval"]).exit_code == 2
    assert CliRunner().invoke(main, ["eval", "--catalog", "bogus"]).exit_code == 2


def test_extremize(run):
    obj = json.loads(run("extremize", "--catalog", "werner:0.5", "--mode", "max", "--strict").output)
    assert obj["value"] == pytest.approx(0.375, abs=1e-8)
    assert obj["method"] == "multi-start-gradient" and obj["converged"]
    pure = json.loads(run("extremize", "--catalog", "w", "--mode", "max").output)
    assert pure["method"] == "closed-form" and pure["value"] == pytest.approx(3 / 8)
    grid = json.loads(run("extremize", "--catalog", "qubit:0.6,0,0", "--mode", "min", "--method", "grid").output)
    assert grid["value"] == pytest.approx(0.2, abs=1e-6)
    out = run("extremize", "--catalog", "ghz", "--mode", "min", "--format", "csv").output
    assert out.splitlines()[0].startswith("state,mode,value")


def test_extremize_strict_non_convergence(tmp_path, rng):
    path = tmp_path / "rho.json"
    path.write_text(json.dumps(matrix_to_json(random_density_matrix(4, rng))))
    res = CliRunner().invoke(main, ["extremize", "--input", str(path), "--mode", "max",
                                    "--method", "optimizer", "--restarts", "1", "--max-iterations", "1", "--strict"])
    assert res.exit_code == 3
    res = CliRunner().invoke(main, ["extremize", "--catalog", "werner:0.5", "--mode", "max", "--method", "closed-form"])
    assert res.exit_code == 2


def test_estimate_coherence_example(run):
    obj = json.loads(run("estimate", "--catalog", "bell:phi+", "--target", "coherence",
                         "--samples", "100000", "--seed", "7").output)
    assert abs(obj["estimate"] - 0.5) <= 5 * obj["standard_error"]
    assert obj["seed"] == 7 and obj["samples"] == 100_000


def test_estimate_seed_env(run):
    a = run("estimate", "--catalog", "w", "--target", "mean", "--samples", "2000", env={"PHASESUP_SEED": "5"}).output
    b = run("estimate", "--catalog", "w", "--target", "mean", "--samples", "2000", "--seed", "5").output
    assert a == b and json.loads(a)["seed"] == 5


@pytest.mark.parametrize("target", ["mean", "second_moment", "gradient_sq", "hessian_sq"])
def test_estimate_csv_schema(run, target):
    out = run("estimate", "--catalog", "qubit:0.6,0,0", "--target", target, "--samples", "3000", "--format", "csv").output
    rows = list(csv.reader(io.StringIO(out)))
    assert tuple(rows[0]) == CSV_FIELDS and rows[1][0] == target


def test_estimate_channel(run):
    obj = json.loads(run("estimate", "--catalog", "bell:phi+", "--target", "channel", "--samples", "4000").output)
    assert obj["estimate"]["d"] == 4
    out = run("estimate", "--catalog", "bell:phi+", "--target", "channel", "--samples", "4000", "--format", "csv").output
    assert len(out.splitlines()) == 1 + 2 * 16
    assert CliRunner().invoke(main, ["estimate", "--catalog", "w", "--target", "mean", "--samples", "1"]).exit_code == 2


def test_grover_sweep_fig1(run):
    out = run("grover-sweep", "--N", "150", "--M", "1", "--t-max", "20", "--format", "csv").output
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 21
    assert tuple(rows[0]) == grover.CSV_FIELDS
    P = [float(r["P"]) for r in rows]
    assert int(np.argmax(P[:15])) == 9
    assert float(rows[0]["Smax"]) == 1.0
    obj = json.loads(run("grover-sweep", "--N", "40", "--M", "2", "--beta", "1.0", "--phi", "0.5", "--t-max", "3").output)
    assert len(obj) == 4 and obj[0]["beta"] == 1.0
    assert CliRunner().invoke(main, ["grover-sweep", "--N", "4", "--M", "4"]).exit_code == 2


def test_catalog_commands(run):
    names = run("catalog", "list").output.split()
    assert "ghz" in names and "bell-diagonal:0.5,0.2,0" in names
    obj = json.loads(run("catalog", "emit", "bell-diagonal:0.5,0.2,0").output)
    assert obj["reference"]["S_max"] == "derived"
    assert obj["state"]["d"] == 4
    assert CliRunner().invoke(main, ["catalog", "emit", "nope"]).exit_code == 2


def test_verify_exit_codes(run, tmp_path):
    res = run("verify", "--catalog", "werner:0.5", "--samples", "20000")
    assert res.exit_code == 0
    assert all(line.startswith("PASS") for line in res.output.splitlines()[:-1])
    assert "checks passed" in res.output.splitlines()[-1]


def test_verify_reports_failure(monkeypatch):
    from phasesup import catalog

    real = catalog.from_name

    def tampered(name):
        e = real(name)
        ref = dict(e.reference, S_0=e.reference["S_0"] + 0.1)
        return catalog.CatalogEntry(e.name, e.state, ref, e.pure, e.notes)

    monkeypatch.setattr(catalog, "from_name", tampered)
    res = CliRunner().invoke(main, ["verify", "--catalog", "werner:0.5", "--samples", "5000"])
    assert res.exit_code == 1
    assert "FAIL S_0 vs reference" in res.output


def test_output_file_is_byte_identical(run, tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for path in (a, b):
        assert run("grover-sweep", "--N", "150", "--t-max", "20", "--format", "csv", "--output", str(path)).exit_code == 0
    assert a.read_bytes() == b.read_bytes()
    assert a.read_bytes().endswith(b"\n")
    c, d = tmp_path / "c.json", tmp_path / "d.json"
    for path in (c, d):
        run("extremize", "--catalog", "bell-diagonal:0.5,0.2,0", "--mode", "max", "-o", str(path))
    assert c.read_bytes() == d.read_bytes()
