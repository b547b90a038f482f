import json
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

from tilewigner.cli import CACHE_ENV, main
from tilewigner.io import read_matrix

CONFIGS = Path(__file__).resolve().parents[1] / "configs"
REFERENCE = str(CONFIGS / "reference.yaml")


def run(capsys, tmp_path, *args, config=REFERENCE, name="out"):
    argv = [args[0]] + ([config] if config else []) + list(args[1:]) + ["--out", str(tmp_path / name), "--cache-dir", str(tmp_path / "cache")]
    code = main(argv)
    payload = json.loads(capsys.readouterr().out)
    return code, payload, tmp_path / name


def load(path):
    return json.loads(Path(path).read_text())


def test_tile_reference(capsys, tmp_path):
    code, payload, out = run(capsys, tmp_path, "tile")
    assert code == 0 and payload["status"] == "ok"
    scales = load(out / "scales.json")
    assert scales["N"] == 4
    assert scales["l_ir"] == pytest.approx(4.0, abs=1e-12)
    assert len(load(out / "layout.json")["tiles"]) == 4
    assert "layout.json" in load(out / "manifest.json")["artifacts"]


def test_tile_corridor_overlap(capsys, tmp_path):
    code, payload, _ = run(capsys, tmp_path, "tile", "--set", "tiling.corridor=0.1")
    assert code == 2
    assert payload["errors"][0]["code"] == "CAUSAL_OVERLAP"


def test_tile_explicit_overlapping_pair(capsys, tmp_path):
    tiles = "[{center: [-1.0]}, {center: [0.2]}, {center: [0.5]}]"
    code, payload, _ = run(capsys, tmp_path, "tile", "--set", f"tiling.tiles={tiles}")
    assert code == 2
    err = payload["errors"][0]
    assert err["code"] == "CAUSAL_OVERLAP"
    assert err["pairs"] == [[1, 2]]


def test_ccr_reference_and_coarse(capsys, tmp_path):
    code, _, out = run(capsys, tmp_path, "ccr")
    fine = load(out / "ccr.json")
    assert code == 0 and fine["max_abs_residual"] <= 1e-6 and "warn" not in fine
    code, _, out = run(capsys, tmp_path, "ccr", "--set", "quadrature.k_max=20", "--set", "quadrature.panels=16", name="coarse")
    coarse = load(out / "ccr.json")
    assert code == 0
    assert coarse["max_abs_residual"] > fine["max_abs_residual"]
    assert "warn" in coarse


def test_ccr_single_mode(capsys, tmp_path):
    code, _, out = run(capsys, tmp_path, "ccr", "--set", "tiling.tiles_per_axis=1", "--set", "output.modes=[0]")
    assert code == 0
    e = read_matrix(out / "ccr_measured.txt")
    assert e.shape == (2, 2)
    assert e[0, 0] == 0.0 and e[1, 1] == 0.0
    assert abs(e[0, 1] - 1.0) <= 1e-6
    assert load(out / "ccr.json")["cross_mode_max"] == 0.0


def test_covariance_report(capsys, tmp_path):
    code, _, out = run(capsys, tmp_path, "covariance")
    rep = load(out / "covariance.json")
    assert code == 0 and rep["uncertainty_ok"]
    assert min(rep["symplectic_eigenvalues"]) >= 0.5 - 1e-9
    assert read_matrix(out / "sigma.txt").shape == (8, 8)


def test_wigner_vacuum_and_numeric_cross_check(capsys, tmp_path):
    code, _, out = run(capsys, tmp_path, "wigner")
    rep = load(out / "wigner.json")
    assert code == 0
    assert abs(rep["normalization"] - 1.0) <= 1e-3 and rep["negativity"] == 0.0
    code, _, out = run(capsys, tmp_path, "wigner", "--numeric", name="numeric")
    rep = load(out / "wigner.json")
    assert code == 0 and rep["max_relative_deviation"] <= 1e-4
    header = (out / "wigner.csv").read_text().splitlines()[0]
    assert header == "x1,p1,value"


def test_one_particle_negativity(capsys, tmp_path):
    code, _, out = run(capsys, tmp_path, "negativity", config=str(CONFIGS / "one_particle.yaml"))
    rep = load(out / "negativity.json")
    assert code == 0
    assert 0.0 < rep["negativity_volume"] < 0.4261226388505337
    assert 0.0 < rep["mode_overlap"] < 1.0


def test_symmetry_reports(capsys, tmp_path):
    code, _, out = run(capsys, tmp_path, "symmetry", "--set", "symmetry={translation: [0.0, 0.0], rapidity: 0.0}", name="id")
    assert code == 0 and load(out / "symmetry.json")["residual"] <= 1e-12
    code, _, out = run(capsys, tmp_path, "symmetry", name="vac")
    assert code == 0 and load(out / "symmetry.json")["residual"] <= 1e-4
    code, _, out = run(capsys, tmp_path, "symmetry", "--set", "state={variant: thermal, beta: 1.0}", name="th")
    assert code == 0 and load(out / "symmetry.json")["residual"] >= 1e-2


def test_exit_codes(capsys, tmp_path):
    code, payload, _ = run(capsys, tmp_path, "ccr", "--set", "quadrature.bogus=1")
    assert code == 2 and payload["status"] == "error"
    code, _, _ = run(capsys, tmp_path, "ccr", config=str(tmp_path / "missing.yaml"))
    assert code == 2
    code, payload, _ = run(capsys, tmp_path, "s-ordered", "--set", "output.s=[1.0]", config=str(CONFIGS / "one_particle.yaml"))
    assert code == 3 and payload["errors"][0]["code"] == "ORDERING_DOMAIN"
    code, payload, _ = run(capsys, tmp_path, "wigner", "--set", "output.modes=[0, 1, 2, 3]")
    assert code == 4 and payload["errors"][0]["code"] == "COST_GUARD"


def test_cache_reuse_and_invalidation(capsys, tmp_path):
    run(capsys, tmp_path, "covariance", name="a")
    run(capsys, tmp_path, "covariance", name="b")
    assert "sigma" in load(tmp_path / "b" / "timings.json")["cache_hits"]
    assert (tmp_path / "a" / "sigma.txt").read_bytes() == (tmp_path / "b" / "sigma.txt").read_bytes()
    run(capsys, tmp_path, "covariance", "--set", "quadrature.k_max=79.5", name="c")
    assert load(tmp_path / "c" / "timings.json")["cache_hits"] == []
    assert load(tmp_path / "a" / "manifest.json")["config_hash"] != load(tmp_path / "c" / "manifest.json")["config_hash"]


def test_cache_env_var(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv(CACHE_ENV, str(tmp_path / "envcache"))
    assert main(["covariance", REFERENCE, "--out", str(tmp_path / "o")]) == 0
    capsys.readouterr()
    assert any((tmp_path / "envcache").iterdir())


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "tilewigner", "--version"], capture_output=True, text=True, check=True)
    assert out.stdout.strip().startswith("tilewigner ")


def test_all_writes_every_artifact(capsys, tmp_path):
    code, _, out = run(capsys, tmp_path, "all")
    assert code == 0
    names = set(load(out / "manifest.json")["artifacts"])
    for expected in ("scales.json", "ccr.json", "covariance.json", "wigner.csv", "negativity.json", "s_ordered_1.csv", "symmetry.json"):
        assert expected in names
    husimi = np.loadtxt(out / "s_ordered_1.csv", delimiter=",", skiprows=1)
    assert husimi[:, -1].min() >= 0.0
