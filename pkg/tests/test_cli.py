import json

import numpy as np
import pytest

import lindlab as ll
from lindlab.cli import (
    EXIT_ERROR,
    EXIT_OK,
    EXIT_VERIFY_FAILED,
    ConfigError,
    load_config,
    main,
    run_job,
    toml_dumps,
)
from lindlab.recipes import RECIPES, figure_recipes

try:
    import tomllib
except ModuleNotFoundError:
    import tomli as tomllib


def write_recipe(tmp_path, name):
    path = tmp_path / f"{name}.toml"
    path.write_text(RECIPES[name])
    return path


class TestConfigValidation:
    def test_all_recipes_parse(self, tmp_path):
        for name in RECIPES:
            cfg = load_config(write_recipe(tmp_path, name))
            assert cfg["schema"] == 1

    def test_recipes_round_trip_losslessly(self):
        for name, text in RECIPES.items():
            cfg = tomllib.loads(text)
            again = tomllib.loads(toml_dumps(cfg))
            assert again == cfg, name

    def test_unknown_key_rejected(self, tmp_path):
        path = tmp_path / "bad.toml"
        path.write_text(RECIPES["fig1a"] + "\ntypo_key = 1\n")
        with pytest.raises(ConfigError, match="typo_key"):
            load_config(path)

    def test_unknown_run_key_rejected(self, tmp_path):
        path = tmp_path / "bad.toml"
        path.write_text(RECIPES["fig1a"].replace("keep_vectors = true", "kep_vectors = true"))
        with pytest.raises(ConfigError, match="kep_vectors"):
            load_config(path)

    def test_schema_version_enforced(self, tmp_path):
        path = tmp_path / "bad.toml"
        path.write_text(RECIPES["fig1a"].replace("schema = 1", "schema = 2"))
        with pytest.raises(ConfigError, match="schema"):
            load_config(path)

    def test_bad_job_type(self, tmp_path):
        path = tmp_path / "bad.toml"
        path.write_text(RECIPES["fig1a"].replace('type = "spectrum"', 'type = "spektrum"'))
        with pytest.raises(ConfigError, match="job type"):
            load_config(path)

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError, match="not found"):
            load_config(tmp_path / "nope.toml")

    def test_nnn_knob_accepted(self, tmp_path):
        path = tmp_path / "nnn.toml"
        path.write_text(RECIPES["fig1a"].replace("delta = 2.0", "delta = 2.0\nnnn_delta = 0.3"))
        cfg = load_config(path)
        assert cfg["model"]["nnn_delta"] == 0.3
        _, code = run_job(cfg, tmp_path / "out")
        assert code == EXIT_OK


class TestRunJobs:
    def test_spectrum_job_outputs(self, tmp_path):
        cfg = load_config(write_recipe(tmp_path, "fig1a"))
        manifest, code = run_job(cfg, tmp_path / "out")
        assert code == EXIT_OK
        outdir = tmp_path / "out" / "fig1a"
        rows = [
            ln.split(",")
            for ln in (outdir / "eigenvalues.csv").read_text().splitlines()
            if not ln.startswith("#") and "," in ln
        ][1:]
        osc = [r for r in rows if r[2] == "oscillating"]
        assert len(osc) == 4
        assert all(abs(abs(float(r[1])) - 8.0) < 1e-6 for r in osc)
        names = {f["name"] for f in manifest["files"]}
        assert names == {"eigenvalues.csv"}
        assert (outdir / "manifest.json").exists()

    def test_spectrum_determinism(self, tmp_path):
        cfg = load_config(write_recipe(tmp_path, "fig1a"))
        m1, _ = run_job(cfg, tmp_path / "a")
        m2, _ = run_job(cfg, tmp_path / "b")
        assert m1["files"] == m2["files"]
        assert (tmp_path / "a/fig1a/eigenvalues.csv").read_bytes() == (
            tmp_path / "b/fig1a/eigenvalues.csv"
        ).read_bytes()

    def test_invalid_ring_size_exits_1(self, tmp_path, capsys):
        path = tmp_path / "bad.toml"
        path.write_text(RECIPES["fig2b"].replace("n = 4", "n = 2"))
        code = main(["run", str(path), "--out", str(tmp_path / "out")])
        assert code == EXIT_ERROR
        assert "n >= 3" in capsys.readouterr().err

    def test_verify_job_failure_exits_2(self, tmp_path):
        # doublon drive does not commute with the pair-raising operator, so
        # the eigenoperator certificate must fail
        text = """\
schema = 1

[job]
type = "verify-theorem3"
name = "th3-fail"

[model]
kind = "hubbard"
l_sites = 2
tau = 1.0
u = 4.0
mu = 1.0
doublon_drive = [0.5, 0.5]

[run]
a_operator = "eta_plus"
rho_source = "canonical"
tol = 1e-8
"""
        path = tmp_path / "fail.toml"
        path.write_text(text)
        cfg = load_config(path)
        _, code = run_job(cfg, tmp_path / "out")
        assert code == EXIT_VERIFY_FAILED
        report = json.loads((tmp_path / "out/th3-fail/report.json").read_text())
        assert report["pass"] is False

    def test_report_json_schema(self, tmp_path):
        cfg = load_config(write_recipe(tmp_path, "th1-xxz4"))
        run_job(cfg, tmp_path / "out")
        report = json.loads((tmp_path / "out/th1-xxz4/report.json").read_text())
        assert {"theorem", "conditions", "predictions", "tolerance", "seed", "pass"} <= set(report)
        assert report["theorem"] == "theorem1"
        for c in report["conditions"]:
            assert {"name", "residual", "pass"} == set(c)

    def test_custom_operator_file(self, tmp_path):
        _, _, sym = ll.build_hubbard_chain(
            ll.HubbardChainParams(
                l_sites=2,
                tau=1.0,
                u=4.0,
                mu=1.0,
                dephasing_kind="spin",
                dephasing_gammas=(1.0, 1.0),
            )
        )
        op_path = tmp_path / "a_op.txt"
        ll.save_coordinate_text(op_path, sym.eta_plus)
        text = RECIPES["th3-hubbard2"].replace(
            'a_operator = "eta_plus"    # eta_plus | s_plus | custom-file',
            f'a_operator = "custom-file"\na_file = "{op_path}"',
        )
        path = tmp_path / "custom.toml"
        path.write_text(text)
        cfg = load_config(path)
        _, code = run_job(cfg, tmp_path / "out")
        assert code == EXIT_OK

    def test_stationary_job_exports_states(self, tmp_path):
        cfg = load_config(write_recipe(tmp_path, "stationary-xxz4"))
        _, code = run_job(cfg, tmp_path / "out")
        assert code == EXIT_OK
        outdir = tmp_path / "out" / "stationary-xxz4"
        report = json.loads((outdir / "report.json").read_text())
        assert report["null_space_dimension"] == 1
        dim, mat = ll.load_coordinate_text(outdir / "canonical_state.txt")
        assert dim == 16
        assert abs(np.trace(mat.toarray()).real - 1.0) < 1e-9

    def test_scan_threads_do_not_change_output(self, tmp_path):
        text = RECIPES["scan-xxz"].replace("[3, 4, 5, 6]", "[3, 4]")
        path = tmp_path / "scan.toml"
        path.write_text(text)
        cfg = load_config(path)
        run_job(cfg, tmp_path / "a", threads=1)
        run_job(cfg, tmp_path / "b", threads=2)
        assert (tmp_path / "a/scan-xxz/scan.csv").read_bytes() == (
            tmp_path / "b/scan-xxz/scan.csv"
        ).read_bytes()

    def test_seed_override_changes_series(self, tmp_path):
        text = RECIPES["fig2b"].replace("t_stop = 200.0", "t_stop = 2.0")
        path = tmp_path / "short.toml"
        path.write_text(text)
        cfg = load_config(path)
        m1, _ = run_job(cfg, tmp_path / "a")
        m2, _ = run_job(cfg, tmp_path / "b", seed_override=99)
        assert m1["seed"] == 15 and m2["seed"] == 99
        assert m1["files"] != m2["files"]


class TestCliEntry:
    def test_recipes_list(self, capsys):
        assert main(["recipes", "list"]) == EXIT_OK
        out = capsys.readouterr().out.split()
        assert "fig1a" in out and "scan-xxz" in out

    def test_recipes_emit(self, capsys):
        assert main(["recipes", "emit", "fig2a"]) == EXIT_OK
        assert 'type = "evolve"' in capsys.readouterr().out

    def test_recipes_emit_unknown(self, capsys):
        assert main(["recipes", "emit", "nope"]) == EXIT_ERROR
        assert "unknown recipe" in capsys.readouterr().err

    def test_env_var_out_dir(self, tmp_path, monkeypatch):
        monkeypatch.setenv("LINDLAB_OUT", str(tmp_path / "envout"))
        path = tmp_path / "fig1a.toml"
        path.write_text(RECIPES["fig1a"])
        assert main(["run", str(path)]) == EXIT_OK
        assert (tmp_path / "envout" / "fig1a" / "eigenvalues.csv").exists()

    def test_figure_recipes_subset(self):
        names = set(figure_recipes())
        assert names == {"fig1a", "fig1b", "fig1c", "fig2a", "fig2b"}
