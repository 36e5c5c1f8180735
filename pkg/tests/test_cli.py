import json


from spinflow.cli import main
from spinflow.csvio import sha256_file


def write_cfg(tmp_path, cfg, name="cfg.json"):
    p = tmp_path / name
    p.write_text(json.dumps(cfg))
    return str(p)


def mi_config(out_name="mi-smoke"):
    return {
        "name": out_name,
        "flow": "mi",
        "grid": {"nx": 32, "ny": 32, "Lx": 6.283185307179586,
                 "Ly": 6.283185307179586},
        "params": {"dt": 2e-3, "steps": 8, "stride": 4, "order": 4},
        "initial": {"preset": "random-smooth", "seed": 11, "bandwidth": 2,
                    "amplitude": 0.2},
        "checks": ["gauge"],
    }


def test_validate_and_list(tmp_path, capsys):
    cfg = write_cfg(tmp_path, mi_config())
    assert main(["validate", cfg]) == 0
    assert main(["list-presets"]) == 0
    out = capsys.readouterr().out
    assert "magnon" in out and "sphere-cap" in out


def test_invalid_config_exit_code(tmp_path):
    cfg = write_cfg(tmp_path, {"name": "x", "flow": "nope"})
    assert main(["validate", cfg]) == 4
    assert main(["run", cfg, "--out", str(tmp_path / "out")]) == 4


def test_run_writes_report_and_artifacts(tmp_path):
    cfg = write_cfg(tmp_path, mi_config())
    out = tmp_path / "out"
    assert main(["run", cfg, "--out", str(out)]) == 0
    rep = json.loads((out / "mi-smoke" / "report.json").read_text())
    assert rep["checks"][0]["name"] == "gauge"
    assert rep["checks"][0]["passed"]
    assert rep["artifacts"]
    # every artifact hash matches its file
    for name, digest in rep["artifacts"].items():
        assert sha256_file(str(out / "mi-smoke" / name)) == digest


def test_run_determinism(tmp_path):
    """Identical config and seed produce byte-identical CSV artifacts."""
    cfg = write_cfg(tmp_path, mi_config())
    out1, out2 = tmp_path / "o1", tmp_path / "o2"
    assert main(["run", cfg, "--out", str(out1)]) == 0
    assert main(["run", cfg, "--out", str(out2)]) == 0
    rep1 = json.loads((out1 / "mi-smoke" / "report.json").read_text())
    rep2 = json.loads((out2 / "mi-smoke" / "report.json").read_text())
    assert rep1["artifacts"] == rep2["artifacts"]


def test_failing_check_exit_code(tmp_path, monkeypatch):
    from spinflow import checks as checks_mod
    from spinflow.checks import CheckResult

    def always_fail(product, outdir=None):
        return CheckResult(name="gauge", passed=False)

    monkeypatch.setitem(checks_mod.CHECK_TABLE, "gauge", always_fail)
    cfg = write_cfg(tmp_path, mi_config("mi-fail"))
    assert main(["run", cfg, "--out", str(tmp_path / "out")]) == 2


def test_unexpected_blowup_exit_code(tmp_path):
    cfg = mi_config("mi-blow")
    cfg["params"]["ceiling_rhs"] = 1e-12
    p = write_cfg(tmp_path, cfg)
    assert main(["run", p, "--out", str(tmp_path / "out")]) == 3


def test_expected_blowup_burgers(tmp_path):
    cfg = {
        "name": "burgers-linear",
        "flow": "burgers",
        "grid": {"nx": 8, "ny": 256, "Lx": 1.0, "Ly": 2.0},
        "params": {"steps": 32, "t_end": 2.0, "sign": 1.0,
                   "grad_ceiling": 1e6},
        "initial": {"preset": "linear", "a": 0.0, "t0": 1.0},
        "expect_blowup": True,
    }
    p = write_cfg(tmp_path, cfg)
    out = tmp_path / "out"
    assert main(["run", p, "--out", str(out)]) == 0
    summary = json.loads((out / "burgers-linear" / "blowup_summary.json")
                         .read_text())
    assert abs(summary["t_blowup_est"] - 1.0) < 0.02


def test_convergence_command(tmp_path):
    cfg = mi_config("mi-conv")
    cfg["grid"] = {"nx": 64, "ny": 64, "Lx": 6.283185307179586,
                   "Ly": 6.283185307179586}
    cfg["params"] = {"dt": 2e-4, "steps": 16, "stride": 8, "order": 2}
    cfg["checks"] = ["frame-decomp"]
    p = write_cfg(tmp_path, cfg)
    out = tmp_path / "out"
    assert main(["convergence", p, "--levels", "2", "--out", str(out)]) == 0
    table = (out / "mi-conv" / "convergence.csv").read_text().splitlines()
    assert table[0].startswith("h,")
    assert table[-1].startswith("slope")


def test_schema_command(capsys):
    assert main(["schema"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["properties"]["flow"]["enum"]


def test_shipped_configs_pass(tmp_path):
    """The example configs in configs/ run clean end to end."""
    import os
    base = os.path.join(os.path.dirname(__file__), "..", "configs")
    for name in ("hf_magnon.json", "mi_random.json", "burgers_blowup.json",
                 "mcf_torus.json"):
        rc = main(["run", os.path.join(base, name),
                   "--out", str(tmp_path / "out")])
        assert rc == 0, name


def test_ishimori_and_graph_flows(tmp_path):
    ish = {
        "name": "ish",
        "flow": "ishimori",
        "grid": {"nx": 32, "ny": 32, "Lx": 6.283185307179586,
                 "Ly": 6.283185307179586},
        "params": {"dt": 2e-3, "steps": 8, "stride": 4, "order": 2,
                   "alpha2": 0.5},
        "initial": {"preset": "random-smooth", "seed": 3, "bandwidth": 2,
                    "amplitude": 0.2},
        "checks": ["gauge"],
    }
    assert main(["run", write_cfg(tmp_path, ish, "ish.json"),
                 "--out", str(tmp_path / "out")]) == 0
    cap = {
        "name": "cap",
        "flow": "mcf-graph",
        "grid": {"nx": 32, "ny": 32, "Lx": 4.0, "Ly": 4.0,
                 "x0": -2.0, "y0": -2.0},
        "params": {"dt": 2e-3, "steps": 8, "stride": 4, "order": 2},
        "initial": {"preset": "sphere-cap", "rho0": 1.0},
    }
    assert main(["run", write_cfg(tmp_path, cap, "cap.json"),
                 "--out", str(tmp_path / "out")]) == 0


def test_config_echo_roundtrip(tmp_path):
    """The config echoed in report.json reruns to identical artifacts."""
    cfg = write_cfg(tmp_path, mi_config("mi-echo"))
    out1 = tmp_path / "o1"
    assert main(["run", cfg, "--out", str(out1)]) == 0
    rep = json.loads((out1 / "mi-echo" / "report.json").read_text())
    echoed = write_cfg(tmp_path, rep["config"], "echo.json")
    out2 = tmp_path / "o2"
    assert main(["run", echoed, "--out", str(out2)]) == 0
    rep2 = json.loads((out2 / "mi-echo" / "report.json").read_text())
    assert rep["artifacts"] == rep2["artifacts"]


def test_surface_and_forms_artifacts(tmp_path):
    cfg = write_cfg(tmp_path, mi_config("mi-art"))
    out = tmp_path / "out"
    assert main(["run", cfg, "--out", str(out)]) == 0
    names = json.loads((out / "mi-art" / "report.json").read_text())["artifacts"]
    assert "forms_final.csv" in names
    assert "surface_final.csv" in names
    header = (out / "mi-art" / "forms_final.csv").read_text().splitlines()[0]
    assert header == "x,y,E,F,G,L,M,N,H,K,R"


def test_expected_blowup_in_spin_flow(tmp_path):
    cfg = mi_config("mi-expected-blow")
    cfg["params"]["ceiling_rhs"] = 1e-12
    cfg["expect_blowup"] = True
    p = write_cfg(tmp_path, cfg)
    out = tmp_path / "out"
    assert main(["run", p, "--out", str(out)]) == 0
    rep = json.loads((out / "mi-expected-blow" / "report.json").read_text())
    assert rep["blowup"] is not None


def test_schema_doc_in_sync():
    import os

    from spinflow.config import CONFIG_SCHEMA
    path = os.path.join(os.path.dirname(__file__), "..", "docs",
                        "config_schema.json")
    with open(path) as fh:
        assert json.load(fh) == CONFIG_SCHEMA


def test_unstable_dt_is_config_error(tmp_path):
    cfg = mi_config("bad-dt")
    cfg["params"]["dt"] = 0.5
    p = write_cfg(tmp_path, cfg)
    assert main(["run", p, "--out", str(tmp_path / "out")]) == 4
