import csv
import json
import subprocess
import sys

import pytest

from fracineq import harness
from fracineq.cli import main
from fracineq.harness import ConfigError, SweepConfig, config_from_dict, emit_plot_data, load_config

SMALL = {
    "functions": ["square", "exp", {"name": "linear", "interval": [0, 1]}],
    "grid": {"alpha": [0.5, 1.0], "lambda": [0.0, 1.0], "xfrac": [0.5], "q": [1.0, 2.0], "s": [1.0], "m": [0.5]},
}


def small(tmp_path, **extra):
    cfg = config_from_dict(dict(SMALL, **extra))
    cfg.out_dir = str(tmp_path)
    return cfg


def test_small_sweep_holds(tmp_path):
    rows = harness.run(small(tmp_path))
    assert rows and harness.exit_code(rows) == 0
    assert {r.holds for r in rows} <= {"true", "skip"}
    assert all(r.residual <= 1e-8 for r in rows if r.holds == "true")
    assert (tmp_path / "report.csv").exists() and (tmp_path / "report.json").exists()


def test_rows_stably_sorted(tmp_path):
    rows = harness.run(small(tmp_path), write=False)
    keys = [harness._row_key(r) for r in rows]
    assert keys == sorted(keys)
    assert len(set(keys)) == len(keys)


def test_csv_schema(tmp_path):
    harness.run(small(tmp_path))
    lines = (tmp_path / "report.csv").read_text().splitlines()
    assert lines[0] == "# fracineq report schema v1"
    assert lines[1] == ",".join(harness.CSV_COLUMNS)
    body = list(csv.reader(lines[2:]))
    assert all(len(r) == len(harness.CSV_COLUMNS) for r in body)


def test_json_mirrors_csv(tmp_path):
    rows = harness.run(small(tmp_path))
    doc = json.loads((tmp_path / "report.json").read_text())
    assert doc["meta"]["schema"] == "v1"
    assert doc["meta"]["seed"] == 0
    assert doc["meta"]["quadrature"]["nodes"] == 64
    assert "agreement" in doc["meta"]["tolerances"]
    assert len(doc["rows"]) == len(rows)
    assert doc["rows"][0]["name"] == rows[0].name and doc["rows"][0]["lambda"] == rows[0].lam


def test_parallel_matches_serial(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    cfg = small(a)
    harness.run(cfg)
    cfg.out_dir, cfg.jobs = str(b), 3
    harness.run(cfg)
    assert (a / "report.csv").read_bytes() == (b / "report.csv").read_bytes()


def test_negcontrol_rows_skip(fixtures, tmp_path):
    cfg = load_config(fixtures / "negcontrol.json")
    cfg.out_dir = str(tmp_path)
    rows = harness.run(cfg)
    assert rows and all(r.holds == "skip" for r in rows)


def test_inline_function(tmp_path):
    cfg = small(tmp_path, functions=[{"name": "quad", "f": "x^2 + 1", "fprime": "2*x", "domain": [0, 1]}])
    rows = harness.run(cfg, write=False)
    assert {r.name for r in rows} == {"quad"}
    assert harness.exit_code(rows) == 0


@pytest.mark.parametrize(
    "raw, path",
    [
        ({"functions": ["nope"]}, "functions[0]"),
        ({"functions": [{"name": "q", "f": "x^", "fprime": "1", "domain": [0, 1]}]}, "functions[0]"),
        ({"functions": [{"name": "q", "f": "x"}]}, "functions[0]"),
        ({"functions": [{"name": "square", "interval": [0, 5]}]}, "functions[0].interval"),
        ({"grid": {"alpha": [1, -1]}}, "grid.alpha[1]"),
        ({"grid": {"lambda": [2]}}, "grid.lambda[0]"),
        ({"grid": {"m": [0]}}, "grid.m[0]"),
        ({"grid": {"q": []}}, "grid.q"),
        ({"grid": {"beta": [1]}}, "grid.beta"),
        ({"families": ["h-convex"]}, "families[0]"),
        ({"corollaries": ["newton"]}, "corollaries[0]"),
        ({"tolerances": {"agreement": -1}}, "tolerances.agreement"),
        ({"quadrature": {"nodes": 3}}, "quadrature"),
        ({"seed": -2}, "seed"),
        ({"gating": "yes"}, "gating"),
        ({"output": {"format": "xml"}}, "output.format"),
        ({"colour": 1}, "colour"),
    ],
)
def test_config_errors_carry_path(raw, path):
    with pytest.raises(ConfigError) as info:
        config_from_dict(raw)
    assert info.value.path == path


def test_invalid_json_reports_location(tmp_path):
    p = tmp_path / "c.json"
    p.write_text('{"seed": 1,\n "functions": [}')
    with pytest.raises(ConfigError) as info:
        load_config(p)
    assert ":2:" in info.value.path


def test_plot_modes(tmp_path):
    rows = harness.run(small(tmp_path), write=False)
    paths = emit_plot_data(rows, "slack-vs-lambda", tmp_path / "plots")
    square = tmp_path / "plots" / "square__s-convex__slack-vs-lambda.dat"
    assert square in paths
    lines = square.read_text().splitlines()
    assert lines[0].startswith("# lambda")
    lams = [float(l.split()[0]) for l in lines[1:]]
    assert lams == sorted(lams) == [0.0, 1.0]
    heat = emit_plot_data(rows, "tightness-heatmap", tmp_path / "plots")
    grid = [l.split() for l in heat[0].read_text().splitlines()[1:]]
    assert len(grid) == 4 and all(len(r) == 5 for r in grid)


def test_plot_one_file_per_function_family(tmp_path):
    rows = harness.run(small(tmp_path), write=False)
    evaluated = {(r.name, r.family) for r in rows if r.corollary == "general" and r.holds == "true"}
    assert len(emit_plot_data(rows, "slack-vs-alpha", tmp_path / "p")) == len(evaluated)


def test_plot_empty_selection(tmp_path):
    with pytest.raises(ValueError):
        emit_plot_data([], "slack-vs-alpha", tmp_path / "none")
    assert not (tmp_path / "none").exists()
    with pytest.raises(ValueError):
        emit_plot_data([], "bogus", tmp_path / "none")


def test_identity_suite_deterministic():
    cfg = SweepConfig()
    cfg.identity.cases = 20
    assert harness.identity_cases(cfg) == harness.identity_cases(cfg)
    rows = harness.run_identity(cfg, write=False)
    assert len(rows) == 40 and all(r["pass"] for r in rows)


def test_catalog_verb_rows():
    rows = harness.run_catalog(SweepConfig(samples=2000), write=False)
    assert all(r["pass"] for r in rows)
    assert {r["class"] for r in rows} >= {"derivative", "hermite-hadamard", "quasi-convex"}


# -- CLI and exit codes ---------------------------------------------------


def run_cli(*args):
    return main([str(a) for a in args])


def test_exit_violation(fixtures, tmp_path):
    assert run_cli("verify", "--config", fixtures / "violation.json", "--out", tmp_path) == 2
    rows = list(csv.reader((tmp_path / "report.csv").read_text().splitlines()[2:]))
    assert rows and all(r[12] == "false" for r in rows)


def test_exit_fault(fixtures, tmp_path):
    assert run_cli("verify", "--config", fixtures / "fault.json", "--out", tmp_path) == 3


def test_tol_flag_overrides_agreement(fixtures, tmp_path):
    assert run_cli("verify", "--config", fixtures / "fault.json", "--out", tmp_path, "--tol", "1e-6") == 0


def test_exit_config_error(fixtures, tmp_path, capsys):
    assert run_cli("verify", "--config", fixtures / "bad_name.json", "--out", tmp_path) == 1
    assert "functions[1]" in capsys.readouterr().err
    assert run_cli("verify", "--config", tmp_path / "missing.json") == 1
    assert run_cli("verify", "--seed", "-1") == 1


def test_format_flag(fixtures, tmp_path):
    run_cli("verify", "--config", fixtures / "negcontrol.json", "--out", tmp_path, "--format", "json")
    assert (tmp_path / "report.json").exists() and not (tmp_path / "report.csv").exists()


def test_seed_flag_changes_identity_draws(tmp_path):
    cfg_path = tmp_path / "c.json"
    cfg_path.write_text(json.dumps({"identity": {"cases": 5}}))
    run_cli("identity", "--config", cfg_path, "--out", tmp_path / "a", "--seed", 1)
    run_cli("identity", "--config", cfg_path, "--out", tmp_path / "b", "--seed", 2)
    run_cli("identity", "--config", cfg_path, "--out", tmp_path / "c", "--seed", 1)
    a, b, c = ((tmp_path / d / "identity.csv").read_bytes() for d in "abc")
    assert a == c and a != b


def test_coeffs_verb(tmp_path):
    assert run_cli("coeffs", "--out", tmp_path, "--format", "csv") == 0
    assert (tmp_path / "coeffs.csv").exists()


def test_plot_verb(fixtures, tmp_path):
    cfg_path = tmp_path / "c.json"
    cfg_path.write_text(json.dumps(SMALL))
    assert run_cli("plot", "--config", cfg_path, "--out", tmp_path, "--mode", "tightness-heatmap") == 0
    files = list((tmp_path / "plots").glob("*.dat"))
    assert files and all(f.name.endswith("tightness-heatmap.dat") for f in files)
    assert run_cli("plot", "--config", fixtures / "negcontrol.json", "--out", tmp_path) == 1


def test_module_entry_point(fixtures, tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "fracineq", "verify", "--config", str(fixtures / "violation.json"), "--out", str(tmp_path)],
        capture_output=True, text=True,
    )
    assert proc.returncode == 2
    assert "violated" in proc.stdout
