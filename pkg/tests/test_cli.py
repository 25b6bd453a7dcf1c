import importlib.util
import math
from pathlib import Path

import pytest

import cli_app
from shared.harness import oracles
from shared.harness.config import load_config
from shared.qsim.states import NoiseKind


def test_run_prints_closed_form(capsys):
    assert cli_app.main(["run", "--n", "2", "--phi", "0.8pi"]) == 0
    out = capsys.readouterr().out
    assert "P_s (closed form)" in out
    assert f"{0.25 * math.sin(0.4 * math.pi) ** 4:.12f}" in out
    assert "← success" in out
    assert out.count("← success") == 1


def test_run_with_noise_and_single_measurement(capsys):
    assert cli_app.main(["run", "--n", "1", "--phi", "0.8pi", "--noise-p", "0.02"]) == 0
    out = capsys.readouterr().out
    assert "depolarizing, p = 0.02" in out
    assert "Concurrence:" in out


def test_run_from_graph_file(tmp_path, capsys):
    path = tmp_path / "chain.txt"
    path.write_text("vertices 3\nedge 1 2 0.8pi\nedge 2 3 0.6pi\n", encoding="utf-8")
    assert cli_app.main(["run", "--graph", str(path)]) == 0
    out = capsys.readouterr().out
    assert "lambda = 0.7pi" in out
    assert "P_s (closed form)" not in out


def test_run_rejects_bad_graph_file(tmp_path, capsys):
    path = tmp_path / "bad.txt"
    path.write_text("vertices 3\nedge 1 2 fast\n", encoding="utf-8")
    assert cli_app.main(["run", "--graph", str(path)]) == cli_app.EXIT_USAGE
    assert "line 2:" in capsys.readouterr().err


def test_unknown_flag_prints_usage(capsys):
    assert cli_app.main(["run", "--bogus"]) == cli_app.EXIT_USAGE
    err = capsys.readouterr().err
    assert "usage:" in err
    assert "--bogus" in err


def test_missing_command_is_a_usage_error(capsys):
    assert cli_app.main([]) == cli_app.EXIT_USAGE
    assert "usage:" in capsys.readouterr().err


def test_help_exits_cleanly(capsys):
    assert cli_app.main(["--help"]) == cli_app.EXIT_OK
    assert "sweep" in capsys.readouterr().out


def test_sweep_writes_csv(tmp_path, monkeypatch):
    monkeypatch.setenv("WGS_WORKERS", "1")
    out = tmp_path / "results" / "fig2.csv"
    assert cli_app.main(["sweep", "--preset", "fig2", "--out", str(out)]) == 0
    lines = out.read_text(encoding="utf-8").splitlines()
    assert lines[0] == "phi,ps,baseline"
    assert len(lines) == 102


def test_sweep_to_stdout_matches_file(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv("WGS_WORKERS", "1")
    out = tmp_path / "fig2.csv"
    assert cli_app.main(["sweep", "--preset", "fig2", "--out", str(out)]) == 0
    capsys.readouterr()
    assert cli_app.main(["sweep", "--preset", "fig2"]) == 0
    assert capsys.readouterr().out == out.read_text(encoding="utf-8")


def test_sweep_from_config_with_svg_and_xlsx(tmp_path, monkeypatch):
    monkeypatch.setenv("WGS_WORKERS", "1")
    config = tmp_path / "small.conf"
    config.write_text(
        "preset = fig5b\n"
        "axis = phi 0.5pi pi 3\n"
        "axis = p 0 0.05 3\n"
        "out = out/small.csv\n"
        "svg = out/small.svg\n",
        encoding="utf-8",
    )
    xlsx = tmp_path / "small.xlsx"
    assert cli_app.main(["sweep", "--config", str(config), "--xlsx", str(xlsx)]) == 0
    assert (tmp_path / "out" / "small.csv").exists()
    assert (tmp_path / "out" / "small.svg").read_text(encoding="utf-8").count('class="cell"') == 9
    assert xlsx.exists()


def test_sweep_svg_needs_two_axes(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv("WGS_WORKERS", "1")
    code = cli_app.main(["sweep", "--preset", "fig2", "--out", str(tmp_path / "a.csv"), "--svg", str(tmp_path / "a.svg")])
    assert code == cli_app.EXIT_USAGE
    assert "2-axis" in capsys.readouterr().err


def test_bad_config_is_reported_with_line_number(tmp_path, capsys):
    config = tmp_path / "bad.conf"
    config.write_text("preset = fig4a\naxis = phi 0 pi 1\n", encoding="utf-8")
    assert cli_app.main(["sweep", "--config", str(config)]) == cli_app.EXIT_USAGE
    assert "error: line 2:" in capsys.readouterr().err


def test_verify_properties_section(capsys):
    assert cli_app.main(["verify", "--section", "properties"]) == 0
    out = capsys.readouterr().out
    assert "CHECKS: properties" in out
    assert "❌" not in out


def test_verify_reports_failures(monkeypatch, capsys):
    failing = [("properties", "always fails", lambda: (False, "forced failure"))]
    monkeypatch.setattr(oracles, "CHECKS", failing)
    assert cli_app.main(["verify"]) == 2
    out = capsys.readouterr().out
    assert "❌  always fails" in out
    assert "0/1 checks passed" in out


def test_verify_turns_exceptions_into_failures(monkeypatch, capsys):
    def broken():
        raise RuntimeError("boom")

    monkeypatch.setattr(oracles, "CHECKS", [("properties", "raises", broken)])
    assert cli_app.main(["verify"]) == 2
    assert "raised RuntimeError: boom" in capsys.readouterr().out


@pytest.mark.parametrize("argv", [["sweep"], ["sweep", "--preset", "custom"], ["verify", "--section", "nope"]])
def test_sweep_and_verify_usage_errors(argv):
    assert cli_app.main(argv) == cli_app.EXIT_USAGE


# ── Bundled inputs and local scripts ─────────────────────────

ROOT = Path(__file__).resolve().parent.parent


def test_bundled_sweep_configs_parse():
    fig4a = load_config(ROOT / "sweeps" / "fig4a.conf")
    assert fig4a.axis_names == ("phi", "p")
    assert fig4a.out.resolve() == (ROOT / "results" / "fig4a.csv").resolve()
    custom = load_config(ROOT / "sweeps" / "custom.conf")
    assert custom.n == 2
    assert custom.noise_kind is NoiseKind.DEPHASING


def test_bundled_chain_runs(capsys):
    assert cli_app.main(["run", "--graph", str(ROOT / "chains" / "coherent_error.txt")]) == 0
    assert "lambda = 0.7pi" in capsys.readouterr().out


def _load_script(name):
    path = ROOT / "scripts" / "python_scripts" / f"{name}.py"
    spec = importlib.util.spec_from_file_location(name, path)
    module = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(module)
    return module


def test_reproduce_figures_quick_step(tmp_path, capsys):
    script = _load_script("reproduce_figures")
    assert script.main(["--step", "fig3a", "--quick", "--workers", "1", "--out-dir", str(tmp_path)]) == 0
    assert (tmp_path / "fig3a.csv").read_text(encoding="utf-8").count("\n") == 1 + 11 * 11
    assert (tmp_path / "fig3a.svg").exists()
    assert "✅  fig3a" in capsys.readouterr().out
