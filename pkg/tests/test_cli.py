"""CLI thin client: file outputs, determinism, exit codes, no partial writes."""

from __future__ import annotations

import json
from pathlib import Path

import pytest
from click.testing import CliRunner

from cointspectra.cli import _parse_grid, main
from conftest import make_rw_panel, panel_to_csv


@pytest.fixture()
def runner():
    return CliRunner()


@pytest.fixture()
def panel_file(tmp_path):
    path = tmp_path / "panel.csv"
    path.write_text(panel_to_csv(make_rw_panel(5, 60, seed=55), header=True))
    return path


def run_ok(runner, args):
    result = runner.invoke(main, args, catch_exceptions=False)
    assert result.exit_code == 0, result.output
    return result


class TestGridParsing:
    def test_range_default_step(self):
        grid = _parse_grid("0.05..0.95")
        assert grid[0] == pytest.approx(0.05)
        assert grid[-1] == pytest.approx(0.95)
        assert len(grid) == 19

    def test_range_explicit_step(self):
        assert len(_parse_grid("0.05..0.95..0.10")) == 10

    def test_comma_list(self):
        assert _parse_grid("0.5,0.9") == [0.5, 0.9]

    def test_bad_specs(self):
        import click

        for bad in ("0.9..0.1", "1..2..0", "a..b..c..d"):
            with pytest.raises((click.BadParameter, ValueError)):
                _parse_grid(bad)


class TestAnalyze:
    def test_report_and_qq_files(self, runner, panel_file, tmp_path):
        out = tmp_path / "report.json"
        svg = tmp_path / "plot.svg"
        csv_out = tmp_path / "plot.csv"
        run_ok(
            runner,
            [
                "analyze",
                "--input", str(panel_file),
                "--det", "const",
                "--out", str(out),
                "--qq-svg", str(svg),
                "--qq-csv", str(csv_out),
                "--envelope",
                "--reps", "30",
                "--seed", "0",
            ],
        )
        report = json.loads(out.read_text())
        assert report["report"]["p"] == 5
        assert svg.read_text().startswith("<svg")
        assert csv_out.read_text().splitlines()[0] == "i,q,theoretical,empirical,env_lo,env_hi"

    def test_stdout_when_no_out(self, runner, panel_file):
        result = run_ok(runner, ["analyze", "--input", str(panel_file)])
        assert json.loads(result.output)["report"]["p"] == 5

    def test_deterministic_replay(self, runner, panel_file, tmp_path):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        args = ["analyze", "--input", str(panel_file), "--det", "const"]
        run_ok(runner, args + ["--out", str(a)])
        run_ok(runner, args + ["--out", str(b)])
        assert a.read_bytes() == b.read_bytes()

    def test_written_json_validates_against_shipped_schema(self, runner, panel_file, tmp_path):
        import jsonschema

        out = tmp_path / "report.json"
        run_ok(runner, ["analyze", "--input", str(panel_file), "--out", str(out)])
        schema_dir = Path(__file__).resolve().parent.parent / "schemas"
        schema = json.loads((schema_dir / "analyze_response.schema.json").read_text())
        jsonschema.validate(json.loads(out.read_text()), schema)


class TestSimulate:
    def test_json_and_csv(self, runner, tmp_path):
        out = tmp_path / "mc.json"
        run_ok(
            runner,
            ["simulate", "--p", "4", "--T", "30", "--reps", "10", "--seed", "3",
             "--out", str(out)],
        )
        body = json.loads(out.read_text())
        assert body["p"] == 4 and body["seed"] == 3
        result = run_ok(
            runner,
            ["simulate", "--p", "4", "--T", "30", "--reps", "10", "--seed", "3",
             "--format", "csv"],
        )
        assert result.output.splitlines()[0] == "i,p5,p25,p50,p75,p95"

    def test_dgp_variants(self, runner):
        for dgp_args in (["--dgp", "ar1", "--rho", "0.5"], ["--dgp", "rw-const"]):
            run_ok(
                runner,
                ["simulate", "--p", "3", "--T", "20", "--reps", "5"] + dgp_args,
            )

    def test_deterministic_replay(self, runner, tmp_path):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        base = ["simulate", "--p", "5", "--T", "40", "--reps", "12", "--seed", "7"]
        run_ok(runner, base + ["--out", str(a)])
        run_ok(runner, base + ["--out", str(b)])
        assert a.read_bytes() == b.read_bytes()


class TestDist:
    def test_quantile_table_csv(self, runner):
        result = run_ok(
            runner,
            ["dist", "--c", "0.5", "--quantiles", "0.05..0.95..0.10", "--format", "csv"],
        )
        lines = result.output.strip().splitlines()
        assert lines[0] == "q,quantile"
        assert len(lines) == 11

    def test_density_table_csv(self, runner):
        result = run_ok(
            runner, ["dist", "--c", "0.2", "--lambdas", "0.1,0.3,0.5", "--format", "csv"]
        )
        assert result.output.splitlines()[0] == "lambda,pdf,cdf"

    def test_json_by_gammas(self, runner):
        result = run_ok(runner, ["dist", "--gamma1", "0.2", "--gamma2", "0.4"])
        body = json.loads(result.output)
        assert body["gamma1"] == 0.2

    def test_both_tables_csv_rejected(self, runner):
        result = runner.invoke(
            main,
            ["dist", "--c", "0.2", "--quantiles", "0.5", "--lambdas", "0.5",
             "--format", "csv"],
        )
        assert result.exit_code != 0

    def test_upper_edge_behavior_at_half(self, runner):
        result = run_ok(runner, ["dist", "--c", "0.5"])
        assert json.loads(result.output)["b_plus"] == 1.0


class TestCenters:
    def test_by_pt(self, runner):
        result = run_ok(runner, ["centers", "--p", "5", "--T", "50"])
        body = json.loads(result.output)
        assert body["cv_transformed"] == pytest.approx(2.012)
        assert body["bartlett_jhf"] == pytest.approx(1.062282611562005)

    def test_by_c(self, runner, tmp_path):
        out = tmp_path / "centers.json"
        run_ok(runner, ["centers", "--c", "0.1", "--out", str(out)])
        assert json.loads(out.read_text())["lr_center_sim"] is not None


class TestQq:
    def test_formats(self, runner, panel_file, tmp_path):
        svg = tmp_path / "q.svg"
        run_ok(runner, ["qq", "--input", str(panel_file), "--format", "svg", "--out", str(svg)])
        assert svg.read_text().startswith("<svg")
        result = run_ok(runner, ["qq", "--input", str(panel_file), "--format", "json"])
        assert json.loads(result.output)["p"] == 5

    def test_envelope_deterministic(self, runner, panel_file, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        base = ["qq", "--input", str(panel_file), "--envelope", "--reps", "25",
                "--seed", "4", "--format", "csv"]
        run_ok(runner, base + ["--out", str(a)])
        run_ok(runner, base + ["--out", str(b)])
        assert a.read_bytes() == b.read_bytes()


class TestErrorPaths:
    def test_domain_error_exits_nonzero_without_files(self, runner, tmp_path):
        out = tmp_path / "never.json"
        result = runner.invoke(main, ["dist", "--c", "1.7", "--out", str(out)])
        assert result.exit_code != 0
        assert "aspect ratio" in result.output
        assert not out.exists()

    def test_bad_csv_no_partial_outputs(self, runner, tmp_path):
        bad = tmp_path / "bad.csv"
        bad.write_text("1,2\n3,4\n")
        out = tmp_path / "report.json"
        result = runner.invoke(main, ["analyze", "--input", str(bad), "--out", str(out)])
        assert result.exit_code != 0
        assert not out.exists()

    def test_missing_input_flag(self, runner):
        assert runner.invoke(main, ["analyze"]).exit_code != 0

    def test_unknown_subcommand(self, runner):
        assert runner.invoke(main, ["frobnicate"]).exit_code != 0

    def test_help_screens(self, runner):
        run_ok(runner, ["--help"])
        for cmd in ("analyze", "simulate", "dist", "centers", "qq", "serve"):
            run_ok(runner, [cmd, "--help"])
