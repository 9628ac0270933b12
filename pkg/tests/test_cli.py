import json
import math

import pytest
from click.testing import CliRunner

from interfaces.cli import cli, parse_grid
from oracles import CheckResult
from oracles.suites import BATCH_CHECKS
from utils.exceptions import InvalidSpecError

RADEMACHER = '{"family": "rademacher", "params": {}}'


@pytest.fixture
def runner():
    return CliRunner()


def _invoke(runner, args, tmp_path, name="report.json"):
    """Runs a command with its report written to a file; returns (result, text)"""
    target = tmp_path / name
    result = runner.invoke(cli, args + ["-o", str(target)])
    text = target.read_text(encoding="utf-8") if target.exists() else None
    return result, text


class TestRegularity:
    def test_rademacher(self, runner, tmp_path):
        result, text = _invoke(runner, ["regularity", RADEMACHER, "--ubar-sigma", "1"], tmp_path)
        assert result.exit_code == 0, result.output
        payload = json.loads(text)
        assert payload["report"]["lambda_sak"] == pytest.approx(0.5671432904, abs=1e-9)
        assert payload["config"]["command"] == "regularity"
        assert "workers" not in payload["config"]

    def test_spec_file(self, runner, tmp_path):
        spec_file = tmp_path / "gauss.json"
        spec_file.write_text('{"family": "gaussian", "params": {"sigma": 2}}')
        result, text = _invoke(runner, ["regularity", str(spec_file)], tmp_path)
        assert result.exit_code == 0, result.output
        assert json.loads(text)["report"]["spec"]["family"] == "gaussian"

    def test_heavy_tail(self, runner, tmp_path):
        spec = '{"family": "pareto", "params": {"kappa": 3, "scale": 1}}'
        result, text = _invoke(runner, ["regularity", spec], tmp_path)
        assert result.exit_code == 0, result.output
        report = json.loads(text)["report"]
        assert report["heavy_tail"] is True
        assert report["lambda_sak"] == 0.0
        assert report["bernstein"] == math.inf

    def test_malformed_json(self, runner):
        result = runner.invoke(cli, ["regularity", '{"family": "gaussian"'])
        assert result.exit_code == 2

    def test_missing_file(self, runner, tmp_path):
        result = runner.invoke(cli, ["regularity", str(tmp_path / "none.json")])
        assert result.exit_code == 2

    def test_infeasible_ubar_sigma(self, runner):
        result = runner.invoke(cli, ["regularity", RADEMACHER, "--ubar-sigma", "2"])
        assert result.exit_code == 3


class TestBound:
    def test_exp_grid(self, runner, tmp_path):
        args = ["bound", "--theorem", "exp", "--lam", "0.5", "--sigma", "1", "--c", "1"]
        result, text = _invoke(runner, args, tmp_path)
        assert result.exit_code == 0, result.output
        rows = json.loads(text)["report"]["rows"]
        assert len(rows) == 15
        assert [r["m"] for r in rows[:5]] == [4] * 5
        at_one = [r for r in rows if r["z"] == 1.0]
        assert all(r["vacuous"] and r["value"] == math.inf for r in at_one)

    def test_vacuous_rows(self, runner, tmp_path):
        args = ["bound", "--theorem", "exp", "--lam", "0.4", "--sigma", "1", "--c", "1", "--z-grid", "1"]
        result, text = _invoke(runner, args, tmp_path)
        assert result.exit_code == 0, result.output
        assert all(row["vacuous"] for row in json.loads(text)["report"]["rows"])

    def test_default_constant_warning(self, runner, tmp_path):
        args = ["bound", "--theorem", "exp", "--lam", "0.5", "--sigma", "1", "--z-grid", "10", "--m-grid", "4"]
        result, text = _invoke(runner, args, tmp_path)
        assert result.exit_code == 0, result.output
        assert any("non-rigorous default" in w for w in json.loads(text)["report"]["warnings"])

    def test_exp_from_spec(self, runner, tmp_path):
        args = ["bound", "--theorem", "exp", "--spec", RADEMACHER, "--c", "1", "--z-grid", "10", "--m-grid", "4"]
        result, text = _invoke(runner, args, tmp_path)
        assert result.exit_code == 0, result.output
        row = json.loads(text)["report"]["rows"][0]
        assert row["lambda"] == pytest.approx(0.5671432904 / 2.0, abs=1e-9)
        assert row["lambda"] < 0.5671432904

    @pytest.mark.parametrize("lam", ["0.5671432905", "0.6"])
    def test_lam_not_below_sakhanenko_parameter(self, runner, lam):
        # W(1) = 0.56714329040978...
        args = ["bound", "--theorem", "exp", "--spec", RADEMACHER, "--lam", lam, "--c", "1",
                "--z-grid", "10", "--m-grid", "4"]
        assert runner.invoke(cli, args).exit_code == 3
        assert runner.invoke(cli, args + ["--uniform"]).exit_code == 3

    def test_exp_needs_parameters(self, runner):
        assert runner.invoke(cli, ["bound", "--theorem", "exp", "--lam", "0.5"]).exit_code == 2

    def test_bad_grid(self, runner):
        args = ["bound", "--theorem", "exp", "--lam", "0.5", "--sigma", "1", "--z-grid", "1,x"]
        assert runner.invoke(cli, args).exit_code == 2

    def test_power_csv(self, runner, tmp_path):
        weights = tmp_path / "weights.csv"
        weights.write_text("#schema=1\nk,u_k,a_k,ubar_a_k\n1,1,1,1\n2,1,2,1\n3,1,3,1\n4,1,4,1\n")
        (tmp_path / "weights.json").write_text('{"type": "zero"}')
        args = ["bound", "--theorem", "power", "--weights", str(weights), "--m-grid", "3",
                "--eps-grid", "1,2", "--cq", "1", "--format", "csv"]
        result, text = _invoke(runner, args, tmp_path, "power.csv")
        assert result.exit_code == 0, result.output
        lines = text.splitlines()
        assert lines[0] == "#schema=1"
        header = lines[1].split(",")
        values = [float(line.split(",")[header.index("value")]) for line in lines[2:]]
        # T_3 = 2, n_3 = 3, (ubar_a / a)^3 U = 4 / 27
        assert values[0] == pytest.approx(2.0 + 4.0 / 27.0)
        assert values[1] == pytest.approx((2.0 + 4.0 / 27.0) / 8.0)

    def test_power_needs_weights(self, runner):
        assert runner.invoke(cli, ["bound", "--theorem", "power"]).exit_code == 2

    def test_power_gap_in_k(self, runner, tmp_path):
        weights = tmp_path / "gappy.csv"
        weights.write_text("k,u_k,a_k,ubar_a_k\n1,1,1,1\n3,1,3,1\n")
        assert runner.invoke(cli, ["bound", "--theorem", "power", "--weights", str(weights)]).exit_code == 2


class TestCouple:
    @pytest.mark.parametrize("workers", ["4", "8"])
    def test_same_report_for_any_worker_count(self, runner, tmp_path, workers):
        base = ["couple", RADEMACHER, "--strategy", "per_variable_quantile", "--K", "64", "--reps", "100",
                "--seed", "5"]
        first, text_one = _invoke(runner, base + ["--workers", "1"], tmp_path, "one.json")
        second, text_two = _invoke(runner, base + ["--workers", workers], tmp_path, "two.json")
        assert first.exit_code == 0 and second.exit_code == 0, first.output + second.output
        one, two = json.loads(text_one), json.loads(text_two)
        for payload in (one, two):
            payload["config"].pop("output")
        assert one == two
        report = one["report"]
        assert 0.0 <= report["ci_low"] <= report["p_hat"] <= report["ci_high"] <= 1.0

    def test_run_csv(self, runner, tmp_path):
        run_csv = tmp_path / "run.csv"
        args = ["couple", RADEMACHER, "--strategy", "independent", "--K", "32", "--reps", "100",
                "--run-csv", str(run_csv)]
        result, _ = _invoke(runner, args, tmp_path)
        assert result.exit_code == 0, result.output
        lines = run_csv.read_text().splitlines()
        assert lines[0] == "#schema=1"
        assert lines[1] == "k,x,y,lambda"
        assert len(lines) == 34

    def test_unsupported_family(self, runner):
        args = ["couple", '{"family": "uniform", "params": {"halfwidth": 1}}', "--strategy",
                "blockwise_sum_quantile", "--reps", "100"]
        assert runner.invoke(cli, args).exit_code == 4

    def test_unknown_strategy(self, runner):
        assert runner.invoke(cli, ["couple", RADEMACHER, "--strategy", "optimal"]).exit_code == 4

    def test_too_few_reps(self, runner):
        args = ["couple", RADEMACHER, "--strategy", "independent", "--reps", "50"]
        assert runner.invoke(cli, args).exit_code == 3


class TestVerify:
    def test_zero_cases(self, runner, tmp_path):
        result, text = _invoke(runner, ["verify", "--cases", "0"], tmp_path)
        assert result.exit_code == 0, result.output
        report = json.loads(text)["report"]
        assert report["cases"] == 0 and report["ok"]

    def test_small_lemma_suite(self, runner, tmp_path):
        result, text = _invoke(runner, ["verify", "--suite", "lemmas", "--cases", "5", "--seed", "3"], tmp_path)
        assert result.exit_code == 0, result.output
        payload = json.loads(text)
        assert payload["config"]["seed"] == 3
        assert payload["report"]["suite"] == "lemmas"

    def test_batch(self, runner, tmp_path):
        batch = tmp_path / "batch.json"
        batch.write_text(json.dumps([{"check": "truncation_sum", "args": {"x": 2.0, "q": 3.0, "n": 100}}]))
        result, text = _invoke(runner, ["verify", "--batch", str(batch)], tmp_path)
        assert result.exit_code == 0, result.output
        assert json.loads(text)["report"]["results"][0]["theorem_backed"] is False

    def test_violation_exits_one(self, runner, tmp_path, monkeypatch):
        monkeypatch.setitem(BATCH_CHECKS, "always_fails", lambda: CheckResult.compare("always_fails", 2.0, 1.0))
        batch = tmp_path / "batch.json"
        batch.write_text('[{"check": "always_fails"}]')
        result, text = _invoke(runner, ["verify", "--batch", str(batch)], tmp_path)
        assert result.exit_code == 1
        assert json.loads(text)["report"]["violations"] == 1

    def test_malformed_batch(self, runner, tmp_path):
        batch = tmp_path / "batch.json"
        batch.write_text('{"check": "truncation_sum"}')
        assert runner.invoke(cli, ["verify", "--batch", str(batch)]).exit_code == 2


class TestFamily:
    def test_parametric_sweep(self, runner, tmp_path):
        args = ["family", "--family", "uniform", "--param", "halfwidth", "--values", "1,2,3", "--m-grid", "0"]
        result, text = _invoke(runner, args, tmp_path)
        assert result.exit_code == 0, result.output
        report = json.loads(text)["report"]
        assert report["values"][0] == pytest.approx(6.75, rel=1e-10)
        assert report["label"]

    def test_sweep_file_csv(self, runner, tmp_path):
        sweep = tmp_path / "sweep.json"
        sweep.write_text(json.dumps({"specs": [{"family": "rademacher", "params": {}}], "m_grid": [0.5, 2.0]}))
        result, text = _invoke(runner, ["family", "--sweep", str(sweep), "--format", "csv"], tmp_path, "p.csv")
        assert result.exit_code == 0, result.output
        lines = text.splitlines()
        assert lines[:2] == ["#schema=1", "grid,sup_value,argmax"]
        assert len(lines) == 4

    def test_needs_a_sweep(self, runner):
        assert runner.invoke(cli, ["family"]).exit_code == 2

    def test_bad_fixed_json(self, runner):
        args = ["family", "--family", "gaussian", "--param", "sigma", "--values", "1", "--fixed", "{"]
        assert runner.invoke(cli, args).exit_code == 2


class TestHelpers:
    def test_parse_grid(self):
        assert parse_grid("1, 2,5") == [1.0, 2.0, 5.0]
        assert parse_grid("4,20", int) == [4, 20]
        with pytest.raises(InvalidSpecError):
            parse_grid("")
