import csv
import json
import os
from dataclasses import replace

import numpy as np
import pytest

from rivercommons import (ActivityClass, ConfigurationError, RunConfig,
                          SimulationError, calibrate_check, config_from_dict,
                          emit_outputs, load_config, run_simulation, summarize,
                          sweep)
from rivercommons.harness import (CsvInflow, InflowConfig, RunArtifacts,
                                  SyntheticInflow, main, make_inflow,
                                  seasonal_weights)
from rivercommons.ecology import YearRecord
from conftest import short_config


class TestConfig:
    def test_minimal_dict_applies_defaults(self):
        cfg = config_from_dict({"pipeline": "procedural"})
        assert cfg.horizon == 100
        assert cfg.n_households == 9
        assert cfg.max_fields == 10

    def test_negative_tau_rejected(self):
        with pytest.raises(ConfigurationError):
            config_from_dict({"pipeline": "procedural", "tau": -1})

    def test_unknown_pipeline_lists_valid_names(self):
        with pytest.raises(ConfigurationError) as err:
            config_from_dict({"pipeline": "psychic"})
        assert "procedural" in str(err.value)

    def test_unknown_key_rejected(self):
        with pytest.raises(ConfigurationError) as err:
            config_from_dict({"pipeline": "procedural", "horizont": 5})
        assert "horizont" in str(err.value)

    def test_nested_sections(self):
        cfg = config_from_dict({
            "pipeline": "procedural",
            "ecology": {"y0": 60.0},
            "inflow": {"mean_annual": 500.0},
        })
        assert cfg.ecology.y0 == 60.0
        assert cfg.inflow.mean_annual == 500.0

    def test_load_config_missing_file(self, tmp_path):
        with pytest.raises(ConfigurationError):
            load_config(str(tmp_path / "nope.json"))

    def test_load_config_invalid_json(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("{not json")
        with pytest.raises(ConfigurationError):
            load_config(str(path))

    def test_shipped_default_config_loads(self):
        here = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
        cfg = load_config(os.path.join(here, "configs", "default.json"))
        assert cfg.pipeline == "expert-egta"
        assert cfg.horizon == 100


class TestInflow:
    def test_seasonal_weights_normalized(self):
        w = seasonal_weights(7.0, 2.0)
        assert w.sum() == pytest.approx(1.0)
        assert int(np.argmax(w)) == 6  # July

    def test_synthetic_deterministic_per_seed_year(self):
        gen = SyntheticInflow(InflowConfig(), seed=3)
        gen2 = SyntheticInflow(InflowConfig(), seed=3)
        np.testing.assert_array_equal(gen.year(5).monthly_inflow,
                                      gen2.year(5).monthly_inflow)
        assert not np.array_equal(gen.year(5).monthly_inflow,
                                  gen.year(6).monthly_inflow)

    def test_csv_inflow_cycles(self, tmp_path):
        path = tmp_path / "inflow.csv"
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["year", "month", "inflow"])
            for month in range(1, 13):
                writer.writerow([2001, month, 10.0 * month])
        inflow = CsvInflow(str(path))
        assert inflow.year(0).annual_total == pytest.approx(780.0)
        np.testing.assert_array_equal(inflow.year(7).monthly_inflow,
                                      inflow.year(0).monthly_inflow)

    def test_csv_missing_month_rejected(self, tmp_path):
        path = tmp_path / "short.csv"
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["year", "month", "inflow"])
            writer.writerow([2001, 1, 5.0])
        with pytest.raises(ConfigurationError):
            CsvInflow(str(path))

    def test_missing_csv_falls_back_to_synthetic(self, tmp_path):
        cfg = short_config(inflow=InflowConfig(
            source="csv", csv_path=str(tmp_path / "absent.csv")))
        assert isinstance(make_inflow(cfg), SyntheticInflow)


class TestRunSimulation:
    def test_record_count_identity(self):
        cfg = short_config(horizon=4, n_households=3)
        art = run_simulation(cfg)
        assert len(art.records) == 4 * 3

    def test_all_pipelines_complete_and_deterministic(self):
        for pipeline in ("procedural", "generative", "naive-egta",
                         "expert-egta", "centralized"):
            cfg = short_config(pipeline=pipeline, horizon=6, seed=11)
            s1 = summarize(run_simulation(cfg))
            s2 = summarize(run_simulation(cfg))
            assert s1 == s2, pipeline

    def test_activity_percentages_sum_to_100(self):
        s = summarize(run_simulation(short_config(horizon=8)))
        total = s["pct_both"] + s["pct_irrig_only"] + s["pct_fish_only"] \
            + s["pct_none"]
        assert total == pytest.approx(100.0, abs=0.01)

    def test_naive_pipeline_extracts_two_models(self):
        art = run_simulation(short_config(pipeline="naive-egta", horizon=2))
        assert len(art.as_models) == 2

    def test_centralized_authority_budget_feeds_back(self):
        cfg = short_config(pipeline="centralized", horizon=3,
                           authority_budget=0.0)
        art = run_simulation(cfg)
        # With no budget the authority can never allocate fields.
        assert all(r.planted == 0 for r in art.records)


class TestSummarize:
    def make_artifacts(self, cells):
        records = []
        for (year, household, activity, budget) in cells:
            records.append(YearRecord(
                year=year, household=household, planted=0, irrigated=0,
                delivered=0.0, node_inflow=0.0, stress=0.0, crop_income=0.0,
                catch=0.0, fish_income=0.0, budget=budget, activity=activity))
        return RunArtifacts(config=short_config(), records=records,
                            fish_series=[])

    def test_all_both(self):
        art = self.make_artifacts([
            (y, h, ActivityClass.BOTH, 1.0) for y in (1, 2) for h in (1, 2)])
        assert summarize(art)["pct_both"] == 100.0

    def test_final_year_min_max(self):
        art = self.make_artifacts([
            (1, 1, ActivityClass.NONE, 99.0), (1, 2, ActivityClass.NONE, 99.0),
            (2, 1, ActivityClass.NONE, -5.0), (2, 2, ActivityClass.NONE, 10.0)])
        s = summarize(art)
        assert s["min_budget_final"] == -5.0
        assert s["max_budget_final"] == 10.0

    def test_single_farming_cell(self):
        art = self.make_artifacts([
            (1, 1, ActivityClass.FARMING_ONLY, 0.0),
            (1, 2, ActivityClass.NONE, 0.0),
            (2, 1, ActivityClass.NONE, 0.0),
            (2, 2, ActivityClass.NONE, 0.0)])
        assert summarize(art)["pct_irrig_only"] == 25.0


class TestSweep:
    def test_single_cell(self):
        rows = sweep(short_config(horizon=2))
        assert len(rows) == 1
        assert rows[0]["error"] == ""

    def test_grid_size(self):
        rows = sweep(short_config(horizon=2), taus=[0.0, 1.0], seeds=[0, 1])
        assert len(rows) == 4
        assert {(r["tau"], r["seed"]) for r in rows} == \
            {(0.0, 0), (0.0, 1), (1.0, 0), (1.0, 1)}

    def test_failing_cell_recorded_in_row(self, tmp_path):
        from rivercommons import GatewayConfig
        bad_fixture = tmp_path / "empty.json"
        bad_fixture.write_text("[]")
        base = short_config(
            horizon=2, gateway=GatewayConfig(backend="stub",
                                             fixture_path=str(bad_fixture)))
        rows = sweep(base, pipelines=["procedural", "generative"])
        by_pipeline = {r["pipeline"]: r for r in rows}
        assert by_pipeline["procedural"]["error"] == ""
        assert by_pipeline["generative"]["error"] != ""


class TestEmitOutputs:
    def test_horizon_one_outputs(self, tmp_path):
        art = run_simulation(short_config(horizon=1, n_households=2))
        paths = emit_outputs(art, str(tmp_path / "out"))
        with open(paths["records"]) as fh:
            rows = list(csv.reader(fh))
        assert len(rows) == 1 + 2  # header + one year of two households
        assert rows[0][0] == "year"
        svg = open(paths["budgets"]).read()
        assert svg.startswith("<svg") and svg.rstrip().endswith("</svg>")

    def test_reemission_identical_bytes(self, tmp_path):
        art = run_simulation(short_config(horizon=3))
        p1 = emit_outputs(art, str(tmp_path / "a"))
        p2 = emit_outputs(art, str(tmp_path / "b"))
        for key in p1:
            assert open(p1[key], "rb").read() == open(p2[key], "rb").read()

    def test_unwritable_dir_raises_simulation_error(self, tmp_path):
        blocker = tmp_path / "file"
        blocker.write_text("x")
        art = run_simulation(short_config(horizon=1))
        with pytest.raises(SimulationError):
            emit_outputs(art, str(blocker / "sub"))


class TestCalibrateCheck:
    def test_insufficient_horizon_flagged(self):
        report = calibrate_check(short_config(pipeline="expert-egta",
                                              horizon=1), taus=(0.0,))
        assert report["insufficient_horizon"]

    def test_tau_zero_only_runs_tragedy_checks(self):
        report = calibrate_check(RunConfig(pipeline="expert-egta", seed=42),
                                 taus=(0.0,))
        names = [c["name"] for c in report["checks"]]
        assert len(names) == 2
        assert all("tau=0.0" in n for n in names)

    def test_forces_expert_pipeline(self):
        report = calibrate_check(RunConfig(pipeline="procedural", seed=42),
                                 taus=(0.25,))
        assert report["passed"]


class TestCli:
    def write_config(self, tmp_path, **overrides):
        data = {"pipeline": "procedural", "horizon": 3, "seed": 1}
        data.update(overrides)
        path = tmp_path / "config.json"
        path.write_text(json.dumps(data))
        return str(path)

    def test_run_subcommand(self, tmp_path, capsys):
        cfg = self.write_config(tmp_path)
        out = str(tmp_path / "out")
        assert main(["run", "--config", cfg, "--out", out]) == 0
        assert os.path.exists(os.path.join(out, "records.csv"))
        assert "min_budget_final" in capsys.readouterr().out

    def test_run_writes_request_log_for_llm_pipeline(self, tmp_path):
        cfg = self.write_config(tmp_path, pipeline="generative")
        out = str(tmp_path / "out")
        assert main(["run", "--config", cfg, "--out", out]) == 0
        log = os.path.join(out, "requests.jsonl")
        assert os.path.exists(log)
        assert len(open(log).read().splitlines()) > 0

    def test_sweep_subcommand(self, tmp_path, capsys):
        cfg = self.write_config(tmp_path)
        assert main(["sweep", "--config", cfg, "--taus", "0", "0.5",
                     "--seeds", "0", "1"]) == 0
        lines = capsys.readouterr().out.strip().splitlines()
        assert len(lines) == 1 + 4

    def test_solve_game_subcommand(self, tmp_path, capsys):
        game = tmp_path / "game.json"
        game.write_text(json.dumps({
            "row_payoffs": [[6, 5], [9, 5]],
            "col_payoffs": [[6, 7], [3, 2]],
            "row_actions": ["H", "L"], "col_actions": ["H", "L"]}))
        assert main(["solve-game", "--game", str(game)]) == 0
        out = capsys.readouterr().out
        assert "(H, L)" in out and "(L, H)" in out

    def test_bad_config_exit_code(self, tmp_path, capsys):
        path = tmp_path / "config.json"
        path.write_text(json.dumps({"pipeline": "bogus"}))
        assert main(["run", "--config", str(path)]) == 2
        assert "error:" in capsys.readouterr().err
