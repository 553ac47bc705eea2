import numpy as np
import pytest

from treecast.cli import main, parse_lag_spec


@pytest.fixture()
def golden_csv(tmp_path):
    lines = ["#frequency=1", "series_id,index,value"]
    lines += [f"s1,{i},{i}" for i in range(1, 11)]
    path = tmp_path / "series.csv"
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


@pytest.fixture()
def quarterly_monash(tmp_path):
    rng = np.random.default_rng(1)
    lines = ["@frequency 4", "@horizon 4", "@data"]
    for i in range(2):
        values = 50 + 10 * np.tile([1.0, -1.0, 0.5, -0.5], 7) + rng.normal(0, 0.5, 28)
        lines.append(f"q{i}:2018:" + ",".join(f"{v:.6f}" for v in values))
    path = tmp_path / "quarterly.tsf"
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


class TestLagSpec:
    def test_range(self):
        assert parse_lag_spec("1:3") == [1, 2, 3]

    def test_singleton(self):
        assert parse_lag_spec("4") == [4]

    def test_comma_list(self):
        assert parse_lag_spec("1,2,4") == [1, 2, 4]

    @pytest.mark.parametrize("bad", ["", "x", "3:1", "0:2", "1,0", "-1"])
    def test_invalid(self, bad):
        with pytest.raises(ValueError):
            parse_lag_spec(bad)


class TestForecastCommand:
    def test_reference_output(self, golden_csv, capsys):
        code = main(["forecast", str(golden_csv), "--method", "rt", "--trend", "none",
                     "--lags", "1:3", "-h", "4"])
        assert code == 0
        out = capsys.readouterr().out
        assert out == "#frequency=1\nperiod,value\n11,7\n12,7\n13,7\n14,7\n"

    def test_output_file_and_json(self, golden_csv, tmp_path):
        out = tmp_path / "forecast.json"
        code = main(["forecast", str(golden_csv), "--method", "rt", "--trend", "none",
                     "--lags", "1:3", "-h", "2", "--format", "json", "-o", str(out)])
        assert code == 0
        assert out.read_text() == '{"frequency":1,"start":[11,1],"values":[7,7]}\n'

    def test_rf_fixed_seed_is_byte_identical(self, golden_csv, tmp_path):
        args = ["forecast", str(golden_csv), "--method", "rf", "--seed", "42",
                "--lags", "1:3", "-h", "4", "--n-trees", "20"]
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        assert main(args + ["-o", str(a)]) == 0
        assert main(args + ["-o", str(b)]) == 0
        assert a.read_bytes() == b.read_bytes()

    def test_save_model_round_trip(self, golden_csv, tmp_path, capsys):
        model_path = tmp_path / "model.json"
        code = main(["forecast", str(golden_csv), "--method", "rt", "--trend", "none",
                     "--lags", "1:3", "-h", "1", "--save-model", str(model_path),
                     "-o", str(tmp_path / "f.csv")])
        assert code == 0
        code = main(["inspect", "--model", str(model_path)])
        assert code == 0
        out = capsys.readouterr().out
        assert "no trend transformation" in out
        assert "1) root 7 28 7 *" in out

    def test_output_dir_env_override(self, golden_csv, tmp_path, monkeypatch):
        outdir = tmp_path / "outputs"
        monkeypatch.setenv("TREECAST_OUTPUT_DIR", str(outdir))
        code = main(["forecast", str(golden_csv), "--method", "rt", "--trend", "none",
                     "--lags", "1:3", "-h", "1", "-o", "result.csv"])
        assert code == 0
        assert (outdir / "result.csv").exists()

    def test_too_short_series_is_modeling_error(self, tmp_path, capsys):
        path = tmp_path / "tiny.csv"
        path.write_text("series_id,index,value\na,1,1\na,2,2\n", encoding="utf-8")
        code = main(["forecast", str(path), "--method", "rt", "--lags", "5", "-h", "1"])
        assert code == 3
        assert "SeriesTooShort" in capsys.readouterr().err


class TestBenchmarkCommand:
    def test_text_report(self, quarterly_monash, capsys):
        code = main(["benchmark", str(quarterly_monash), "--method", "rt", "--lags", "1:4"])
        assert code == 0
        out = capsys.readouterr().out
        assert out.startswith("series_id\tmase\tstatus")
        assert "mean_mase" in out
        assert "q0" in out and "q1" in out

    def test_json_report(self, quarterly_monash, tmp_path):
        out = tmp_path / "report.json"
        code = main(["benchmark", str(quarterly_monash), "--method", "rt", "--lags", "1:4",
                     "--format", "json", "-o", str(out)])
        assert code == 0
        import json

        body = json.loads(out.read_text())
        assert body["n_series"] == 2

    def test_missing_horizon_is_usage_error(self, golden_csv, capsys):
        code = main(["benchmark", str(golden_csv)])
        assert code == 1
        assert "horizon" in capsys.readouterr().err

    def test_known_mase_values_full_path(self, tmp_path, capsys):
        # stump forecasts give MASE exactly 1.0 and 3.0 -> mean 2.0
        text = (
            "@frequency 1\n@horizon 1\n@data\n"
            "one:1:1,2,3,4,5,6,7,8,7\n"
            "two:1:2,4,6,8,10,12,14,16,18\n"
        )
        path = tmp_path / "pair.tsf"
        path.write_text(text, encoding="utf-8")
        code = main(["benchmark", str(path), "--method", "rt", "--trend", "none",
                     "--lags", "1:3"])
        assert code == 0
        out = capsys.readouterr().out
        assert "one\t1\tok" in out
        assert "two\t3\tok" in out
        assert "mean_mase\t2" in out
        assert "median_mase\t2" in out


class TestInspectCommand:
    def test_needs_input_or_model(self, capsys):
        assert main(["inspect"]) == 1

    def test_series_inspection(self, golden_csv, capsys):
        code = main(["inspect", str(golden_csv), "--method", "rt", "--trend", "none",
                     "--lags", "1:3"])
        assert code == 0
        out = capsys.readouterr().out
        assert "Method: regression tree" in out
        assert "node), split" in out


class TestPlotCommand:
    def test_writes_deterministic_svg(self, golden_csv, tmp_path):
        a, b = tmp_path / "a.svg", tmp_path / "b.svg"
        args = ["plot", str(golden_csv), "-h", "4", "--method", "rt", "--trend", "none",
                "--lags", "1:3"]
        assert main(args + ["-o", str(a)]) == 0
        assert main(args + ["-o", str(b)]) == 0
        assert a.read_bytes() == b.read_bytes()
        assert a.read_text().startswith("<svg")

    def test_compare_trends_rejects_unknown(self, golden_csv, capsys):
        code = main(["plot", str(golden_csv), "-h", "2", "--compare-trends", "none,quadratic"])
        assert code == 1


class TestExitCodes:
    def test_unknown_command(self, capsys):
        assert main(["frobnicate"]) == 1

    def test_bad_lag_flag(self, golden_csv):
        assert main(["forecast", str(golden_csv), "--lags", "3:1", "-h", "2"]) == 1

    def test_parse_error(self, tmp_path, capsys):
        bad = tmp_path / "bad.csv"
        bad.write_text("series_id,index,value\na,1,oops\n", encoding="utf-8")
        assert main(["forecast", str(bad), "-h", "2"]) == 2

    def test_empty_file(self, tmp_path):
        empty = tmp_path / "empty.csv"
        empty.write_text("", encoding="utf-8")
        assert main(["forecast", str(empty), "-h", "2"]) == 2

    def test_missing_file(self, tmp_path):
        assert main(["forecast", str(tmp_path / "nope.csv"), "-h", "2"]) == 2

    def test_horizon_zero_is_usage(self, golden_csv):
        assert main(["forecast", str(golden_csv), "-h", "0"]) == 1

    def test_multi_series_needs_selector(self, quarterly_monash, capsys):
        assert main(["forecast", str(quarterly_monash), "-h", "2"]) == 1
        assert "--series" in capsys.readouterr().err

    def test_unknown_series_name(self, quarterly_monash):
        assert main(["forecast", str(quarterly_monash), "--series", "zz", "-h", "2"]) == 1

    def test_series_selector_works(self, quarterly_monash, capsys):
        code = main(["forecast", str(quarterly_monash), "--series", "q1", "-h", "2",
                     "--method", "rt"])
        assert code == 0
        assert "period,value" in capsys.readouterr().out
