import json

import pytest

from iroofline.cli import main

from conftest import (
    BABELSTREAM_MI100,
    BABELSTREAM_MI60,
    NVPROF_V100_LWFA,
    ROCPROF_MI60_LWFA,
    TABLE_LWFA,
    profile_json_text,
)


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestSpecs:
    def test_lists_builtins(self, capsys):
        code, out, _ = run(capsys, "specs")
        assert code == 0
        for name in ("v100", "mi60", "mi100"):
            assert name in out
        assert "1.530" in out and "1.800" in out and "1.502" in out

    def test_user_spec_file_entries_appear(self, capsys, tmp_path,
                                           monkeypatch):
        specfile = tmp_path / "gpus.json"
        specfile.write_text(json.dumps([{
            "name": "mi300", "vendor": "AMD", "compute_units": 228,
            "schedulers_per_unit": 1, "ipc": 1, "frequency_ghz": 2.1,
            "execution_group_size": 64,
            "theoretical_bandwidth_gbps": 5300.0,
        }]))
        monkeypatch.setenv("ROOFLINE_SPECS", str(specfile))
        code, out, _ = run(capsys, "specs")
        assert code == 0
        assert "mi300" in out and "mi60" in out

    def test_empty_user_file_keeps_builtins(self, capsys, tmp_path,
                                            monkeypatch):
        specfile = tmp_path / "gpus.json"
        specfile.write_text("[]")
        monkeypatch.setenv("ROOFLINE_SPECS", str(specfile))
        code, out, _ = run(capsys, "specs")
        assert code == 0
        assert "mi60" in out


class TestModelCommand:
    def test_rocprof_plus_babelstream(self, capsys, lwfa_fixture_dir):
        out_path = lwfa_fixture_dir / "model.json"
        code, _, err = run(
            capsys, "model", "--gpu", "mi60",
            "--input", f"rocprof:{lwfa_fixture_dir / 'mi60_lwfa.csv'}",
            "--bandwidth-log", str(lwfa_fixture_dir / "babelstream_mi60.log"),
            "--out-model", str(out_path))
        assert code == 0, err
        doc = json.loads(out_path.read_text())
        assert doc["ceilings"]["bandwidth_gbps"] == 808.975476
        assert doc["ceilings"]["bandwidth_source"] == "measured"
        (point,) = doc["points"]
        assert point["intensity"] == pytest.approx(0.398, rel=0.03)
        assert point["gips"] == pytest.approx(0.620, rel=0.03)

    def test_stdout_when_no_out_path(self, capsys, lwfa_fixture_dir):
        code, out, _ = run(
            capsys, "model", "--gpu", "mi60",
            "--input", f"rocprof:{lwfa_fixture_dir / 'mi60_lwfa.csv'}")
        assert code == 0
        doc = json.loads(out)
        assert doc["ceilings"]["bandwidth_source"] == "theoretical"

    def test_unknown_gpu(self, capsys, lwfa_fixture_dir):
        code, _, err = run(
            capsys, "model", "--gpu", "mi200",
            "--input", f"rocprof:{lwfa_fixture_dir / 'mi60_lwfa.csv'}")
        assert code != 0
        assert "unknown GPU" in err and "mi200" in err

    def test_missing_input_file(self, capsys, tmp_path):
        missing = tmp_path / "nope.csv"
        code, _, err = run(capsys, "model", "--gpu", "mi60",
                           "--input", f"rocprof:{missing}")
        assert code != 0
        assert str(missing) in err

    def test_malformed_csv_reports_file_and_line(self, capsys, tmp_path):
        bad = tmp_path / "bad.csv"
        bad.write_text("KernelName,DurationNs,SQ_INSTS_VALU\nk,1,2\nboom,3\n")
        code, _, err = run(capsys, "model", "--gpu", "mi60",
                           "--input", f"rocprof:{bad}")
        assert code != 0
        assert "bad.csv" in err
        assert "line 3" in err

    def test_bad_input_tag(self, capsys):
        code, _, err = run(capsys, "model", "--gpu", "mi60",
                           "--input", "sqlite:db.bin")
        assert code != 0
        assert "rocprof" in err

    def test_nvprof_input(self, capsys, tmp_path):
        path = tmp_path / "v100.csv"
        path.write_text(NVPROF_V100_LWFA)
        code, out, _ = run(capsys, "model", "--gpu", "v100",
                           "--input", f"nvprof:{path}")
        assert code == 0
        (point,) = json.loads(out)["points"]
        assert point["gips"] == pytest.approx(2.178, rel=0.03)
        assert point["intensity"] == pytest.approx(0.006, rel=0.03)

    def test_per_transaction_mode(self, capsys, tmp_path):
        path = tmp_path / "v100.csv"
        path.write_text(NVPROF_V100_LWFA)
        code, out, _ = run(capsys, "model", "--gpu", "v100",
                           "--input", f"nvprof:{path}", "--mode", "pertxn")
        assert code == 0
        doc = json.loads(out)
        assert doc["ceilings"]["bandwidth_gtxns"] == 28.125

    def test_amd_per_transaction_fails(self, capsys, lwfa_fixture_dir):
        code, _, err = run(
            capsys, "model", "--gpu", "mi60",
            "--input", f"rocprof:{lwfa_fixture_dir / 'mi60_lwfa.csv'}",
            "--mode", "pertxn")
        assert code != 0
        assert "AMD" in err

    def test_config_file_with_flag_override(self, capsys, lwfa_fixture_dir):
        cfg = lwfa_fixture_dir / "run.json"
        cfg.write_text(json.dumps({
            "gpu": "mi100",
            "inputs": [f"rocprof:{lwfa_fixture_dir / 'mi60_lwfa.csv'}"],
        }))
        # Flag wins over the config's GPU choice.
        code, out, _ = run(capsys, "model", "--config", str(cfg),
                           "--gpu", "mi60")
        assert code == 0
        assert json.loads(out)["gpu"]["name"] == "mi60"
        code, out, _ = run(capsys, "model", "--config", str(cfg))
        assert code == 0
        assert json.loads(out)["gpu"]["name"] == "mi100"

    def test_aggregate_sum(self, capsys, tmp_path):
        path = tmp_path / "two.csv"
        path.write_text(
            "KernelName,DurationNs,FETCH_SIZE,SQ_INSTS_VALU\n"
            "k,1000000,100,64\nk,1000000,100,64\n")
        code, out, _ = run(capsys, "model", "--gpu", "mi60",
                           "--input", f"rocprof:{path}",
                           "--aggregate", "sum")
        assert code == 0
        (point,) = json.loads(out)["points"]
        # Summed counters over summed runtime: same rate as one call.
        assert point["gips"] == pytest.approx((128 * 4 / 64) / (2e-3 * 1e9))

    def test_kb_flag(self, capsys, tmp_path):
        path = tmp_path / "one.csv"
        path.write_text("KernelName,DurationNs,FETCH_SIZE,SQ_INSTS_VALU\n"
                        "k,1000000,100,64\n")
        code, out, _ = run(capsys, "model", "--gpu", "mi60",
                           "--input", f"rocprof:{path}", "--kb", "1000",
                           "--mode", "perbyte")
        assert code == 0
        (point,) = json.loads(out)["points"]
        assert point["intensity"] == pytest.approx((64 * 4 / 64) / 100_000)

    def test_determinism(self, capsys, lwfa_fixture_dir):
        args = ("model", "--gpu", "mi60",
                "--input", f"rocprof:{lwfa_fixture_dir / 'mi60_lwfa.csv'}")
        _, out1, _ = run(capsys, *args)
        _, out2, _ = run(capsys, *args)
        assert out1 == out2


class TestPlotCommand:
    def test_writes_svg(self, capsys, lwfa_fixture_dir):
        out_svg = lwfa_fixture_dir / "roofline.svg"
        code, _, err = run(
            capsys, "plot", "--gpu", "mi60",
            "--input", f"rocprof:{lwfa_fixture_dir / 'mi60_lwfa.csv'}",
            "--bandwidth-log", str(lwfa_fixture_dir / "babelstream_mi60.log"),
            "--out-svg", str(out_svg))
        assert code == 0, err
        data = out_svg.read_bytes()
        assert data.startswith(b"<?xml")
        assert b"ComputeCurrent@HBM" in data

    def test_requires_out_svg(self, capsys, lwfa_fixture_dir):
        code, _, err = run(
            capsys, "plot", "--gpu", "mi60",
            "--input", f"rocprof:{lwfa_fixture_dir / 'mi60_lwfa.csv'}")
        assert code != 0
        assert "--out-svg" in err

    def test_byte_identical_runs(self, capsys, lwfa_fixture_dir):
        out_svg = lwfa_fixture_dir / "roofline.svg"
        args = ("plot", "--gpu", "mi60",
                "--input", f"rocprof:{lwfa_fixture_dir / 'mi60_lwfa.csv'}",
                "--out-svg", str(out_svg))
        run(capsys, *args)
        first = out_svg.read_bytes()
        run(capsys, *args)
        assert out_svg.read_bytes() == first


class TestCompareCommand:
    def write_table1_inputs(self, tmp_path):
        paths = {}
        for gpu in ("v100", "mi60", "mi100"):
            p = tmp_path / f"{gpu}.json"
            p.write_text(profile_json_text(gpu, TABLE_LWFA[gpu]))
            paths[gpu] = p
        return paths

    def config_entries(self, paths):
        return [{"gpu": gpu, "inputs": [f"profile-json:{p}"]}
                for gpu, p in paths.items()]

    def test_three_gpu_reproduction(self, capsys, tmp_path):
        paths = self.write_table1_inputs(tmp_path)
        cfg = tmp_path / "compare.json"
        cfg.write_text(json.dumps(self.config_entries(paths)))
        out_md = tmp_path / "table.md"
        code, _, err = run(capsys, "compare", "--config", str(cfg),
                           "--out-table", f"markdown:{out_md}")
        assert code == 0, err
        text = out_md.read_text()
        assert "| Metric | v100 | mi60 | mi100 |" in text
        assert "489.600" in text and "115.200" in text and "180.240" in text
        assert "279,498,240" in text
        # Derived cells recomputed from the inputs, at three decimals.
        assert "0.620" in text or "0.618" in text
        assert "1.863" in text or "1.834" in text

    def test_single_gpu_via_flags(self, capsys, tmp_path):
        paths = self.write_table1_inputs(tmp_path)
        code, out, _ = run(capsys, "compare", "--gpu", "mi60",
                           "--input", f"profile-json:{paths['mi60']}")
        assert code == 0
        assert "mi60" in out
        assert "Instruction Intensity" in out

    def test_partial_failure_warns_and_emits_survivors(self, capsys,
                                                       tmp_path):
        paths = self.write_table1_inputs(tmp_path)
        entries = self.config_entries(paths)
        entries[0]["inputs"] = [f"profile-json:{tmp_path / 'missing.json'}"]
        cfg = tmp_path / "compare.json"
        cfg.write_text(json.dumps(entries))
        code, out, err = run(capsys, "compare", "--config", str(cfg))
        assert code == 0
        assert "warning" in err and "v100" in err
        assert "mi60" in out and "mi100" in out

    def test_all_failures_is_an_error(self, capsys, tmp_path):
        cfg = tmp_path / "compare.json"
        cfg.write_text(json.dumps([
            {"gpu": "nope", "inputs": ["profile-json:x.json"]}]))
        code, _, err = run(capsys, "compare", "--config", str(cfg))
        assert code != 0
        assert "no GPU produced a usable model" in err

    def test_csv_output(self, capsys, tmp_path):
        paths = self.write_table1_inputs(tmp_path)
        cfg = tmp_path / "compare.json"
        cfg.write_text(json.dumps(self.config_entries(paths)))
        code, out, _ = run(capsys, "compare", "--config", str(cfg),
                           "--out-table", "csv")
        assert code == 0
        assert out.splitlines()[0] == "Metric,v100,mi60,mi100"
        assert "279498240" in out

    def test_unknown_config_field(self, capsys, tmp_path):
        cfg = tmp_path / "compare.json"
        cfg.write_text(json.dumps([{"gpu": "mi60", "inputz": []}]))
        code, _, err = run(capsys, "compare", "--config", str(cfg))
        assert code != 0
        assert "inputz" in err


class TestBandwidthSelection:
    def test_non_copy_function(self, capsys, lwfa_fixture_dir):
        code, out, _ = run(
            capsys, "model", "--gpu", "mi60",
            "--input", f"rocprof:{lwfa_fixture_dir / 'mi60_lwfa.csv'}",
            "--bandwidth-log", str(lwfa_fixture_dir / "babelstream_mi60.log"),
            "--bandwidth-fn", "Triad")
        assert code == 0
        assert json.loads(out)["ceilings"]["bandwidth_gbps"] == 812.976085

    def test_function_missing_from_log(self, capsys, tmp_path,
                                       lwfa_fixture_dir):
        log = tmp_path / "partial.log"
        log.write_text(BABELSTREAM_MI100)
        code, _, err = run(
            capsys, "model", "--gpu", "mi100",
            "--input", f"rocprof:{lwfa_fixture_dir / 'mi60_lwfa.csv'}",
            "--bandwidth-log", str(log), "--bandwidth-fn", "Dot")
        assert code != 0
        assert "Dot" in err

    def test_log_without_rows(self, capsys, tmp_path, lwfa_fixture_dir):
        log = tmp_path / "empty.log"
        log.write_text("no results here\n")
        code, _, err = run(
            capsys, "model", "--gpu", "mi60",
            "--input", f"rocprof:{lwfa_fixture_dir / 'mi60_lwfa.csv'}",
            "--bandwidth-log", str(log))
        assert code != 0
        assert "empty.log" in err
