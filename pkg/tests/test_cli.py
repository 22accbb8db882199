import json

import oracles
import pytest

from gsbench import Backend, Kernel, parse_json, suite_ustride
from gsbench.cli import CSV_HEADER, OutputSpec, emit_report, main
from gsbench.errors import ConfigError
from gsbench.suites import export_suite_json

PNG_MAGIC = b"\x89PNG\r\n\x1a\n"

DIRECT = ["-k", "gather", "-p", "UNIFORM:16:1", "-d", "16", "-l", "1000",
          "-r", "3"]


def run_cli(capsys, args, *, step=1.0):
    code = main(args, timer=oracles.TickTimer(step=step))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# --- report rendering -------------------------------------------------------


def test_text_report_golden(capsys):
    code, out, err = run_cli(capsys, DIRECT)
    assert code == 0
    assert out == (
        "name  kernel  pattern       delta  count   min_time_s  bandwidth_MB_s\n"
        "cfg0  gather  UNIFORM:16:1     16   1000  1.000000000        0.128000\n"
        "\n"
        "MIN    0.128000 MB/s\n"
        "MAX    0.128000 MB/s\n"
        "HMEAN  0.128000 MB/s\n"
    )
    assert "checksum" in err


def test_csv_report_bytes(capsys, tmp_path):
    dest = tmp_path / "report.csv"
    code, out, _ = run_cli(capsys, DIRECT + ["--format", "csv", "-o", str(dest)])
    assert code == 0
    assert out == ""
    data = dest.read_bytes()
    lines = data.split(b"\r\n")
    assert lines[0].decode() == ",".join(CSV_HEADER)
    assert lines[-1] == b""
    fields = lines[1].decode().split(",")
    assert fields[:7] == ["cfg0", "gather", "UNIFORM:16:1", "16", "1000", "3",
                         "128000"]
    # repr() round-trips both floats exactly
    assert float(fields[7]) == 1.0
    assert float(fields[8]) == 0.128
    assert fields[8] == repr(0.128)


def test_json_report_shape(capsys):
    code, out, _ = run_cli(capsys, DIRECT + ["--format", "json"])
    assert code == 0
    doc = json.loads(out)
    (row,) = doc["results"]
    assert row["name"] == "cfg0"
    assert row["kernel"] == "gather"
    assert row["pattern"] == "UNIFORM:16:1"
    assert row["delta"] == 16
    assert row["count"] == 1000
    assert row["runs"] == 3
    assert row["moved_bytes"] == 128000
    assert row["run_times_s"] == [1.0, 1.0, 1.0]
    assert row["min_time_s"] == 1.0
    assert row["bandwidth_mb_s"] == 0.128
    assert doc["summary"]["min_mb_s"] == 0.128
    # reports never mention the execution backend
    assert "backend" not in out
    assert "threads" not in out


def test_json_custom_pattern_appears_as_index_list(capsys):
    code, out, _ = run_cli(capsys, ["-k", "gather", "-p", "5,0,5", "-d", "1",
                                    "-l", "4", "-r", "2", "--format", "json"])
    assert code == 0
    (row,) = json.loads(out)["results"]
    assert row["pattern"] == [5, 0, 5]


def test_suite_json_report_has_baseline_sections(capsys):
    code, out, _ = run_cli(capsys, ["--suite", "ustride-gather",
                                    "--target-bytes", "65536", "-r", "2",
                                    "--format", "json"])
    assert code == 0
    doc = json.loads(out)
    assert len(doc["results"]) == 8
    summary = doc["summary"]
    assert summary["baseline_mb_s"] == doc["results"][0]["bandwidth_mb_s"]
    assert summary["normalized_percent"][0] == ["stride-1", 100.0]
    assert summary["bwbw"]["guide_fractions"] == [1.0, 0.5, 0.25, 0.125, 0.0625]
    assert summary["bwbw"]["points"][0][2] == "stride-1"
    assert len(summary["bwbw"]["points"]) == 9


def test_output_spec_include_flags_gate_json_sections(capsys):
    code, out, _ = run_cli(capsys, ["--suite", "ustride-gather",
                                    "--target-bytes", "65536", "-r", "2",
                                    "--format", "json"])
    report_doc = json.loads(out)
    assert "normalized_percent" in report_doc["summary"]

    from gsbench import BufferArena, plan_arena, summarize, sweep

    suite = suite_ustride(Kernel.GATHER, target_bytes=65536, runs=2)
    batch = list(suite.configs)
    results = sweep(batch, arena=BufferArena.allocate(plan_arena(batch)),
                    timer=oracles.TickTimer())
    report = summarize(results, baseline_index=0)
    emit_report(report, OutputSpec(format="json", include_normalized=False,
                                   include_bwbw=False))
    out = capsys.readouterr().out
    doc = json.loads(out)
    assert "normalized_percent" not in doc["summary"]
    assert "bwbw" not in doc["summary"]
    assert "baseline_mb_s" in doc["summary"]


def test_output_spec_rejects_unknown_format():
    with pytest.raises(ConfigError):
        OutputSpec(format="xml")


# --- determinism ------------------------------------------------------------


@pytest.mark.parametrize("fmt", ["text", "csv", "json"])
def test_reports_are_identical_across_runs_and_thread_counts(capsys, fmt):
    args = ["-k", "gather", "-p", "UNIFORM:8:1", "-d", "8", "-l", "64",
            "-r", "3", "--format", fmt]
    outputs = set()
    for extra in ([], [], ["-t", "1"], ["-t", "2"], ["-t", "8"]):
        code, out, _ = run_cli(capsys, args + extra)
        assert code == 0
        outputs.add(out)
    assert len(outputs) == 1


def test_checksum_line_is_stable_for_identical_invocations(capsys):
    _, _, err1 = run_cli(capsys, DIRECT)
    _, _, err2 = run_cli(capsys, DIRECT)
    line1 = [l for l in err1.splitlines() if l.startswith("checksum ")]
    line2 = [l for l in err2.splitlines() if l.startswith("checksum ")]
    assert line1 == line2 != []


# --- batch sources and flag validation --------------------------------------


def test_file_source(capsys, tmp_path):
    doc = tmp_path / "batch.json"
    doc.write_text(json.dumps([
        {"kernel": "gather", "pattern": "UNIFORM:8:1", "delta": 8, "count": 32,
         "runs": 2, "name": "warm"},
        {"kernel": "scatter", "pattern": [0, 2], "delta": 4, "count": 8,
         "runs": 2},
    ]))
    code, out, _ = run_cli(capsys, ["-f", str(doc)])
    assert code == 0
    lines = out.splitlines()
    assert lines[1].startswith("warm")
    assert lines[2].startswith("cfg1")


@pytest.mark.parametrize("args", [
    [],                                                    # no source
    ["-p", "0,1", "--suite", "stream", "-k", "gather", "-d", "1", "-l", "2"],
    ["-f", "x.json", "--suite", "stream"],                 # two sources
    ["-p", "0,1", "-d", "1", "-l", "2"],                   # missing -k
    ["-k", "gather", "-p", "0,1", "-l", "2"],              # missing -d
    ["-k", "gather", "-p", "0,1", "-d", "1"],              # missing -l
    ["--suite", "stream", "-k", "gather"],                 # config flag with suite
    ["--suite", "stream", "-p", "0,1"],
    ["-k", "gather", "-p", "0,1", "-d", "1", "-l", "2", "--target-bytes", "64"],
    ["-k", "gather", "-p", "0,1", "-d", "1", "-l", "2", "--export"],
    ["--suite", "stream", "--target-bytes", "4"],          # under the minimum
    ["--suite", "stream", "--arena-limit", "4"],
    ["-k", "gather", "-p", "0,1", "-d", "1", "-l", "2", "-t", "0"],
    ["-k", "gather", "-p", "0,1", "-d", "1", "-l", "2", "-b", "serial", "-t", "2"],
    ["--frobnicate"],
])
def test_usage_errors_exit_1(capsys, args):
    code, out, err = run_cli(capsys, args)
    assert code == 1
    assert out == ""
    assert "gsbench: error:" in err


def test_file_flags_conflict(capsys, tmp_path):
    doc = tmp_path / "b.json"
    doc.write_text('[{"kernel":"gather","pattern":"0","delta":1,"count":1}]')
    for extra in (["-k", "gather"], ["-r", "5"], ["-t", "2"]):
        code, _, err = run_cli(capsys, ["-f", str(doc)] + extra)
        assert code == 1
        assert "-f/--file" in err


@pytest.mark.parametrize("args,fragment", [
    (["-k", "gather", "-p", "UNIFORM:0:1", "-d", "1", "-l", "2"], "N"),
    (["--suite", "warp-speed"], "unknown suite"),
    (["--suite", "apps", "--arena-limit", "1024"], "extent"),
])
def test_config_errors_exit_2(capsys, args, fragment):
    code, out, err = run_cli(capsys, args)
    assert code == 2
    assert out == ""
    assert fragment in err


def test_malformed_config_file_exits_2(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{nope")
    code, _, err = run_cli(capsys, ["-f", str(bad)])
    assert code == 2

    bad.write_text('[{"kernel":"gsop","pattern":"0","delta":1,"count":1}]')
    code, _, err = run_cli(capsys, ["-f", str(bad)])
    assert code == 2
    assert "entry 0" in err


def test_io_errors_exit_4(capsys, tmp_path):
    code, _, err = run_cli(capsys, ["-f", str(tmp_path / "absent.json")])
    assert code == 4
    assert "gsbench: error:" in err

    code, _, _ = run_cli(capsys, DIRECT + ["-o", str(tmp_path / "no" / "dir.txt")])
    assert code == 4


# --- validation gate --------------------------------------------------------


def test_validate_pass_still_reports(capsys):
    code, out, err = run_cli(capsys, ["-k", "gather", "-p", "0,1", "-d", "2",
                                      "-l", "8", "-r", "2", "-b", "serial",
                                      "--validate"])
    assert code == 0
    assert "validate cfg0: PASSED" in err
    assert "MIN" in out


def test_validate_refusal_exits_3_without_a_report(capsys):
    code, out, err = run_cli(capsys, ["-k", "scatter", "-p", "UNIFORM:16:1",
                                      "-d", "0", "-l", "32", "-t", "2",
                                      "--validate"])
    assert code == 3
    assert out == ""
    assert "validate cfg0: REFUSED" in err
    assert "serial" in err


def test_validate_names_every_config(capsys, tmp_path):
    doc = tmp_path / "batch.json"
    doc.write_text(json.dumps([
        {"kernel": "gather", "pattern": "0,1", "delta": 2, "count": 4,
         "runs": 2, "name": "alpha"},
        {"kernel": "scatter", "pattern": "0,1", "delta": 2, "count": 4,
         "runs": 2, "backend": "serial"},
    ]))
    code, _, err = run_cli(capsys, ["-f", str(doc), "--validate"])
    assert code == 0
    assert "validate alpha: PASSED" in err
    assert "validate cfg1: PASSED" in err


# --- suite export and figures -----------------------------------------------


def test_export_prints_a_loadable_config_file(capsys):
    code, out, _ = run_cli(capsys, ["--suite", "ustride-gather", "--export",
                                    "-b", "serial"])
    assert code == 0
    batch = parse_json(out)
    assert len(batch) == 8
    assert [c.name for c in batch] == [f"stride-{2**k}" for k in range(8)]
    assert out == export_suite_json(
        suite_ustride(Kernel.GATHER, backend=Backend.serial()))


def test_export_to_file_round_trips(capsys, tmp_path):
    dest = tmp_path / "suite.json"
    code, out, _ = run_cli(capsys, ["--suite", "stream", "--export", "-o",
                                    str(dest)])
    assert code == 0
    assert out == ""
    (config,) = parse_json(dest.read_text())
    assert config.name == "stream"
    assert config.count == 2**24


def test_plots_render_alongside_the_report(capsys, tmp_path):
    figs = tmp_path / "figs"
    code, out, err = run_cli(capsys, ["--suite", "ustride-gather",
                                      "--target-bytes", "65536", "-r", "2",
                                      "--plots", str(figs)])
    assert code == 0
    assert "MIN" in out
    created = sorted(p.name for p in figs.iterdir())
    assert created == ["ustride-gather-bandwidth.png",
                       "ustride-gather-bwbw.png",
                       "ustride-gather-normalized.png"]
    for p in figs.iterdir():
        assert p.read_bytes().startswith(PNG_MAGIC)
        assert f"figure {p}" in err


def test_plots_without_a_baseline_render_the_bandwidth_chart_only(capsys, tmp_path):
    figs = tmp_path / "figs"
    code, _, _ = run_cli(capsys, DIRECT + ["--plots", str(figs)])
    assert code == 0
    assert [p.name for p in figs.iterdir()] == ["bandwidth.png"]
