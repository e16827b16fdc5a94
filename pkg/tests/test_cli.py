import csv
import json
import subprocess
import sys

import pytest

from rldsim.cli import main


def _run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_bounds_partition(capsys):
    code, out, _ = _run(capsys, "bounds", "--device", "rldram3", "--controller", "rldc",
                        "--layout", "partition", "--pes", "4", "--op", "read")
    doc = json.loads(out)
    assert code == 0
    assert doc["wcl_cycles"] == 26 and doc["wcl_ns"] == 39.0
    assert list(doc)[:9] == ["device", "controller", "layout", "pes", "kind", "wcl_cycles",
                             "bcl_cycles", "vw_percent", "wcl_ns"]


def test_bounds_rejects_ddr(capsys):
    code, _, err = _run(capsys, "bounds", "--device", "ddr3", "--controller", "ddr-close-page")
    assert code == 1 and "rldram3" in err


def test_scenarios_ddr(capsys):
    code, out, err = _run(capsys, "scenarios", "--device", "ddr3", "--verify")
    rows = list(csv.reader(out.splitlines()))
    assert code == 0
    assert rows[0] == ["scenario_id", "latency_cycles", "latency_ns"]
    assert rows[1] == ["a", "10", "15.0"]
    assert ["o", "72", "108.0"] in rows
    assert "VW=620.0%" in err


def test_scenarios_figure(tmp_path, capsys):
    code, _, _ = _run(capsys, "scenarios", "--device", "rldram3", "--out", str(tmp_path / "s.csv"),
                      "--figure", str(tmp_path / "s.png"))
    assert code == 0
    assert (tmp_path / "s.png").read_bytes()[:4] == b"\x89PNG"


def test_simulate_same_bank(capsys):
    code, out, _ = _run(capsys, "simulate", "--controller", "rldc", "--layout", "share", "--pes", "4",
                        "--pattern", "same-bank", "--length", "4")
    doc = json.loads(out)
    assert code == 0
    assert doc["max_total_cycles"] == 31 and doc["timing_violations"] == 0
    assert doc["bound_exceedances"] == 0


def test_gen_trace_then_simulate(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("RLDSIM_OUTPUT_DIR", str(tmp_path))
    assert _run(capsys, "gen-trace", "--pattern", "row-locality", "--pes", "4", "--length", "300",
                "--hit-ratio", "0.35", "--gap", "1", "--seed", "3", "--out", "t.trc")[0] == 0
    assert (tmp_path / "t.trc").exists()
    code, _, _ = _run(capsys, "simulate", "--trace", str(tmp_path / "t.trc"), "--pes", "4",
                      "--layout", "partition", "--records", "r.csv", "--summary", "s.json")
    assert code == 0
    header = (tmp_path / "r.csv").read_text().splitlines()[0]
    assert header.startswith("request_id,pe,op")
    assert json.loads((tmp_path / "s.json").read_text())["requests"] == 300


def test_identical_runs_identical_artifacts(tmp_path, capsys):
    def run(tag):
        d = tmp_path / tag
        d.mkdir()
        assert _run(capsys, "simulate", "--pattern", "uniform", "--pes", "4", "--length", "200",
                    "--seed", "5", "--records", str(d / "r.csv"), "--summary", str(d / "s.json"),
                    "--figure", str(d / "h.png"))[0] == 0
        assert _run(capsys, "sweep", "--pes", "1..4", "--out", str(d / "w.csv"),
                    "--figure", str(d / "w.png"))[0] == 0
        return d
    a, b = run("a"), run("b")
    for name in ("r.csv", "s.json", "h.png", "w.csv", "w.png"):
        assert (a / name).read_bytes() == (b / name).read_bytes(), name


def test_config_file(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("controller = ddr-close-page\nlayout = partition\npes = 2\nranks = 2\n")
    code, out, _ = _run(capsys, "simulate", "--config", str(cfg), "--pattern", "uniform",
                        "--length", "50")
    doc = json.loads(out)
    assert code == 0 and doc["controller"] == "ddr-close-page" and doc["pes"] == 2
    assert doc["device"] == "ddr3" and doc["bound_checked"] is False
    cfg.write_text("colour = blue\n")
    assert _run(capsys, "simulate", "--config", str(cfg), "--pattern", "uniform")[0] == 1


def test_invalid_pairing(capsys):
    code, _, err = _run(capsys, "simulate", "--controller", "rldc", "--device", "ddr3",
                        "--pattern", "uniform")
    assert code == 1 and "pairs with" in err


def test_parse_error_exit(tmp_path, capsys):
    f = tmp_path / "bad.trc"
    f.write_text("#device=rldram3 mode=closed-loop pes=2\n0,1\n")
    code, _, err = _run(capsys, "simulate", "--trace", str(f), "--pes", "2")
    assert code == 1 and ":2:" in err


def test_usage_error():
    with pytest.raises(SystemExit) as exc:
        main(["simulate", "--layout", "diagonal"])
    assert exc.value.code != 0


def test_compare(tmp_path, capsys):
    code, out, _ = _run(capsys, "compare", "--pattern", "uniform", "--pes", "4", "--length", "300",
                        "--figure", str(tmp_path / "c.png"))
    rows = {r["metric"]: r for r in csv.DictReader(out.splitlines())}
    assert code == 0
    assert float(rows["max_total_cycles"]["ratio"]) > 1


def test_sweep_table(capsys):
    code, out, _ = _run(capsys, "sweep", "--pes", "1..8")
    rows = list(csv.DictReader(out.splitlines()))
    assert code == 0 and [int(r["pes"]) for r in rows] == list(range(1, 9))
    assert all(r["share_growth_rldc_lt_ddr"] == "True" for r in rows[1:])
    assert all(r["partition_growth_rldc_lt_ddr"] == "True" for r in rows[1:])


def test_console_entry_point():
    out = subprocess.run([sys.executable, "-m", "rldsim", "bounds", "--pes", "8"],
                         capture_output=True, text=True, check=True).stdout
    assert json.loads(out)["wcl_cycles"] == 55
