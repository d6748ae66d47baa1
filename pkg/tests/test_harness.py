import csv
import io
import json
from dataclasses import asdict, replace
from pathlib import Path

import pytest

from guessdec.cli import main, parse_channel
from guessdec.errors import InputError, ResolutionError
from guessdec.gf2core import load_code, random_linear_code
from guessdec.harness import (REPORT_FIELDS, AnalysisConfig, SimConfig, emit_report,
                              load_code_source, run_analysis, run_simulation)

DATA = Path(__file__).parent / "data"
HAMMING = load_code(DATA / "hamming74.txt")


def without_time(rows):
    return [{k: v for k, v in asdict(r).items() if k != "seconds"} for r in rows]


def test_noiseless_channel_needs_one_query():
    cfg = SimConfig(code=HAMMING, channel="awgn", points=(20.0,), min_errors=1, max_frames=1000)
    (row,) = run_simulation(cfg)
    assert row.frames == 1000 and row.frame_errors == 0 and row.fer == 0.0
    assert row.avg_queries == 1.0 and row.q99 == 1.0
    assert row.avg_ops == pytest.approx(3 * 13)


def test_results_do_not_depend_on_worker_count():
    code = random_linear_code(16, 8, seed=1)
    cfg = SimConfig(code=code, channel="awgn", points=(1.0, 3.0), decoder="gcd", stop="dai",
                    min_errors=15, max_frames=2000, seed=5)
    a = run_simulation(cfg)
    b = run_simulation(replace(cfg, workers=2))
    assert without_time(a) == without_time(b)


def test_points_stop_at_the_error_target():
    code = random_linear_code(16, 8, seed=1)
    cfg = SimConfig(code=code, channel="bsc", points=(0.08, 0.02), min_errors=10,
                    max_frames=600, seed=2)
    for row in run_simulation(cfg):
        assert row.frame_errors >= 10 or row.frames == 600
        if row.frame_errors >= 10:
            assert row.frame_errors == 10
        assert row.fer == row.frame_errors / row.frames
        assert row.q50 <= row.q90 <= row.q99


def test_budget_exhaustion_counts_as_error():
    code = random_linear_code(20, 6, seed=3)
    cfg = SimConfig(code=code, channel="awgn", points=(0.0,), l_max=3, min_errors=1000,
                    max_frames=300)
    (row,) = run_simulation(cfg)
    assert row.budget_exhausted > 0
    assert row.frame_errors >= row.budget_exhausted
    assert row.avg_queries <= 3


@pytest.mark.parametrize("kwargs", [
    dict(decoder="grand", stop="trivial"),
    dict(decoder="gcd", stop="membership"),
    dict(decoder="osd"),
    dict(order="chase"),
    dict(points=()),
    dict(min_errors=0),
    dict(channel="bsc", points=(0.7,)),
])
def test_invalid_configs(kwargs):
    base = dict(code=HAMMING, channel="awgn", points=(1.0,))
    base.update(kwargs)
    with pytest.raises(InputError):
        SimConfig(**base)


def test_code_sources(tmp_path):
    assert load_code_source("random:10,4,1").k == 4
    assert load_code_source(str(DATA / "hamming74.alist")).n == 7
    with pytest.raises(InputError):
        load_code_source("random:10,4")


def test_empty_reports(capsys, tmp_path):
    emit_report([], "csv", tmp_path / "a.csv")
    assert (tmp_path / "a.csv").read_text().strip() == ",".join(REPORT_FIELDS)
    emit_report([], "json", tmp_path / "a.json")
    assert json.loads((tmp_path / "a.json").read_text()) == []


def test_report_round_trips(tmp_path):
    cfg = SimConfig(code=HAMMING, channel="awgn", points=(0.0, 2.0), min_errors=5, max_frames=200)
    rows = run_simulation(cfg)
    emit_report(rows, "json", tmp_path / "r.json")
    assert json.loads((tmp_path / "r.json").read_text()) == [asdict(r) for r in rows]
    emit_report(rows, "csv", tmp_path / "r.csv")
    lines = list(csv.reader(io.StringIO((tmp_path / "r.csv").read_text())))
    assert lines[0] == list(REPORT_FIELDS)
    assert all(len(line) == len(REPORT_FIELDS) for line in lines)
    assert float(lines[1][4]) == rows[0].fer


def test_analysis_rows():
    cfg = AnalysisConfig(n=128, rates=(0.875, 0.75), ebn0_db=4.0, epsilon_target=1e-3,
                         samples=2000)
    rows = run_analysis(cfg)
    assert [r.k for r in rows] == [112, 96]
    assert rows[0].lower_bound == pytest.approx(2**16 * 1e-3)
    assert all(r.l_tilde_max >= 1 and r.avg_queries >= 1 for r in rows)
    one = run_analysis(replace(cfg, epsilon_target=1.0, rates=(0.875,)))[0]
    assert one.lower_bound == pytest.approx(2**16)
    with pytest.raises(ResolutionError):
        run_analysis(replace(cfg, epsilon_target=1e-5))


def test_parse_channel():
    assert parse_channel("awgn:1,2.5") == ("awgn", [1.0, 2.5], None)
    assert parse_channel("awgn:3,rate=0.5") == ("awgn", [3.0], 0.5)
    assert parse_channel("bsc:0.01,0.02") == ("bsc", [0.01, 0.02], None)


def test_cli_simulate(tmp_path):
    out = tmp_path / "sim.csv"
    rc = main(["simulate", "--code", str(DATA / "hamming74.txt"), "--channel", "awgn:2,4",
               "--decoder", "gcd", "--stop", "trivial", "--min-errors", "5",
               "--max-frames", "300", "--out", str(out)])
    assert rc == 0
    rows = list(csv.DictReader(out.open()))
    assert len(rows) == 2 and set(rows[0]) == set(REPORT_FIELDS)


def test_cli_other_commands(capsys):
    assert main(["rcu", "--n", "32", "--k", "16", "--channel", "awgn:2", "--samples", "200",
                 "--format", "json"]) == 0
    assert 0 < json.loads(capsys.readouterr().out)[0]["rcu"] < 1
    assert main(["analyze", "--n", "64", "--rates", "0.75", "--ebn0", "4", "--epsilon", "0.01",
                 "--samples", "500"]) == 0
    assert capsys.readouterr().out.startswith("rate,n,k,")
    assert main(["decode", "--code", "random:7,4,1", "--llr=-1,2,2,2,2,2,2",
                 "--soft-output"]) == 0
    res = json.loads(capsys.readouterr().out)
    assert res["found"] and len(res["bit_llrs"]) == 7


def test_cli_errors_exit_nonzero(capsys, tmp_path):
    assert main(["decode", "--code", str(tmp_path / "missing.txt"), "--llr", "1,2"]) == 1
    bad = tmp_path / "bad.txt"
    bad.write_text("7 4\n1101100\n")
    assert main(["simulate", "--code", str(bad), "--channel", "awgn:1"]) == 1
    assert "error" in capsys.readouterr().err
    assert main(["decode", "--code", "random:7,4,1", "--llr", "1,2,3"]) == 1
    with pytest.raises(SystemExit):
        main(["simulate", "--code", "random:7,4,1", "--channel", "qam:1"])
