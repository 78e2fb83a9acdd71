import csv
import io
import json
import subprocess
import sys
from fractions import Fraction

import pytest

from adictk.adic_graph import Edge, GradedGraph
from adictk.cli import run


def call(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_orbit_pascal_example(capsys):
    code, out, _ = call(capsys, "orbit", "--map", "pascal", "--word", "00110", "--steps", "1")
    assert code == 0
    doc = json.loads(out)
    assert [r["word"] for r in doc["records"]] == ["00110", "10001"]
    assert doc["records"][0]["jump"] == 5


def test_orbit_reports_undetermined_as_data(capsys):
    code, out, _ = call(capsys, "orbit", "--word", "1100", "--steps", "10", "--format", "csv")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert [r["word"] for r in rows[:-1]] == ["1100", "1010", "0110", "1001", "0101", "0011"]
    assert rows[-1]["status"] == "undetermined"


def test_orbit_other_maps(capsys):
    _, out, _ = call(capsys, "orbit", "--map", "odometer", "--word", "110", "--steps", "1")
    assert json.loads(out)["records"][1]["word"] == "001"
    _, out, _ = call(capsys, "orbit", "--map", "pascal-inverse", "--word", "0011", "--steps", "1")
    assert json.loads(out)["records"][1]["word"] == "0101"
    _, out, _ = call(capsys, "orbit", "--map", "hk", "--word", "0110", "--level", "3", "--steps", "1")
    rec = json.loads(out)["records"][1]
    assert (rec["word"], rec["level"]) == ("1001", 0)


def test_expectation_strictly_increasing(capsys):
    code, out, _ = call(capsys, "expectation", "--max-window", "12", "--format", "csv")
    assert code == 0
    assert "\r" not in out
    rows = list(csv.DictReader(io.StringIO(out)))
    values = [Fraction(r["expectation"]) for r in rows]
    assert rows[0]["expectation"] == "1/4"
    assert all(a < b for a, b in zip(values, values[1:]))


def test_no_subcommand_is_usage_error(capsys):
    code, _, err = call(capsys)
    assert code == 2
    assert "usage" in err


def test_unknown_flag_is_usage_error(capsys):
    code, _, err = call(capsys, "jump", "--bogus")
    assert code == 2
    assert "usage" in err


def test_bad_word_is_usage_error(capsys):
    code, _, _ = call(capsys, "jump", "--word", "01a")
    assert code == 2


def test_runtime_error_exit_code(capsys, tmp_path):
    code, _, err = call(capsys, "graph-check", "--graph-file", str(tmp_path / "missing.json"))
    assert code == 1
    code, _, _ = call(capsys, "rank-stats", "--samples", "0")
    assert code == 1


def test_help(capsys):
    code, out, _ = call(capsys, "walk", "--help")
    assert code == 0
    assert "--ball-radius" in out


def test_jump_records(capsys):
    _, out, _ = call(capsys, "jump", "--word", "0110", "--word", "0011")
    recs = json.loads(out)["records"]
    assert recs[0]["jump"] == 3 and recs[0]["m"] == 1 and recs[0]["k"] == 1
    assert recs[1]["status"] == "undetermined"
    _, out, _ = call(capsys, "jump", "--length", "3", "--format", "csv")
    assert len(out.strip().splitlines()) == 9


def test_rank_stats_deterministic(capsys, tmp_path, monkeypatch):
    args = ["rank-stats", "--n-ladder", "4,7", "--samples", "50", "--format", "csv"]
    monkeypatch.setenv("ADICTK_SEED", "17")
    _, first, _ = call(capsys, *args)
    _, second, _ = call(capsys, *args)
    _, explicit, _ = call(capsys, *args, "--seed", "17")
    _, other, _ = call(capsys, *args, "--seed", "18")
    assert first == second == explicit
    assert first != other
    rows = list(csv.DictReader(io.StringIO(first)))
    assert len(rows) == 100
    assert set(rows[0]) == {"n", "sample_index", "m", "t", "u", "normalized"}
    summary = tmp_path / "s.json"
    call(capsys, *args, "--summary", str(summary))
    doc = json.loads(summary.read_text())
    assert doc["normalization_is_default"] is True and doc["seed"] == 17


def test_rank_stats_norm_and_takagi(capsys):
    code, out, _ = call(
        capsys, "rank-stats", "--n-ladder", "6", "--samples", "20", "--measure", "1/3",
        "--norm", "C(n,m)/2,sqrt(n)", "--takagi-terms", "20", "--format", "csv",
    )
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert "takagi_error_bound" in rows[0]
    assert float(rows[0]["takagi_error_bound"]) == 2.0**-19


def test_hk_command(capsys):
    code, out, _ = call(capsys, "hk", "--base-word", "0110", "--steps", "4", "--window", "6")
    assert code == 0
    doc = json.loads(out)
    assert doc["first_return"] == {"point": {"base": "1001", "level": 0}, "steps": 4}
    assert doc["orbit"]["points"][-1] == {"base": "1001", "level": 0}
    _, out, _ = call(capsys, "hk", "--window", "6", "--report-levels", "3", "--format", "csv")
    assert out.splitlines()[0] == "level,measure,cumulative"


def test_walk_trajectory_and_spectral(capsys):
    code, out, _ = call(capsys, "walk", "--group", "free:2", "--length", "6", "--seed", "3", "--format", "csv")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert rows[0]["point"] == "e" and len(rows) == 6
    _, out, _ = call(capsys, "walk", "--group", "z:1", "--nu", "+1=1/2,-1=1/2", "--ball-radius", "3")
    doc = json.loads(out)
    assert abs(doc["value"] - 0.9238795325112867) < 1e-9
    assert doc["truncation"] == "dirichlet"


def test_graph_check(capsys, tmp_path):
    code, out, _ = call(capsys, "graph-check", "--levels", "6")
    assert code == 0 and json.loads(out)["pass"] is True
    g = GradedGraph([[0], [0, 1, 2]], [[Edge(0, 0, 0), Edge(0, 1, 0), Edge(0, 2, 0)]])
    path = tmp_path / "g.json"
    path.write_text(g.to_json())
    code, _, err = call(capsys, "graph-check", "--graph-file", str(path), "--p", "2")
    assert code == 1 and "out-degree" in err


def test_output_file(capsys, tmp_path):
    target = tmp_path / "out.csv"
    code, out, _ = call(capsys, "expectation", "--max-window", "4", "--format", "csv", "--output", str(target))
    assert code == 0 and out == ""
    assert target.read_bytes() == b"window,expectation\n2,1/4\n3,3/4\n4,23/16\n"


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "adictk", "orbit", "--word", "10", "--steps", "1"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["records"][1]["word"] == "01"
