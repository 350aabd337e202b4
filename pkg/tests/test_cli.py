import json
import os
import re

import numpy as np
import pytest

import golden_tools
from collabnet import pipeline, tables
from collabnet.cli import main, parse_years
from collabnet.errors import NumericalError


def run(*argv):
    return main([str(a) for a in argv])


def test_parse_years():
    assert parse_years("1990..1993") == [1990, 1991, 1992, 1993]
    assert parse_years("1990..2000:5,1992") == [1990, 1992, 1995, 2000]
    with pytest.raises(Exception):
        parse_years("1990..")


def test_help_and_version(capsys):
    with pytest.raises(SystemExit) as e:
        run("--version")
    assert e.value.code == 0 and "collabnet" in capsys.readouterr().out
    with pytest.raises(SystemExit) as e:
        run("bogus")
    assert e.value.code == 2


def test_ingest(toy_corpus, tmp_path, capsys):
    out = tmp_path / "n.jsonl"
    assert run("ingest", "--events", toy_corpus, "--out", out) == 0
    lines = out.read_text().splitlines()
    assert len(lines) == 10_000
    rec = json.loads(lines[0])
    assert {"date", "participants"} <= set(rec)
    assert "events=10000" in capsys.readouterr().err


def test_no_events_exit_2(tmp_path, capsys):
    empty = tmp_path / "e.jsonl"
    empty.write_text("")
    assert run("compare", "--events", empty, "--years", "2000", "--out", tmp_path / "o") == 2
    assert "no events" in capsys.readouterr().err
    assert run("ingest", "--events", tmp_path / "missing.jsonl") == 2


def test_years_outside_range_exit_0(toy_corpus, tmp_path, caplog):
    out = tmp_path / "o"
    assert run("compare", "--events", toy_corpus, "--years", "2050..2052", "--out", out) == 0
    assert "outside the event range" in caplog.text
    assert (out / "comparison.tsv").read_text().count("\n") == 1


def test_numerical_failure_exit_3(toy_corpus, tmp_path, capsys, monkeypatch):
    def boom(*a, **k):
        raise NumericalError("non-finite chi-squared")
    monkeypatch.setattr(pipeline, "compare_fits", boom)
    assert run("compare", "--events", toy_corpus, "--years", "1995", "--bin-target", 50,
               "--out", tmp_path) == 3
    assert "year 1995, stage compare" in capsys.readouterr().err


def test_fit_writes_no_comparison(toy_corpus, tmp_path):
    assert run("fit", "--events", toy_corpus, "--years", "2000", "--bin-target", 50,
               "--out", tmp_path) == 0
    assert (tmp_path / "fits.tsv").exists() and not (tmp_path / "comparison.tsv").exists()
    assert len(tables.read_table(tmp_path / "fits.tsv")) == 3


def test_snapshots_format(toy_corpus, tmp_path):
    assert run("snapshots", "--events", toy_corpus, "--years", "2000,2001",
               "--out", tmp_path) == 0
    text = (tmp_path / "snapshot_2000.tsv").read_text().splitlines()
    assert text[0] == "# year\tN\ttotal_edges"
    year, n, edges = text[1][2:].split("\t")
    rows = tables.read_table(tmp_path / "snapshot_2000.tsv")
    assert int(year) == 2000 and int(n) == len(rows)
    assert sum(r["degree"] for r in rows) == 2 * int(edges)


def test_simulate_then_fit_degrees(tmp_path):
    sim = tmp_path / "sim.txt"
    assert run("simulate", "--nodes", 20000, "--gamma-c", 0.2, "--seed", 3, "--out", sim) == 0
    lines = sim.read_text().splitlines()
    header = [ln for ln in lines if ln.startswith("#")]
    assert "# gamma_c=0.2" in header and "# seed=3" in header
    assert any(re.match(r"# rng=numpy\.random\.Generator\(PCG64\)", h) for h in header)
    degrees = np.array([int(x) for x in lines if not x.startswith("#")])
    assert degrees.size == 20000 and degrees.sum() == 2 * (2 * (20000 - 3) + 3)
    again = tmp_path / "sim2.txt"
    run("simulate", "--nodes", 20000, "--gamma-c", 0.2, "--seed", 3, "--out", again)
    assert again.read_bytes() == sim.read_bytes()

    out = tmp_path / "res"
    assert run("compare", "--degrees", sim, "--out", out) == 0
    comp = tables.read_table(out / "comparison.tsv")
    assert len(comp) == 1 and comp[0]["year"] is None and comp[0]["N"] == 20000


def test_simulate_bad_config_exit_2(capsys):
    assert run("simulate", "--nodes", 2, "--m", 2) == 2
    assert "n_nodes" in capsys.readouterr().err


def test_report_from_tables(tmp_path):
    assert golden_tools.run_toy(tmp_path / "t") == 0
    out = tmp_path / "r"
    assert run("report", "--tables", tmp_path / "t", "--out", out) == 0
    assert sorted(os.listdir(out / "plots")) == sorted(os.listdir(tmp_path / "t" / "plots"))


def test_report_missing_table(tmp_path, capsys):
    assert run("report", "--tables", tmp_path) == 2
    assert "missing table" in capsys.readouterr().err
