import json
import os

import numpy as np
import pytest

import golden_tools
from collabnet import pipeline, tables
from collabnet.errors import InputError, NumericalError
from collabnet.fitters import FAMILIES
from collabnet.pipeline import StageError, run_pipeline


@pytest.fixture(scope="module")
def toy_run(tmp_path_factory):
    out = tmp_path_factory.mktemp("toy")
    assert golden_tools.run_toy(out) == 0
    return out


def test_all_artifacts_present(toy_run):
    names = set(os.listdir(toy_run))
    assert {"fits.tsv", "comparison.tsv", "manifest.json", "histograms", "plots"} <= names
    assert [f for f in names if "manifest" in f] == ["manifest.json"]
    assert len(os.listdir(toy_run / "histograms")) == 20
    assert len(os.listdir(toy_run / "plots")) == 22


def test_golden_digests(toy_run):
    with open(golden_tools.DIGESTS) as fh:
        assert golden_tools.table_digests(toy_run) == json.load(fh)


def test_golden_render_structure(toy_run):
    with open(golden_tools.POLYLINES) as fh:
        ref = json.load(fh)
    for name, lines in ref.items():
        got = golden_tools.polylines(toy_run / "plots" / name)
        assert [g["series"] for g in got] == [r["series"] for r in lines], name
        for g, r in zip(got, lines):
            assert np.allclose(g["points"], r["points"], atol=0.011), (name, g["series"])


def test_manifest_contents(toy_run):
    with open(toy_run / "manifest.json") as fh:
        man = json.load(fh)
    assert man["tool"] == "collabnet" and man["rng_algorithm"].startswith("numpy")
    assert man["config"]["bin_target"] == 50 and man["config"]["window_years"] == 2.0
    assert len(man["inputs"]) == 1 and len(man["inputs"][0]["sha256"]) == 64
    assert man["outputs"]["fits.tsv"] == pipeline.sha256_file(toy_run / "fits.tsv")
    assert man["started"] <= man["finished"]


def test_referential_integrity(toy_run):
    fits = tables.read_table(toy_run / "fits.tsv")
    comp = tables.read_table(toy_run / "comparison.tsv")
    for rec in comp:
        fams = sorted(r["family"] for r in fits if r["year"] == rec["year"])
        assert fams == sorted(FAMILIES)
    assert {r["year"] for r in fits} == {r["year"] for r in comp}


def test_rerun_and_parallel_are_byte_identical(toy_run, tmp_path):
    assert golden_tools.run_toy(tmp_path / "a", ["--jobs", "4"]) == 0
    assert golden_tools.table_digests(tmp_path / "a") == golden_tools.table_digests(toy_run)


def test_no_events(tmp_path):
    empty = tmp_path / "e.jsonl"
    empty.write_text("")
    with pytest.raises(InputError, match="no events"):
        run_pipeline(empty, [2000], out_dir=tmp_path / "o")


def test_years_outside_range(toy_corpus, tmp_path):
    res = run_pipeline(toy_corpus, [2050, 2051], out_dir=tmp_path, bin_target=50)
    assert res.records == [] and any("outside" in w for w in res.warnings)
    assert tables.read_table(tmp_path / "comparison.tsv") == []


def test_stage_error_names_year_and_stage(toy_corpus, tmp_path, monkeypatch):
    def boom(*a, **k):
        raise NumericalError("overflow in fit")
    monkeypatch.setattr(pipeline, "compare_fits", boom)
    with pytest.raises(StageError) as info:
        run_pipeline(toy_corpus, [1995], out_dir=tmp_path, bin_target=50)
    assert info.value.year == 1995 and info.value.stage == "compare"
    assert "year 1995, stage compare" in str(info.value)
