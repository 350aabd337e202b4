import os
import re

import numpy as np
import pytest

import golden_tools
from collabnet import tables
from collabnet.cli import main
from collabnet.errors import InputError
from collabnet.plotting import COLORS, render_plots

_DOMAIN = re.compile(r'class="axes"[^>]*data-domain="([^"]*)"')


@pytest.fixture(scope="module")
def one_year(tmp_path_factory, toy_corpus):
    out = tmp_path_factory.mktemp("one")
    assert main(["all", "--events", toy_corpus, "--years", "2001", "--bin-target", "50",
                 "--out", str(out)]) == 0
    return out


def test_one_year_gives_three_plots(one_year):
    assert sorted(os.listdir(one_year / "plots")) == [
        "chi2.svg", "distribution_2001.svg", "parameters.svg"]
    for name in ("chi2.svg", "parameters.svg"):
        for line in golden_tools.polylines(one_year / "plots" / name):
            assert len(line["points"]) == 1


def test_distribution_plot_series_and_colours(one_year):
    svg = (one_year / "plots" / "distribution_2001.svg").read_text()
    lines = golden_tools.polylines(one_year / "plots" / "distribution_2001.svg")
    assert [l["series"] for l in lines] == ["data", "power_law", "log_normal", "weibull"]
    for fam in ("power_law", "log_normal", "weibull"):
        assert re.search(f'data-series="{fam}" fill="none" stroke="{COLORS[fam]}"', svg)
    assert svg.startswith("<?xml") and "<script" not in svg and "href" not in svg


def test_axes_cover_degree_range(one_year):
    hist = tables.read_table(one_year / "histograms" / "hist_2001_all.tsv")
    svg = (one_year / "plots" / "distribution_2001.svg").read_text()
    x_lo, x_hi, y_lo, y_hi = map(float, _DOMAIN.search(svg).group(1).split())
    d_min, d_max = hist[0]["d_lo"], hist[-1]["d_hi"] - 1
    assert x_lo <= d_min * (1 + 1e-12) and x_hi >= d_max * (1 - 1e-12)
    assert y_lo > 0
    dens = [r["density"] for r in hist if r["density"] > 0]
    assert y_lo <= min(dens) and y_hi >= max(dens)


def test_curves_stay_inside_frame(one_year):
    svg = (one_year / "plots" / "distribution_2001.svg").read_text()
    x, y, w, h = map(float, re.search(
        r'class="axes" x="([\d.]+)" y="([\d.]+)" width="([\d.]+)" height="([\d.]+)"',
        svg).groups())
    for line in golden_tools.polylines(one_year / "plots" / "distribution_2001.svg"):
        p = np.array(line["points"])
        assert np.all(np.isfinite(p))
        assert p[:, 0].min() >= x - 0.01 and p[:, 0].max() <= x + w + 0.01
        assert p[:, 1].min() >= y - 0.01 and p[:, 1].max() <= y + h + 0.01


def test_missing_histogram_is_named(one_year, tmp_path):
    for f in ("fits.tsv", "comparison.tsv"):
        (tmp_path / f).write_bytes((one_year / f).read_bytes())
    with pytest.raises(InputError, match="hist_2001_all.tsv"):
        render_plots(tmp_path, tmp_path)
    with pytest.raises(InputError, match="fits.tsv"):
        render_plots(tmp_path / "nowhere", tmp_path)
