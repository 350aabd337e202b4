import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import oracles
from collabnet.binning import (build_adaptive_bins, empirical_cdf, log_grid, pdf_from_cdf)
from collabnet.errors import InputError
from collabnet.temporal import DegreeSample


def test_identical_values_never_split():
    h = build_adaptive_bins(np.ones(2500, dtype=int), 1000)
    assert (h.lo.tolist(), h.hi.tolist(), h.counts.tolist()) == ([1], [2], [2500])


def test_small_sample_single_bin():
    d = oracles.rng(0).integers(1, 50, 500)
    h = build_adaptive_bins(d, 1000)
    assert h.n_bins == 1
    assert h.lo[0] == d.min() and h.hi[0] == d.max() + 1


def test_two_full_bins():
    h = build_adaptive_bins(np.repeat([1, 2], 1000), 1000)
    assert list(h.rows()) == [(1, 2, 1000, 0.5), (2, 3, 1000, 0.5)]


def test_trailing_partial_bin_merges_back():
    d = np.concatenate([np.full(1000, 1), np.full(1000, 2), np.full(10, 7)])
    h = build_adaptive_bins(d, 1000)
    assert h.lo.tolist() == [1, 2] and h.hi.tolist() == [2, 8]
    assert h.counts.tolist() == [1000, 1010]


def test_bins_extend_to_next_observed_value():
    d = np.concatenate([np.full(1000, 1), np.full(1000, 5), np.full(1000, 9)])
    h = build_adaptive_bins(d, 1000)
    assert h.lo.tolist() == [1, 5, 9] and h.hi.tolist() == [5, 9, 10]


def test_errors():
    with pytest.raises(InputError, match="empty sample"):
        build_adaptive_bins(DegreeSample([]))
    with pytest.raises(InputError):
        build_adaptive_bins(np.array([1.5, 2.0]))


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(1, 3000), min_size=1, max_size=4000), st.integers(1, 1500))
def test_histogram_invariants(values, target):
    d = np.array(values)
    h = build_adaptive_bins(d, target)
    assert h.counts.sum() == d.size
    assert h.lo[0] == d.min() and h.hi[-1] == d.max() + 1
    assert np.all(h.lo[1:] == h.hi[:-1]) and np.all(h.hi > h.lo)
    if d.size >= target:
        assert np.all(h.counts[:-1] >= target) and h.counts[-1] >= target
    assert abs(np.sum(h.density * h.widths) - 1.0) <= 1e-9
    # no value straddles a bin edge
    idx = np.searchsorted(h.hi, d, side="right")
    assert np.array_equal(np.bincount(idx, minlength=h.n_bins), h.counts)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(1, 500), min_size=1, max_size=3000), st.integers(1, 700))
def test_doubling_target_never_adds_bins(values, target):
    d = np.array(values)
    assert build_adaptive_bins(d, 2 * target).n_bins <= build_adaptive_bins(d, target).n_bins


def test_empirical_cdf_counting():
    F = empirical_cdf([1, 1, 2, 4])
    assert F([1, 2, 3, 4]).tolist() == [0.5, 0.75, 0.75, 1.0]
    assert F(0.5) == 0.0
    G = empirical_cdf([4, 2, 1, 1])
    assert G([1, 2, 3, 4]).tolist() == F([1, 2, 3, 4]).tolist()
    unit = empirical_cdf([7, 7, 7])
    assert unit([6.99, 7, 100]).tolist() == [0.0, 1.0, 1.0]
    with pytest.raises(InputError):
        empirical_cdf([])


def test_histogram_cdf_matches_empirical_cdf():
    d = oracles.weibull_degrees(5000, 0.9, 8.0, seed=3)
    h = build_adaptive_bins(d, 100)
    x = np.arange(0, d.max() + 2)
    assert np.allclose(h.cdf_at(x), empirical_cdf(d)(x))


def test_edge_density_sums_to_one_and_matches_counts():
    d = oracles.log_normal_degrees(20000, 1.5, 1.0, seed=9)
    h = build_adaptive_bins(d, 500)
    _, dens, n_int = h.edge_density()
    assert np.isclose(np.sum(dens * np.diff(h.edges)), 1 - h.cdf_at(h.edges[0]))
    assert n_int.sum() == pytest.approx(d.size - np.sum(d <= h.edges[0]))


def test_pdf_from_cdf_exponential():
    grid = log_grid(0.01, 10.0, 200)
    est = pdf_from_cdf(lambda x: -np.expm1(-x), grid)
    rms = np.sqrt(np.mean(((est - np.exp(-grid)) / np.exp(-grid)) ** 2))
    assert rms < 0.01


def test_pdf_from_cdf_constant_segment_and_clamp():
    grid = np.linspace(1, 10, 20)
    assert np.all(pdf_from_cdf(lambda x: np.full_like(x, 0.3), grid) == 0)
    # a slightly decreasing (noisy) CDF never gives negative densities
    noisy = pdf_from_cdf(lambda x: 0.5 - 1e-12 * x, grid)
    assert np.all(noisy >= 0)


def test_pdf_from_cdf_needs_three_points():
    with pytest.raises(ValueError):
        pdf_from_cdf(lambda x: x, np.array([1.0, 2.0]))


def test_pdf_from_cdf_converges_on_weibull():
    errs = []
    for pts in (100, 200, 400, 800):
        g = log_grid(1.0, 100.0, pts)
        est = pdf_from_cdf(lambda x: oracles.weibull_cdf(x, 0.9, 8.0), g)
        true = oracles.weibull_pdf(g, 0.9, 8.0)
        errs.append(np.sqrt(np.mean(((est - true) / true) ** 2)))
    assert all(a > b for a, b in zip(errs, errs[1:]))
