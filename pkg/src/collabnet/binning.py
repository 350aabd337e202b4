"""Count-adaptive histograms, the empirical CDF and its numerical derivative."""

from dataclasses import dataclass

import numpy as np

from .errors import InputError

DEFAULT_TARGET = 1000
DEFAULT_GRID_POINTS = 200


def _as_degrees(sample):
    degrees = getattr(sample, "degrees", sample)
    return np.asarray(degrees)


@dataclass
class AdaptiveHistogram:
    """Adjacent bins ``[lo, hi)`` over integer degrees.

    ``values``/``value_counts`` keep the exact multiset so fitters and the
    chi-squared code can evaluate the empirical CDF at bin edges.
    """

    lo: np.ndarray
    hi: np.ndarray
    counts: np.ndarray
    n_total: int
    target: int
    values: np.ndarray
    value_counts: np.ndarray

    @property
    def n_bins(self):
        return int(self.counts.shape[0])

    @property
    def widths(self):
        return (self.hi - self.lo).astype(np.float64)

    @property
    def density(self):
        return self.counts / (self.widths * self.n_total)

    @property
    def centers(self):
        """Geometric mean of each bin's edges."""
        return np.sqrt(self.lo.astype(np.float64) * self.hi)

    @property
    def edges(self):
        return np.append(self.lo, self.hi[-1]).astype(np.float64)

    @property
    def d_min(self):
        return int(self.values[0])

    @property
    def d_max(self):
        return int(self.values[-1])

    def cdf_at(self, x):
        """Right-continuous empirical CDF evaluated at ``x``."""
        cum = np.cumsum(self.value_counts)
        idx = np.searchsorted(self.values, np.asarray(x, dtype=np.float64), side="right")
        cum = np.concatenate([[0], cum])
        return cum[idx] / self.n_total

    def edge_density(self):
        """Density from differencing the empirical CDF across each bin's edges.

        Returns ``(centers, density, interval_counts)``.  Interval ``j`` covers
        ``(edge_j, edge_{j+1}]``; with integer data this is the exact mass of a
        continuous variable whose CDF agrees with the sample at integers.
        """
        edges = self.edges
        F = self.cdf_at(edges)
        mass = np.diff(F)
        return self.centers, mass / np.diff(edges), mass * self.n_total

    def rows(self):
        for lo, hi, c, p in zip(self.lo, self.hi, self.counts, self.density):
            yield int(lo), int(hi), int(c), float(p)


def build_adaptive_bins(sample, target=DEFAULT_TARGET):
    """Merge consecutive integer degree values until each bin holds ``target``.

    Identical values are never split, a trailing partial bin is merged into its
    predecessor, and each bin extends up to the next observed value, so the bins
    tile ``[d_min, d_max + 1)``.
    """
    if target < 1:
        raise ValueError("target must be a positive integer")
    degrees = _as_degrees(sample)
    if degrees.size == 0:
        raise InputError("empty sample")
    if np.any(degrees != np.round(degrees)):
        raise InputError("adaptive bins need integer degrees")
    degrees = degrees.astype(np.int64)
    if degrees.min() < 1:
        raise InputError("degrees must be >= 1")
    values, vcounts = np.unique(degrees, return_counts=True)

    lo, counts = [], []
    acc = 0
    open_lo = None
    for v, c in zip(values, vcounts):
        if open_lo is None:
            open_lo = v
        acc += c
        if acc >= target:
            lo.append(open_lo)
            counts.append(acc)
            acc = 0
            open_lo = None
    if acc:
        if counts:
            counts[-1] += acc
        else:
            lo.append(open_lo)
            counts.append(acc)
    lo = np.array(lo, dtype=np.int64)
    hi = np.append(lo[1:], values[-1] + 1).astype(np.int64)
    return AdaptiveHistogram(lo=lo, hi=hi, counts=np.array(counts, dtype=np.int64),
                             n_total=int(degrees.size), target=int(target),
                             values=values.astype(np.int64),
                             value_counts=vcounts.astype(np.int64))


class EmpiricalCDF:
    """Right-continuous step CDF of a sample."""

    def __init__(self, sample):
        data = np.asarray(_as_degrees(sample), dtype=np.float64)
        if data.size == 0:
            raise InputError("empty sample")
        self.values, counts = np.unique(data, return_counts=True)
        self.probs = np.cumsum(counts) / data.size

    def __call__(self, x):
        x = np.asarray(x, dtype=np.float64)
        idx = np.searchsorted(self.values, x, side="right")
        return np.where(idx > 0, self.probs[np.maximum(idx - 1, 0)], 0.0)


def empirical_cdf(sample):
    return EmpiricalCDF(sample)


def log_grid(d_min, d_max, points=DEFAULT_GRID_POINTS):
    return np.geomspace(d_min, d_max, points)


def pdf_from_cdf(cdf, grid):
    """Differentiate ``cdf`` on ``grid``.

    Second-order central differences inside, second-order one-sided at the
    ends; negative round-off is clamped to zero.  The stencils are written on
    CDF increments so flat stretches give exactly zero.
    """
    grid = np.asarray(grid, dtype=np.float64)
    if grid.ndim != 1 or grid.size < 3:
        raise ValueError("grid needs at least 3 points")
    if np.any(np.diff(grid) <= 0):
        raise ValueError("grid must be strictly increasing")
    dF = np.diff(np.asarray(cdf(grid), dtype=np.float64))
    h = np.diff(grid)
    out = np.empty_like(grid)
    hm, hp = h[:-1], h[1:]
    out[1:-1] = (hm / (hp * (hm + hp))) * dF[1:] + (hp / (hm * (hm + hp))) * dF[:-1]
    h0, h1 = h[0], h[1]
    out[0] = dF[0] * (2 * h0 + h1) / (h0 * (h0 + h1)) - dF[1] * h0 / (h1 * (h0 + h1))
    h0, h1 = h[-1], h[-2]
    out[-1] = dF[-1] * (2 * h0 + h1) / (h0 * (h0 + h1)) - dF[-2] * h0 / (h1 * (h0 + h1))
    return np.maximum(out, 0.0)
