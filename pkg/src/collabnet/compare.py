"""Goodness of fit, model ranking and power-law deviation measures."""

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InputError, NumericalError
from .fitters import FAMILIES

E_FLOOR = 1e-9
DEFAULT_D_LOW = 5
DEFAULT_TOL_PCT = 5.0


def expected_counts(hist, params):
    """Model counts per bin: ``N * P(bin)``; power laws scale by their tail size."""
    mass = params.bin_mass(hist.lo, hist.hi)
    if params.family == "power_law":
        n_ref = hist.value_counts[hist.values >= params.x_min].sum()
    else:
        n_ref = hist.n_total
    return n_ref * mass


@dataclass
class ChiSquare:
    value: float
    n_bins: int
    excluded: list = field(default_factory=list)
    n_params: int = 0

    @property
    def per_bin(self):
        return self.value / self.n_bins if self.n_bins else float("nan")

    @property
    def dof(self):
        # reported only; ranking uses the raw statistic
        return self.n_bins - self.n_params


def chi_squared(hist, params, below_xmin="extrapolate"):
    """Pearson statistic ``sum((O - E)^2 / E)`` over the histogram bins.

    Power-law predictions below ``x_min`` are either extrapolated from the
    tail fit (default) or ``"exclude"``-d; excluded bin indices are recorded.
    """
    if below_xmin not in ("extrapolate", "exclude"):
        raise ValueError("below_xmin must be 'extrapolate' or 'exclude'")
    if hist.n_bins < 1:
        raise InputError("histogram has no bins")
    E = np.maximum(expected_counts(hist, params), E_FLOOR)
    O = hist.counts.astype(np.float64)
    keep = np.isfinite(E)
    if params.family == "power_law" and below_xmin == "exclude":
        keep &= hist.lo >= params.x_min
    excluded = np.flatnonzero(~keep).tolist()
    if not keep.any():
        raise NumericalError("model undefined on every bin")
    value = float(np.sum((O[keep] - E[keep]) ** 2 / E[keep]))
    return ChiSquare(value, int(keep.sum()), excluded, params.n_params)


def _low_region(hist, d_low):
    return (hist.lo >= 1) & (hist.hi - 1 <= d_low)


def flattening_excess(hist, pl, d_low=DEFAULT_D_LOW):
    """Percent excess of observed counts over power-law counts in bins inside [1, d_low].

    Returns ``None`` when no bin lies entirely inside the region.
    """
    if pl.family != "power_law":
        raise ValueError("flattening is measured against a power law")
    inside = _low_region(hist, d_low)
    if not inside.any():
        return None
    E = expected_counts(hist, pl)[inside].sum()
    O = hist.counts[inside].sum()
    return float(100.0 * (O - E) / E)


def relative_deviation(hist, pl):
    E = np.maximum(expected_counts(hist, pl), E_FLOOR)
    return hist.counts / E - 1.0


def cutoff_degree(hist, pl, tol_pct=DEFAULT_TOL_PCT):
    """Smallest bin centre from which every later bin stays within ``tol_pct``.

    Only bins up to the last one holding at least ``hist.target`` observations
    are examined.  Returns ``None`` if the condition is never met.
    """
    full = np.flatnonzero(hist.counts >= hist.target)
    if full.size == 0:
        return None
    last = int(full[-1])
    dev = np.abs(relative_deviation(hist, pl)[: last + 1])
    ok = dev <= tol_pct / 100.0
    if not ok[last]:
        return None
    # first index of the trailing run of in-tolerance bins
    bad = np.flatnonzero(~ok)
    first = int(bad[-1]) + 1 if bad.size else 0
    return float(hist.centers[first])


@dataclass
class Regression:
    slope: float
    intercept: float
    r2: float
    mode: str


def scaling_regression(N, values, mode="power"):
    """Least-squares line of ``ln value`` (power) or ``value`` (log) against ``ln N``."""
    N = np.asarray(N, dtype=np.float64)
    values = np.asarray(values, dtype=np.float64)
    if N.size != values.size:
        raise ValueError("N and values differ in length")
    if N.size < 3:
        raise ValueError("scaling regression needs at least 3 points")
    if np.any(N <= 0):
        raise ValueError("N must be positive")
    x = np.log(N)
    if mode == "power":
        if np.any(values <= 0):
            raise ValueError("power mode needs positive values")
        y = np.log(values)
    elif mode == "log":
        y = values
    else:
        raise ValueError("mode must be 'power' or 'log'")
    A = np.column_stack([x, np.ones_like(x)])
    (slope, intercept), *_ = np.linalg.lstsq(A, y, rcond=None)
    resid = y - (slope * x + intercept)
    ss_res = float(resid @ resid)
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else (1.0 if ss_res == 0 else 0.0)
    return Regression(float(slope), float(intercept), r2, mode)


@dataclass
class Ranking:
    best: str
    chi2: dict
    margins_pct: dict
    tie: bool


def rank_models(fits):
    """Pick the converged family with the lowest chi-squared.

    ``fits`` maps family -> FitResult (or is a list of FitResults) with ``chi2``
    filled in.  ``margins_pct[f]`` is how much lower the best chi-squared is than
    family ``f``, in percent.  Ties go to the earlier family in
    (power_law, log_normal, weibull).
    """
    if not isinstance(fits, dict):
        fits = {f.family: f for f in fits}
    usable = {fam: fit.chi2 for fam, fit in fits.items()
              if fit is not None and fit.converged and fit.chi2 is not None
              and math.isfinite(fit.chi2)}
    if len(usable) < 2:
        raise NumericalError("ranking needs at least two converged fits")
    order = [f for f in FAMILIES if f in usable]
    best = min(order, key=lambda f: (usable[f], order.index(f)))
    low = usable[best]
    tie = sum(1 for f in order if usable[f] == low) > 1
    margins = {}
    for f in order:
        if f == best:
            continue
        margins[f] = 100.0 * (usable[f] - low) / usable[f] if usable[f] > 0 else 0.0
    return Ranking(best, usable, margins, tie)


@dataclass
class ComparisonRecord:
    snapshot_year: object
    N: int
    chi2: dict
    best_family: str
    flattening_excess_pct: float
    cutoff: float
    n_bins: int
    tie: bool = False
    margins_pct: dict = field(default_factory=dict)


def compare_fits(hist, fits, year=None, d_low=DEFAULT_D_LOW, tol_pct=DEFAULT_TOL_PCT):
    """Fill ``chi2`` on each fit and build the comparison record for one sample."""
    chi2 = {}
    for fam in FAMILIES:
        fit = fits.get(fam)
        if fit is None:
            chi2[fam] = None
            continue
        fit.chi2 = chi_squared(hist, fit.params).value
        chi2[fam] = fit.chi2
    try:
        ranking = rank_models(fits)
        best, tie, margins = ranking.best, ranking.tie, ranking.margins_pct
    except NumericalError:
        best, tie, margins = None, False, {}
    pl = fits.get("power_law")
    flat = cut = None
    if pl is not None:
        flat = flattening_excess(hist, pl.params, d_low)
        cut = cutoff_degree(hist, pl.params, tol_pct)
    return ComparisonRecord(year, hist.n_total, chi2, best, flat, cut, hist.n_bins, tie, margins)
