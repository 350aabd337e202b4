"""Candidate degree-distribution models and their estimators.

Power laws are fitted by maximum likelihood; log-normal and Weibull laws by
Levenberg-Marquardt on the binned density.

Integer degrees are tied to continuous laws in two ways.  The power law uses
the usual continuity correction (degree ``d`` stands for ``[d - 1/2, d + 1/2)``).
The log-normal and Weibull fits use the empirical CDF at integer points, which
is the CDF of a continuous variable rounded up (degree ``d`` stands for
``(d - 1, d]``).
"""

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .binning import AdaptiveHistogram
from .errors import InputError, NumericalError
from .lm import lm_minimize
from .special import gamma, weibull_cv

FAMILIES = ("power_law", "log_normal", "weibull")
_SQRT2PI = math.sqrt(2.0 * math.pi)


# ---------------------------------------------------------------------------
# densities


def power_law_pdf(d, gamma_, x_min):
    if gamma_ <= 1:
        raise ValueError("non-normalizable power law (gamma <= 1)")
    if x_min <= 0:
        raise ValueError("x_min must be positive")
    d = np.asarray(d, dtype=np.float64)
    return (gamma_ - 1.0) / x_min * (d / x_min) ** (-gamma_)


def power_law_sf(d, gamma_, x_min):
    """Survival function ``P(X > d)``, extended below ``x_min`` by the same formula."""
    d = np.asarray(d, dtype=np.float64)
    return (d / x_min) ** (1.0 - gamma_)


def log_normal_pdf(d, mu, sigma):
    if sigma <= 0:
        raise ValueError("sigma must be positive")
    d = np.asarray(d, dtype=np.float64)
    if np.any(d <= 0):
        raise ValueError("log-normal density needs d > 0")
    z = (np.log(d) - mu) / sigma
    return np.exp(-0.5 * z * z) / (d * sigma * _SQRT2PI)


def log_normal_cdf(d, mu, sigma):
    d = np.asarray(d, dtype=np.float64)
    out = np.zeros(d.shape)
    pos = d > 0
    z = (np.log(d[pos]) - mu) / (sigma * math.sqrt(2.0))
    out[pos] = 0.5 * _erfc(-z)
    return out


_erfc = np.vectorize(math.erfc, otypes=[np.float64])


def weibull_pdf(d, k, lam):
    if k <= 0 or lam <= 0:
        raise ValueError("Weibull needs k > 0 and lambda > 0")
    d = np.asarray(d, dtype=np.float64)
    if np.any(d < 0):
        raise ValueError("Weibull density needs d >= 0")
    z = d / lam
    return (k / lam) * z ** (k - 1.0) * np.exp(-z ** k)


def weibull_cdf(d, k, lam):
    d = np.maximum(np.asarray(d, dtype=np.float64), 0.0)
    return -np.expm1(-(d / lam) ** k)


# ---------------------------------------------------------------------------
# parameter containers


@dataclass(frozen=True)
class ModelParams:
    """Parameters of one fitted family.

    ``p1, p2`` are (gamma, -) for power_law, (mu, sigma) for log_normal and
    (k, lambda) for weibull.
    """

    family: str
    p1: float
    p2: float = None
    x_min: float = None
    discrete: bool = True

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}")
        if self.family == "power_law":
            if not self.p1 > 1:
                raise ValueError("non-normalizable power law (gamma <= 1)")
            if self.x_min is None or self.x_min <= (0.5 if self.discrete else 0):
                raise ValueError("power law needs a positive x_min")
        elif self.family == "log_normal":
            if not self.p2 > 0:
                raise ValueError("sigma must be positive")
        elif not (self.p1 > 0 and self.p2 > 0):
            raise ValueError("Weibull needs k > 0 and lambda > 0")

    @classmethod
    def power_law(cls, gamma_, x_min, discrete=True):
        return cls("power_law", float(gamma_), None, float(x_min), discrete)

    @classmethod
    def log_normal(cls, mu, sigma):
        return cls("log_normal", float(mu), float(sigma))

    @classmethod
    def weibull(cls, k, lam):
        return cls("weibull", float(k), float(lam))

    @property
    def n_params(self):
        return 1 if self.family == "power_law" else 2

    @property
    def continuous_x_min(self):
        """Lower end of the continuous support that the power law is normalised on."""
        return self.x_min - 0.5 if self.discrete else self.x_min

    def pdf(self, d):
        if self.family == "power_law":
            return power_law_pdf(d, self.p1, self.continuous_x_min)
        if self.family == "log_normal":
            return log_normal_pdf(d, self.p1, self.p2)
        return weibull_pdf(d, self.p1, self.p2)

    def cdf(self, d):
        if self.family == "power_law":
            return 1.0 - power_law_sf(d, self.p1, self.continuous_x_min)
        if self.family == "log_normal":
            return log_normal_cdf(d, self.p1, self.p2)
        return weibull_cdf(d, self.p1, self.p2)

    def bin_mass(self, lo, hi):
        """Model probability of integer degrees in ``[lo, hi)``.

        For power laws this is relative to the fitted tail and is extrapolated
        below ``x_min``.
        """
        lo = np.asarray(lo, dtype=np.float64)
        hi = np.asarray(hi, dtype=np.float64)
        if self.family == "power_law":
            shift = 0.5 if self.discrete else 0.0
            xm = self.continuous_x_min
            return (power_law_sf(lo - shift, self.p1, xm)
                    - power_law_sf(hi - shift, self.p1, xm))
        return self.cdf(hi - 1.0) - self.cdf(lo - 1.0)

    def as_row(self):
        return {"family": self.family, "p1": self.p1, "p2": self.p2, "x_min": self.x_min}


@dataclass
class FitResult:
    params: ModelParams
    sse: float
    n: int
    iterations: int = 0
    converged: bool = True
    chi2: float = None
    message: str = ""
    sse_history: list = field(default_factory=list)

    @property
    def family(self):
        return self.params.family if self.params is not None else None


# ---------------------------------------------------------------------------
# power law


def _value_counts(sample):
    if isinstance(sample, AdaptiveHistogram):
        return sample.values.astype(np.float64), sample.value_counts.astype(np.float64), True
    data = np.asarray(getattr(sample, "degrees", sample), dtype=np.float64).ravel()
    if data.size == 0:
        raise InputError("empty sample")
    values, counts = np.unique(data, return_counts=True)
    discrete = bool(np.all(values == np.round(values)))
    return values, counts.astype(np.float64), discrete


def fit_power_law_mle(sample, x_min, discrete=None):
    """Closed-form MLE ``gamma = 1 + n / sum(ln(d / x'))`` over ``d >= x_min``.

    ``x' = x_min - 1/2`` for integer data, ``x_min`` otherwise; ``discrete=None``
    infers which from the data.
    """
    values, counts, is_int = _value_counts(sample)
    if discrete is None:
        discrete = is_int
    tail = values >= x_min
    n_tail = counts[tail].sum()
    if n_tail < 2:
        raise NumericalError(f"power-law tail needs >= 2 samples at or above x_min={x_min:g}")
    if np.all(values[tail] == x_min):
        raise NumericalError("degenerate tail: every tail sample equals x_min")
    ref = x_min - 0.5 if discrete else x_min
    if ref <= 0:
        raise InputError("x_min too small for the discrete correction")
    gamma_ = 1.0 + n_tail / np.sum(counts[tail] * np.log(values[tail] / ref))
    params = ModelParams.power_law(gamma_, x_min, discrete=discrete)
    sse = float("nan")
    if isinstance(sample, AdaptiveHistogram):
        sse = _power_law_sse(sample, params, n_tail)
    return FitResult(params=params, sse=sse, n=int(n_tail), message="closed form")


def _power_law_sse(hist, params, n_tail):
    inside = hist.lo >= params.x_min
    if not inside.any():
        return float("nan")
    scale = n_tail / hist.n_total
    observed = hist.density[inside]
    model = scale * params.bin_mass(hist.lo[inside], hist.hi[inside]) / hist.widths[inside]
    return float(np.sum((observed - model) ** 2))


@dataclass
class XminScan:
    x_min: float
    gamma: float
    ks: float
    candidates: np.ndarray
    distances: np.ndarray
    fallback: bool = False


def scan_x_min(sample, max_candidates=2000, min_distinct=10, use_numba=None):
    """Kolmogorov-Smirnov scan over observed values; smallest distance wins."""
    values, counts, discrete = _value_counts(sample)
    if values.size < min_distinct:
        warnings.warn(f"only {values.size} distinct values; using x_min = 1", stacklevel=2)
        return XminScan(1.0, float("nan"), float("nan"), values[:0], values[:0], fallback=True)
    if discrete and values[0] < 1:
        raise InputError("integer samples must be >= 1")
    cand = np.arange(values.size - 1)
    if cand.size > max_candidates:
        cand = np.unique(np.linspace(0, values.size - 2, max_candidates).round().astype(np.int64))
    dist, gam = kernels.ks_scan(values, counts, cand, discrete, use_numba=use_numba)
    best = int(np.argmin(dist))
    if not np.isfinite(dist[best]):
        raise NumericalError("no candidate x_min gives a valid power-law fit")
    return XminScan(float(values[cand[best]]), float(gam[best]), float(dist[best]),
                    values[cand], dist)


def select_x_min(sample, **kwargs):
    return scan_x_min(sample, **kwargs).x_min


# ---------------------------------------------------------------------------
# least-squares families


def _weibull_model(x, theta):
    return weibull_pdf(x, theta[0], theta[1])


def _weibull_jac(x, theta):
    k, lam = theta
    f = weibull_pdf(x, k, lam)
    z = x / lam
    lz = np.log(z)
    zk = z ** k
    dk = 1.0 / k + lz - zk * lz
    dl = (k / lam) * (zk - 1.0)
    return np.column_stack([f * dk, f * dl])


def _log_normal_model(x, theta):
    return log_normal_pdf(x, theta[0], theta[1])


def _log_normal_jac(x, theta):
    mu, sigma = theta
    f = log_normal_pdf(x, mu, sigma)
    u = np.log(x) - mu
    return np.column_stack([f * u / sigma ** 2, f * (u * u / sigma ** 3 - 1.0 / sigma)])


def _positive(theta):
    return bool(np.all(np.isfinite(theta)) and theta[0] > 0 and theta[1] > 0)


def _sigma_positive(theta):
    return bool(np.all(np.isfinite(theta)) and theta[1] > 0)


_K_GRID = np.geomspace(0.05, 50.0, 600)
_CV_GRID = np.array([weibull_cv(k) for k in _K_GRID])


def weibull_shape_from_cv(cv):
    """Invert the Weibull coefficient-of-variation curve by table lookup."""
    # CV falls monotonically with k; np.interp wants ascending abscissae
    return float(np.interp(cv, _CV_GRID[::-1], _K_GRID[::-1]))


def _moments(hist):
    v = hist.values.astype(np.float64)
    w = hist.value_counts / hist.n_total
    mean = float(np.sum(w * v))
    var = float(np.sum(w * (v - mean) ** 2))
    lv = np.log(v)
    lmean = float(np.sum(w * lv))
    lvar = float(np.sum(w * (lv - lmean) ** 2))
    return mean, math.sqrt(var), lmean, math.sqrt(lvar)


def weibull_initial_guess(hist):
    mean, std, _, _ = _moments(hist)
    k0 = weibull_shape_from_cv(std / mean) if mean > 0 else 1.0
    return k0, mean / gamma(1.0 + 1.0 / k0)


def log_normal_initial_guess(hist):
    _, _, lmean, lstd = _moments(hist)
    return lmean, max(lstd, 1e-3)


def fit_points(hist, weighted=False):
    """x, y and weights that the least-squares fitters minimise over."""
    if hist.n_bins < 3:
        raise InputError(f"insufficient bins ({hist.n_bins} < 3)")
    x, y, n_int = hist.edge_density()
    weights = None
    if weighted:
        sd = np.sqrt(np.maximum(n_int, 1.0)) / (hist.n_total * np.diff(hist.edges))
        weights = 1.0 / sd ** 2
    return x, y, weights


def _lsq_fit(hist, family, model, jac, init, in_domain, weighted, **lm_options):
    x, y, weights = fit_points(hist, weighted)
    res = lm_minimize(model, x, y, init, jac=jac, weights=weights, in_domain=in_domain,
                      **lm_options)
    if family == "weibull":
        params = ModelParams.weibull(*res.theta)
    else:
        params = ModelParams.log_normal(*res.theta)
    sse = float(np.sum((y - model(x, res.theta)) ** 2))
    return FitResult(params=params, sse=sse, n=hist.n_total, iterations=res.iterations,
                     converged=res.converged, message=res.message,
                     sse_history=res.sse_history)


def fit_weibull(hist, weighted=False, init=None, **lm_options):
    if init is None:
        init = weibull_initial_guess(hist)
    return _lsq_fit(hist, "weibull", _weibull_model, _weibull_jac, init, _positive,
                    weighted, **lm_options)


def fit_log_normal(hist, weighted=False, init=None, **lm_options):
    if init is None:
        init = log_normal_initial_guess(hist)
    return _lsq_fit(hist, "log_normal", _log_normal_model, _log_normal_jac, init,
                    _sigma_positive, weighted, **lm_options)


def fit_power_law(hist, x_min="auto", use_numba=None):
    """Power-law fit on a histogram's sample, scanning ``x_min`` when ``"auto"``."""
    if x_min == "auto":
        x_min = select_x_min(hist, use_numba=use_numba)
    return fit_power_law_mle(hist, float(x_min))


def fit_all(hist, x_min="auto", weighted=False, use_numba=None, models=FAMILIES):
    """Fit each family in ``models``; a family that cannot be fitted maps to ``None``."""
    fns = {"power_law": lambda: fit_power_law(hist, x_min, use_numba),
           "log_normal": lambda: fit_log_normal(hist, weighted),
           "weibull": lambda: fit_weibull(hist, weighted)}
    out = {}
    for family in FAMILIES:
        if family not in models:
            continue
        try:
            out[family] = fns[family]()
        except NumericalError:
            out[family] = None
    return out
