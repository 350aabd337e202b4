"""Sliding-window collaboration graph and yearly degree samples.

Each event with date ``t`` contributes its pairwise edges on the interval
``[t - window, t)``.  A snapshot at instant ``y`` sees every interval with
``active_from <= y < active_until``.
"""

from dataclasses import dataclass, field

import numpy as np

from . import _accel, kernels
from .errors import InputError
from .events import pairwise_edges

DEGREE_MODES = ("distinct", "multi")


@dataclass(frozen=True)
class EdgeInterval:
    endpoints: tuple
    active_from: float
    active_until: float


@dataclass
class DegreeSample:
    """Degrees (all >= 1) of the non-isolated nodes in one snapshot."""

    degrees: np.ndarray
    snapshot_year: float = None
    nodes: np.ndarray = None
    cohort_year: int = None
    total_edges: int = None
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.degrees = np.asarray(self.degrees, dtype=np.int64)
        if self.nodes is not None:
            self.nodes = np.asarray(self.nodes, dtype=object)
            if self.nodes.shape != self.degrees.shape:
                raise ValueError("nodes and degrees differ in length")
        if self.degrees.size and self.degrees.min() < 1:
            raise ValueError("degree samples hold only degrees >= 1")

    @property
    def node_count(self):
        return int(self.degrees.shape[0])

    def __len__(self):
        return self.node_count

    def as_dict(self):
        if self.nodes is None:
            raise ValueError("sample has no node labels")
        return dict(zip(self.nodes.tolist(), self.degrees.tolist()))


def active_interval(event, window_years=2.0):
    """One :class:`EdgeInterval` per pair of ``event``."""
    if window_years <= 0:
        raise InputError("window_years must be positive")

    lo = event.date - window_years
    return [EdgeInterval(pair, lo, event.date) for pair in pairwise_edges(event)]


_TRIU_CACHE = {}


def _triu(n):
    pair = _TRIU_CACHE.get(n)
    if pair is None:
        pair = np.triu_indices(n, k=1)
        if n <= 256:
            _TRIU_CACHE[n] = pair
    return pair


class TemporalGraph:
    """Immutable interval table built once from an event list.

    Node labels are sorted, so results do not depend on event order.
    """

    def __init__(self, events, window_years=2.0, degree_mode="distinct"):
        if window_years <= 0:
            raise InputError("window_years must be positive")
        if degree_mode not in DEGREE_MODES:
            raise InputError(f"degree_mode must be one of {DEGREE_MODES}")
        self.window_years = float(window_years)
        self.degree_mode = degree_mode
        labels = sorted({p for ev in events for p in ev.participants})
        self.nodes = np.array(labels, dtype=object)
        index = {name: i for i, name in enumerate(labels)}
        n_nodes = len(labels)

        first = np.full(n_nodes, np.inf)
        us, vs, dates = [], [], []
        for ev in events:
            idx = np.array(sorted(index[p] for p in ev.participants), dtype=np.int64)
            np.minimum.at(first, idx, ev.date)
            if idx.size < 2:
                continue
            a, b = _triu(idx.size)
            us.append(idx[a])
            vs.append(idx[b])
            dates.append(np.full(a.size, ev.date))
        self.first_date = first
        if us:
            u = np.concatenate(us)
            v = np.concatenate(vs)
            ends = np.concatenate(dates)
        else:
            u = v = np.zeros(0, dtype=np.int64)
            ends = np.zeros(0)
        # canonical order: by (end, u, v) so the table is independent of input order
        order = np.lexsort((v, u, ends))
        u, v, ends = u[order], v[order], ends[order]
        key = u * max(n_nodes, 1) + v
        pair_keys, pair_of = np.unique(key, return_inverse=True)
        self.pair_u = (pair_keys // max(n_nodes, 1)).astype(np.int64)
        self.pair_v = (pair_keys % max(n_nodes, 1)).astype(np.int64)
        self.pair_of = pair_of.astype(np.int64).ravel()
        self.ends = ends.astype(np.float64)
        self.starts = self.ends - self.window_years
        self.n_nodes = n_nodes

    @property
    def n_intervals(self):
        return int(self.ends.shape[0])

    @property
    def n_pairs(self):
        return int(self.pair_u.shape[0])

    def date_range(self):
        if self.n_intervals == 0:
            finite = self.first_date[np.isfinite(self.first_date)]
            if finite.size == 0:
                return None
            return float(finite.min()), float(finite.max())
        return float(self.starts.min()), float(self.ends.max())

    def _sample(self, degree, year, total, mask=None, cohort_year=None):
        keep = degree > 0
        if mask is not None:
            keep &= mask
        return DegreeSample(degree[keep], snapshot_year=year, nodes=self.nodes[keep],
                            cohort_year=cohort_year, total_edges=total)

    def snapshot(self, year):
        """Degree sample at instant ``year`` computed directly with numpy."""
        degree, total = kernels.snapshot_degrees_numpy(
            float(year), self.starts, self.ends, self.pair_of, self.pair_u, self.pair_v,
            self.n_nodes, self.degree_mode == "multi")
        return self._sample(degree, year, total)

    def snapshots(self, years, use_numba=None, cohort_year=None):
        """Degree samples for many instants via one sorted sweep.

        ``use_numba=False`` with numba disabled falls back to independent
        per-year numpy evaluation.
        """
        years = list(years)
        mask = None
        if cohort_year is not None:
            mask = self.cohort_mask(cohort_year)
        if use_numba is None:
            use_numba = _accel.USE_NUMBA
        out = {}
        if not use_numba:
            for y in years:
                degree, total = kernels.snapshot_degrees_numpy(
                    float(y), self.starts, self.ends, self.pair_of, self.pair_u,
                    self.pair_v, self.n_nodes, self.degree_mode == "multi")
                out[y] = self._sample(degree, y, total, mask, cohort_year)
            return [out[y] for y in years]
        start_order = np.argsort(self.starts, kind="stable")
        end_order = np.argsort(self.ends, kind="stable")
        state = np.zeros(3, dtype=np.int64)
        pair_count = np.zeros(self.n_pairs, dtype=np.int64)
        degree = np.zeros(self.n_nodes, dtype=np.int64)
        multi = self.degree_mode == "multi"
        for y in sorted(set(years)):
            kernels.sweep_advance(float(y), state, start_order, end_order, self.starts,
                                  self.ends, self.pair_of, self.pair_u, self.pair_v,
                                  pair_count, degree, multi, use_numba=True)
            out[y] = self._sample(degree.copy(), y, int(state[2]), mask, cohort_year)
        return [out[y] for y in years]

    def node_index(self, node):
        i = np.searchsorted(self.nodes, node)
        if i >= self.n_nodes or self.nodes[i] != node:
            raise KeyError(f"unknown node {node!r}")
        return int(i)

    def cohort_of(self, node):
        return int(self.first_date[self.node_index(node)] // 1)

    def cohort_mask(self, cohort_year):
        return np.floor(self.first_date) == cohort_year

    def cohort_samples(self, cohort_year, snapshot_years, use_numba=None):
        return self.snapshots(snapshot_years, use_numba=use_numba, cohort_year=cohort_year)


def degree_snapshot(events, year, window_years=2.0, degree_mode="distinct"):
    return TemporalGraph(events, window_years, degree_mode).snapshot(year)


def cohort_of(node, events):
    """Integer year of the earliest event featuring ``node``."""
    dates = [ev.date for ev in events if node in ev.participants]
    if not dates:
        raise KeyError(f"unknown node {node!r}")
    return int(min(dates) // 1)


def cohort_degree_samples(events, cohort_year, snapshot_years, window_years=2.0,
                          degree_mode="distinct", use_numba=None):
    graph = TemporalGraph(events, window_years, degree_mode)
    return graph.cohort_samples(cohort_year, snapshot_years, use_numba=use_numba)
