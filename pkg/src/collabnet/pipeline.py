"""End-to-end run: events -> yearly snapshots -> histograms -> fits -> comparison."""

import hashlib
import json
import os
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from datetime import datetime, timezone

from . import __version__
from .binning import DEFAULT_TARGET, build_adaptive_bins
from .compare import DEFAULT_D_LOW, DEFAULT_TOL_PCT, compare_fits
from .errors import CollabnetError, InputError
from .events import read_events
from .fitters import FAMILIES, fit_all
from .growth import RNG_ALGORITHM
from .tables import (COMPARISON_COLUMNS, FIT_COLUMNS, HISTOGRAM_COLUMNS, write_table)
from .temporal import TemporalGraph

MANIFEST = "manifest.json"
FITS_TABLE = "fits.tsv"
COMPARISON_TABLE = "comparison.tsv"
HIST_DIR = "histograms"
COHORT_ALL = "all"


class StageError(CollabnetError):
    """A module error annotated with the snapshot year and pipeline stage."""

    def __init__(self, year, stage, cause):
        self.year = year
        self.stage = stage
        self.cause = cause
        super().__init__(f"year {year}, stage {stage}: {cause}")


def sha256_file(path):
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for block in iter(lambda: fh.read(1 << 20), b""):
            h.update(block)
    return h.hexdigest()


def histogram_name(year, cohort=COHORT_ALL):
    return f"hist_{year}_{cohort}.tsv"


@dataclass
class YearResult:
    year: object
    hist: object = None
    fits: dict = None
    record: object = None
    skipped: str = None


@dataclass
class PipelineResult:
    out_dir: str
    years: list
    results: list = field(default_factory=list)
    warnings: list = field(default_factory=list)
    manifest: dict = None

    @property
    def records(self):
        return [r.record for r in self.results if r.record is not None]

    @property
    def skipped(self):
        return {r.year: r.skipped for r in self.results if r.skipped}


def analyse_sample(sample, year=None, bin_target=DEFAULT_TARGET, models=FAMILIES,
                   x_min="auto", weighted=False, d_low=DEFAULT_D_LOW,
                   tol_pct=DEFAULT_TOL_PCT, use_numba=None):
    """Histogram, fits and comparison record for one degree sample."""
    res = YearResult(year)
    if sample.node_count == 0:
        res.skipped = "no active nodes"
        return res
    stage = "binning"
    try:
        res.hist = build_adaptive_bins(sample, bin_target)
        if res.hist.n_bins < 3:
            res.skipped = f"insufficient bins ({res.hist.n_bins} < 3)"
            return res
        stage = "fit"
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            res.fits = fit_all(res.hist, x_min, weighted, use_numba, models)
        stage = "compare"
        res.record = compare_fits(res.hist, res.fits, year, d_low, tol_pct)
    except CollabnetError as exc:
        raise StageError(year, stage, exc) from exc
    return res


def fit_rows(res, cohort=COHORT_ALL):
    for fam in FAMILIES:
        fit = res.fits.get(fam) if res.fits else None
        if fit is None:
            yield (res.year, cohort, fam, None, None, None, None, None, None, False)
            continue
        p = fit.params
        yield (res.year, cohort, fam, p.p1, p.p2, p.x_min, fit.sse, fit.chi2, fit.n,
               fit.converged)


def comparison_row(rec):
    return (rec.snapshot_year, rec.N, rec.chi2.get("power_law"), rec.chi2.get("log_normal"),
            rec.chi2.get("weibull"), rec.best_family, rec.flattening_excess_pct, rec.cutoff)


def write_results(results, out_dir, comparison=True):
    """Write histograms, the fits table and (optionally) the comparison table.

    Returns the written paths.
    """
    os.makedirs(os.path.join(out_dir, HIST_DIR), exist_ok=True)
    written = []
    for res in results:
        if res.hist is None or res.record is None:
            continue
        path = os.path.join(out_dir, HIST_DIR, histogram_name(res.year))
        write_table(path, HISTOGRAM_COLUMNS, res.hist.rows())
        written.append(path)
    path = os.path.join(out_dir, FITS_TABLE)
    write_table(path, FIT_COLUMNS,
                [row for res in results if res.record is not None for row in fit_rows(res)])
    written.append(path)
    if not comparison:
        return written
    path = os.path.join(out_dir, COMPARISON_TABLE)
    write_table(path, COMPARISON_COLUMNS,
                [comparison_row(res.record) for res in results if res.record is not None])
    written.append(path)
    return written


def timestamp():
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


def write_manifest(out_dir, config, inputs, outputs, started, skipped=None,
                   rng=RNG_ALGORITHM):
    """Single manifest per output directory; digests make reruns comparable."""
    manifest = {
        "tool": "collabnet",
        "version": __version__,
        "rng_algorithm": rng,
        "config": config,
        "inputs": [{"path": str(p), "sha256": sha256_file(p), "bytes": os.path.getsize(p)}
                   for p in inputs],
        "outputs": {os.path.relpath(p, out_dir): sha256_file(p) for p in sorted(outputs)},
        "skipped": {str(k): v for k, v in (skipped or {}).items()},
        "started": started,
        "finished": timestamp(),
    }
    with open(os.path.join(out_dir, MANIFEST), "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return manifest


def run_pipeline(events_path, years, window=2.0, bin_target=DEFAULT_TARGET, models=FAMILIES,
                 out_dir="out", degree_mode="distinct", x_min="auto", weighted=False,
                 d_low=DEFAULT_D_LOW, tol_pct=DEFAULT_TOL_PCT, jobs=1, use_numba=None,
                 config=None, plots=False, comparison=True):
    """Run every stage for each snapshot year and write all artifacts to ``out_dir``.

    Raises :class:`InputError` for unusable input and :class:`StageError` when a
    stage fails for a particular year.
    """
    started = timestamp()
    years = list(years)
    if not years:
        raise InputError("years range is empty")
    unknown = set(models) - set(FAMILIES)
    if unknown:
        raise InputError(f"unknown model families: {sorted(unknown)}")
    paths = [events_path] if isinstance(events_path, (str, os.PathLike)) else list(events_path)
    events, errors = read_events(paths)
    if not events:
        raise InputError("no events")
    result = PipelineResult(str(out_dir), years)
    if errors:
        result.warnings.append(f"{len(errors)} malformed records skipped")

    graph = TemporalGraph(events, window, degree_mode)
    lo, hi = graph.date_range()
    outside = [y for y in years if not (lo <= y < hi)]
    if outside:
        result.warnings.append(f"{len(outside)} snapshot years outside the event range "
                               f"[{lo:g}, {hi:g})")
    try:
        samples = graph.snapshots(years, use_numba=use_numba)
    except CollabnetError as exc:
        raise StageError(years[0], "snapshot", exc) from exc

    def work(pair):
        year, sample = pair
        return analyse_sample(sample, year, bin_target, models, x_min, weighted, d_low,
                              tol_pct, use_numba)

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            result.results = list(pool.map(work, zip(years, samples)))
    else:
        result.results = [work(p) for p in zip(years, samples)]
    for r in result.results:
        if r.skipped and r.year not in outside:
            result.warnings.append(f"year {r.year}: skipped, {r.skipped}")

    os.makedirs(out_dir, exist_ok=True)
    outputs = write_results(result.results, out_dir, comparison or plots)
    if plots:
        from .plotting import render_plots
        outputs += render_plots(out_dir, out_dir)
    cfg = {"window_years": window, "bin_target": bin_target, "models": list(models),
           "degree_mode": degree_mode, "x_min": x_min, "weighted": weighted,
           "d_low": d_low, "tol_pct": tol_pct, "years": years}
    cfg.update(config or {})
    result.manifest = write_manifest(out_dir, cfg, paths, outputs, started, result.skipped)
    return result
