"""Static SVG plots written directly as polylines.

Colours: power law red, log-normal green, Weibull black.  Every data series is a
``<polyline class="series" data-series=...>`` so renders can be compared
structurally.
"""

import math
import os
from xml.sax.saxutils import escape

import numpy as np

from . import tables
from .errors import InputError
from .fitters import FAMILIES, ModelParams
from .pipeline import COMPARISON_TABLE, FITS_TABLE, HIST_DIR, histogram_name

COLORS = {"power_law": "red", "log_normal": "green", "weibull": "black", "data": "#1f4e9a"}
LABELS = {"power_law": "power law", "log_normal": "log-normal", "weibull": "Weibull"}
PLOT_DIR = "plots"
CURVE_POINTS = 200

WIDTH, HEIGHT = 640, 440
MARGIN = (70, 20, 30, 50)  # left, right, top, bottom


def _fmt(v):
    return f"{v:.2f}".rstrip("0").rstrip(".")


def _tick_label(v):
    if v == 0:
        return "0"
    if abs(v) >= 1e4 or abs(v) < 1e-2:
        return f"{v:.0e}"
    return f"{v:.4g}"


class Axes:
    """Maps data to pixels inside a rectangle; ``log`` axes take log10 first."""

    def __init__(self, x_range, y_range, box, logx=False, logy=False):
        self.logx, self.logy = logx, logy
        self.box = box
        self.x0, self.x1 = self._span(x_range, logx)
        self.y0, self.y1 = self._span(y_range, logy)

    @staticmethod
    def _span(r, log):
        lo, hi = (math.log10(r[0]), math.log10(r[1])) if log else (float(r[0]), float(r[1]))
        if hi <= lo:
            pad = 0.5 if not log else 0.25
            lo, hi = lo - pad, hi + pad
        return lo, hi

    def px(self, x, y):
        left, top, w, h = self.box
        x = np.log10(x) if self.logx else np.asarray(x, dtype=np.float64)
        y = np.log10(y) if self.logy else np.asarray(y, dtype=np.float64)
        return (left + (x - self.x0) / (self.x1 - self.x0) * w,
                top + h - (y - self.y0) / (self.y1 - self.y0) * h)

    def domain(self):
        """(x_lo, x_hi, y_lo, y_hi) in data units."""
        xs = (10.0 ** self.x0, 10.0 ** self.x1) if self.logx else (self.x0, self.x1)
        ys = (10.0 ** self.y0, 10.0 ** self.y1) if self.logy else (self.y0, self.y1)
        return xs + ys

    def ticks(self, axis):
        lo, hi = (self.x0, self.x1) if axis == "x" else (self.y0, self.y1)
        log = self.logx if axis == "x" else self.logy
        if log:
            return [10.0 ** e for e in range(math.ceil(lo - 1e-9), math.floor(hi + 1e-9) + 1)]
        step = _nice_step((hi - lo) / 5)
        start = math.ceil(lo / step) * step
        out = []
        v = start
        while v <= hi + 1e-9 * step:
            out.append(round(v, 10))
            v += step
        return out


def _nice_step(raw):
    if raw <= 0:
        return 1.0
    e = math.floor(math.log10(raw))
    for m in (1, 2, 5, 10):
        if m * 10 ** e >= raw:
            return m * 10.0 ** e
    return 10.0 ** (e + 1)


class SvgCanvas:
    def __init__(self, width=WIDTH, height=HEIGHT, title=""):
        self.width, self.height = width, height
        self.parts = []
        if title:
            self.text(width / 2, 18, title, anchor="middle", size=14)

    def text(self, x, y, s, anchor="start", size=11, rotate=None):
        tr = f' transform="rotate({rotate} {_fmt(x)} {_fmt(y)})"' if rotate else ""
        self.parts.append(f'<text x="{_fmt(x)}" y="{_fmt(y)}" font-size="{size}" '
                          f'text-anchor="{anchor}"{tr}>{escape(str(s))}</text>')

    def line(self, x0, y0, x1, y1, stroke="#999", width=1):
        self.parts.append(f'<line x1="{_fmt(x0)}" y1="{_fmt(y0)}" x2="{_fmt(x1)}" '
                          f'y2="{_fmt(y1)}" stroke="{stroke}" stroke-width="{width}"/>')

    def polyline(self, xs, ys, series, stroke, dash=None, width=1.5):
        pts = " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in zip(xs, ys))
        d = f' stroke-dasharray="{dash}"' if dash else ""
        self.parts.append(f'<polyline class="series" data-series="{escape(series)}" '
                          f'fill="none" stroke="{stroke}" stroke-width="{width}"{d} '
                          f'points="{pts}"/>')

    def markers(self, xs, ys, fill, r=2.5):
        for x, y in zip(xs, ys):
            self.parts.append(f'<circle cx="{_fmt(x)}" cy="{_fmt(y)}" r="{r}" fill="{fill}"/>')

    def frame(self, ax, xlabel="", ylabel=""):
        left, top, w, h = ax.box
        # data-space extent of the axes, kept for structural checks
        dom = " ".join(format(v, ".17g") for v in ax.domain())
        self.parts.append(f'<rect class="axes" x="{left}" y="{top}" width="{w}" height="{h}" '
                          f'data-domain="{dom}" fill="none" stroke="#333"/>')
        for t in ax.ticks("x"):
            x, _ = ax.px(t, 10.0 ** ax.y0 if ax.logy else ax.y0)
            self.line(x, top + h, x, top + h + 4, stroke="#333")
            self.text(x, top + h + 16, _tick_label(t), anchor="middle", size=10)
        for t in ax.ticks("y"):
            _, y = ax.px(10.0 ** ax.x0 if ax.logx else ax.x0, t)
            self.line(left - 4, y, left, y, stroke="#333")
            self.text(left - 6, y + 3, _tick_label(t), anchor="end", size=10)
        if xlabel:
            self.text(left + w / 2, top + h + 34, xlabel, anchor="middle")
        if ylabel:
            self.text(left - 52, top + h / 2, ylabel, anchor="middle", rotate=-90)

    def legend(self, ax, entries):
        left, top, w, _ = ax.box
        y = top + 14
        for label, color in entries:
            self.line(left + w - 110, y - 4, left + w - 90, y - 4, stroke=color, width=2)
            self.text(left + w - 85, y, label, size=10)
            y += 14

    def save(self, path):
        body = "\n".join(self.parts)
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(f'<?xml version="1.0" encoding="UTF-8"?>\n'
                     f'<svg xmlns="http://www.w3.org/2000/svg" width="{self.width}" '
                     f'height="{self.height}" viewBox="0 0 {self.width} {self.height}">\n'
                     f'<rect width="100%" height="100%" fill="white"/>\n{body}\n</svg>\n')
        return path


def _plot_box(top_offset=0, height=HEIGHT):
    left, right, top, bottom = MARGIN
    return (left, top + top_offset, WIDTH - left - right, height - top - bottom)


def params_from_row(row):
    fam = row["family"]
    if row.get("p1") is None:
        return None
    if fam == "power_law":
        return ModelParams.power_law(row["p1"], row["x_min"])
    if fam == "log_normal":
        return ModelParams.log_normal(row["p1"], row["p2"])
    return ModelParams.weibull(row["p1"], row["p2"])


def model_density(params, x, n_fitted, n_total):
    """Curve drawn against the binned density; power laws carry their tail share."""
    y = params.pdf(x)
    if params.family == "power_law":
        y = y * (n_fitted / n_total)
    return y


def distribution_plot(hist_rows, fit_rows, year, path):
    lo = np.array([r["d_lo"] for r in hist_rows], dtype=np.float64)
    hi = np.array([r["d_hi"] for r in hist_rows], dtype=np.float64)
    dens = np.array([r["density"] for r in hist_rows], dtype=np.float64)
    n_total = int(sum(r["count"] for r in hist_rows))
    centers = np.sqrt(lo * hi)
    keep = dens > 0
    d_min, d_max = float(lo[0]), float(hi[-1] - 1)
    x_lo = min(d_min, float(centers[keep].min()))
    x_hi = max(d_max, float(centers[keep].max()))
    y_lo, y_hi = float(dens[keep].min()), float(dens[keep].max())
    y_lo, y_hi = y_lo / 3, y_hi * 3
    ax = Axes((x_lo, x_hi), (y_lo, y_hi), _plot_box(), logx=True, logy=True)
    svg = SvgCanvas(title=f"degree distribution, {year}")
    svg.frame(ax, "degree d", "P(d)")
    xs, ys = ax.px(centers[keep], dens[keep])
    svg.polyline(xs, ys, "data", COLORS["data"], width=1.0)
    svg.markers(xs, ys, COLORS["data"])
    grid = np.geomspace(max(d_min, 1e-9), max(d_max, d_min * 1.0001), CURVE_POINTS)
    entries = [("binned data", COLORS["data"])]
    for fam in FAMILIES:
        row = fit_rows.get(fam)
        params = params_from_row(row) if row else None
        if params is None:
            continue
        y = model_density(params, grid, row["n"], n_total)
        ok = np.isfinite(y) & (y > 0) & (y >= y_lo) & (y <= y_hi)
        if ok.sum() < 2:
            continue
        cx, cy = ax.px(grid[ok], y[ok])
        svg.polyline(cx, cy, fam, COLORS[fam])
        entries.append((LABELS[fam], COLORS[fam]))
    svg.legend(ax, entries)
    return svg.save(path)


def _year_axis(years):
    return (min(years) - 0.5, max(years) + 0.5) if len(set(years)) == 1 else (min(years), max(years))


def _series(svg, ax, years, values, name, color, dash=None):
    pts = [(y, v) for y, v in zip(years, values)
           if v is not None and math.isfinite(v) and (not ax.logy or v > 0)]
    if not pts:
        return False
    xs, ys = ax.px(np.array([p[0] for p in pts], float), np.array([p[1] for p in pts], float))
    svg.polyline(xs, ys, name, color, dash=dash)
    svg.markers(xs, ys, color)
    return True


PARAM_PANELS = (("power_law", (("p1", "gamma", None),)),
                ("log_normal", (("p1", "mu", None), ("p2", "sigma", "5,3"))),
                ("weibull", (("p1", "k", None), ("p2", "lambda", "5,3"))))


def parameter_plot(fits, path):
    """One panel per family with its parameters against snapshot year."""
    panel_h = 200
    svg = SvgCanvas(height=panel_h * 3 + 20, title="fitted parameters by year")
    for i, (fam, params) in enumerate(PARAM_PANELS):
        rows = sorted((r for r in fits if r["family"] == fam and r["p1"] is not None),
                      key=lambda r: r["year"])
        years = [r["year"] for r in rows] or [0]
        vals = [r[key] for r in rows for key, _, _ in params if r[key] is not None]
        y_rng = (min(vals), max(vals)) if vals else (0, 1)
        pad = 0.05 * (y_rng[1] - y_rng[0]) or 0.5
        left, right, top, bottom = MARGIN
        box = (left, top + i * panel_h + 10, WIDTH - left - right, panel_h - 60)
        ax = Axes(_year_axis(years), (y_rng[0] - pad, y_rng[1] + pad), box)
        svg.frame(ax, "year" if i == 2 else "", LABELS[fam])
        entries = []
        for key, label, dash in params:
            if _series(svg, ax, [r["year"] for r in rows], [r[key] for r in rows],
                       f"{fam}:{label}", COLORS[fam], dash):
                entries.append((label, COLORS[fam]))
        svg.legend(ax, entries)
    return svg.save(path)


def chi2_plot(comparison, path):
    years = [r["year"] for r in comparison] or [0]
    cols = {"power_law": "chi2_pl", "log_normal": "chi2_ln", "weibull": "chi2_wb"}
    vals = [r[c] for r in comparison for c in cols.values()
            if r[c] is not None and r[c] > 0]
    y_rng = (min(vals) / 2, max(vals) * 2) if vals else (0.1, 10)
    ax = Axes(_year_axis(years), y_rng, _plot_box(), logy=True)
    svg = SvgCanvas(title="chi-squared by year")
    svg.frame(ax, "year", "chi-squared")
    entries = []
    for fam, col in cols.items():
        if _series(svg, ax, years, [r[col] for r in comparison], fam, COLORS[fam]):
            entries.append((LABELS[fam], COLORS[fam]))
    svg.legend(ax, entries)
    return svg.save(path)


def render_plots(tables_dir, out_dir):
    """Render every plot from the tables in ``tables_dir``; return the written paths."""
    fits = tables.read_table(os.path.join(tables_dir, FITS_TABLE))
    comparison = tables.read_table(os.path.join(tables_dir, COMPARISON_TABLE))
    plot_dir = os.path.join(out_dir, PLOT_DIR)
    os.makedirs(plot_dir, exist_ok=True)
    written = []
    for rec in comparison:
        year = rec["year"]
        hpath = os.path.join(tables_dir, HIST_DIR, histogram_name(year))
        if not os.path.exists(hpath):
            raise InputError(f"missing table {hpath}")
        hist_rows = tables.read_table(hpath)
        by_family = {r["family"]: r for r in fits if r["year"] == year}
        written.append(distribution_plot(hist_rows, by_family, year,
                                         os.path.join(plot_dir, f"distribution_{year}.svg")))
    written.append(parameter_plot(fits, os.path.join(plot_dir, "parameters.svg")))
    written.append(chi2_plot(comparison, os.path.join(plot_dir, "chi2.svg")))
    return written
