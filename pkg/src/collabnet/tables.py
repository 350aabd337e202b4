"""Tab-separated tables with round-trip exact numbers.

Floats are written with 17 significant digits, missing values as ``NA``.
Lines starting with ``#`` are comments.
"""

import math

import numpy as np

from .errors import InputError

NA = "NA"

FIT_COLUMNS = ("year", "cohort", "family", "p1", "p2", "x_min", "sse", "chi2", "n",
               "converged")
COMPARISON_COLUMNS = ("year", "N", "chi2_pl", "chi2_ln", "chi2_wb", "best",
                      "flattening_pct", "d_c")
HISTOGRAM_COLUMNS = ("d_lo", "d_hi", "count", "density")


def format_value(v):
    if v is None:
        return NA
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        v = float(v)
        if math.isnan(v):
            return NA
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        if v == int(v) and abs(v) < 1e15:
            return str(int(v))
        return format(v, ".17g")
    return str(v)


def parse_value(text):
    if text == NA:
        return None
    if text in ("true", "false"):
        return text == "true"
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError:
        return text


def write_table(path, columns, rows, comments=()):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for c in comments:
            fh.write(f"# {c}\n")
        fh.write("\t".join(columns) + "\n")
        for row in rows:
            if isinstance(row, dict):
                row = [row.get(c) for c in columns]
            fh.write("\t".join(format_value(v) for v in row) + "\n")


def read_table(path):
    """Rows of a table file as dicts of parsed values."""
    try:
        fh = open(path, encoding="utf-8")
    except OSError:
        raise InputError(f"missing table {path}") from None
    with fh:
        lines = [ln.rstrip("\n") for ln in fh if ln.strip() and not ln.startswith("#")]
    if not lines:
        raise InputError(f"table {path} has no header")
    columns = lines[0].split("\t")
    rows = []
    for ln in lines[1:]:
        cells = ln.split("\t")
        if len(cells) != len(columns):
            raise InputError(f"{path}: row has {len(cells)} cells, header has {len(columns)}")
        rows.append({c: parse_value(x) for c, x in zip(columns, cells)})
    return rows
