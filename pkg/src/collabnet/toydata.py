"""Deterministic synthetic corpus used for examples and golden tests.

Teams are drawn with preferential reuse of earlier participants, which gives
a moderately heavy-tailed degree distribution over 1990-2010.
"""

import gzip
import io
import json
import sys
from importlib import resources

import numpy as np

TOY_EVENTS = "toy_events.jsonl.gz"


def generate_toy_events(n_events=10_000, seed=2024, start=1990, years=20, p_new=0.3):
    rng = np.random.Generator(np.random.PCG64(seed))
    days = np.sort(rng.integers(0, years * 365, n_events))
    appearances = []  # one entry per past participation: picking uniformly is preferential
    n_people = 0
    records = []
    for i, day in enumerate(days):
        size = 1 + min(int(rng.poisson(2.0)), 11)
        team = set()
        while len(team) < size:
            if not appearances or rng.random() < p_new:
                team.add(f"p{n_people:05d}")
                n_people += 1
            else:
                team.add(appearances[int(rng.integers(len(appearances)))])
        team = sorted(team)
        appearances.extend(team)
        year, doy = start + int(day) // 365, int(day) % 365
        month, dom = _month_day(doy)
        records.append({"id": f"toy-{i:05d}", "date": f"{year:04d}-{month:02d}-{dom:02d}",
                        "participants": team})
    return records


_MONTHS = (31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31)


def _month_day(doy):
    for m, n in enumerate(_MONTHS, start=1):
        if doy < n:
            return m, doy + 1
        doy -= n
    return 12, 31


def write_toy_events(path, **kwargs):
    """Write the corpus as JSONL; ``.gz`` paths get a gzip stream with a zero mtime."""
    text = "".join(json.dumps(r, separators=(",", ":")) + "\n"
                   for r in generate_toy_events(**kwargs)).encode("utf-8")
    with open(path, "wb") as raw:
        if str(path).endswith(".gz"):
            with gzip.GzipFile(filename="", mode="wb", fileobj=raw, mtime=0) as gz:
                gz.write(text)
        else:
            raw.write(text)
    return path


def toy_corpus_path():
    """Path of the bundled 10^4-event corpus."""
    return str(resources.files("collabnet") / "data" / TOY_EVENTS)


def load_toy_records():
    with gzip.open(toy_corpus_path(), "rb") as fh:
        return [json.loads(line) for line in io.TextIOWrapper(fh, encoding="utf-8")]


if __name__ == "__main__":
    write_toy_events(sys.argv[1] if len(sys.argv) > 1 else TOY_EVENTS)
