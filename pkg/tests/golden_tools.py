"""Frozen reference outputs for the bundled toy corpus.

Run ``python3 tests/golden_tools.py`` to regenerate after an intended change.
"""

import hashlib
import json
import os
import re
import sys
import tempfile

GOLDEN_DIR = os.path.join(os.path.dirname(__file__), "golden")
DIGESTS = os.path.join(GOLDEN_DIR, "toy_digests.json")
POLYLINES = os.path.join(GOLDEN_DIR, "toy_polylines.json")
TOY_ARGS = ["--years", "1990..2009", "--bin-target", "50"]
RENDERS = ("distribution_1995.svg", "distribution_2009.svg", "parameters.svg", "chi2.svg")

_POLY = re.compile(r'<polyline class="series" data-series="([^"]*)"[^>]*points="([^"]*)"')


def run_toy(out_dir, extra=()):
    from collabnet.cli import main
    from collabnet.toydata import toy_corpus_path
    return main(["all", "--events", toy_corpus_path(), "--out", str(out_dir), *TOY_ARGS,
                 *extra])


def table_digests(out_dir):
    out = {}
    for root, _, files in os.walk(out_dir):
        for f in files:
            if f.endswith(".tsv"):
                path = os.path.join(root, f)
                with open(path, "rb") as fh:
                    out[os.path.relpath(path, out_dir)] = hashlib.sha256(fh.read()).hexdigest()
    return dict(sorted(out.items()))


def polylines(svg_path):
    with open(svg_path, encoding="utf-8") as fh:
        text = fh.read()
    return [{"series": name,
             "points": [[float(a) for a in p.split(",")] for p in pts.split()]}
            for name, pts in _POLY.findall(text)]


def regenerate():
    with tempfile.TemporaryDirectory() as tmp:
        assert run_toy(tmp) == 0
        with open(DIGESTS, "w") as fh:
            json.dump(table_digests(tmp), fh, indent=1, sort_keys=True)
        with open(POLYLINES, "w") as fh:
            json.dump({r: polylines(os.path.join(tmp, "plots", r)) for r in RENDERS}, fh)


if __name__ == "__main__":
    sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))
    regenerate()
