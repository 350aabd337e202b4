"""Time the numba and numpy routes of each hot kernel on the same inputs.

    python3 benchmarks/bench_kernels.py [--repeat 3] [--scale 1.0]

The first numba call (compilation) is excluded from the timings.
"""

import argparse
import json
import time

import numpy as np

from collabnet import _accel, kernels
from collabnet.events import parse_events
from collabnet.growth import GrowthConfig, weight_table
from collabnet.temporal import TemporalGraph
from collabnet.toydata import generate_toy_events


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def cases(scale):
    n = int(100_000 * scale)
    cfg = GrowthConfig(n_nodes=n, m=2, gamma_c=0.05)
    w = weight_table(cfg)
    u = np.random.Generator(np.random.PCG64(1)).random(2 * (n - 3))
    yield "grow_network", f"n={n}, m=2", lambda nb: kernels.grow_network(n, 2, w, u,
                                                                          use_numba=nb)

    vals = np.random.Generator(np.random.PCG64(2)).pareto(1.5, int(20_000 * scale)) + 1
    v, c = np.unique(vals, return_counts=True)
    cand = np.linspace(0, v.size - 2, min(v.size - 1, 2000)).astype(np.int64)
    yield "ks_scan", f"{v.size} values, {cand.size} candidates", \
        lambda nb: kernels.ks_scan(v, c, cand, False, use_numba=nb)

    records = generate_toy_events(n_events=int(50_000 * scale), years=30)
    events, _ = parse_events(json.dumps(r) for r in records)
    graph = TemporalGraph(events, 2.0)
    years = np.arange(1990, 2020, 0.25)
    yield "interval sweep", f"{graph.n_intervals} intervals, {years.size} snapshots", \
        lambda nb: graph.snapshots(years, use_numba=nb)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--scale", type=float, default=1.0)
    args = ap.parse_args()
    if not _accel.HAVE_NUMBA:
        print("numba is not installed; only the numpy route can be timed")
    print(f"{'kernel':<16} {'size':<34} {'numpy s':>9} {'numba s':>9} {'speedup':>8}")
    for name, size, fn in cases(args.scale):
        t_np = best_of(lambda: fn(False), args.repeat)
        if _accel.HAVE_NUMBA:
            fn(True)
            t_nb = best_of(lambda: fn(True), args.repeat)
            print(f"{name:<16} {size:<34} {t_np:9.4f} {t_nb:9.4f} {t_np / t_nb:7.1f}x")
        else:
            print(f"{name:<16} {size:<34} {t_np:9.4f} {'-':>9} {'-':>8}")


if __name__ == "__main__":
    main()
