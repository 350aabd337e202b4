"""Command line interface.

Exit codes: 0 success, 2 input error, 3 numerical failure.
"""

import argparse
import logging
import os
import sys

import numpy as np

from . import __version__, tables
from .binning import DEFAULT_TARGET
from .errors import CollabnetError, InputError, NumericalError
from .events import event_to_json, read_events
from .fitters import FAMILIES
from .growth import RNG_ALGORITHM, GrowthConfig, simulate_growth
from .pipeline import (StageError, analyse_sample, run_pipeline, timestamp,
                       write_manifest, write_results)
from .temporal import DEGREE_MODES, DegreeSample, TemporalGraph

log = logging.getLogger("collabnet")

EXIT_OK, EXIT_INPUT, EXIT_NUMERICAL = 0, 2, 3


def parse_years(text):
    """``1990..2000``, ``1990..2000:5``, ``1990,1995`` or comma-joined mixtures."""
    years = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        try:
            if ".." in part:
                span, _, step = part.partition(":")
                a, b = span.split("..")
                step = int(step) if step else 1
                if step < 1:
                    raise ValueError
                years.extend(range(int(a), int(b) + 1, step))
            else:
                years.append(int(part))
        except ValueError:
            raise argparse.ArgumentTypeError(f"bad --years value {part!r}") from None
    if not years:
        raise argparse.ArgumentTypeError("years range is empty")
    return sorted(set(years))


def parse_xmin(text):
    if text == "auto":
        return "auto"
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError("--xmin takes 'auto' or a positive integer") from None
    if v < 1:
        raise argparse.ArgumentTypeError("--xmin must be >= 1")
    return v


def parse_models(text):
    models = tuple(m.strip() for m in text.split(",") if m.strip())
    bad = [m for m in models if m not in FAMILIES]
    if bad or not models:
        raise argparse.ArgumentTypeError(f"models must be drawn from {', '.join(FAMILIES)}")
    return models


def _positive_int(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def _common():
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--window-years", type=float, default=2.0)
    p.add_argument("--bin-target", type=_positive_int, default=DEFAULT_TARGET)
    p.add_argument("--degree-mode", choices=DEGREE_MODES, default="distinct")
    p.add_argument("--xmin", type=parse_xmin, default="auto")
    p.add_argument("--weighted", action="store_true",
                   help="weight least-squares residuals by inverse bin variance")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="output file or directory")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def _events_args(p, years=True):
    p.add_argument("--events", nargs="+", required=True, help="JSONL event files (.gz ok)")
    if years:
        p.add_argument("--years", type=parse_years, required=True,
                       help="e.g. 1800..2020, 1990..2010:5 or 1990,2000")


def build_parser():
    parser = argparse.ArgumentParser(prog="collabnet", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"collabnet {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    common = _common()

    p = sub.add_parser("ingest", parents=[common], help="validate and normalise event files")
    _events_args(p, years=False)

    p = sub.add_parser("snapshots", parents=[common], help="per-year degree snapshots")
    _events_args(p)

    for name, helptext in (("fit", "histograms and fits per snapshot year"),
                           ("compare", "fits plus model comparison"),
                           ("all", "full pipeline with plots")):
        p = sub.add_parser(name, parents=[common], help=helptext)
        src = p.add_mutually_exclusive_group(required=True)
        src.add_argument("--events", nargs="+")
        src.add_argument("--degrees", help="degree file (one per line) instead of events")
        p.add_argument("--years", type=parse_years)
        p.add_argument("--models", type=parse_models, default=FAMILIES)
        p.add_argument("--d-low", type=float, default=5.0)
        p.add_argument("--tol-pct", type=float, default=5.0)
        p.add_argument("--jobs", type=_positive_int, default=1)

    p = sub.add_parser("simulate", parents=[common], help="constrained growth simulation")
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--beta", type=float, default=1.0)
    p.add_argument("--gamma-c", type=float, default=0.0)
    p.add_argument("--m", type=int, default=2)
    p.add_argument("--nodes", type=int, default=100_000)
    p.add_argument("--a0", type=float, default=1.0)

    p = sub.add_parser("report", parents=[common], help="render plots from result tables")
    p.add_argument("--tables", required=True, help="directory holding fits/comparison tables")
    return parser


# ---------------------------------------------------------------------------


def _out_dir(args, default):
    out = args.out or default
    os.makedirs(out, exist_ok=True)
    return out


def cmd_ingest(args):
    events, errors = read_events(args.events)
    for e in errors:
        log.warning("skipped %s", e)
    if not events:
        raise InputError("no events")
    out = open(args.out, "w", encoding="utf-8") if args.out else sys.stdout
    try:
        for ev in events:
            out.write(event_to_json(ev) + "\n")
    finally:
        if args.out:
            out.close()
    dates = [ev.date for ev in events]
    nodes = {p for ev in events for p in ev.participants}
    print(f"events={len(events)} skipped={len(errors)} nodes={len(nodes)} "
          f"dates=[{min(dates):.6g}, {max(dates):.6g}]", file=sys.stderr)
    return EXIT_OK


def cmd_snapshots(args):
    events, errors = read_events(args.events)
    if not events:
        raise InputError("no events")
    graph = TemporalGraph(events, args.window_years, args.degree_mode)
    out = _out_dir(args, "snapshots")
    for sample in graph.snapshots(args.years):
        path = os.path.join(out, f"snapshot_{sample.snapshot_year}.tsv")
        order = np.argsort(sample.nodes.astype(str), kind="stable") if sample.node_count else []
        tables.write_table(
            path, ("node_id", "degree"),
            ((sample.nodes[i], sample.degrees[i]) for i in order),
            comments=("year\tN\ttotal_edges",
                      f"{sample.snapshot_year}\t{sample.node_count}\t{sample.total_edges}"))
        if sample.node_count == 0:
            log.warning("year %s: no active nodes", sample.snapshot_year)
    return EXIT_OK


def read_degree_file(path):
    try:
        with open(path, encoding="utf-8") as fh:
            vals = [ln.split()[0] for ln in fh if ln.strip() and not ln.startswith("#")]
    except OSError as exc:
        raise InputError(f"cannot read degree file {path}: {exc.strerror}") from None
    try:
        degrees = np.array([int(v) for v in vals], dtype=np.int64)
    except ValueError:
        raise InputError(f"{path}: degrees must be integers") from None
    if degrees.size == 0:
        raise InputError(f"{path}: no degrees")
    degrees = degrees[degrees > 0]
    return DegreeSample(degrees)


def _analysis(args, plots):
    out = _out_dir(args, "results")
    config = {k: v for k, v in vars(args).items() if k not in ("func", "verbose")}
    config["models"] = list(args.models)
    if args.degrees:
        started = timestamp()
        sample = read_degree_file(args.degrees)
        res = analyse_sample(sample, None, args.bin_target, args.models, args.xmin,
                             args.weighted, args.d_low, args.tol_pct)
        if res.skipped:
            raise InputError(f"sample unusable: {res.skipped}")
        res.year = "NA"
        res.record.snapshot_year = "NA"
        outputs = write_results([res], out, comparison=args.command != "fit")
        if plots:
            from .plotting import render_plots
            outputs += render_plots(out, out)
        write_manifest(out, config, [args.degrees], outputs, started)
        return EXIT_OK
    if not args.years:
        raise InputError("--years is required with --events")
    result = run_pipeline(args.events, args.years, args.window_years, args.bin_target,
                          args.models, out, args.degree_mode, args.xmin, args.weighted,
                          args.d_low, args.tol_pct, jobs=args.jobs, config=config,
                          plots=plots, comparison=args.command != "fit")
    for w in result.warnings:
        log.warning("%s", w)
    n = len(result.records)
    print(f"{n} of {len(result.years)} snapshot years analysed; results in {out}",
          file=sys.stderr)
    return EXIT_OK


def cmd_fit(args):
    return _analysis(args, plots=False)


def cmd_compare(args):
    return _analysis(args, plots=False)


def cmd_all(args):
    return _analysis(args, plots=True)


def cmd_simulate(args):
    cfg = GrowthConfig(alpha=args.alpha, beta=args.beta, gamma_c=args.gamma_c, m=args.m,
                       n_nodes=args.nodes, a0=args.a0, seed=args.seed)
    res = simulate_growth(cfg)
    out = open(args.out, "w", encoding="utf-8") if args.out else sys.stdout
    try:
        out.write(f"# collabnet {__version__} simulate\n")
        for k, v in cfg.as_dict().items():
            out.write(f"# {k}={v}\n")
        out.write(f"# rng={RNG_ALGORITHM}\n")
        out.write("\n".join(map(str, res.degrees.tolist())) + "\n")
    finally:
        if args.out:
            out.close()
    return EXIT_OK


def cmd_report(args):
    from .plotting import render_plots
    out = args.out or args.tables
    written = render_plots(args.tables, out)
    print(f"{len(written)} plots written to {os.path.join(out, 'plots')}", file=sys.stderr)
    return EXIT_OK


COMMANDS = {"ingest": cmd_ingest, "snapshots": cmd_snapshots, "fit": cmd_fit,
            "compare": cmd_compare, "all": cmd_all, "simulate": cmd_simulate,
            "report": cmd_report}


def exit_code(exc):
    cause = exc.cause if isinstance(exc, StageError) else exc
    return EXIT_NUMERICAL if isinstance(cause, NumericalError) else EXIT_INPUT


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except CollabnetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exit_code(exc)
    except ArithmeticError as exc:
        print(f"error: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
