"""Parsing collaboration-event files.

One JSON object per line with the fields ``id``, ``date`` and
``participants``.  Files ending in ``.gz`` are decompressed transparently.
"""

import calendar
import gzip
import io
import itertools
import json
import re
from dataclasses import dataclass

from .errors import InputError

DEFAULT_YEAR_RANGE = (1700, 2100)

_DATE_RE = re.compile(r"^\s*(-?\d{1,4})(?:-(\d{1,2})(?:-(\d{1,2}))?)?\s*$")


@dataclass(frozen=True)
class CollaborationEvent:
    id: str
    date: float
    participants: tuple

    @property
    def n(self):
        return len(self.participants)

    @property
    def year(self):
        return int(self.date // 1)


@dataclass(frozen=True)
class RecordError:
    line: int
    reason: str

    def __str__(self):
        return f"line {self.line}: {self.reason}"


def parse_date(value):
    """Convert a year, ``YYYY-MM`` or ``YYYY-MM-DD`` into year + fraction-of-year.

    Year-only dates map to the start of the year.
    """
    if isinstance(value, bool):
        raise ValueError(f"unparseable date {value!r}")
    if isinstance(value, (int, float)):
        return float(value)
    if not isinstance(value, str):
        raise ValueError(f"unparseable date {value!r}")
    match = _DATE_RE.match(value)
    if match is None:
        try:
            return float(value)
        except ValueError:
            raise ValueError(f"unparseable date {value!r}") from None
    year = int(match.group(1))
    month = int(match.group(2)) if match.group(2) else 1
    day = int(match.group(3)) if match.group(3) else 1
    if not 1 <= month <= 12:
        raise ValueError(f"unparseable date {value!r}")
    days_in_month = calendar.monthrange(year, month)[1]
    if not 1 <= day <= days_in_month:
        raise ValueError(f"unparseable date {value!r}")
    days_in_year = 366 if calendar.isleap(year) else 365
    day_of_year = sum(calendar.monthrange(year, mo)[1] for mo in range(1, month)) + day
    return year + (day_of_year - 1) / days_in_year


def _dedupe(names):
    seen = set()
    out = []
    for name in names:
        if name not in seen:
            seen.add(name)
            out.append(name)
    return tuple(out)


def parse_record(line, year_range=DEFAULT_YEAR_RANGE):
    """Parse one line into a :class:`CollaborationEvent` or raise ``ValueError``."""
    try:
        rec = json.loads(line)
    except json.JSONDecodeError as exc:
        raise ValueError(f"malformed record: {exc.msg}") from None
    if not isinstance(rec, dict):
        raise ValueError("malformed record: expected an object")
    missing = [f for f in ("id", "date", "participants") if f not in rec]
    if missing:
        raise ValueError(f"malformed record: missing {', '.join(missing)}")
    participants = rec["participants"]
    if not isinstance(participants, list):
        raise ValueError("malformed record: participants must be a list")
    if not participants:
        raise ValueError("empty participants")
    if not all(isinstance(p, (str, int)) and not isinstance(p, bool) for p in participants):
        raise ValueError("malformed record: participant ids must be strings")
    date = parse_date(rec["date"])
    lo, hi = year_range
    if not lo <= date <= hi:
        raise ValueError(f"date {date:g} outside corpus range {lo}-{hi}")
    return CollaborationEvent(str(rec["id"]), date, _dedupe(str(p) for p in participants))


def parse_events(stream, year_range=DEFAULT_YEAR_RANGE):
    """Parse line-delimited records.

    Returns ``(events, errors)``: valid events in input order, and one
    :class:`RecordError` per rejected line (1-based line numbers).  Blank lines
    are skipped.
    """
    events = []
    errors = []
    for lineno, line in enumerate(stream, start=1):
        if isinstance(line, bytes):
            line = line.decode("utf-8")
        if not line.strip():
            continue
        try:
            events.append(parse_record(line, year_range))
        except ValueError as exc:
            errors.append(RecordError(lineno, str(exc)))
    return events, errors


def open_text(path):
    if str(path).endswith(".gz"):
        return io.TextIOWrapper(gzip.open(path, "rb"), encoding="utf-8")
    return open(path, encoding="utf-8")


def read_events(paths, year_range=DEFAULT_YEAR_RANGE):
    """Parse one or more event files; error line numbers are prefixed by file."""
    if isinstance(paths, (str, bytes)) or hasattr(paths, "__fspath__"):
        paths = [paths]
    events = []
    errors = []
    for path in paths:
        try:
            fh = open_text(path)
        except OSError as exc:
            raise InputError(f"cannot read events file {path}: {exc.strerror}") from None
        with fh:
            evs, errs = parse_events(fh, year_range)
        events.extend(evs)
        errors.extend(RecordError(e.line, f"{path}: {e.reason}") for e in errs)
    return events, errors


def pairwise_edges(event):
    """All n(n-1)/2 unordered pairs of an event, each as ``(a, b)`` with a < b."""
    return list(itertools.combinations(sorted(event.participants), 2))


def event_to_json(event):
    return json.dumps({"id": event.id, "date": event.date,
                       "participants": list(event.participants)},
                      ensure_ascii=False, separators=(",", ":"))
