import math

import pytest
from hypothesis import given, strategies as st

from collabnet import tables
from collabnet.errors import InputError


@given(st.floats(allow_nan=False))
def test_float_round_trip_is_exact(v):
    assert tables.parse_value(tables.format_value(v)) == v


@given(st.integers(-10**18, 10**18))
def test_int_round_trip(v):
    assert tables.parse_value(tables.format_value(v)) == v


def test_special_values():
    assert tables.format_value(None) == "NA"
    assert tables.format_value(float("nan")) == "NA"
    assert tables.format_value(True) == "true" and tables.format_value(False) == "false"
    assert tables.parse_value("NA") is None
    assert tables.format_value(0.1) == "0.10000000000000001"
    assert tables.format_value(3.0) == "3"
    assert tables.parse_value("log_normal") == "log_normal"
    assert math.isinf(tables.parse_value(tables.format_value(-math.inf)))


def test_write_read(tmp_path):
    p = tmp_path / "t.tsv"
    tables.write_table(p, ("a", "b", "c"), [(1, 0.5, None), {"a": 2, "c": "x"}],
                       comments=("hello",))
    text = p.read_text()
    assert text.startswith("# hello\na\tb\tc\n")
    assert tables.read_table(p) == [{"a": 1, "b": 0.5, "c": None},
                                    {"a": 2, "b": None, "c": "x"}]


def test_read_errors(tmp_path):
    with pytest.raises(InputError, match="missing table"):
        tables.read_table(tmp_path / "nope.tsv")
    bad = tmp_path / "bad.tsv"
    bad.write_text("a\tb\n1\n")
    with pytest.raises(InputError, match="cells"):
        tables.read_table(bad)
