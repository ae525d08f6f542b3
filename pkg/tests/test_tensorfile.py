import json
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tolang import tensorfile
from tolang.core import tol
from tolang.errors import ShapeMismatchError, TolIOError


def test_document_layout():
    doc = json.loads(tensorfile.dumps(tol([[1.0, 2.0], [3.0, 4.0]])))
    assert doc == {"version": 1, "type_list": ["R"], "shape": [2, 2],
                   "data": [[1.0, 2.0], [3.0, 4.0]]}


def test_capacity_two_and_infinities():
    v = tol([(1, math.inf), (2, -math.inf)])
    text = tensorfile.dumps(v)
    assert '"+Inf"' in text and '"-Inf"' in text
    assert tensorfile.loads(text) == v


def test_bare_json_accepted():
    assert tensorfile.loads("[[1,2],[3,4]]").to_nested() == [[1, 2], [3, 4]]
    assert tensorfile.loads("3.5").to_nested() == 3.5


def test_errors():
    with pytest.raises(TolIOError):
        tensorfile.loads("{nope")
    with pytest.raises(ShapeMismatchError):
        tensorfile.loads('{"type_list":["N"],"shape":[3],"data":[1,2]}')
    with pytest.raises(TolIOError):
        tensorfile.load("/nonexistent/x.json")


def test_save_load(tmp_path):
    v = tol([[1, 2], [3, 4]])
    p = tmp_path / "v.json"
    tensorfile.save(v, p)
    first = p.read_bytes()
    tensorfile.save(tensorfile.load(p), p)
    assert p.read_bytes() == first
    assert tensorfile.load(p) == v


floats = st.floats(allow_nan=False, width=64)


@settings(max_examples=200, deadline=None)
@given(st.lists(st.lists(floats, min_size=3, max_size=3), min_size=1, max_size=4))
def test_float_round_trip_bit_exact(rows):
    v = tol(rows)
    back = tensorfile.loads(tensorfile.dumps(v))
    assert [x for c in back.data for x in c] == [x for c in v.data for x in c]
    assert tensorfile.dumps(back) == tensorfile.dumps(v)


@settings(max_examples=200, deadline=None)
@given(st.lists(st.integers(-2**60, 2**60), min_size=1, max_size=10))
def test_integer_round_trip(xs):
    v = tol(xs)
    assert tensorfile.loads(tensorfile.dumps(v)) == v
