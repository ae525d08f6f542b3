import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from progen import gen_program
from tolang import atomic as X
from tolang import lowering
from tolang.core import tol
from tolang.errors import EquivalenceError, MissingInputError, UnsupportedLoweringError
from tolang.onnx_stdlib.cases import case_study, listings

MATMUL = listings()["matmul"]


def _shape_of_tree(e):
    """Replace every lambda subtree by 'f' to compare only the join/embed skeleton."""
    if isinstance(e, X.Lambda):
        return "f"
    if isinstance(e, X.Embed):
        return ("embed", _shape_of_tree(e.arg))
    if isinstance(e, X.JoinLast):
        return ("join", _shape_of_tree(e.left), _shape_of_tree(e.right))
    return type(e).__name__


def test_matmul_2x2_structure():
    low = lowering.lower(MATMUL, {"a": [2, 2], "b": [2, 2]})
    assert _shape_of_tree(low.expr) == (
        "join", ("embed", ("join", "f", "f")), ("embed", ("join", "f", "f")))
    assert low.eops == 16


def test_matmul_2x2_value():
    low = lowering.lower(MATMUL, {"a": [2, 2], "b": [2, 2]})
    got = X.eval_atomic(low.expr, {"a": tol([[1, 2], [3, 4]]), "b": tol([[5, 6], [7, 8]])})
    assert got.to_nested() == [[19, 22], [43, 50]]


def test_shape_only_program_is_one_norm():
    low = lowering.lower("result:=|a|\n", {"a": [2, 3]})
    assert low.expr == X.Norm(X.Var("a"))


def test_map_over_vector_pattern():
    low = lowering.lower("result:=map(t,sqrt(*))\n", {"t": [2]})
    e = low.expr
    assert isinstance(e, X.JoinLast)
    assert isinstance(e.left, X.Lambda) and e.left.args == (X.Member(X.Var("t"), (1,)),)
    assert isinstance(e.right, X.Lambda) and e.right.args == (X.Member(X.Var("t"), (2,)),)


def test_unit_extents_survive():
    low = lowering.lower("result:=map(a,*+1)\n", {"a": [1, 1]})
    got = X.eval_atomic(low.expr, {"a": tol([[4]])})
    assert got.to_nested() == [[5]]


def test_text_round_trip():
    low = lowering.lower(MATMUL, {"a": [2, 2], "b": [2, 2]})
    assert X.from_text(low.text()) == low.expr
    assert X.to_text(X.from_text(low.text())) == low.text()


def test_eval_atomic_basics():
    assert X.eval_atomic(X.Embed(X.Var("v")), {"v": tol([1, 2, 3])}).to_nested() == [[1], [2], [3]]
    assert X.eval_atomic(X.Lambda("add", (X.Const(1), X.Const(2)))).to_nested() == 3


def test_conv_fixture_checks():
    case = case_study("conv2d")
    lowering.check(case.source, {"in": [4, 4], "k": [2, 2]}, case.attrs, trials=10,
                   integers=False)


def test_missing_shape():
    with pytest.raises(MissingInputError):
        lowering.lower(MATMUL, {"a": [2, 2]})


def test_rand_refused():
    with pytest.raises(UnsupportedLoweringError):
        lowering.lower("result:=map(a,rand(3))\n", {"a": [2]})


def test_check_detects_mismatch():
    low = lowering.lower("result:=map(a,*+1)\n", {"a": [2]})
    bad = lowering.Lowered(X.Var("a"), low.shapes, {}, 0)
    with pytest.raises(EquivalenceError):
        lowering.check("result:=map(a,*+1)\n", {"a": [2]}, lowered=bad)


def test_lowered_count_matches_evaluator_for_matmul():
    for n in (1, 2, 3):
        low = lowering.lower(MATMUL, {"a": [n, n], "b": [n, n]})
        assert low.eops == 2 * n ** 3


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_lowering_sound_on_random_programs(seed):
    src, shapes = gen_program(random.Random(seed))
    lowering.check(src, shapes, trials=2, seed=seed)
