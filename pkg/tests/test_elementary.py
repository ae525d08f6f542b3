import math

import pytest

from tolang.elementary import (REGISTRY, STAR, Apply, eops_of_fnexpr, eval_fnexpr, fn, lookup,
                               tracing)
from tolang.errors import ArityError, DomainError, UnknownFunctionError


def test_lookup():
    assert lookup("add").arity == 2
    assert lookup("sgn").arity == 1
    with pytest.raises(UnknownFunctionError):
        lookup("foo")


def test_no_abs_in_table():
    # |x| has to be built from two functions
    assert "abs" not in REGISTRY


def test_fnexpr_values():
    f = Apply("add", Apply("mul", "a", STAR), "b")
    assert eval_fnexpr(f, 4, env={"a": 2, "b": 3}) == 11
    assert eval_fnexpr(STAR, 7) == 7
    assert eval_fnexpr(Apply("max", STAR, 0), -2.5) == 0


def test_fnexpr_eops():
    assert eops_of_fnexpr(Apply("add", Apply("mul", "a", "x"), "b")) == 2
    assert eops_of_fnexpr(STAR) == 0
    g = Apply("sqrt", Apply("add", Apply("pow", "v1", 2),
                            Apply("add", Apply("pow", "v2", 2), Apply("pow", "v3", 2))))
    assert eops_of_fnexpr(g) == 6


def test_domain_errors():
    with pytest.raises(DomainError):
        lookup("sqrt")(-1.0)
    with pytest.raises(DomainError):
        lookup("div")(1, 0)
    with pytest.raises(DomainError):
        lookup("asin")(2.0)
    with pytest.raises(DomainError):
        lookup("exp")(1e6)


def test_arity_checked():
    with pytest.raises(ArityError):
        lookup("add")(1)


def test_infinities_pass_through():
    assert lookup("max")(-math.inf, 3) == 3
    assert lookup("add")(math.inf, 1) == math.inf


def test_comparisons_are_integers():
    assert lookup("lt")(1, 2) == 1 and lookup("eq")(1.0, 2) == 0


def test_tracing_counts_calls():
    with tracing() as counts:
        lookup("add")(1, 2)
        eval_fnexpr(fn("sqrt"), 4.0)
    assert counts["add"] == 1 and counts["sqrt"] == 1
