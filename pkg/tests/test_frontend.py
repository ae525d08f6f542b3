import json
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from progen import gen_program
from tolang.frontend import ast as A
from tolang.frontend import dump_ast, format_program, parse, parse_expr, resolve, tokenize
from tolang.errors import ArityError, LexError, ParseError, UnboundNameError
from tolang.onnx_stdlib.cases import case_study, corpus, listings


def test_tokens():
    kinds = [t.kind for t in tokenize("tol result=[2,2]")][:-1]
    assert kinds == ["KW_tol", "Ident", "Eq", "LBrack", "Int", "Comma", "Int", "RBrack"]
    assert [t.kind for t in tokenize("#comment\n")] == ["EOF"]
    with pytest.raises(LexError):
        tokenize("x @ y")


def test_matmul_listing_shape():
    p = parse(listings()["matmul"])
    kinds = [type(s).__name__ for s in p.statements]
    assert kinds == ["TolDecl", "Def", "Def", "Def"]
    defs = p.statements[1:]
    assert [d.params is not None for d in defs] == [True, True, False]
    assert [d.output for d in defs] == [False, False, True]


def test_declarations():
    d = parse("tol x: R [3]").statements[0]
    assert isinstance(d, A.TolDecl) and d.name == "x" and d.types == A.TypeName("R")
    assert d.dims == (A.Num(3),)
    ld = parse("list l: [Z, R], R").statements[0]
    assert isinstance(ld, A.ListDecl)
    assert ld.types == A.TypeSeq((A.TypeGroup((A.TypeName("Z"), A.TypeName("R"))), A.TypeName("R")))


def test_in_is_an_identifier():
    p = parse("in_pad=[tol[1],in,tol[1]]\nresult:=in_pad")
    assert resolve(p).inputs == ["in"]


def test_resolve_free_inputs():
    assert resolve(parse(listings()["matmul"])).inputs == ["a", "b"]


def test_resolve_errors():
    with pytest.raises(UnboundNameError):
        resolve(parse("y = f(x)\nz:=y"))
    with pytest.raises(ArityError):
        resolve(parse("t=[1]\nz:=map(t, add)"))


def test_chain_preserved():
    d = parse("out=conv.bn.relu.conv.bn(in)").statements[0]
    assert d.body.names == ("conv", "bn", "relu", "conv", "bn")
    assert "conv.bn.relu.conv.bn(in)" in format_program(parse("out=conv.bn.relu.conv.bn(in)"))


def test_empty_program():
    assert format_program(parse("")) == ""


def test_conv_listing_round_trip():
    p = parse(listings()["conv2d"])
    assert parse(format_program(p)) == p


@pytest.mark.parametrize("name", sorted(corpus()))
def test_corpus_round_trip(name):
    text = corpus()[name]
    p = parse(text)
    once = format_program(p)
    assert parse(once) == p
    assert format_program(parse(once)) == once


def test_parse_error_has_span():
    with pytest.raises(ParseError) as e:
        parse("x = = (")
    assert (e.value.line, e.value.col) == (1, 5)


def test_diagnostics_are_deterministic():
    msgs = set()
    for _ in range(3):
        try:
            parse("result:=map(a,")
        except ParseError as e:
            msgs.add((str(e), e.line, e.col))
    assert len(msgs) == 1


def test_ast_json():
    doc = json.loads(dump_ast(parse(listings()["matmul"])))
    assert doc["version"] == 1
    stmts = doc["program"]["statements"]
    assert len(stmts) == 4
    assert {"line", "col", "len"} <= set(stmts[0]["span"])


def test_precedence():
    e = parse_expr("1+2*3^2")
    assert isinstance(e, A.Binary) and e.op == "+"
    assert parse_expr("-2^2") == parse_expr("-(2^2)")


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_round_trip_generated(seed):
    src, _ = gen_program(random.Random(seed))
    p = parse(src)
    assert parse(format_program(p)) == p


names = st.sampled_from(["a", "b", "x", "in", "t1"])
leaf = st.one_of(names.map(A.Ref), st.integers(0, 99).map(A.Num),
                 st.floats(0, 100, allow_nan=False).map(A.Num), st.just(A.Star()))


def _extend(children):
    ops = st.sampled_from(["+", "-", "*", "/", "^", "<", "==", "%"])
    return st.one_of(
        st.tuples(ops, children, children).map(lambda t: A.Binary(t[0], t[1], t[2])),
        children.map(A.Neg),
        st.tuples(st.sampled_from(["add", "max", "sqrt", "f"]),
                  st.lists(children, min_size=1, max_size=3))
          .map(lambda t: A.Call(t[0], tuple(t[1]))),
        st.lists(children, min_size=1, max_size=3).map(lambda xs: A.Bracket(tuple(xs))),
        st.tuples(names, st.lists(children, min_size=1, max_size=2))
          .map(lambda t: A.Index(A.Ref(t[0]), tuple(t[1]))),
    )


exprs = st.recursive(leaf, _extend, max_leaves=12)


@settings(max_examples=300, deadline=None)
@given(exprs)
def test_expression_round_trip(e):
    from tolang.frontend import format_expr
    text = format_expr(e)
    assert format_expr(parse_expr(text)) == text
