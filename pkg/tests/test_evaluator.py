import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tolang import rng
from tolang.errors import DomainError, MissingInputError
from tolang.evaluator import eval_expr, run, run_result
from tolang.onnx_stdlib import run_stdlib
from tolang.onnx_stdlib.cases import case_studies, listings

MATMUL = listings()["matmul"]


def _mat(n, seed):
    r = np.random.default_rng(seed)
    return r.integers(-9, 10, (n, n)).tolist()


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_matmul_value_and_cost(n):
    a, b = _mat(n, n), _mat(n, n + 100)
    value, report = run_result(MATMUL, {"a": a, "b": b})
    assert value.to_nested() == (np.array(a) @ np.array(b)).tolist()
    assert report.total == 2 * n ** 3
    assert report.traced == report.total


def test_linear_function_costs_two():
    _, report = run("f(x)=a*x+b\ny:=f(x)", {"x": 4, "a": 2, "b": 3})
    assert report.total == 2


def test_relu_costs_vol():
    _, eops = run_stdlib("Relu", {"t": list(range(-5, 5))})
    assert eops == 10


def test_eval_expr_examples():
    v, c = eval_expr("reduce([1,2,3,4,5],add,0)")
    assert (v.to_nested(), c) == (15, 5)
    v, c = eval_expr("x", {"x": [1, 2]})
    assert (v.to_nested(), c) == ([1, 2], 0)
    v, c = eval_expr("reshape(t,[2,3])", {"t": [1, 2, 3, 4, 5, 6]})
    assert (v.to_nested(), c) == ([[1, 2, 3], [4, 5, 6]], 0)


def test_index_positions_are_free():
    _, report = run("y:=x[1+1]", {"x": [5, 6, 7]})
    assert report.total == 0


def test_missing_input_names_variable():
    with pytest.raises(MissingInputError, match="b"):
        run(MATMUL, {"a": [[1]]})


def test_domain_error_names_binding_and_coordinate():
    with pytest.raises(DomainError, match=r"'y'.*\[2\]"):
        run("y:=map(x, sqrt(*))", {"x": [1.0, -1.0]})


def test_report_schema_and_sum():
    _, report = run(MATMUL + "extra:=reduce(a,add,0)\n", {"a": [[1, 2], [3, 4]], "b": [[1, 0], [0, 1]]})
    doc = report.to_json()
    assert set(doc) >= {"total", "per_binding", "per_operator", "notes"}
    assert doc["total"] == sum(doc["per_binding"].values())


def test_memo_repeated_static_call():
    src = "g(k)=reduce(map(x,*+k),add,0)\ny:=g(1)+g(1)"
    _, memo = run(src, {"x": [1, 2, 3]})
    _, plain = run(src, {"x": [1, 2, 3]}, memo=False)
    assert memo.total == 3 + 3 + 1
    assert plain.total == 2 * memo.total - 1
    assert memo.total_no_memo == plain.total
    assert memo.to_json()["total_no_memo"] == plain.total


def test_definitions_see_callers_dynamically():
    src = "m=reduce(v,add,0)\nf(v)=map(v,*-m)\ny:=f(x)"
    out, _ = run(src, {"x": [1, 2, 3]})
    assert out["y"].to_nested() == [-5, -4, -3]


def test_rand_is_reproducible_and_charged():
    src = "y:=map(x, rand(10))"
    o1, r1 = run(src, {"x": [1, 2, 3, 4]})
    o2, _ = run(src, {"x": [1, 2, 3, 4]})
    o3, _ = run(src, {"x": [1, 2, 3, 4]}, seed=1)
    assert o1 == o2 and o1 != o3
    assert r1.total == 4
    assert all(1 <= v <= 10 for v in o1["y"].to_nested())


def test_seeded_rand_contract():
    assert rng.seeded_rand(3, "b", (1, 2), 5) == rng.seeded_rand(3, "b", (1, 2), 5)
    assert rng.uniform(0, "b", (1,)) != rng.uniform(1, "b", (1,))
    with pytest.raises(DomainError):
        rng.seeded_rand(0, "b", (1,), 0)


def test_rand_uniformity_smoke():
    draws = [rng.uniform(0, "t", (i,)) for i in range(5000)]
    counts, _ = np.histogram(draws, bins=10, range=(0, 1))
    chi2 = float(((counts - 500) ** 2 / 500).sum())
    assert chi2 < 27.88  # 9 degrees of freedom, p = 0.001
    pairs = np.array([draws[0::2], draws[1::2]])
    assert abs(np.corrcoef(pairs)[0, 1]) < 0.05


def test_case_studies_trace_agrees():
    for name, case in case_studies().items():
        _, report = case.run()
        assert report.total == report.traced, name


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(-50, 50), min_size=1, max_size=8), st.integers(0, 2**16))
def test_purity_and_memo_soundness(xs, seed):
    src = "s(k)=map(x,*+k)\nh(k)=reduce(s(k),max,-Inf)\ny:=h(1)+h(1)+h(2)\nz:=map(x,rand(7))"
    o1, r1 = run(src, {"x": xs}, seed=seed)
    o2, r2 = run(src, {"x": xs}, seed=seed)
    o3, r3 = run(src, {"x": xs}, seed=seed, memo=False)
    assert o1 == o2 and r1 == r2
    assert o1 == o3 and r3.total >= r1.total
    assert r1.total == r1.traced and r3.total == r3.traced


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_extra_binding_is_monotone(seed):
    from progen import gen_program
    rr = random.Random(seed)
    src, shapes = gen_program(rr)
    vals = {k: np.random.default_rng(seed).integers(-5, 6, v).tolist() for k, v in shapes.items()}
    _, base = run(src, vals)
    _, more = run(src + "extra:=map(result,*+1)\n", vals)
    assert more.total >= base.total
