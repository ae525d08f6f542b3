"""Acceptance criteria 1 to 7, one test each.

Every test records a PASS/FAIL line; the lines are printed at the end of a
pytest run (see conftest.py) and by ``python3 tests/test_acceptance.py``.
"""

from __future__ import annotations

import math
import random
import sys
import time
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).parent))

from progen import gen_program  # noqa: E402
from tolang import atomic as X  # noqa: E402
from tolang import lowering, ops  # noqa: E402
from tolang.core import (TypeList, atomic_capacity, atomic_embed, atomic_join_last,  # noqa: E402
                         atomic_join_list, atomic_member, atomic_norm, tol)
from tolang.elementary import fn  # noqa: E402
from tolang.evaluator import run  # noqa: E402
from tolang.frontend import format_program, parse  # noqa: E402
from tolang.onnx_stdlib import golden  # noqa: E402
from tolang.onnx_stdlib.cases import case_study, corpus, listings  # noqa: E402

LINES: list[str] = []
MATMUL = listings()["matmul"]


class Check:
    def __init__(self, number: int, title: str):
        self.number, self.title = number, title
        self.problems: list[str] = []
        self.start = time.perf_counter()

    def expect(self, ok: bool, what: str) -> None:
        if not ok:
            self.problems.append(what)

    def finish(self, detail: str = "") -> None:
        secs = time.perf_counter() - self.start
        status = "PASS" if not self.problems else "FAIL"
        extra = "; ".join(self.problems)
        LINES.append(f"[{status}] criterion {self.number}: {self.title} ({secs:.2f}s)"
                     + (f" {detail}" if detail else "") + (f" :: {extra}" if extra else ""))
        assert not self.problems, "\n".join(self.problems)


# 1 -------------------------------------------------------------------------------------

def _skeleton(e):
    if isinstance(e, X.Lambda):
        return "f"
    if isinstance(e, X.Embed):
        return ("embed", _skeleton(e.arg))
    if isinstance(e, X.JoinLast):
        return ("join", _skeleton(e.left), _skeleton(e.right))
    return type(e).__name__


def test_criterion_1_matmul_lowering():
    c = Check(1, "2x2 matmul lowers to Ξ(f⋈f)⋈Ξ(f⋈f), exact on 100 random integer pairs")
    low = lowering.lower(MATMUL, {"a": [2, 2], "b": [2, 2]})
    c.expect(_skeleton(low.expr) == ("join", ("embed", ("join", "f", "f")),
                                     ("embed", ("join", "f", "f"))),
             f"skeleton {_skeleton(low.expr)}")
    rng = np.random.default_rng(2024)
    for k in range(100):
        a, b = rng.integers(-50, 51, (2, 2)), rng.integers(-50, 51, (2, 2))
        got = X.eval_atomic(low.expr, {"a": tol(a.tolist()), "b": tol(b.tolist())}).to_nested()
        if got != (a @ b).tolist():
            c.expect(False, f"trial {k}: {got} != {(a @ b).tolist()}")
    secs = time.perf_counter() - c.start
    c.expect(secs < 1.0, f"took {secs:.2f}s, limit 1s")
    c.finish()


# 2 -------------------------------------------------------------------------------------

def test_criterion_2_eops_reproduction():
    c = Check(2, "EOPs of a*x+b, g(v) and n x n matmul")
    _, r = run("f(x)=a*x+b\ny:=f(x)", {"x": 3, "a": 2, "b": 5})
    c.expect(r.total == 2, f"f(x) costs {r.total}, want 2")
    for n in (1, 3, 10):
        body = "+".join(f"v[{i}]^2" for i in range(1, n + 1))
        _, r = run(f"g:=sqrt({body})", {"v": list(range(1, n + 1))})
        c.expect(r.total == 2 * n, f"g(v) at n={n} costs {r.total}, want {2 * n}")
    for n in (2, 4, 8):
        m = np.arange(n * n).reshape(n, n).tolist()
        _, r = run(MATMUL, {"a": m, "b": m})
        c.expect(r.total == 2 * n ** 3, f"matmul n={n} costs {r.total}, want {2 * n ** 3}")
    c.finish()


# 3 -------------------------------------------------------------------------------------

def test_criterion_3_onnx_golden_suite():
    c = Check(3, "VERIFIED ops match oracles to 1e-9 and their table EOPs")
    records = golden.golden_table()
    per_op: dict[str, int] = {}
    red: dict[str, list[str]] = {}
    ratio_off: dict[str, list[str]] = {}
    for r in records:
        per_op[r.op] = per_op.get(r.op, 0) + 1
        if r.max_abs_err > 1e-9:
            c.expect(False, f"{r.op} [{r.shape}] output error {r.max_abs_err:.3g}")
        if r.eops != r.eops_formula:
            red.setdefault(r.op, []).append(f"{r.eops} vs {r.eops_formula}")
        if r.flops_ref != "-" and r.ratio != "-" and r.flops_ref:
            want = round(r.eops_formula / r.flops_ref, 6)
            if r.ratio != want:
                ratio_off.setdefault(r.op, []).append(f"{r.ratio} vs {want}")
    for op, mism in sorted(red.items()):
        c.expect(False, f"{op} EOPs measured vs table: {', '.join(mism)}")
    for op, mism in sorted(ratio_off.items()):
        c.expect(False, f"{op} EOPs/FLOPs ratio vs table pair: {', '.join(mism)}")
    for name in golden.verified_names():
        c.expect(per_op.get(name, 0) >= 3, f"{name} has {per_op.get(name, 0)} shapes")
    secs = time.perf_counter() - c.start
    c.expect(secs < 60, f"took {secs:.1f}s, limit 60s")
    c.finish(f"[{len(per_op)} ops, {len(records)} instances, {len(red)} with EOPs mismatch]")


# 4 -------------------------------------------------------------------------------------

def test_criterion_4_micro_examples():
    c = Check(4, "worked micro-examples for the atomics and the structural operators")
    t3 = tol([(1, 1.), (2, 2.), (3, 3.)])
    # atomics; the norm is the shape vector, index it for the number
    c.expect(atomic_norm(t3).to_nested() == [3], "norm")
    c.expect(atomic_capacity(t3) == 2, "capacity")
    c.expect(atomic_member(tol([[1, 2], [3, 4]]), [2, 2]).to_nested() == 4, "member")
    c.expect(atomic_join_last(tol([1, 2, 3]), tol([1, 2])).to_nested() == [1, 2, 3, 1, 2], "join")
    c.expect(atomic_join_list(tol((3, 0.14)), tol(3.2)).to_nested() == (3, 0.14, 3.2), "join'")
    c.expect(atomic_embed(tol([1, 2, 3])).to_nested() == [[1], [2], [3]], "embed")
    # space of a list
    c.expect(ops.op_space(tol((0, 3.0, 1))).ids == ("Z", "R", "N"), "space")
    # convert to reals
    conv = ops.op_convert(tol([[1, 2], [3, 4]]), TypeList.of("R"))
    c.expect(conv.to_nested() == [[1.0, 2.0], [3.0, 4.0]]
             and all(type(x) is float for cell in conv.data for x in cell), "convert")
    # part
    c.expect(ops.op_part(tol([[1, 2], [3, 4]]), [2, 2]).to_nested() == 4, "part")
    # swap's d counts from the innermost dimension
    c.expect(ops.op_swap(tol([[1, 2], [3, 4]]), 1, [2, 1]).to_nested() == [[2, 1], [4, 3]], "swap")
    # reshape and tile
    c.expect(ops.op_reshape(tol([[1, 2], [3, 4], [5, 6]]), [2, 3]).to_nested()
             == [[1, 2, 3], [4, 5, 6]], "reshape")
    c.expect(ops.op_tile(tol([[(1, 'a'), (2, 'b')], [(3, 'c'), (4, 'd')]])).to_nested()
             == [(1, 'a', 2, 'b'), (3, 'c', 4, 'd')], "tile")
    # map and reduce
    c.expect(ops.op_map(tol([1., 2., 3.]), fn("sqrt")).to_nested()
             == [1.0, math.sqrt(2.0), math.sqrt(3.0)], "map sqrt")
    c.expect(ops.op_reduce(tol([1, 2, 3, 4, 5]), "add", 0).to_nested() == 15, "reduce add")
    # the same examples through the surface language
    out, _ = run("r:=space((0,3.0,1))\n")
    c.expect(out["r"].ids == ("Z", "R", "N"), "surface space")
    for src, want in [("part([[1,2],[3,4]],[2,2])", 4),
                      ("swap([[1,2],[3,4]],1,[2,1])", [[2, 1], [4, 3]]),
                      ("reshape([[1,2],[3,4],[5,6]],[2,3])", [[1, 2, 3], [4, 5, 6]]),
                      ("reduce([1,2,3,4,5],add,0)", 15)]:
        out, _ = run(f"r:={src}\n")
        c.expect(out["r"].to_nested() == want, f"surface {src}")
    c.finish()


# 5 -------------------------------------------------------------------------------------

def test_criterion_5_lowering_soundness():
    c = Check(5, "eval_atomic(lower(P)) = eval(P) on random programs")
    rng = random.Random(5)
    cases = 0
    for k in range(600):
        src, shapes = gen_program(rng)
        try:
            lowering.check(src, shapes, trials=1, seed=k)
        except Exception as e:  # every failure is a finding
            c.expect(False, f"case {k} {src.strip()} {shapes}: {type(e).__name__}: {e}")
        cases += 1
    c.expect(cases >= 500, f"only {cases} cases")
    secs = time.perf_counter() - c.start
    c.expect(secs < 30, f"took {secs:.1f}s, limit 30s")
    c.finish(f"[{cases} programs]")


# 6 -------------------------------------------------------------------------------------

def _conv_same(x, k):
    x = np.pad(x, 1)
    return np.array([[np.sum(x[i:i + 3, j:j + 3] * k) for j in range(x.shape[1] - 2)]
                     for i in range(x.shape[0] - 2)])


def _resnet(x, k):
    def bn(t):
        m = t.mean()
        return (t - m) / np.sqrt(((t - m) ** 2).mean())

    h = np.maximum(bn(_conv_same(x, k)), 0)
    return np.maximum(bn(_conv_same(h, k)) + x, 0)


def test_criterion_6_case_studies():
    c = Check(6, "relax vs min-plus, Resnet block vs direct oracle, k-means reproducible")
    rng = np.random.default_rng(6)
    relax = case_study("relax")
    for g in range(5):
        e = rng.integers(1, 20, (6, 6)).astype(float)
        np.fill_diagonal(e, 0)
        e[rng.random((6, 6)) < 0.3] = np.inf
        np.fill_diagonal(e, 0)
        want = np.min(e[:, :, None] + e[None, :, :], axis=1)
        out, _ = relax.run({"E": e.tolist()})
        c.expect(np.array_equal(np.array(out["result"].to_nested()), want), f"graph {g}")
    x = rng.normal(size=(4, 4))
    k = rng.normal(size=(3, 3))
    out, _ = case_study("resnet").run({"x": x.tolist(), "kernel": k.tolist()})
    err = float(np.max(np.abs(np.array(out["result"].to_nested()) - _resnet(x, k))))
    c.expect(err <= 1e-9, f"resnet max error {err:.3g}")
    km = case_study("kmeans")
    data = rng.normal(size=(8, 2)).tolist()
    o1, r1 = km.run({"data": data}, {"k": 3}, seed=0)
    o2, r2 = km.run({"data": data}, {"k": 3}, seed=0)
    same = all(o1[n].data == o2[n].data and o1[n].type_list == o2[n].type_list for n in o1)
    c.expect(same and set(o1) == set(o2) and r1.total == r2.total, "k-means runs differ")
    c.finish()


# 7 -------------------------------------------------------------------------------------

def test_criterion_7_frontend_round_trip():
    c = Check(7, "parse(format(P)) = P over listings, case studies and 60 operator sources")
    texts = corpus()
    t0 = time.perf_counter()
    programs = {name: parse(text) for name, text in texts.items()}
    parse_secs = time.perf_counter() - t0
    for name, p in programs.items():
        c.expect(parse(format_program(p)) == p, f"{name} changes under round trip")
    ops_n = sum(1 for n in texts if n.startswith("op/"))
    c.expect(ops_n == 60, f"{ops_n} operator sources")
    c.expect(parse_secs < 2.0, f"corpus parse took {parse_secs:.2f}s, limit 2s")
    c.finish(f"[{len(texts)} programs, parse {parse_secs:.3f}s]")


if __name__ == "__main__":
    failed = 0
    for name, f in sorted(globals().items()):
        if name.startswith("test_criterion_"):
            try:
                f()
            except AssertionError:
                failed += 1
    print("\n".join(LINES))
    sys.exit(1 if failed else 0)
