"""Lowering a program to a tree of atomic operators.

The interpreter is run once over symbolic inputs: every cell of an input is
the leaf expression that selects it (``member(a, c)``), elementary
applications build ``lambda`` nodes instead of computing, and structural
operators move cells around exactly as they do on numbers. The final value
is then reassembled with joins and embeds. Indices and shapes must not
depend on input data, and ``rand`` is refused, since neither has a fixed
tree.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Any, Mapping, Sequence

from . import atomic as X
from .core import ToLValue, TypeList, coords, tol
from .errors import EquivalenceError, MissingInputError, ShapeMismatchError
from .evaluator import Interpreter
from .frontend import ast as A
from .frontend.parser import parse
from .frontend.resolve import resolve

ShapeSpec = Sequence[int] | tuple[Sequence[int], int]


@dataclass
class Lowered:
    expr: X.AtomicExpr
    shapes: dict[str, tuple[tuple[int, ...], int]]
    attrs: dict[str, Any] = field(default_factory=dict)
    eops: int = 0  # distinct lambda nodes in the tree

    def text(self) -> str:
        return X.to_text(self.expr)


def _norm_shape(given: Any) -> tuple[tuple[int, ...], int]:
    if isinstance(given, tuple) and len(given) == 2 and not isinstance(given[1], (list, tuple)) \
            and isinstance(given[0], (list, tuple)):
        return tuple(given[0]), int(given[1])
    return tuple(int(d) for d in given), 1


def symbolic_input(name: str, shape: Sequence[int], capacity: int = 1) -> ToLValue:
    """A value whose cells are the atomic leaves that read them."""
    leaf = X.Var(name)
    shape = tuple(shape)
    cells = []
    for c in (coords(shape) if shape else [()]):
        cell = leaf if not c else X.Member(leaf, c)
        if capacity == 1:
            cells.append((cell,))
        else:
            cells.append(tuple(X.MemberSlot(cell, j) for j in range(1, capacity + 1)))
    return ToLValue(TypeList.of(*["R"] * capacity), shape, tuple(cells), False, leaf)


def distinct_lambdas(e: X.AtomicExpr) -> int:
    seen: set[int] = set()
    stack = [e]
    n = 0
    while stack:
        x = stack.pop()
        if id(x) in seen:
            continue
        seen.add(id(x))
        if isinstance(x, X.Lambda):
            n += 1
        stack.extend(X._children(x))
    return n


def _program(p: A.Program | str) -> A.Program:
    return parse(p) if isinstance(p, str) else p


def needed_inputs(program: A.Program) -> list[str]:
    names = set(resolve(program).inputs)
    names |= {s.name for s in program.statements
              if isinstance(s, A.TolDecl) and s.init is None}
    return sorted(names)


def lower(program: A.Program | str, shapes: Mapping[str, Any],
          attrs: Mapping[str, Any] | None = None) -> Lowered:
    """Lower the program result for inputs of the given shapes.

    ``shapes`` maps each data input to a shape list, or to ``(shape, capacity)``.
    ``attrs`` supplies static parameters (strides, padding, ...) by value.
    """
    prog = _program(program)
    attrs = dict(attrs or {})
    norm = {k: _norm_shape(v) for k, v in shapes.items()}
    missing = [n for n in needed_inputs(prog) if n not in norm and n not in attrs]
    if missing:
        raise MissingInputError("no shape given for input(s): " + ", ".join(missing))
    inputs = {k: symbolic_input(k, s, cap) for k, (s, cap) in norm.items()}
    interp = Interpreter(prog, inputs, attrs, symbolic=True)
    outputs, _ = interp.run()
    value = outputs[interp.result_name(outputs)]
    if not isinstance(value, ToLValue):
        raise ShapeMismatchError("the program result is not a ToL")
    expr = X.assemble(value)
    return Lowered(expr, norm, attrs, distinct_lambdas(expr))


def random_value(shape: Sequence[int], capacity: int, rng: random.Random,
                 integers: bool = True) -> ToLValue:
    def draw() -> Any:
        return rng.randint(-9, 9) if integers else rng.uniform(-4.0, 4.0)

    def build(level: int) -> Any:
        if level == len(shape):
            return draw() if capacity == 1 else tuple(draw() for _ in range(capacity))
        return [build(level + 1) for _ in range(shape[level])]

    return tol(build(0))


def check(program: A.Program | str, shapes: Mapping[str, Any],
          attrs: Mapping[str, Any] | None = None, trials: int = 20, seed: int = 0,
          integers: bool = True, lowered: Lowered | None = None) -> Lowered:
    """Lower, then compare the lowered tree with direct evaluation on random inputs.

    Raises EquivalenceError on the first disagreement.
    """
    prog = _program(program)
    low = lowered or lower(prog, shapes, attrs)
    rng = random.Random(seed)
    for k in range(trials):
        vals = {n: random_value(s, cap, rng, integers) for n, (s, cap) in low.shapes.items()}
        interp = Interpreter(prog, vals, low.attrs)
        outs, _ = interp.run()
        want = outs[interp.result_name(outs)]
        got = X.eval_atomic(low.expr, vals)
        if not _close(want, got):
            raise EquivalenceError(
                f"trial {k}: lowered form gives {got.to_nested()!r}, "
                f"direct evaluation gives {want.to_nested()!r}")
    return low


def _close(a: ToLValue, b: ToLValue) -> bool:
    if a.shape != b.shape or a.capacity != b.capacity:
        return False
    for la, lb in zip(a.data, b.data):
        for x, y in zip(la, lb):
            if isinstance(x, float) or isinstance(y, float):
                if not (x == y or abs(x - y) <= 1e-9 * max(1.0, abs(x), abs(y))):
                    return False
            elif x != y:
                return False
    return True
