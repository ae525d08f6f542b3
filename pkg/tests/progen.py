"""Random ToLang programs over map, reduce, part, reshape and bracket literals.

Each generator returns source text plus the shape it produces, so the caller
can keep every index in range. Only add, sub, mul, max and min appear, so
integer inputs stay exact.
"""

from __future__ import annotations

import random
from math import prod

BINARY = ("add", "sub", "mul", "max", "min")
ITERS = ("i", "j", "l")


def _elem_fn(rng: random.Random, rank: int, depth: int = 2) -> str:
    """An elementwise function body over '*', small ints and coordinate names."""
    leaves = ["*", "*", str(rng.randint(-3, 3))]
    if rank:
        leaves += list(ITERS[:rank])
    if depth == 0 or rng.random() < 0.3:
        return rng.choice(leaves)
    f = rng.choice(BINARY)
    a = _elem_fn(rng, rank, depth - 1)
    b = _elem_fn(rng, rank, depth - 1)
    if f in ("add", "sub", "mul") and rng.random() < 0.5:
        return f"({a}{'+-*'[('add', 'sub', 'mul').index(f)]}{b})"
    return f"{f}({a},{b})"


def _reshape_target(rng: random.Random, shape: tuple[int, ...]) -> tuple[int, ...]:
    n = prod(shape)
    options = [(n,), tuple(reversed(shape))]
    for d in (2, 3):
        if n % d == 0 and n // d > 1:
            options.append((d, n // d))
            options.append((n // d, d))
    return rng.choice(options)


def gen_tensor(rng: random.Random, inputs: dict[str, tuple[int, ...]], depth: int
               ) -> tuple[str, tuple[int, ...]]:
    name = rng.choice(sorted(inputs))
    if depth == 0:
        return name, inputs[name]
    src, shape = gen_tensor(rng, inputs, depth - 1)
    rank = len(shape)
    kind = rng.choice(["map", "map", "part", "reshape", "join", "leaf"])
    if kind == "map":
        f = _elem_fn(rng, rank)
        used = [it for it in ITERS[:rank] if it in f]
        if used:
            return f"map({src},{f},[{','.join(ITERS[:rank])}])", shape
        return f"map({src},{f})", shape
    if kind == "part":
        lo = [rng.randint(1, d) for d in shape]
        hi = [rng.randint(a, d) for a, d in zip(lo, shape)]
        new = tuple(b - a + 1 for a, b in zip(lo, hi))
        return f"part({src},{list(lo)},{list(hi)})".replace(" ", ""), new
    if kind == "reshape":
        new = _reshape_target(rng, shape)
        return f"reshape({src},{list(new)})".replace(" ", ""), new
    if kind == "join" and rank < 3:
        other, oshape = gen_tensor(rng, inputs, depth - 1)
        if oshape == shape:
            return f"[{src},{other}]", (2,) + shape
        return f"[{src},{src}]", (2,) + shape
    return src, shape


def gen_program(rng: random.Random) -> tuple[str, dict[str, list[int]]]:
    """One program ``result:=...`` with input shapes no larger than [3,3,3]."""
    shape = tuple(rng.randint(1, 3) for _ in range(rng.randint(1, 3)))
    inputs = {"a": shape}
    if rng.random() < 0.5:
        inputs["b"] = shape
    body, out = gen_tensor(rng, inputs, rng.randint(1, 3))
    if rng.random() < 0.25:
        f = rng.choice(["add", "max", "min"])
        init = {"add": "0", "max": "-Inf", "min": "+Inf"}[f]
        body = f"reduce({body},{f},{init})"
    used = {k: list(v) for k, v in inputs.items() if _mentions(body, k)}
    return f"result:={body}\n", used


def _mentions(src: str, name: str) -> bool:
    import re
    return re.search(rf"\b{name}\b", src) is not None
