"""Expression trees over the five atomic computations.

Text form (one s-expression per tree)::

    (lambda add (member a 1 1) 0)   (norm t)   (norm' t)
    (member t 2 2)   (member' e 3)   (join x y)   (join' x y)   (embed x)

Leaves are variable names and constants (integers, reals, +Inf/-Inf, 'c').
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Any, Mapping

from . import core
from .core import ToLValue, is_symbolic
from .errors import ParseError, UnboundNameError


class AtomicExpr:
    __slots__ = ()


@dataclass(frozen=True)
class Var(AtomicExpr):
    name: str


@dataclass(frozen=True)
class Const(AtomicExpr):
    value: Any


@dataclass(frozen=True)
class Lambda(AtomicExpr):
    fn: str
    args: tuple[AtomicExpr, ...]


@dataclass(frozen=True)
class Norm(AtomicExpr):
    arg: AtomicExpr


@dataclass(frozen=True)
class NormCap(AtomicExpr):
    arg: AtomicExpr


@dataclass(frozen=True)
class Member(AtomicExpr):
    arg: AtomicExpr
    coord: tuple[int, ...]


@dataclass(frozen=True)
class MemberSlot(AtomicExpr):
    arg: AtomicExpr
    slot: int


@dataclass(frozen=True)
class JoinLast(AtomicExpr):
    left: AtomicExpr
    right: AtomicExpr


@dataclass(frozen=True)
class JoinList(AtomicExpr):
    left: AtomicExpr
    right: AtomicExpr


@dataclass(frozen=True)
class Embed(AtomicExpr):
    arg: AtomicExpr


def as_expr(x: Any) -> AtomicExpr:
    return x if isinstance(x, AtomicExpr) else Const(x)


# -- assembly from a (partly symbolic) value -----------------------------------

def _cell(lst: tuple) -> AtomicExpr:
    exprs = [as_expr(x) for x in lst]
    out = exprs[0]
    for e in exprs[1:]:
        out = JoinList(out, e)
    return out


def _chain(parts: list[AtomicExpr]) -> AtomicExpr:
    out = parts[0]
    for p in parts[1:]:
        out = JoinLast(out, p)
    return out


def assemble(v: ToLValue) -> AtomicExpr:
    """Rebuild ``v`` from its cells: lists by join', the first dimension by
    joins of cells, each further dimension by embedding slices and joining
    them along the new last dimension."""
    if v.origin is not None:
        return v.origin
    if v.dim == 0:
        return _cell(v.data[0])

    def build(prefix_shape: tuple[int, ...], fixed: tuple[int, ...]) -> AtomicExpr:
        # value over the leading dims ``prefix_shape`` with trailing coords ``fixed``
        if len(prefix_shape) == 1:
            if prefix_shape[0] == 1:  # a lone cell is a scalar; embed gives it extent 1
                return Embed(_cell(v.at((1,) + fixed)))
            return _chain([_cell(v.at((i,) + fixed)) for i in range(1, prefix_shape[0] + 1)])
        last = prefix_shape[-1]
        return _chain([Embed(build(prefix_shape[:-1], (j,) + fixed))
                       for j in range(1, last + 1)])

    return build(v.shape, ())


# -- interpretation -----------------------------------------------------------

def eval_atomic(e: AtomicExpr, env: Mapping[str, ToLValue] | None = None) -> ToLValue:
    env = env or {}
    memo: dict[int, ToLValue] = {}

    def ev(x: AtomicExpr) -> ToLValue:
        key = id(x)
        if key in memo:
            return memo[key]
        r = _eval(x)
        memo[key] = r
        return r

    def _eval(x: AtomicExpr) -> ToLValue:
        if isinstance(x, Var):
            if x.name not in env:
                raise UnboundNameError(f"atomic leaf {x.name!r} is unbound")
            return env[x.name]
        if isinstance(x, Const):
            return core.scalar(x.value)
        if isinstance(x, Lambda):
            args = [ev(a).scalar for a in x.args]
            return core.scalar(core.atomic_lambda(x.fn, args))
        if isinstance(x, Norm):
            return core.atomic_norm(ev(x.arg))
        if isinstance(x, NormCap):
            return core.scalar(core.atomic_capacity(ev(x.arg)))
        if isinstance(x, Member):
            return core.atomic_member(ev(x.arg), x.coord)
        if isinstance(x, MemberSlot):
            return core.atomic_member_slot(ev(x.arg), x.slot)
        if isinstance(x, JoinLast):
            return core.atomic_join_last(ev(x.left), ev(x.right))
        if isinstance(x, JoinList):
            return core.atomic_join_list(ev(x.left), ev(x.right))
        if isinstance(x, Embed):
            return core.atomic_embed(ev(x.arg))
        raise TypeError(f"not an atomic expression: {x!r}")

    return ev(e)


def count_nodes(e: AtomicExpr, kind: type | None = None) -> int:
    n = 1 if kind is None or isinstance(e, kind) else 0
    for child in _children(e):
        n += count_nodes(child, kind)
    return n


def _children(e: AtomicExpr) -> tuple[AtomicExpr, ...]:
    if isinstance(e, Lambda):
        return e.args
    if isinstance(e, (JoinLast, JoinList)):
        return (e.left, e.right)
    if isinstance(e, (Norm, NormCap, Member, MemberSlot, Embed)):
        return (e.arg,)
    return ()


def is_pure(e: AtomicExpr) -> bool:
    """True when the tree holds only atomic nodes, leaves and constants."""
    if not isinstance(e, AtomicExpr):
        return False
    if isinstance(e, Const):
        return not is_symbolic(e.value)
    return all(is_pure(c) for c in _children(e))


# -- text form ----------------------------------------------------------------

def _const_text(v: Any) -> str:
    if isinstance(v, str):
        return "'" + v + "'"
    if isinstance(v, float):
        if math.isinf(v):
            return "+Inf" if v > 0 else "-Inf"
        return repr(v)
    return str(int(v))


def to_text(e: AtomicExpr) -> str:
    if isinstance(e, Var):
        return e.name
    if isinstance(e, Const):
        return _const_text(e.value)
    if isinstance(e, Lambda):
        return "(lambda " + e.fn + "".join(" " + to_text(a) for a in e.args) + ")"
    if isinstance(e, Norm):
        return f"(norm {to_text(e.arg)})"
    if isinstance(e, NormCap):
        return f"(norm' {to_text(e.arg)})"
    if isinstance(e, Member):
        return f"(member {to_text(e.arg)}" + "".join(f" {a}" for a in e.coord) + ")"
    if isinstance(e, MemberSlot):
        return f"(member' {to_text(e.arg)} {e.slot})"
    if isinstance(e, JoinLast):
        return f"(join {to_text(e.left)} {to_text(e.right)})"
    if isinstance(e, JoinList):
        return f"(join' {to_text(e.left)} {to_text(e.right)})"
    if isinstance(e, Embed):
        return f"(embed {to_text(e.arg)})"
    raise TypeError(f"not an atomic expression: {e!r}")


_TOKEN = re.compile(r"\s*(?:(\()|(\))|('.')|([^\s()]+))")


def from_text(text: str) -> AtomicExpr:
    toks: list[str] = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"bad atomic text at offset {pos}")
        toks.append(next(g for g in m.groups() if g is not None))
        pos = m.end()

    def leaf(tok: str) -> AtomicExpr:
        if tok.startswith("'"):
            return Const(tok[1])
        if tok in ("+Inf", "-Inf"):
            return Const(math.inf if tok[0] == "+" else -math.inf)
        if re.fullmatch(r"-?\d+", tok):
            return Const(int(tok))
        try:
            return Const(float(tok))
        except ValueError:
            return Var(tok)

    # recursive-descent over the token list
    i = 0

    def parse() -> AtomicExpr:
        nonlocal i
        tok = toks[i]
        i += 1
        if tok != "(":
            return leaf(tok)
        head = toks[i]
        i += 1
        args: list[AtomicExpr] = []
        ints: list[int] = []
        while toks[i] != ")":
            if head in ("member", "member'") and args and toks[i] != "(":
                ints.append(int(toks[i]))
                i += 1
                continue
            args.append(parse())
        i += 1
        if head == "lambda":
            fn = args[0]
            if not isinstance(fn, Var):
                raise ParseError("lambda needs a function name")
            return Lambda(fn.name, tuple(args[1:]))
        if head == "member":
            return Member(args[0], tuple(ints))
        if head == "member'":
            return MemberSlot(args[0], ints[0])
        unary = {"norm": Norm, "norm'": NormCap, "embed": Embed}
        if head in unary:
            return unary[head](args[0])
        binary = {"join": JoinLast, "join'": JoinList}
        if head in binary:
            return binary[head](args[0], args[1])
        raise ParseError(f"unknown atomic head {head!r}")

    try:
        out = parse()
    except IndexError:
        raise ParseError("unbalanced parentheses in atomic text") from None
    if i != len(toks):
        raise ParseError("trailing tokens in atomic text")
    return out
