"""AST node classes. Spans are excluded from equality so round trips compare structure."""

from __future__ import annotations

from dataclasses import dataclass, field, fields
from typing import Any, Iterator, Optional


@dataclass(frozen=True)
class Span:
    line: int
    col: int
    length: int


NOSPAN = Span(0, 0, 0)


def _span() -> Any:
    return field(default=NOSPAN, compare=False, repr=False, kw_only=True)


class Node:
    span: Span

    def children(self) -> Iterator["Node"]:
        for f in fields(self):  # type: ignore[arg-type]
            v = getattr(self, f.name)
            if isinstance(v, Node):
                yield v
            elif isinstance(v, tuple):
                for x in v:
                    if isinstance(x, Node):
                        yield x

    def walk(self) -> Iterator["Node"]:
        yield self
        for c in self.children():
            yield from c.walk()


# -- type expressions ---------------------------------------------------------

@dataclass(frozen=True)
class TypeName(Node):
    name: str  # a predefined space id or a declared space/list name
    span: Span = _span()


@dataclass(frozen=True)
class TypeGroup(Node):
    items: tuple[Node, ...]
    span: Span = _span()


@dataclass(frozen=True)
class TypeSeq(Node):
    """Comma-separated type items, concatenated in order."""
    items: tuple[Node, ...]
    span: Span = _span()


# -- expressions --------------------------------------------------------------

@dataclass(frozen=True)
class Num(Node):
    value: int | float
    span: Span = _span()


@dataclass(frozen=True)
class CharLit(Node):
    value: str
    span: Span = _span()


@dataclass(frozen=True)
class InfLit(Node):
    sign: int  # +1 or -1
    span: Span = _span()


@dataclass(frozen=True)
class Star(Node):
    span: Span = _span()


@dataclass(frozen=True)
class EllipsisLit(Node):
    span: Span = _span()


@dataclass(frozen=True)
class Ref(Node):
    name: str
    span: Span = _span()


@dataclass(frozen=True)
class Binary(Node):
    op: str  # infix symbol
    left: Node
    right: Node
    span: Span = _span()


@dataclass(frozen=True)
class Neg(Node):
    operand: Node
    span: Span = _span()


@dataclass(frozen=True)
class Call(Node):
    name: str  # may end with a prime, e.g. part'
    args: tuple[Node, ...]
    span: Span = _span()


@dataclass(frozen=True)
class Chain(Node):
    names: tuple[str, ...]
    args: tuple[Node, ...]
    span: Span = _span()


@dataclass(frozen=True)
class Index(Node):
    base: Node
    args: tuple[Node, ...]
    span: Span = _span()


@dataclass(frozen=True)
class NormBars(Node):
    operand: Node
    depth: int  # 1 for |x|, 2 for ||x||
    span: Span = _span()


@dataclass(frozen=True)
class Prime(Node):
    operand: Node
    span: Span = _span()


@dataclass(frozen=True)
class Bracket(Node):
    items: tuple[Node, ...]
    span: Span = _span()


@dataclass(frozen=True)
class Tuple(Node):
    """A list cell literal such as (1, 'a')."""
    items: tuple[Node, ...]
    span: Span = _span()


@dataclass(frozen=True)
class ConstTol(Node):
    shape: Node  # a Bracket or NormBars giving the shape
    span: Span = _span()


@dataclass(frozen=True)
class TypeArg(Node):
    """A type list written in argument position, e.g. the target of convert."""
    types: Node
    span: Span = _span()


# -- statements ---------------------------------------------------------------

@dataclass(frozen=True)
class SpaceDecl(Node):
    name: str
    space: TypeName
    bounds: Optional[tuple[Node, Node]]
    span: Span = _span()


@dataclass(frozen=True)
class ListDecl(Node):
    name: str
    types: Node
    span: Span = _span()


@dataclass(frozen=True)
class TolDecl(Node):
    """``tol x: T [dims]`` (an input) or ``tol x = shape`` (a zero template)."""
    name: str
    types: Optional[Node]
    dims: Optional[tuple[Node, ...]]
    init: Optional[Node]
    span: Span = _span()


@dataclass(frozen=True)
class Def(Node):
    name: str
    params: Optional[tuple[str, ...]]
    body: Node
    output: bool  # True for ``:=``
    span: Span = _span()


@dataclass(frozen=True)
class Program(Node):
    statements: tuple[Node, ...]
    span: Span = _span()


STATEMENTS = (SpaceDecl, ListDecl, TolDecl, Def)
