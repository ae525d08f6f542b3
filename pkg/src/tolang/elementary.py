"""Basic elementary functions, elementary function expressions and their cost.

Every basic function costs one elementary operation. ``sqrt`` and ``exp``
are registered as single-cost aliases of ``pow``; ``log`` with one argument
is the natural logarithm.
"""

from __future__ import annotations

import contextlib
import contextvars
import math
from collections import Counter
from dataclasses import dataclass
from typing import Any, Callable, Mapping, Sequence

from .errors import ArityError, DomainError, UnboundPlaceholderError, UnknownFunctionError

_trace: contextvars.ContextVar[Counter | None] = contextvars.ContextVar("trace", default=None)
_free: contextvars.ContextVar[bool] = contextvars.ContextVar("free", default=False)


@contextlib.contextmanager
def tracing():
    """Count charged elementary applications made inside the block."""
    counter: Counter = Counter()
    token = _trace.set(counter)
    try:
        yield counter
    finally:
        _trace.reset(token)


@contextlib.contextmanager
def uncharged():
    token = _free.set(True)
    try:
        yield
    finally:
        _free.reset(token)


def _num(x: Any, name: str) -> Any:
    if isinstance(x, str):
        return ord(x)
    if not isinstance(x, (int, float)):
        raise DomainError(f"{name}: {x!r} is not a numeric")
    return x


def _bool(x: Any, name: str) -> int:
    x = _num(x, name)
    if x not in (0, 1):
        raise DomainError(f"{name}: {x!r} is not a boolean")
    return int(x)


def _int(x: Any, name: str) -> int:
    x = _num(x, name)
    if isinstance(x, float):
        if not x.is_integer():
            raise DomainError(f"{name}: {x!r} is not an integer")
        return int(x)
    return x


def _promote(r: Any, args: Sequence[Any]) -> Any:
    if any(isinstance(a, float) for a in args) and isinstance(r, int):
        return float(r)
    return r


def _div(a, b):
    if b == 0:
        raise DomainError("division by zero")
    return a / b


def _mod(a, b):
    a, b = _int(a, "mod"), _int(b, "mod")
    if b == 0:
        raise DomainError("mod by zero")
    return a % b


def _pow(a, b):
    if a == 0 and b < 0:
        raise DomainError("zero raised to a negative power")
    if a < 0 and isinstance(b, float) and not b.is_integer():
        raise DomainError("negative base with fractional exponent")
    if isinstance(a, int) and isinstance(b, int) and not isinstance(b, bool) and b >= 0:
        return a ** b
    return float(a) ** float(b)


def _log(*args):
    if len(args) == 1:
        base, x = math.e, args[0]
    else:
        base, x = args
    if x <= 0 or base <= 0 or base == 1:
        raise DomainError(f"log undefined for base={base!r}, x={x!r}")
    return math.log(x) if base == math.e else math.log(x, base)


def _checked(fn: Callable, lo=None, hi=None, open_lo=False, open_hi=False):
    def impl(x):
        if lo is not None and (x < lo or (open_lo and x == lo)):
            raise DomainError(f"{fn.__name__}({x!r}) out of domain")
        if hi is not None and (x > hi or (open_hi and x == hi)):
            raise DomainError(f"{fn.__name__}({x!r}) out of domain")
        return fn(x)
    return impl


def _sgn(x):
    return (x > 0) - (x < 0)


def _rand(x, *, draw: Callable[[], float] | None = None):
    if x <= 0:
        raise DomainError(f"rand({x!r}): bound must be positive")
    if draw is None:
        from .rng import seeded_rand
        return seeded_rand(0, "", (), x)
    u = draw()
    if isinstance(x, int):
        return 1 + min(int(u * x), x - 1)
    return u * x


@dataclass(frozen=True)
class ElementaryFn:
    name: str
    arity: int | tuple[int, int]
    domain: str
    impl: Callable[..., Any]
    kind: str = "num"  # num | bool | cmp | rand
    eops_cost: int = 1

    def accepts(self, n: int) -> bool:
        if isinstance(self.arity, tuple):
            return self.arity[0] <= n <= self.arity[1]
        return n == self.arity

    def __call__(self, *args: Any, draw: Callable[[], float] | None = None) -> Any:
        if not self.accepts(len(args)):
            raise ArityError(f"{self.name} expects {self.arity} argument(s), got {len(args)}")
        trace = _trace.get()
        if trace is not None and not _free.get():
            trace[self.name] += 1
        if self.kind == "bool":
            return self.impl(*(_bool(a, self.name) for a in args))
        vals = [_num(a, self.name) for a in args]
        if self.kind == "cmp":
            return int(self.impl(*vals))
        if self.kind == "rand":
            return _rand(vals[0], draw=draw)
        try:
            r = self.impl(*vals)
        except (ValueError, OverflowError, ZeroDivisionError) as e:
            raise DomainError(f"{self.name}{tuple(vals)}: {e}") from None
        if isinstance(r, complex):
            raise DomainError(f"{self.name}{tuple(vals)} is complex")
        if isinstance(r, float):
            if math.isnan(r):
                raise DomainError(f"{self.name}{tuple(vals)} is NaN")
            if math.isinf(r) and not any(isinstance(v, float) and math.isinf(v) for v in vals):
                raise DomainError(f"{self.name}{tuple(vals)} overflows")
        return _promote(r, vals)


def _reg(*fns: ElementaryFn) -> dict[str, ElementaryFn]:
    return {f.name: f for f in fns}


REGISTRY: Mapping[str, ElementaryFn] = _reg(
    ElementaryFn("add", 2, "C", lambda a, b: a + b),
    ElementaryFn("sub", 2, "C", lambda a, b: a - b),
    ElementaryFn("mul", 2, "C", lambda a, b: a * b),
    ElementaryFn("div", 2, "C", _div),
    ElementaryFn("mod", 2, "Z", _mod),
    ElementaryFn("pow", 2, "R", _pow),
    ElementaryFn("log", (1, 2), "R", _log),
    ElementaryFn("and", 2, "B", lambda a, b: a & b, "bool"),
    ElementaryFn("or", 2, "B", lambda a, b: a | b, "bool"),
    ElementaryFn("xor", 2, "B", lambda a, b: a ^ b, "bool"),
    ElementaryFn("not", 1, "B", lambda a: 1 - a, "bool"),
    ElementaryFn("lt", 2, "R", lambda a, b: a < b, "cmp"),
    ElementaryFn("gt", 2, "R", lambda a, b: a > b, "cmp"),
    ElementaryFn("eq", 2, "R", lambda a, b: a == b, "cmp"),
    ElementaryFn("le", 2, "R", lambda a, b: a <= b, "cmp"),
    ElementaryFn("ge", 2, "R", lambda a, b: a >= b, "cmp"),
    ElementaryFn("ineq", 2, "R", lambda a, b: a != b, "cmp"),
    ElementaryFn("max", 2, "R", lambda a, b: a if a >= b else b),
    ElementaryFn("min", 2, "R", lambda a, b: a if a <= b else b),
    ElementaryFn("sgn", 1, "R", _sgn),
    ElementaryFn("sin", 1, "R", math.sin),
    ElementaryFn("cos", 1, "R", math.cos),
    ElementaryFn("tan", 1, "R", math.tan),
    ElementaryFn("asin", 1, "R", _checked(math.asin, -1, 1)),
    ElementaryFn("acos", 1, "R", _checked(math.acos, -1, 1)),
    ElementaryFn("atan", 1, "R", math.atan),
    ElementaryFn("sinh", 1, "R", math.sinh),
    ElementaryFn("cosh", 1, "R", math.cosh),
    ElementaryFn("tanh", 1, "R", math.tanh),
    ElementaryFn("asinh", 1, "R", math.asinh),
    ElementaryFn("acosh", 1, "R", _checked(math.acosh, 1)),
    ElementaryFn("atanh", 1, "R", _checked(math.atanh, -1, 1, True, True)),
    ElementaryFn("rand", 1, "R", _rand, "rand"),
    # aliases used throughout the operator listings
    ElementaryFn("sqrt", 1, "R", _checked(math.sqrt, 0)),
    ElementaryFn("exp", 1, "R", math.exp),
)

TABLE_FUNCTIONS = tuple(n for n in REGISTRY if n not in ("sqrt", "exp"))

# infix sugar; symbols keep their mathematical meaning
INFIX = {"+": "add", "-": "sub", "*": "mul", "/": "div", "%": "mod", "^": "pow",
         "<": "lt", ">": "gt", "==": "eq", "<=": "le", ">=": "ge", "!=": "ineq"}


def lookup(name: str) -> ElementaryFn:
    try:
        return REGISTRY[name]
    except KeyError:
        raise UnknownFunctionError(f"unknown elementary function {name!r}") from None


# -- elementary function expressions -----------------------------------------

class FnExpr:
    """Finite composition tree of basic functions over placeholders and constants."""


@dataclass(frozen=True)
class Star(FnExpr):
    pass


@dataclass(frozen=True)
class Const(FnExpr):
    value: Any


@dataclass(frozen=True)
class Ref(FnExpr):
    """A named binding: a coordinate name or an environment constant."""
    name: str


@dataclass(frozen=True)
class Apply(FnExpr):
    fn: str
    args: tuple[FnExpr, ...]

    def __init__(self, fn: str, *args: Any):
        object.__setattr__(self, "fn", fn)
        object.__setattr__(self, "args", tuple(
            a if isinstance(a, FnExpr) else (Ref(a) if isinstance(a, str) else Const(a))
            for a in args))


STAR = Star()


def fn(name: str) -> FnExpr:
    """A bare function name used as a unary map function: ``f`` means ``f(*)``."""
    return Apply(name, STAR)


def eval_fnexpr(f: FnExpr, element: Any = None, coord: Sequence[int] = (),
                env: Mapping[str, Any] | None = None,
                draw: Callable[[], float] | None = None) -> Any:
    env = env or {}
    if isinstance(f, Star):
        if element is None:
            raise UnboundPlaceholderError("'*' has no element bound")
        return element
    if isinstance(f, Const):
        return f.value
    if isinstance(f, Ref):
        if f.name in env:
            return env[f.name]
        raise UnboundPlaceholderError(f"placeholder {f.name!r} is unbound")
    if isinstance(f, Apply):
        args = [eval_fnexpr(a, element, coord, env, draw) for a in f.args]
        return lookup(f.fn)(*args, draw=draw)
    raise TypeError(f"not a function expression: {f!r}")


def eops_of_fnexpr(f: FnExpr) -> int:
    if isinstance(f, Apply):
        return lookup(f.fn).eops_cost + sum(eops_of_fnexpr(a) for a in f.args)
    return 0


def compose(f: FnExpr, g: FnExpr) -> FnExpr:
    """Substitute ``g`` for every ``*`` in ``f``."""
    if isinstance(f, Star):
        return g
    if isinstance(f, Apply):
        return Apply(f.fn, *(compose(a, g) for a in f.args))
    return f
