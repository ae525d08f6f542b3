"""Tree-walking evaluator with EOPs accounting.

Scoping is dynamic: a definition body sees its parameters, then the frames
of its callers (map iterations, enclosing calls), then the globals. This is
what lets ``bn(in)`` in a chain read ``mean`` computed from its own ``in``.

Cost rules. Every application of a basic elementary function costs one,
except applications that sit in an index or shape position (index
brackets, part/swap/reshape arguments, tol shapes) and applications whose
operands are all static (derived only from scalar literals, attributes,
coordinates and shapes; a vector literal such as ``[1,2,3]`` outside an
index position is data and is charged). Structural operators cost nothing beyond their arguments. A
parameterized definition called again with the same static arguments is
served from a memo at no cost; ``memo=False`` turns that off.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Any, Mapping, Optional, Sequence

from . import atomic as X
from . import ops
from .core import (
    ToLValue,
    TypeList,
    TypeSpace,
    atomic_join_list,
    atomic_member,
    coords,
    is_symbolic,
    make,
    scalar,
    zeros,
)
from .elementary import INFIX, REGISTRY, lookup, tracing, uncharged
from .errors import (
    ArityError,
    DomainError,
    MissingInputError,
    NoOutputError,
    ShapeMismatchError,
    StarOutsideIteratorError,
    StaticError,
    TypeListMismatchError,
    UnboundNameError,
    UnknownFunctionError,
    UnsupportedLoweringError,
)
from .frontend import ast as A
from .frontend.parser import parse
from .frontend.resolve import BUILTINS, Resolution, resolve
from .rng import uniform

VOL_NOTE = ("traversal multiplier N = product(dims) x capacity (vol applied once; "
            "identical to vol x capacity for capacity-1 values)")


@dataclass(frozen=True)
class FuncRef:
    name: str


Value = Any  # ToLValue | FuncRef | TypeList


@dataclass(eq=False)
class Frame:
    vars: dict[str, Value]
    parent: Optional["Frame"]
    serial: int
    star: Optional[tuple[ToLValue, tuple[int, ...]]] = None


@dataclass(frozen=True)
class Ctx:
    frame: Optional[Frame] = None
    index: bool = False  # uncharged index/shape position
    star_coord: bool = False  # '*' stands for the coordinate, not the element


@dataclass
class EopsReport:
    total: int = 0
    per_binding: dict[str, int] = field(default_factory=dict)
    per_operator: dict[str, int] = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)
    total_no_memo: int = 0
    traced: int = 0

    def to_json(self) -> dict:
        out: dict[str, Any] = {
            "total": self.total,
            "per_binding": dict(self.per_binding),
            "per_operator": dict(sorted(self.per_operator.items())),
            "notes": list(self.notes),
        }
        if self.total_no_memo != self.total:
            out["total_no_memo"] = self.total_no_memo
        return out


@dataclass
class _Memo:
    value: Value
    cost: int
    nomemo_cost: int


def _key_of(v: Value) -> Any:
    if isinstance(v, ToLValue):
        return ("v", v.shape, v.data)
    if isinstance(v, TypeList):
        return ("t", v.ids)
    return ("f", v.name)


def _is_static(v: Value) -> bool:
    return not isinstance(v, ToLValue) or v.static


def _literal(n: A.Node) -> bool:
    """A vector literal written as data, like ``[1,2,3]`` or ``[(1,'a'),(2,'b')]``."""
    if isinstance(n, (A.Num, A.CharLit, A.InfLit)):
        return True
    if isinstance(n, A.Neg):
        return _literal(n.operand)
    if isinstance(n, (A.Bracket, A.Tuple)):
        return all(_literal(i) for i in n.items)
    return False


def _coord_value(c: Sequence[int]) -> ToLValue:
    return make(tuple((x,) for x in c), (len(c),), static=True) if c else scalar(0, True)


def _iter_bound(node: Optional[A.Node]) -> set[str]:
    if isinstance(node, A.Ref):
        return {node.name}
    if isinstance(node, A.Bracket):
        return {i.name for i in node.items if isinstance(i, A.Ref)}
    return set()


def _free_names(body: A.Node, bound: frozenset[str] = frozenset()) -> set[str]:
    """Names a body reads from outside; ``*`` and iterator names bound by a
    map or reduce inside the body are not free."""
    out: set[str] = set()

    def visit(n: A.Node, bound: frozenset[str]) -> None:
        if isinstance(n, A.Star):
            if "*" not in bound:
                out.add("*")
        elif isinstance(n, A.Ref):
            if n.name not in bound:
                out.add(n.name)
        elif isinstance(n, A.Call) and n.name in ("map", "reduce") and n.name not in bound:
            it = 2 if n.name == "map" else 3
            inner = bound | {"*", "iter"} | _iter_bound(n.args[it] if len(n.args) > it else None)
            for i, a in enumerate(n.args):
                if i == 1:
                    visit(a, inner)
                elif i != it:
                    visit(a, bound)
        elif isinstance(n, A.Call):
            if n.name.rstrip("'") not in bound:
                out.add(n.name.rstrip("'"))
            for a in n.args:
                visit(a, bound)
        elif isinstance(n, A.Chain):
            out.update(x for x in n.names if x not in bound)
            for a in n.args:
                visit(a, bound)
        else:
            for c in n.children():
                visit(c, bound)

    visit(body, bound)
    return out


class Interpreter:
    def __init__(self, program: A.Program, inputs: Mapping[str, ToLValue] | None = None,
                 attrs: Mapping[str, Any] | None = None, seed: int = 0, memo: bool = True,
                 symbolic: bool = False, resolution: Resolution | None = None):
        self.program = program
        self.resolution = resolution or resolve(program)
        self.inputs = {k: self._input_value(v, static=False) for k, v in (inputs or {}).items()}
        for k, v in (attrs or {}).items():
            self.inputs[k] = self._input_value(v, static=True)
        self.seed = seed
        self.memo_on = memo
        self.symbolic = symbolic
        self.env: dict[str, tuple[str, Any]] = {}
        self.spaces: dict[str, TypeSpace] = {}
        self.lists: dict[str, TypeList] = {}
        self.memo: dict[Any, _Memo] = {}
        self.nomemo_extra = 0
        self.binding = ""
        self.op_stack: list[str] = []
        self.per_operator: Counter = Counter()
        self.notes: list[str] = []
        self._serial = itertools.count(1)
        self._free_cache: dict[int, frozenset[str]] = {}
        self._rand_cache: dict[int, bool] = {}

    @staticmethod
    def _input_value(v: Any, static: bool) -> Value:
        if isinstance(v, (TypeList, FuncRef)):
            return v
        if not isinstance(v, ToLValue):
            from .core import tol
            v = tol(v)
        if v.origin is None and not any(is_symbolic(x) for lst in v.data for x in lst):
            # store every member in the form its space prescribes (2 -> 2.0 under R)
            v = ops.op_convert(v, v.type_list)
        return ToLValue(v.type_list, v.shape, v.data, static, v.origin)

    # -- program --------------------------------------------------------------

    def run(self) -> tuple[dict[str, Value], EopsReport]:
        declared = {s.name for s in self.program.statements if isinstance(s, A.TolDecl)}
        missing = [n for n in self.resolution.inputs if n not in self.inputs]
        if missing:
            raise MissingInputError("missing input binding(s): " + ", ".join(missing))
        for name, v in self.inputs.items():
            if name not in declared:
                self.env[name] = ("value", v)
        per_binding: dict[str, int] = {}
        outputs: dict[str, Value] = {}
        with tracing() as trace:
            for stmt in self.program.statements:
                self.exec(stmt, per_binding, outputs)
        if not outputs:
            raise NoOutputError("the program has no ':=' binding to evaluate")
        total = sum(per_binding.values())
        report = EopsReport(total=total, per_binding=per_binding,
                            per_operator=dict(self.per_operator),
                            notes=[VOL_NOTE] + self.notes,
                            total_no_memo=total + self.nomemo_extra,
                            traced=sum(trace.values()))
        return outputs, report

    def result_name(self, outputs: Mapping[str, Value]) -> str:
        return "result" if "result" in outputs else list(outputs)[-1]

    def exec(self, s: A.Node, per_binding: dict[str, int], outputs: dict[str, Value]) -> None:
        if isinstance(s, A.SpaceDecl):
            base = self._space(s.space.name)
            bounds = None
            if s.bounds:
                lo = self._number(s.bounds[0])
                hi = self._number(s.bounds[1])
                bounds = (lo, hi)
            self.spaces[s.name] = TypeSpace(base.id, bounds)
        elif isinstance(s, A.ListDecl):
            self.lists[s.name] = self.type_list(s.types)
        elif isinstance(s, A.TolDecl):
            self.env[s.name] = ("value", self.tol_decl(s))
        elif isinstance(s, A.Def):
            if s.params is not None:
                self.env[s.name] = ("func", s)
            elif not s.output:
                self.env[s.name] = ("lazy", s)
            else:
                self.binding = s.name
                try:
                    v, cost = self.eval(s.body, Ctx())
                except DomainError as e:
                    raise DomainError(f"in binding {s.name!r}: {e}") from None
                per_binding[s.name] = per_binding.get(s.name, 0) + cost
                self.env[s.name] = ("value", v)
                outputs[s.name] = v

    def _number(self, node: A.Node) -> Any:
        v, _ = self.eval(node, Ctx(index=True))
        return v.scalar

    def _space(self, name: str) -> TypeSpace:
        if name in self.spaces:
            return self.spaces[name]
        return TypeSpace(name)

    def type_list(self, t: A.Node) -> TypeList:
        if isinstance(t, A.TypeName):
            if t.name in self.lists:
                return self.lists[t.name]
            return TypeList((self._space(t.name),))
        parts = [self.type_list(i) for i in t.items]  # type: ignore[attr-defined]
        out = parts[0]
        for p in parts[1:]:
            out = out + p
        return out

    def tol_decl(self, s: A.TolDecl) -> ToLValue:
        if s.init is not None:
            shape = self.shape_of(s.init, Ctx(index=True))
            if s.name in self.inputs:
                v = self.inputs[s.name]
                if not isinstance(v, ToLValue) or v.shape != tuple(shape):
                    got = list(v.shape) if isinstance(v, ToLValue) else v
                    raise ShapeMismatchError(
                        f"input {s.name!r} has shape {got}, declared {list(shape)}")
                return v
            if shape is None:
                raise ShapeMismatchError(f"tol {s.name} has an empty shape")
            return zeros(shape)
        tl = self.type_list(s.types)  # type: ignore[arg-type]
        dims = tuple(self.index_ints(list(s.dims), Ctx(index=True), False)) if s.dims else ()
        if s.name not in self.inputs:
            raise MissingInputError(f"missing input binding for {s.name!r}")
        v = self.inputs[s.name]
        if not isinstance(v, ToLValue) or v.shape != dims:
            got = list(v.shape) if isinstance(v, ToLValue) else v
            raise ShapeMismatchError(f"input {s.name!r} has shape {got}, declared {list(dims)}")
        if v.capacity != tl.capacity:
            raise TypeListMismatchError(
                f"input {s.name!r} has capacity {v.capacity}, declared {tl}")
        if self.symbolic:
            return ToLValue(tl, v.shape, v.data, v.static, v.origin)
        cast = ops.op_convert(v, tl)
        return ToLValue(cast.type_list, cast.shape, cast.data, v.static, v.origin)

    # -- names ----------------------------------------------------------------

    def _frame_lookup(self, name: str, frame: Optional[Frame]) -> Optional[tuple[Value, Frame]]:
        f = frame
        while f is not None:
            if name in f.vars:
                return f.vars[name], f
            f = f.parent
        return None

    def _where(self, ctx: Ctx, shape: tuple[int, ...], i: int) -> str:
        """Coordinate of a failing application, for error messages."""
        if shape:
            return "at coordinate " + str(list(next(itertools.islice(coords(shape), i, None))))
        sf = self._star_frame(ctx.frame)
        if sf is not None:
            return "at coordinate " + str(list(sf.star[1]))
        return "at the scalar"

    def _star_frame(self, frame: Optional[Frame]) -> Optional[Frame]:
        f = frame
        while f is not None:
            if f.star is not None:
                return f
            f = f.parent
        return None

    def resolve_name(self, name: str, ctx: Ctx) -> tuple[Value, int]:
        hit = self._frame_lookup(name, ctx.frame)
        if hit is not None:
            return hit[0], 0
        entry = self.env.get(name)
        if entry is not None:
            kind, obj = entry
            if kind == "value":
                return obj, 0
            if kind == "lazy":
                return self.force_lazy(obj, ctx)
            return FuncRef(name), 0
        if name == "iter":
            sf = self._star_frame(ctx.frame)
            if sf is None:
                raise StarOutsideIteratorError("'iter' used outside a map or reduce")
            return _coord_value(sf.star[1]), 0  # type: ignore[index]
        if name in REGISTRY or name in BUILTINS:
            return FuncRef(name), 0
        raise UnboundNameError(f"unbound name {name!r}")

    def _free_closure(self, d: A.Def) -> frozenset[str]:
        key = id(d)
        if key in self._free_cache:
            return self._free_cache[key]
        self._free_cache[key] = frozenset()  # cycle guard
        names = _free_names(d.body, frozenset(d.params or ()))
        closure = set(names)
        for n in names:
            entry = self.env.get(n)
            if entry is not None and entry[0] in ("lazy", "func"):
                closure |= self._free_closure(entry[1])
        result = frozenset(closure)
        self._free_cache[key] = result
        return result

    def _uses_rand(self, d: A.Def) -> bool:
        key = id(d)
        if key not in self._rand_cache:
            self._rand_cache[key] = False
            found = any(isinstance(n, A.Call) and n.name == "rand" for n in d.body.walk())
            if not found:
                for n in _free_names(d.body):
                    entry = self.env.get(n)
                    if entry is not None and entry[0] in ("lazy", "func") and \
                            self._uses_rand(entry[1]):
                        found = True
                        break
            self._rand_cache[key] = found
        return self._rand_cache[key]

    def _scope_key(self, d: A.Def, frame: Optional[Frame]) -> tuple:
        """Where each free name of ``d`` is bound right now."""
        parts = []
        for n in sorted(self._free_closure(d)):
            if n in ("*", "iter"):
                sf = self._star_frame(frame)
                parts.append((n, sf.serial if sf else 0))
                continue
            hit = self._frame_lookup(n, frame)
            if hit is not None:
                parts.append((n, hit[1].serial))
            elif n in self.env:
                parts.append((n, id(self.env[n])))
        return tuple(parts)

    def _memoized(self, key: Any, compute) -> tuple[Value, int]:
        if key is not None and self.memo_on:
            hit = self.memo.get(key)
            if hit is not None:
                self.nomemo_extra += hit.nomemo_cost
                return hit.value, 0
        before = self.nomemo_extra
        value, cost = compute()
        if key is not None and self.memo_on:
            self.memo[key] = _Memo(value, cost, cost + self.nomemo_extra - before)
        return value, cost

    def force_lazy(self, d: A.Def, ctx: Ctx) -> tuple[Value, int]:
        key = None
        if not self._uses_rand(d):
            key = ("lazy", id(d), self._scope_key(d, ctx.frame))
        inner = Ctx(ctx.frame, index=ctx.index)
        return self._memoized(key, lambda: self.eval(d.body, inner))

    def call_def(self, d: A.Def, args: list[Value], ctx: Ctx) -> tuple[Value, int]:
        params = d.params or ()
        if len(args) > len(params):
            raise ArityError(f"{d.name} takes {len(params)} argument(s), got {len(args)}")
        frame = Frame(dict(zip(params, args)), ctx.frame, next(self._serial))
        key = None
        if all(_is_static(a) for a in args) and not self._uses_rand(d):
            key = ("def", id(d), tuple(_key_of(a) for a in args),
                   self._scope_key(d, ctx.frame))
        inner = Ctx(frame, index=ctx.index)
        return self._memoized(key, lambda: self.eval(d.body, inner))

    # -- elementary functions ---------------------------------------------------

    def _op_kind(self) -> str:
        return self.op_stack[-1] if self.op_stack else "function"

    def _draw_site(self, ctx: Ctx, node: A.Node) -> tuple:
        path: list[int] = []
        f = ctx.frame
        chain = []
        while f is not None:
            if f.star is not None:
                chain.append(f.star[1])
            f = f.parent
        for c in reversed(chain):
            path.extend(c)
            path.append(0)
        return tuple(path) + (node.span.line, node.span.col)

    def elementwise(self, name: str, vals: Sequence[Value], ctx: Ctx,
                    node: A.Node) -> tuple[ToLValue, int]:
        fn = lookup(name)
        if not fn.accepts(len(vals)):
            raise ArityError(f"{name} does not take {len(vals)} argument(s)")
        for v in vals:
            if not isinstance(v, ToLValue):
                raise TypeListMismatchError(f"{name} needs numeric arguments, got a function")
        shaped = [v for v in vals if not v.is_numeric]
        shape: tuple[int, ...] = ()
        cap = 1
        if shaped:
            shape, cap = shaped[0].shape, shaped[0].capacity
            for v in shaped[1:]:
                if v.shape != shape or v.capacity != cap:
                    raise ShapeMismatchError(
                        f"{name}: operand shapes differ: {list(v.shape)} vs {list(shape)}")
        if self.symbolic and fn.kind == "rand" and not ctx.index:
            raise UnsupportedLoweringError("rand cannot be lowered to a fixed tree")
        # rand is never folded: each draw is charged like any other application
        static = fn.kind != "rand" and all(v.static for v in vals)
        charged = not (ctx.index or static)
        site = None
        cost = 0
        cells = []
        n = len(shaped[0].data) if shaped else 1
        for i in range(n):
            cell = []
            for j in range(cap):
                args = [v.data[0][0] if v.is_numeric else v.data[i][j] for v in vals]
                if any(is_symbolic(a) for a in args):
                    cell.append(X.Lambda(name, tuple(X.as_expr(a) for a in args)))
                    cost += 1
                    continue
                draw = None
                if fn.kind == "rand":
                    if site is None:
                        site = self._draw_site(ctx, node)
                    here = site + (i, j)
                    draw = lambda here=here: uniform(self.seed, self.binding, here)  # noqa: E731
                try:
                    if charged:
                        r = fn(*args, draw=draw)
                        cost += 1
                        self.per_operator[self._op_kind()] += 1
                    else:
                        with uncharged():
                            r = fn(*args, draw=draw)
                except DomainError as e:
                    raise DomainError(f"{e} {self._where(ctx, shape, i)}") from None
                cell.append(r)
            cells.append(tuple(cell))
        out = make(tuple(cells), shape, static=static)
        return out, (cost if charged or self.symbolic else 0)

    def _coerce_bars(self, node: A.Node, v: Value) -> Value:
        """``|v|`` of a 1-D value used as a number means ``|v|[1]``."""
        if isinstance(node, A.NormBars) and node.depth == 1 and isinstance(v, ToLValue) \
                and v.shape == (1,):
            note = f"line {node.span.line}: |v| of a vector used as a number, read as |v|[1]"
            if note not in self.notes:
                self.notes.append(note)
            return v.with_(shape=())
        return v

    def apply_function(self, f: Value, args: list[Value], ctx: Ctx,
                       node: A.Node) -> tuple[Value, int]:
        if not isinstance(f, FuncRef):
            raise UnknownFunctionError("expected a function")
        entry = self.env.get(f.name)
        if entry is not None and entry[0] == "func":
            return self.call_def(entry[1], args, ctx)
        if f.name in REGISTRY:
            return self.elementwise(f.name, args, ctx, node)
        if f.name in ("shape", "dim", "capacity", "vol", "tile") and len(args) == 1:
            return self._structural(f.name, args[0]), 0
        raise UnknownFunctionError(f"{f.name!r} cannot be applied here")

    def _structural(self, name: str, v: ToLValue) -> Value:
        if name == "shape":
            r = ops.op_shape(v)
            return r if v.origin is None else ToLValue(r.type_list, r.shape, r.data, True,
                                                       X.Norm(v.origin))
        if name == "dim":
            return scalar(ops.op_dim(v), True)
        if name == "capacity":
            return scalar(ops.op_capacity(v), True)
        if name == "vol":
            return scalar(ops.op_vol(v), True)
        return ops.op_tile(v)

    # -- index helpers ----------------------------------------------------------

    def index_ints(self, nodes: list[A.Node], ctx: Ctx, star_coord: bool = True) -> list[int]:
        """Integers of an index position; inside brackets ``*`` is the coordinate."""
        out: list[int] = []
        ictx = Ctx(ctx.frame, index=True, star_coord=star_coord)
        for n in nodes:
            v, _ = self.eval(n, ictx)
            out.extend(self._ints(v))
        return out

    def _ints(self, v: Value) -> list[int]:
        if not isinstance(v, ToLValue):
            raise TypeListMismatchError("expected integers in an index or shape position")
        out = []
        for x in v.numerics():
            if is_symbolic(x):
                raise UnsupportedLoweringError(
                    "an index or shape depends on input data; lowering needs concrete indices")
            if isinstance(x, str):
                raise TypeListMismatchError("a character cannot be an index")
            if isinstance(x, float):
                if math.isinf(x) or math.isnan(x):
                    raise DomainError(f"{x!r} cannot be an index")
                x = math.floor(x)
            out.append(int(x))
        return out

    def shape_of(self, node: A.Node, ctx: Ctx) -> Optional[tuple[int, ...]]:
        v, _ = self.eval(node, Ctx(ctx.frame, index=True, star_coord=ctx.star_coord))
        dims = tuple(self._ints(v))
        if any(d < 0 for d in dims):
            raise ShapeMismatchError(f"negative extent in shape {list(dims)}")
        if any(d == 0 for d in dims):
            return None
        return dims

    # -- expressions ------------------------------------------------------------

    def eval(self, n: A.Node, ctx: Ctx) -> tuple[Value, int]:
        method = getattr(self, "eval_" + type(n).__name__, None)
        if method is None:
            raise StaticError(f"{type(n).__name__} cannot be evaluated")
        return method(n, ctx)

    def eval_Num(self, n: A.Num, ctx: Ctx):
        return scalar(n.value, True), 0

    def eval_CharLit(self, n: A.CharLit, ctx: Ctx):
        return scalar(n.value, True), 0

    def eval_InfLit(self, n: A.InfLit, ctx: Ctx):
        return scalar(math.inf if n.sign > 0 else -math.inf, True), 0

    def eval_EllipsisLit(self, n: A.EllipsisLit, ctx: Ctx):
        raise StaticError(f"line {n.span.line}: '...' is notation only and cannot be evaluated")

    def eval_Star(self, n: A.Star, ctx: Ctx):
        sf = self._star_frame(ctx.frame)
        if sf is None:
            raise StarOutsideIteratorError("'*' used outside a map or reduce")
        elem, c = sf.star  # type: ignore[misc]
        if ctx.star_coord:
            return _coord_value(c), 0
        return elem, 0

    def eval_Ref(self, n: A.Ref, ctx: Ctx):
        return self.resolve_name(n.name, ctx)

    def eval_TypeArg(self, n: A.TypeArg, ctx: Ctx):
        return self.type_list(n.types), 0

    def eval_Binary(self, n: A.Binary, ctx: Ctx):
        lv, lc = self.eval(n.left, ctx)
        rv, rc = self.eval(n.right, ctx)
        lv, rv = self._coerce_bars(n.left, lv), self._coerce_bars(n.right, rv)
        v, c = self.elementwise(INFIX[n.op], [lv, rv], ctx, n)
        return v, lc + rc + c

    def eval_Neg(self, n: A.Neg, ctx: Ctx):
        v, c = self.eval(n.operand, ctx)
        v = self._coerce_bars(n.operand, v)
        r, c2 = self.elementwise("sub", [scalar(0, True), v], ctx, n)
        return r, c + c2

    def eval_NormBars(self, n: A.NormBars, ctx: Ctx):
        v, c = self.eval(n.operand, Ctx(ctx.frame, ctx.index, ctx.star_coord))
        if not isinstance(v, ToLValue):
            raise TypeListMismatchError("|.| needs a ToL")
        if n.depth == 2:
            return self._structural("dim", v), c
        return self._structural("shape", v), c

    def eval_Prime(self, n: A.Prime, ctx: Ctx):
        inner = n.operand
        if isinstance(inner, A.NormBars) and inner.depth == 1:
            v, c = self.eval(inner.operand, ctx)
            return self._structural("capacity", v), c
        if isinstance(inner, A.Index) and len(inner.args) == 1:
            base, c = self.eval(inner.base, ctx)
            j = self.index_ints([inner.args[0]], ctx)
            if len(j) != 1:
                raise TypeListMismatchError("a slot index is a single integer")
            return ops.op_part_slot(base, j[0]), c
        raise StaticError(f"line {n.span.line}: a prime follows |x| or x[j]")

    def eval_Index(self, n: A.Index, ctx: Ctx):
        base, c = self.eval(n.base, ctx)
        return self._index(base, list(n.args), ctx), c

    def _index(self, base: Value, args: list[A.Node], ctx: Ctx) -> ToLValue:
        if not isinstance(base, ToLValue):
            raise TypeListMismatchError("only a ToL can be indexed")
        coord = self.index_ints(args, ctx)
        return ops.op_part(base, coord)

    def eval_Bracket(self, n: A.Bracket, ctx: Ctx):
        vals, cost = [], 0
        for item in n.items:
            v, c = self.eval(item, ctx)
            cost += c
            if v is not None and not isinstance(v, ToLValue):
                raise TypeListMismatchError("bracket items must be ToLs")
            vals.append(v)
        concat = any(isinstance(i, A.ConstTol) for i in n.items)
        out = ops.op_bracket(vals, concat=concat)
        if out is not None and out.static and not ctx.index and _literal(n):
            out = ToLValue(out.type_list, out.shape, out.data, False, out.origin)
        return out, cost

    def eval_Tuple(self, n: A.Tuple, ctx: Ctx):
        vals, cost = [], 0
        for item in n.items:
            v, c = self.eval(item, ctx)
            cost += c
            vals.append(v)
        out = vals[0]
        for v in vals[1:]:
            out = atomic_join_list(out, v)
        return out, cost

    def eval_ConstTol(self, n: A.ConstTol, ctx: Ctx):
        shape = self.shape_of(n.shape, ctx)
        if shape is None:
            return None, 0
        return zeros(shape), 0

    def eval_Chain(self, n: A.Chain, ctx: Ctx):
        vals, cost = [], 0
        for a in n.args:
            v, c = self.eval(a, ctx)
            cost += c
            vals.append(v)
        v, c = self.apply_function(FuncRef(n.names[0]), vals, ctx, n)
        cost += c
        for name in n.names[1:]:
            v, c = self.apply_function(FuncRef(name), [v], ctx, n)
            cost += c
        return v, cost

    def eval_Call(self, n: A.Call, ctx: Ctx):
        name = n.name
        hit = self._frame_lookup(name, ctx.frame)
        if hit is not None:
            target = hit[0]
            if isinstance(target, FuncRef):
                return self._call_function(target, n, ctx)
            return self._index(target, list(n.args), ctx), 0
        entry = self.env.get(name)
        if entry is not None:
            kind, obj = entry
            if kind == "value":
                return self._index(obj, list(n.args), ctx), 0
            if kind == "lazy":
                v, c = self.force_lazy(obj, ctx)
                if isinstance(v, FuncRef):
                    v2, c2 = self._call_function(v, n, ctx)
                    return v2, c + c2
                return self._index(v, list(n.args), ctx), c
            return self._call_function(FuncRef(name), n, ctx)
        if name in BUILTINS:
            self.op_stack.append(name.rstrip("'"))
            try:
                return getattr(self, "op_" + name.rstrip("'") + ("_slot" if name.endswith("'") else ""))(n, ctx)
            finally:
                self.op_stack.pop()
        if name in REGISTRY:
            return self._call_function(FuncRef(name), n, ctx)
        raise UnboundNameError(f"unknown function {name!r}")

    def _call_function(self, f: FuncRef, n: A.Call, ctx: Ctx):
        vals, cost = [], 0
        for a in n.args:
            v, c = self.eval(a, ctx)
            cost += c
            vals.append(self._coerce_bars(a, v))
        v, c = self.apply_function(f, vals, ctx, n)
        return v, cost + c

    # -- primitive operators ----------------------------------------------------

    def _arg(self, n: A.Call, i: int, ctx: Ctx) -> tuple[Value, int]:
        return self.eval(n.args[i], ctx)

    def _tol_arg(self, n: A.Call, i: int, ctx: Ctx) -> tuple[ToLValue, int]:
        v, c = self._arg(n, i, ctx)
        if not isinstance(v, ToLValue):
            raise TypeListMismatchError(f"{n.name} needs a ToL as argument {i + 1}")
        return v, c

    def op_shape(self, n, ctx):
        v, c = self._tol_arg(n, 0, ctx)
        return self._structural("shape", v), c

    def op_dim(self, n, ctx):
        v, c = self._tol_arg(n, 0, ctx)
        return self._structural("dim", v), c

    def op_capacity(self, n, ctx):
        v, c = self._tol_arg(n, 0, ctx)
        return self._structural("capacity", v), c

    def op_vol(self, n, ctx):
        v, c = self._tol_arg(n, 0, ctx)
        return self._structural("vol", v), c

    def op_tile(self, n, ctx):
        v, c = self._tol_arg(n, 0, ctx)
        return ops.op_tile(v), c

    def op_space(self, n, ctx):
        v, c = self._tol_arg(n, 0, ctx)
        return ops.op_space(v), c

    def op_convert(self, n, ctx):
        v, c = self._tol_arg(n, 0, ctx)
        tl, _ = self._arg(n, 1, ctx)
        if not isinstance(tl, TypeList):
            raise TypeListMismatchError("convert needs a type list as second argument")
        if self.symbolic:
            if tl.capacity != v.capacity:
                raise TypeListMismatchError("type list capacity differs from the value")
            return v.with_(type_list=tl), c
        return ops.op_convert(v, tl), c

    def op_part(self, n, ctx):
        v, c = self._tol_arg(n, 0, ctx)
        a = self.index_ints([n.args[1]], ctx, ctx.star_coord)
        if len(n.args) == 2:
            return ops.op_part(v, a), c
        b = self.index_ints([n.args[2]], ctx, ctx.star_coord)
        return ops.op_part_block(v, a, b), c

    def op_part_slot(self, n, ctx):
        v, c = self._tol_arg(n, 0, ctx)
        j = self.index_ints([n.args[1]], ctx, ctx.star_coord)
        return ops.op_part_slot(v, j[0]), c

    def op_swap(self, n, ctx):
        v, c = self._tol_arg(n, 0, ctx)
        d = self.index_ints([n.args[1]], ctx, ctx.star_coord)
        perm = self.index_ints([n.args[2]], ctx, ctx.star_coord)
        return ops.op_swap(v, d[0], perm), c

    def op_reshape(self, n, ctx):
        v, c = self._tol_arg(n, 0, ctx)
        shape = self.index_ints([n.args[1]], ctx, ctx.star_coord)
        return ops.op_reshape(v, shape), c

    def _iter_binding(self, node: Optional[A.Node], c: tuple[int, ...]) -> dict[str, Value]:
        out: dict[str, Value] = {"iter": _coord_value(c)}
        if node is None:
            return out
        if isinstance(node, A.Ref):
            out[node.name] = scalar(c[0], True) if len(c) == 1 else _coord_value(c)
        elif isinstance(node, A.Bracket):
            names = [i.name for i in node.items if isinstance(i, A.Ref)]
            if len(names) > len(c):
                raise ArityError(f"{len(names)} iterator names for a {len(c)}-dimensional ToL")
            for name, x in zip(names, c):
                out[name] = scalar(x, True)
        return out

    def _function_value(self, f: A.Node, ctx: Ctx) -> Optional[FuncRef]:
        if not isinstance(f, A.Ref):
            return None
        hit = self._frame_lookup(f.name, ctx.frame)
        if hit is not None:
            return hit[0] if isinstance(hit[0], FuncRef) else None
        entry = self.env.get(f.name)
        if entry is not None:
            return FuncRef(f.name) if entry[0] == "func" else None
        if f.name in REGISTRY:
            return FuncRef(f.name)
        return None

    def op_map(self, n, ctx):
        t, cost = self._tol_arg(n, 0, ctx)
        fnode = n.args[1]
        iter_node = n.args[2] if len(n.args) > 2 else None
        fref = self._function_value(fnode, ctx)
        total = [cost]

        def at(elem: ToLValue, c: tuple[int, ...]) -> Value:
            frame = Frame(self._iter_binding(iter_node, c), ctx.frame, next(self._serial),
                          star=(elem, c))
            inner = Ctx(frame, index=ctx.index)
            if fref is not None:
                v, k = self.apply_function(fref, [elem], inner, n)
            else:
                v, k = self.eval(fnode, inner)
            if v is None or not isinstance(v, ToLValue):
                raise TypeListMismatchError("map function must produce a ToL")
            total[0] += k
            return v

        return ops.op_map(t, at), total[0]

    def op_reduce(self, n, ctx):
        t, cost = self._tol_arg(n, 0, ctx)
        init, c_init = self._arg(n, 2, ctx)
        cost += c_init
        fref = self._function_value(n.args[1], ctx)
        if fref is None:
            raise ArityError("reduce needs a binary function name")
        iter_node = n.args[3] if len(n.args) > 3 else None
        user = self.env.get(fref.name)
        is_def = user is not None and user[0] == "func"
        if iter_node is not None and not is_def and fref.name in ("max", "min"):
            v, c = self._reduce_indexed(t, fref.name, init, ctx)
            return v, cost + c
        nparams = len(user[1].params or ()) if is_def else 2
        total = [cost]

        def step(x: ToLValue, acc: Value, c: tuple[int, ...]) -> Value:
            frame = Frame(self._iter_binding(iter_node, c), ctx.frame, next(self._serial),
                          star=(x, c))
            inner = Ctx(frame, index=ctx.index)
            args = [x, acc] + ([_coord_value(c)] if nparams == 3 else [])
            v, k = self.apply_function(fref, args, inner, n)
            total[0] += k
            return v

        return ops.op_reduce(t, step, init), total[0]

    def _reduce_indexed(self, t: ToLValue, which: str, init: ToLValue,
                        ctx: Ctx) -> tuple[ToLValue, int]:
        better = lookup("gt" if which == "max" else "lt")
        keep = which
        best = init.scalar
        where: list[Any] = [0] * t.dim
        static = t.static and init.static
        charged = not (ctx.index or static)
        cost = 0
        for c in coords(t.shape):
            x = atomic_member(t, c).scalar
            if is_symbolic(x) or is_symbolic(best):
                g = X.Lambda(better.name, (X.as_expr(x), X.as_expr(best)))
                best = X.Lambda(keep, (X.as_expr(x), X.as_expr(best)))
                where = [X.Lambda("add", (X.Lambda("mul", (g, X.Const(ci))),
                                          X.Lambda("mul", (X.Lambda("sub", (X.Const(1), g)),
                                                           X.as_expr(wi)))))
                         for ci, wi in zip(c, where)]
                cost += 1
                continue
            if charged:
                won = better(x, best)
                cost += 1
                self.per_operator["reduce"] += 1
            else:
                with uncharged():
                    won = better(x, best)
            if won:
                best, where = x, list(c)
        if len(where) == 1:
            return make(((where[0],),), (), static=static), cost
        return make(tuple((w,) for w in where), (len(where),), static=static), cost


# -- public API -------------------------------------------------------------------

def _program(p: A.Program | str) -> A.Program:
    return parse(p) if isinstance(p, str) else p


def run(program: A.Program | str, inputs: Mapping[str, Any] | None = None, seed: int = 0,
        memo: bool = True, attrs: Mapping[str, Any] | None = None
        ) -> tuple[dict[str, Value], EopsReport]:
    """Evaluate every ``:=`` binding. Returns (outputs, EOPs report)."""
    interp = Interpreter(_program(program), inputs, attrs, seed=seed, memo=memo)
    return interp.run()


def run_result(program: A.Program | str, inputs: Mapping[str, Any] | None = None,
               seed: int = 0, memo: bool = True, attrs: Mapping[str, Any] | None = None
               ) -> tuple[Value, EopsReport]:
    """Like :func:`run` but returns only the program result (``result`` or the last ``:=``)."""
    interp = Interpreter(_program(program), inputs, attrs, seed=seed, memo=memo)
    outputs, report = interp.run()
    return outputs[interp.result_name(outputs)], report


def eval_expr(node: A.Node | str, env: Mapping[str, Any] | None = None,
              seed: int = 0) -> tuple[Value, int]:
    """Evaluate one expression against value bindings; returns (value, EOPs)."""
    from .frontend.parser import parse_expr
    if isinstance(node, str):
        node = parse_expr(node)
    interp = Interpreter(A.Program(()), env, seed=seed, resolution=Resolution(A.Program(())))
    for name, v in interp.inputs.items():
        interp.env[name] = ("value", v)
    with tracing():
        return interp.eval(node, Ctx())
