"""Static checks: name binding, arities, placement of ``*``."""

from __future__ import annotations

from dataclasses import dataclass, field

from ..core import SPACE_IDS
from ..elementary import REGISTRY
from ..errors import (
    ArityError,
    CyclicDefinitionError,
    StarOutsideIteratorError,
    UnboundNameError,
)
from . import ast as A

# builtin operator -> (min args, max args)
BUILTINS: dict[str, tuple[int, int]] = {
    "shape": (1, 1), "dim": (1, 1), "capacity": (1, 1), "vol": (1, 1), "space": (1, 1),
    "convert": (2, 2), "part": (2, 3), "part'": (2, 2), "swap": (3, 3), "reshape": (2, 2),
    "tile": (1, 1), "map": (2, 3), "reduce": (3, 4),
}

IMPLICIT = {"iter"}


@dataclass
class Resolution:
    program: A.Program
    inputs: list[str] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)


def _iter_names(node: A.Node | None) -> set[str]:
    if node is None:
        return set()
    if isinstance(node, A.Ref):
        return {node.name}
    if isinstance(node, A.Bracket):
        return {i.name for i in node.items if isinstance(i, A.Ref)}
    return set()


def _err(cls, message: str, node: A.Node):
    s = node.span
    return cls(f"{message} (line {s.line}, col {s.col})")


class _Resolver:
    def __init__(self, program: A.Program):
        self.program = program
        self.defs: dict[str, A.Def] = {}
        self.value_names: set[str] = set()  # names bound to values so far
        self.space_names: set[str] = set()
        self.list_names: set[str] = set()
        self.dynamic = {p for s in program.statements if isinstance(s, A.Def) and s.params
                        for p in s.params}
        self.free: dict[str, A.Node] = {}
        self.callee_only: dict[str, A.Node] = {}
        self.warnings: list[str] = []

    def run(self) -> Resolution:
        for stmt in self.program.statements:
            self.statement(stmt)
        for name, node in self.callee_only.items():
            if name not in self.free:
                raise _err(UnboundNameError, f"unbound name {name!r}", node)
        self.check_cycles()
        return Resolution(self.program, sorted(self.free), self.warnings)

    # -- statements -----------------------------------------------------------

    def statement(self, s: A.Node) -> None:
        if isinstance(s, A.SpaceDecl):
            self.check_type(s.space)
            if s.bounds:
                for b in s.bounds:
                    self.expr(b, set(), False)
            self.space_names.add(s.name)
        elif isinstance(s, A.ListDecl):
            self.check_type(s.types)
            self.list_names.add(s.name)
        elif isinstance(s, A.TolDecl):
            if s.types is not None:
                self.check_type(s.types)
            for d in s.dims or ():
                self.expr(d, set(), False)
            if s.init is not None:
                self.expr(s.init, set(), False)
            self.value_names.add(s.name)
        elif isinstance(s, A.Def):
            scope = set(s.params or ())
            self.defs.setdefault(s.name, s)
            if s.params is None:
                self.expr(s.body, scope, False)
                self.value_names.add(s.name)
            else:
                # recursion is reported by the cycle check, not as an unbound name
                self.defs[s.name] = s
                self.expr(s.body, scope, False)

    def check_type(self, t: A.Node) -> None:
        if isinstance(t, A.TypeName):
            if t.name not in SPACE_IDS and t.name not in self.space_names \
                    and t.name not in self.list_names:
                raise _err(UnboundNameError, f"unknown type space or list {t.name!r}", t)
        else:
            for i in t.items:  # type: ignore[attr-defined]
                self.check_type(i)

    # -- expressions ----------------------------------------------------------

    def bound(self, name: str, scope: set[str]) -> bool:
        return (name in scope or name in self.value_names or name in self.defs
                or name in self.dynamic or name in IMPLICIT)

    def use(self, name: str, node: A.Node, scope: set[str]) -> None:
        if not self.bound(name, scope):
            self.free.setdefault(name, node)

    def expr(self, n: A.Node, scope: set[str], star_ok: bool) -> None:
        if isinstance(n, A.Star):
            if not star_ok:
                raise _err(StarOutsideIteratorError,
                           "'*' used outside a map or reduce function argument", n)
            return
        if isinstance(n, A.Ref):
            if n.name in REGISTRY and not self.bound(n.name, scope):
                return  # a function passed by name
            self.use(n.name, n, scope)
            return
        if isinstance(n, A.Call):
            self.call(n, scope, star_ok)
            return
        if isinstance(n, A.Chain):
            for name in n.names:
                if name not in self.defs and name not in REGISTRY:
                    raise _err(UnboundNameError, f"unknown function {name!r} in chain", n)
            for a in n.args:
                self.expr(a, scope, star_ok)
            return
        if isinstance(n, A.TypeArg):
            self.check_type(n.types)
            return
        for c in n.children():
            self.expr(c, scope, star_ok)

    def call(self, n: A.Call, scope: set[str], star_ok: bool) -> None:
        name = n.name
        nargs = len(n.args)
        if name in ("map", "reduce"):
            lo, hi = BUILTINS[name]
            if not lo <= nargs <= hi:
                raise _err(ArityError, f"{name} takes {lo} to {hi} arguments, got {nargs}", n)
            self.expr(n.args[0], scope, star_ok)
            iter_arg = n.args[2] if name == "map" and nargs == 3 else (
                n.args[3] if name == "reduce" and nargs == 4 else None)
            inner = scope | _iter_names(iter_arg)
            self.function_arg(n.args[1], name, inner, n)
            if name == "reduce":
                self.expr(n.args[2], scope, star_ok)
            return
        if name in BUILTINS and not self.bound(name, scope):
            lo, hi = BUILTINS[name]
            if not lo <= nargs <= hi:
                raise _err(ArityError, f"{name} takes {lo} to {hi} arguments, got {nargs}", n)
        elif name in self.defs and name not in scope and name not in self.value_names:
            params = self.defs[name].params or ()
            if nargs != len(params):
                raise _err(ArityError,
                           f"{name} takes {len(params)} argument(s), got {nargs}", n)
        elif name in REGISTRY and not self.bound(name, scope):
            if not REGISTRY[name].accepts(nargs):
                raise _err(ArityError, f"{name} does not take {nargs} argument(s)", n)
        elif self.bound(name, scope):
            pass  # indexing sugar t(i)
        else:
            self.callee_only.setdefault(name, n)
        for a in n.args:
            self.expr(a, scope, star_ok)

    def function_arg(self, f: A.Node, op: str, scope: set[str], site: A.Node) -> None:
        want = 1 if op == "map" else 2
        if isinstance(f, A.Ref) and not (f.name in scope or f.name in self.value_names):
            if f.name in REGISTRY:
                if not REGISTRY[f.name].accepts(want):
                    raise _err(ArityError, f"{op} needs a function of {want} argument(s), "
                               f"{f.name} does not take {want}", site)
                return
            if f.name in self.defs:
                params = self.defs[f.name].params or ()
                if op == "map" and len(params) != 1 or op == "reduce" and len(params) not in (2, 3):
                    raise _err(ArityError, f"{op} needs a function of {want} argument(s), "
                               f"{f.name} takes {len(params)}", site)
                return
        if op == "reduce":
            raise _err(ArityError, "reduce needs a binary function name", site)
        self.expr(f, scope, True)

    # -- cycles ---------------------------------------------------------------

    def check_cycles(self) -> None:
        graph = {}
        for name, d in self.defs.items():
            if d.output and d.params is None:
                continue
            graph[name] = {r.name for r in d.body.walk() if isinstance(r, (A.Ref,))} | \
                {c.name for c in d.body.walk() if isinstance(c, A.Call)} | \
                {x for c in d.body.walk() if isinstance(c, A.Chain) for x in c.names}
        state: dict[str, int] = {}

        def visit(v: str, path: list[str]) -> None:
            state[v] = 1
            for w in graph.get(v, ()):
                if w not in graph or w in (self.defs[v].params or ()):
                    continue
                if state.get(w) == 1:
                    cyc = path[path.index(w):] + [w] if w in path else [v, w]
                    raise _err(CyclicDefinitionError,
                               "cyclic definition " + " -> ".join(cyc), self.defs[w])
                if state.get(w) is None:
                    visit(w, path + [w])
            state[v] = 2

        for v in graph:
            if v not in state:
                visit(v, [v])


def resolve(program: A.Program) -> Resolution:
    return _Resolver(program).run()
