"""Canonical formatting. ``parse(format_program(p)) == p`` for every parsed ``p``."""

from __future__ import annotations

from . import ast as A

_PREC = {"<": 1, ">": 1, "<=": 1, ">=": 1, "==": 1, "!=": 1,
         "+": 2, "-": 2, "*": 3, "/": 3, "%": 3, "^": 5}
UNARY, POSTFIX = 4, 6


def _prec(n: A.Node) -> int:
    if isinstance(n, A.Binary):
        return _PREC[n.op]
    if isinstance(n, A.Neg):
        return UNARY
    if isinstance(n, A.Num) and n.value < 0:
        return UNARY
    if isinstance(n, A.InfLit):
        return UNARY
    return POSTFIX


def _num(v: int | float) -> str:
    return repr(v) if isinstance(v, float) else str(v)


def _wrap(n: A.Node, ok: bool) -> str:
    s = format_expr(n)
    return s if ok else f"({s})"


def format_type(n: A.Node) -> str:
    if isinstance(n, A.TypeName):
        return n.name
    if isinstance(n, A.TypeGroup):
        return "[" + ", ".join(format_type(i) for i in n.items) + "]"
    if isinstance(n, A.TypeSeq):
        return ", ".join(format_type(i) for i in n.items)
    raise TypeError(f"not a type expression: {n!r}")


def _args(items: tuple[A.Node, ...]) -> str:
    return ",".join(format_expr(a) for a in items)


def format_expr(n: A.Node) -> str:
    if isinstance(n, A.Num):
        return _num(n.value)
    if isinstance(n, A.CharLit):
        return f"'{n.value}'"
    if isinstance(n, A.InfLit):
        return "+Inf" if n.sign > 0 else "-Inf"
    if isinstance(n, A.Star):
        return "*"
    if isinstance(n, A.EllipsisLit):
        return "..."
    if isinstance(n, A.Ref):
        return n.name
    if isinstance(n, A.Binary):
        p = _PREC[n.op]
        if n.op == "^":
            left = _wrap(n.left, _prec(n.left) > p)
            right = _wrap(n.right, _prec(n.right) >= UNARY)
        else:
            left = _wrap(n.left, _prec(n.left) >= p and not (p == 1 and _prec(n.left) == 1))
            right = _wrap(n.right, _prec(n.right) > p)
        return f"{left}{n.op}{right}"
    if isinstance(n, A.Neg):
        op = n.operand
        # keep -(1) distinct from the literal -1
        bare = _prec(op) >= UNARY and not isinstance(op, (A.Num, A.InfLit))
        return "-" + _wrap(op, bare)
    if isinstance(n, A.Call):
        if n.name.endswith("'"):
            return f"{n.name}({_args(n.args)})"
        return f"{n.name}({_args(n.args)})"
    if isinstance(n, A.Chain):
        return ".".join(n.names) + f"({_args(n.args)})"
    if isinstance(n, A.Index):
        return _wrap(n.base, _prec(n.base) == POSTFIX and not isinstance(n.base, A.Num)) \
            + f"[{_args(n.args)}]"
    if isinstance(n, A.Prime):
        return _wrap(n.operand, _prec(n.operand) == POSTFIX) + "'"
    if isinstance(n, A.NormBars):
        inner = format_expr(n.operand)
        if inner.startswith("|") or inner.endswith("|"):
            inner = f"({inner})"
        bar = "|" * n.depth
        return f"{bar}{inner}{bar}"
    if isinstance(n, A.Bracket):
        return f"[{_args(n.items)}]"
    if isinstance(n, A.Tuple):
        return f"({_args(n.items)})"
    if isinstance(n, A.ConstTol):
        return "tol" + format_expr(n.shape)
    if isinstance(n, A.TypeArg):
        return format_type(n.types)
    raise TypeError(f"not an expression: {n!r}")


def format_statement(s: A.Node) -> str:
    if isinstance(s, A.SpaceDecl):
        out = f"space {s.name}: {s.space.name}"
        if s.bounds:
            out += f" [{format_expr(s.bounds[0])}, {format_expr(s.bounds[1])}]"
        return out
    if isinstance(s, A.ListDecl):
        return f"list {s.name}: {format_type(s.types)}"
    if isinstance(s, A.TolDecl):
        if s.init is not None:
            return f"tol {s.name}={format_expr(s.init)}"
        out = f"tol {s.name}: {format_type(s.types)}"  # type: ignore[arg-type]
        if s.dims is not None:
            out += f" [{_args(s.dims)}]"
        return out
    if isinstance(s, A.Def):
        head = s.name if s.params is None else f"{s.name}({','.join(s.params)})"
        return f"{head}{':=' if s.output else '='}{format_expr(s.body)}"
    raise TypeError(f"not a statement: {s!r}")


def format_program(p: A.Program) -> str:
    if not p.statements:
        return ""
    return "\n".join(format_statement(s) for s in p.statements) + "\n"
