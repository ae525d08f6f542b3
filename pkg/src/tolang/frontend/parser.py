"""Recursive-descent parser producing :class:`~tolang.frontend.ast.Program`.

Precedence, loosest first: comparisons (non-associative), ``+ -``,
``* / %``, unary minus, ``^`` (right-associative), postfix ``[...]`` / ``'``.
"""

from __future__ import annotations

from ..errors import ParseError
from . import ast as A
from .lexer import Token, tokenize

CMP_OPS = {"Lt": "<", "Gt": ">", "Le": "<=", "Ge": ">=", "EqEq": "==", "Ne": "!="}
ADD_OPS = {"Plus": "+", "Minus": "-"}
MUL_OPS = {"Star": "*", "Slash": "/", "Percent": "%"}

_KW_NAMES = {"KW_tol": "tol", "KW_space": "space", "KW_list": "list"}

_DESCRIBE = {
    "Newline": "end of line", "EOF": "end of input", "Ident": "a name", "RBrack": "']'",
    "RParen": "')'", "LBrack": "'['", "LParen": "'('", "Comma": "','", "Colon": "':'",
    "Bar": "'|'", "DBar": "'||'", "Eq": "'='", "Define": "':='",
}


def _describe(kind: str) -> str:
    return _DESCRIBE.get(kind, kind)


def _span(tok: Token) -> A.Span:
    return A.Span(tok.line, tok.col, max(1, tok.length))


class Parser:
    def __init__(self, tokens: list[Token]):
        self.toks = tokens
        self.pos = 0

    # -- token helpers ------------------------------------------------------

    @property
    def tok(self) -> Token:
        return self.toks[self.pos]

    def peek(self, k: int = 1) -> Token:
        return self.toks[min(self.pos + k, len(self.toks) - 1)]

    def at(self, *kinds: str) -> bool:
        return self.tok.kind in kinds

    def advance(self) -> Token:
        t = self.tok
        if t.kind != "EOF":
            self.pos += 1
        return t

    def expect(self, kind: str, what: str | None = None) -> Token:
        if self.tok.kind != kind:
            self.error(f"expected {what or _describe(kind)}, got {self._got()}")
        return self.advance()

    def _got(self) -> str:
        t = self.tok
        if t.kind in ("EOF", "Newline"):
            return _describe(t.kind)
        return repr(t.text)

    def error(self, message: str, tok: Token | None = None) -> None:
        t = tok or self.tok
        raise ParseError(message, t.line, t.col, max(1, t.length))

    # -- program ------------------------------------------------------------

    def program(self) -> A.Program:
        stmts = []
        self.skip_separators()
        while not self.at("EOF"):
            stmts.append(self.statement())
            if not self.at("EOF"):
                if not self.at("Newline", "Semi"):
                    self.error(f"expected end of statement, got {self._got()}")
                self.skip_separators()
        return A.Program(tuple(stmts), span=A.Span(1, 1, 0))

    def skip_separators(self) -> None:
        while self.at("Newline", "Semi"):
            self.advance()

    def statement(self) -> A.Node:
        t = self.tok
        if t.kind == "KW_space" and self.peek().kind == "Ident":
            return self.space_decl()
        if t.kind == "KW_list" and self.peek().kind == "Ident":
            return self.list_decl()
        if t.kind == "KW_tol" and self.peek().kind == "Ident":
            return self.tol_decl()
        if t.kind == "Ident":
            return self.definition()
        self.error(f"expected a declaration or definition, got {self._got()}")
        raise AssertionError

    def space_decl(self) -> A.SpaceDecl:
        start = self.advance()
        name = self.expect("Ident").text
        self.expect("Colon")
        space = self.type_name()
        bounds = None
        if self.at("LBrack"):
            self.advance()
            lo = self.expr()
            self.expect("Comma")
            hi = self.expr()
            self.expect("RBrack")
            bounds = (lo, hi)
        return A.SpaceDecl(name, space, bounds, span=_span(start))

    def list_decl(self) -> A.ListDecl:
        start = self.advance()
        name = self.expect("Ident").text
        self.expect("Colon")
        return A.ListDecl(name, self.type_seq(), span=_span(start))

    def tol_decl(self) -> A.TolDecl:
        start = self.advance()
        name = self.expect("Ident").text
        if self.at("Eq"):
            self.advance()
            return A.TolDecl(name, None, None, self.expr(), span=_span(start))
        self.expect("Colon", "':' or '='")
        types = self.type_seq()
        dims = None
        if self.at("LBrack"):
            self.advance()
            dims = tuple(self.expr_list("RBrack"))
            self.expect("RBrack")
        return A.TolDecl(name, types, dims, None, span=_span(start))

    def definition(self) -> A.Def:
        start = self.advance()
        params = None
        if self.at("LParen"):
            self.advance()
            names = []
            if not self.at("RParen"):
                names.append(self.expect("Ident", "a parameter name").text)
                while self.at("Comma"):
                    self.advance()
                    names.append(self.expect("Ident", "a parameter name").text)
            self.expect("RParen")
            params = tuple(names)
        if self.at("Eq"):
            output = False
        elif self.at("Define"):
            output = True
        else:
            self.error(f"expected '=' or ':=', got {self._got()}")
        self.advance()
        return A.Def(start.text, params, self.expr(), output, span=_span(start))

    # -- types --------------------------------------------------------------

    def type_name(self) -> A.TypeName:
        t = self.tok
        if t.kind not in ("Ident",):
            self.error(f"expected a type space, got {self._got()}")
        self.advance()
        name = t.text
        nxt = self.tok
        # N*, Z+, R- ... are written without a space
        if nxt.kind in ("Star", "Plus", "Minus") and nxt.line == t.line and nxt.col == t.col + len(name):
            self.advance()
            name += nxt.text
        return A.TypeName(name, span=_span(t))

    def type_item(self) -> A.Node:
        if self.at("LBrack"):
            start = self.advance()
            items = [self.type_item()]
            while self.at("Comma"):
                self.advance()
                items.append(self.type_item())
            self.expect("RBrack")
            return A.TypeGroup(tuple(items), span=_span(start))
        return self.type_name()

    def type_seq(self) -> A.Node:
        start = self.tok
        items = [self.type_item()]
        while self.at("Comma"):
            self.advance()
            items.append(self.type_item())
        if len(items) == 1:
            return items[0]
        return A.TypeSeq(tuple(items), span=_span(start))

    # -- expressions --------------------------------------------------------

    def expr_list(self, close: str) -> list[A.Node]:
        items: list[A.Node] = []
        if self.at(close):
            return items
        items.append(self.expr())
        while self.at("Comma"):
            self.advance()
            items.append(self.expr())
        return items

    def expr(self) -> A.Node:
        left = self.additive()
        if self.tok.kind in CMP_OPS:
            op = self.advance()
            right = self.additive()
            left = A.Binary(CMP_OPS[op.kind], left, right, span=_span(op))
            if self.tok.kind in CMP_OPS:
                self.error("comparisons do not chain; add parentheses")
        return left

    def additive(self) -> A.Node:
        left = self.multiplicative()
        while self.tok.kind in ADD_OPS:
            op = self.advance()
            left = A.Binary(ADD_OPS[op.kind], left, self.multiplicative(), span=_span(op))
        return left

    def multiplicative(self) -> A.Node:
        left = self.unary()
        while self.tok.kind in MUL_OPS:
            op = self.advance()
            left = A.Binary(MUL_OPS[op.kind], left, self.unary(), span=_span(op))
        return left

    def unary(self) -> A.Node:
        if self.at("Minus", "Plus"):
            op = self.advance()
            sign = -1 if op.kind == "Minus" else 1
            if self.at("Ident") and self.tok.text == "Inf":
                self.advance()
                return A.InfLit(sign, span=_span(op))
            if self.at("Int", "Float") and self.peek().kind != "Caret":
                num = self.advance()
                return A.Num(sign * num.value, span=_span(op))  # type: ignore[operator]
            operand = self.unary()
            return A.Neg(operand, span=_span(op)) if sign < 0 else operand
        return self.power()

    def power(self) -> A.Node:
        base = self.postfix()
        if self.at("Caret"):
            op = self.advance()
            return A.Binary("^", base, self.unary(), span=_span(op))
        return base

    def postfix(self) -> A.Node:
        node = self.primary()
        while True:
            if self.at("LBrack"):
                start = self.advance()
                args = tuple(self.expr_list("RBrack"))
                self.expect("RBrack")
                if not args:
                    self.error("empty index", start)
                node = A.Index(node, args, span=_span(start))
            elif self.at("Prime"):
                node = A.Prime(node, span=_span(self.advance()))
            else:
                return node

    def call_args(self, name: str) -> tuple[A.Node, ...]:
        self.expect("LParen")
        args: list[A.Node] = []
        if not self.at("RParen"):
            args.append(self.expr())
            while self.at("Comma"):
                self.advance()
                if name == "convert" and len(args) == 1:
                    start = self.tok
                    args.append(A.TypeArg(self.type_item(), span=_span(start)))
                else:
                    args.append(self.expr())
        self.expect("RParen")
        return tuple(args)

    def primary(self) -> A.Node:
        t = self.tok
        k = t.kind
        if k in ("Int", "Float"):
            self.advance()
            return A.Num(t.value, span=_span(t))  # type: ignore[arg-type]
        if k == "Char":
            self.advance()
            return A.CharLit(t.value, span=_span(t))  # type: ignore[arg-type]
        if k == "Star":
            self.advance()
            return A.Star(span=_span(t))
        if k == "Ellipsis":
            self.advance()
            return A.EllipsisLit(span=_span(t))
        if k == "LParen":
            self.advance()
            first = self.expr()
            if self.at("Comma"):
                items = [first]
                while self.at("Comma"):
                    self.advance()
                    items.append(self.expr())
                self.expect("RParen")
                return A.Tuple(tuple(items), span=_span(t))
            self.expect("RParen")
            return first
        if k == "LBrack":
            self.advance()
            items = self.expr_list("RBrack")
            self.expect("RBrack")
            return A.Bracket(tuple(items), span=_span(t))
        if k in ("Bar", "DBar"):
            self.advance()
            inner = self.expr()
            self.expect(k)
            return A.NormBars(inner, 1 if k == "Bar" else 2, span=_span(t))
        if k == "KW_tol" and self.peek().kind in ("LBrack", "Bar", "DBar"):
            self.advance()
            shape = self.primary()
            return A.ConstTol(shape, span=_span(t))
        if k in _KW_NAMES and self.peek().kind == "LParen":
            self.advance()
            name = _KW_NAMES[k]
            return A.Call(name, self.call_args(name), span=_span(t))
        if k == "Ident":
            self.advance()
            name = t.text
            if self.at("Dot"):
                names = [name]
                while self.at("Dot"):
                    self.advance()
                    names.append(self.expect("Ident", "a function name after '.'").text)
                if not self.at("LParen"):
                    self.error(f"expected '(' after composite function, got {self._got()}")
                return A.Chain(tuple(names), self.call_args(""), span=_span(t))
            if self.at("Prime") and self.peek().kind == "LParen":
                self.advance()
                name += "'"
            if self.at("LParen"):
                return A.Call(name, self.call_args(name), span=_span(t))
            return A.Ref(name, span=_span(t))
        self.error(f"expected an expression, got {self._got()}")
        raise AssertionError


def parse(source: str | list[Token]) -> A.Program:
    tokens = tokenize(source) if isinstance(source, str) else source
    return Parser(tokens).program()


def parse_expr(source: str) -> A.Node:
    p = Parser(tokenize(source))
    node = p.expr()
    if not p.at("EOF"):
        p.error(f"unexpected {p._got()} after expression")
    return node
