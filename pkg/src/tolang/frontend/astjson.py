"""Stable JSON dump of the AST (schema version 1, see docs/formats.md)."""

from __future__ import annotations

import json
from dataclasses import fields
from typing import Any

from . import ast as A

SCHEMA_VERSION = 1


def _value(v: Any) -> Any:
    if isinstance(v, A.Node):
        return ast_to_json(v)
    if isinstance(v, tuple):
        return [_value(x) for x in v]
    return v


def ast_to_json(node: A.Node) -> dict:
    out: dict[str, Any] = {"kind": type(node).__name__}
    for f in fields(node):  # type: ignore[arg-type]
        if f.name == "span":
            continue
        out[f.name] = _value(getattr(node, f.name))
    s = node.span
    out["span"] = {"line": s.line, "col": s.col, "len": s.length}
    return out


def dump_ast(program: A.Program, indent: int | None = 2) -> str:
    doc = {"version": SCHEMA_VERSION, "program": ast_to_json(program)}
    return json.dumps(doc, indent=indent, ensure_ascii=False)
