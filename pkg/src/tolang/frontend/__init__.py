"""Lexer, parser, printer, resolver and AST JSON dump for ToLang source."""

from . import ast
from .astjson import ast_to_json, dump_ast
from .lexer import Token, tokenize
from .parser import parse, parse_expr
from .printer import format_expr, format_program
from .resolve import Resolution, resolve

__all__ = ["ast", "Token", "tokenize", "parse", "parse_expr", "format_program", "format_expr",
           "resolve", "Resolution", "ast_to_json", "dump_ast"]
