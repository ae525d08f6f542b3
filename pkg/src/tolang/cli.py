"""Command-line entry point: ``tolang run|cost|parse|fmt|lower|onnx``.

Exit codes: 0 ok, 1 lex/parse error, 2 static (name, shape, type) error,
3 domain error or failed equivalence check, 4 I/O error, 5 golden drift.
Errors are written to standard error as one JSON line, followed by a
readable diagnostic (ANSI colored unless TOL_COLOR=0).
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
from pathlib import Path
from typing import Any, Sequence

from . import tensorfile
from .core import ToLValue, tol
from .errors import FrontendError, GoldenDriftError, ShapeMismatchError, ToLError, TolIOError

EXIT_OK, EXIT_FRONTEND, EXIT_STATIC, EXIT_DOMAIN, EXIT_IO, EXIT_DRIFT = range(6)


def _color(code: str, text: str) -> str:
    if os.environ.get("TOL_COLOR", "1") == "0":
        return text
    return f"\x1b[{code}m{text}\x1b[0m"


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise TolIOError(f"cannot read {path}: {e.strerror}") from None


def _write(path: str | None, text: str) -> None:
    if path is None:
        sys.stdout.write(text)
        return
    try:
        Path(path).write_text(text, encoding="utf-8")
    except OSError as e:
        raise TolIOError(f"cannot write {path}: {e.strerror}") from None


def _bindings(items: Sequence[str] | None, what: str) -> list[tuple[str, str]]:
    out = []
    for item in items or ():
        name, sep, rest = item.partition("=")
        if not sep or not name.strip():
            raise TolIOError(f"{what} must look like name=value, got {item!r}")
        out.append((name.strip(), rest))
    return out


def _inputs(items: Sequence[str] | None) -> dict[str, ToLValue]:
    return {n: tensorfile.load(p) for n, p in _bindings(items, "--in")}


def _attrs(items: Sequence[str] | None) -> dict[str, Any]:
    out: dict[str, Any] = {}
    for n, text in _bindings(items, "--attr"):
        try:
            out[n] = json.loads(text)
        except json.JSONDecodeError:
            raise TolIOError(f"attribute {n} is not a JSON value: {text!r}") from None
    return out


_SHAPE = re.compile(r"\s*([A-Za-z_][A-Za-z0-9_']*)\s*=\s*(\[[^\]]*\]|[^,\s]+)(?::(\d+))?\s*(?:,|$)")


def parse_shapes(text: str) -> dict[str, Any]:
    """``a=[2,2],b=[2,2]`` (append ``:k`` for capacity k) to a shape mapping."""
    out: dict[str, Any] = {}
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _SHAPE.match(text, pos)
        if not m:
            raise ShapeMismatchError(f"cannot read shapes at {text[pos:]!r}")
        name, dims, cap = m.groups()
        body = dims[1:-1] if dims.startswith("[") else dims
        parts = [p.strip() for p in body.split(",") if p.strip()]
        if not all(re.fullmatch(r"\d+", p) for p in parts):
            raise ShapeMismatchError(f"shape of {name} must be concrete integers, got {dims}")
        shape = [int(p) for p in parts]
        out[name] = (shape, int(cap)) if cap else shape
        pos = m.end()
    return out


def _as_value(v: Any) -> ToLValue:
    return v if isinstance(v, ToLValue) else tol(v)


def _pretty(outputs: dict[str, Any]) -> str:
    lines = []
    for name, v in outputs.items():
        v = _as_value(v)
        lines.append(f"{name} : {','.join(v.type_list.ids)} {list(v.shape)}")
        lines.append(json.dumps(tensorfile.to_doc(v)["data"]))
    return "\n".join(lines) + "\n"


# -- commands ---------------------------------------------------------------------------

def cmd_run(args: argparse.Namespace) -> int:
    from .evaluator import Interpreter
    from .frontend import parse
    program = parse(_read(args.program))
    interp = Interpreter(program, _inputs(args.inputs), _attrs(args.attrs), seed=args.seed,
                         memo=not args.no_memo)
    outputs, report = interp.run()
    if args.out:
        result = outputs[interp.result_name(outputs)]
        _write(args.out, tensorfile.dumps(_as_value(result)) + "\n")
    if args.format == "pretty":
        text = "" if args.out else _pretty(outputs)
        if args.eops:
            text += f"EOPs {report.total}\n"
        sys.stdout.write(text)
        return EXIT_OK
    doc: dict[str, Any] = {}
    if not args.out:
        doc["outputs"] = {k: tensorfile.to_doc(_as_value(v)) for k, v in outputs.items()}
    if args.eops:
        doc["eops"] = report.to_json()
    if doc:
        sys.stdout.write(tensorfile.canonical_json(doc) + "\n")
    return EXIT_OK


def cmd_cost(args: argparse.Namespace) -> int:
    from .evaluator import run
    _, report = run(_read(args.program), _inputs(args.inputs), seed=args.seed,
                    memo=not args.no_memo, attrs=_attrs(args.attrs))
    sys.stdout.write(tensorfile.canonical_json(report.to_json(), indent=1) + "\n")
    return EXIT_OK


def cmd_parse(args: argparse.Namespace) -> int:
    from .frontend import dump_ast, format_program, parse
    program = parse(_read(args.program))
    sys.stdout.write(dump_ast(program) + "\n" if args.ast else format_program(program))
    return EXIT_OK


def cmd_fmt(args: argparse.Namespace) -> int:
    from .frontend import format_program, parse
    text = _read(args.program)
    formatted = format_program(parse(text))
    if args.check:
        return EXIT_OK if formatted == text else EXIT_FRONTEND
    _write(args.program if args.write else None, formatted)
    return EXIT_OK


def cmd_lower(args: argparse.Namespace) -> int:
    from . import lowering
    program = _read(args.program)
    shapes = parse_shapes(args.shapes or "")
    attrs = _attrs(args.attrs)
    low = lowering.lower(program, shapes, attrs)
    sys.stdout.write(low.text() + "\n")
    if args.check:
        lowering.check(program, shapes, attrs, trials=args.trials, seed=args.seed,
                       integers=not args.floats, lowered=low)
        sys.stdout.write("EQUIVALENT\n")
    return EXIT_OK


def cmd_onnx(args: argparse.Namespace) -> int:
    from . import onnx_stdlib
    if args.onnx_cmd == "list":
        for op in onnx_stdlib.registry_list():
            sys.stdout.write(f"{op.name}\t{op.status}\t{op.eops_formula}\t{op.flops_formula}\n")
        return EXIT_OK
    if args.onnx_cmd == "run":
        value, eops = onnx_stdlib.run_stdlib(args.name, _inputs(args.inputs), _attrs(args.attrs),
                                             seed=args.seed)
        text = tensorfile.dumps(_as_value(value)) + "\n"
        if args.out:
            _write(args.out, text)
            text = ""
        if args.eops:
            text += tensorfile.canonical_json({"eops": eops}) + "\n"
        sys.stdout.write(text)
        return EXIT_OK
    from .onnx_stdlib import golden
    directory = Path(args.dir) if args.dir else golden.default_dir()
    records = golden.golden_table()
    if args.write:
        golden.write(records, directory)
        sys.stdout.write(f"wrote {len(records)} records to {directory}\n")
        return EXIT_OK
    diffs = golden.diff(records, directory)
    if diffs:
        sys.stdout.write("".join(diffs))
        raise GoldenDriftError(f"golden tables in {directory} differ from a fresh run")
    sys.stdout.write(f"{len(records)} records, no drift\n")
    return EXIT_OK


# -- wiring ---------------------------------------------------------------------------

def _common_run(p: argparse.ArgumentParser) -> None:
    p.add_argument("--in", dest="inputs", action="append", metavar="NAME=PATH",
                   help="bind a data input to a tensor file (repeatable)")
    p.add_argument("--attr", dest="attrs", action="append", metavar="NAME=JSON",
                   help="bind a static parameter (repeatable)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--no-memo", action="store_true", help="charge repeated calls again")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="tolang", description="ToLang interpreter and tools")
    sub = ap.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("run", help="evaluate a program")
    p.add_argument("program")
    _common_run(p)
    p.add_argument("--eops", action="store_true", help="also print the EOPs report")
    p.add_argument("--out", metavar="PATH", help="write the program result as a tensor file")
    p.add_argument("--format", choices=("json", "pretty"), default="json")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("cost", help="print only the EOPs report")
    p.add_argument("program")
    _common_run(p)
    p.set_defaults(func=cmd_cost)

    p = sub.add_parser("parse", help="check syntax; print canonical text or AST JSON")
    p.add_argument("program")
    p.add_argument("--ast", action="store_true")
    p.set_defaults(func=cmd_parse)

    p = sub.add_parser("fmt", help="canonical formatting")
    p.add_argument("program")
    g = p.add_mutually_exclusive_group()
    g.add_argument("-w", "--write", action="store_true", help="rewrite the file in place")
    g.add_argument("--check", action="store_true", help="exit 1 if the file is not canonical")
    p.set_defaults(func=cmd_fmt)

    p = sub.add_parser("lower", help="print the atomic form for concrete shapes")
    p.add_argument("program")
    p.add_argument("--shapes", metavar="a=[2,2],b=[2,2]")
    p.add_argument("--attr", dest="attrs", action="append", metavar="NAME=JSON")
    p.add_argument("--check", action="store_true", help="compare both forms on random inputs")
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--floats", action="store_true", help="random floats instead of integers")
    p.set_defaults(func=cmd_lower)

    p = sub.add_parser("onnx", help="ONNX operator library")
    osub = p.add_subparsers(dest="onnx_cmd", required=True)
    osub.add_parser("list")
    q = osub.add_parser("run")
    q.add_argument("name")
    _common_run(q)
    q.add_argument("--eops", action="store_true")
    q.add_argument("--out", metavar="PATH")
    q = osub.add_parser("goldens", help="regenerate golden tables and diff them")
    q.add_argument("--dir", help="golden directory (default: the packaged one)")
    q.add_argument("--write", action="store_true", help="overwrite instead of diffing")
    p.set_defaults(func=cmd_onnx)
    return ap


def exit_code_for(err: BaseException) -> int:
    return getattr(err, "exit_code", EXIT_STATIC)


def _report(err: ToLError, code: int) -> None:
    doc: dict[str, Any] = {"error": type(err).__name__, "message": str(err), "exit_code": code}
    if isinstance(err, FrontendError) and err.line:
        doc["span"] = {"line": err.line, "col": err.col, "length": err.length}
    sys.stderr.write(json.dumps(doc, sort_keys=True) + "\n")
    sys.stderr.write(_color("1;31", "error") + f": {err}\n")


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ToLError as e:
        code = exit_code_for(e)
        _report(e, code)
        return code
    except RecursionError:
        e2 = ToLError("recursion too deep")
        _report(e2, EXIT_STATIC)
        return EXIT_STATIC


if __name__ == "__main__":
    sys.exit(main())
