"""JSON tensor files.

A document looks like ``{"version": 1, "type_list": ["R"], "shape": [2, 2],
"data": [[1.0, 2.0], [3.0, 4.0]]}``. The innermost entry is a number when the
capacity is 1 and an array of k entries otherwise. Infinities are written as
the strings "+Inf" and "-Inf". Floats use the shortest decimal that reads back
to the same double, so saving after loading is byte-stable.
"""

from __future__ import annotations

import json
import math
from pathlib import Path
from typing import Any

from .core import ToLValue, TypeList, tol
from .errors import ShapeMismatchError, TolIOError, TypeListMismatchError

VERSION = 1
_SPECIAL = {"+Inf": math.inf, "-Inf": -math.inf, "NaN": math.nan}


def _encode(x: Any) -> Any:
    if isinstance(x, float):
        if math.isinf(x):
            return "+Inf" if x > 0 else "-Inf"
        if math.isnan(x):
            return "NaN"
        return x
    if isinstance(x, (list, tuple)):
        return [_encode(y) for y in x]
    if isinstance(x, dict):
        return {k: _encode(v) for k, v in x.items()}
    if hasattr(x, "item") and not isinstance(x, (str, bytes)):  # numpy scalars
        return _encode(x.item())
    return x


def canonical_json(obj: Any, indent: int | None = None) -> str:
    """Deterministic JSON: sorted keys, no NaN literals, shortest round-trip floats."""
    seps = (",", ": ") if indent is not None else (",", ":")
    return json.dumps(_encode(obj), sort_keys=True, indent=indent, separators=seps,
                      ensure_ascii=False, allow_nan=False)


def _decode_leaf(x: Any) -> Any:
    if isinstance(x, str) and x in _SPECIAL:
        return _SPECIAL[x]
    if isinstance(x, bool):
        return int(x)
    return x


def _decode(x: Any, depth: int, cap: int) -> Any:
    if depth == 0:
        if cap == 1:
            if isinstance(x, list):
                raise ShapeMismatchError("tensor file nesting is deeper than its shape")
            return _decode_leaf(x)
        if not isinstance(x, list) or len(x) != cap:
            raise ShapeMismatchError(f"each list must hold {cap} entries")
        return tuple(_decode_leaf(y) for y in x)
    if not isinstance(x, list):
        raise ShapeMismatchError("tensor file nesting is shallower than its shape")
    return [_decode(y, depth - 1, cap) for y in x]


def to_doc(v: ToLValue) -> dict:
    return {"version": VERSION, "type_list": list(v.type_list.ids), "shape": list(v.shape),
            "data": _encode(v.to_nested())}


def from_doc(doc: Any) -> ToLValue:
    """Read a tensor document; a bare number or nested array is accepted too."""
    if not isinstance(doc, dict):
        return tol(_decode_bare(doc))
    try:
        ids = doc["type_list"]
        shape = [int(d) for d in doc["shape"]]
        data = doc["data"]
    except (KeyError, TypeError, ValueError) as e:
        raise TolIOError(f"not a tensor document: {e}") from None
    if doc.get("version", VERSION) != VERSION:
        raise TolIOError(f"unsupported tensor file version {doc.get('version')!r}")
    tl = TypeList.of(*ids)
    nested = _decode(data, len(shape), tl.capacity)
    v = tol(nested, tl) if shape else tol(nested, tl)
    if list(v.shape) != shape:
        raise ShapeMismatchError(f"data has shape {list(v.shape)}, document says {shape}")
    if v.capacity != tl.capacity:
        raise TypeListMismatchError("data capacity differs from the type list")
    return v


def _decode_bare(x: Any) -> Any:
    if isinstance(x, list):
        return [_decode_bare(y) for y in x]
    return _decode_leaf(x)


def dumps(v: ToLValue, indent: int | None = None) -> str:
    return canonical_json(to_doc(v), indent)


def loads(text: str) -> ToLValue:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise TolIOError(f"invalid JSON: {e}") from None
    return from_doc(doc)


def load(path: str | Path) -> ToLValue:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise TolIOError(f"cannot read {path}: {e.strerror}") from None
    return loads(text)


def save(v: ToLValue, path: str | Path) -> None:
    try:
        Path(path).write_text(dumps(v) + "\n", encoding="utf-8")
    except OSError as e:
        raise TolIOError(f"cannot write {path}: {e.strerror}") from None
