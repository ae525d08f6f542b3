"""The primitive operators as functions on values.

Coordinates are 1-based. ``swap`` counts its dimension argument from the
innermost (last) dimension, so ``swap(t, 1, p)`` permutes within rows.
"""

from __future__ import annotations

import math
from typing import Any, Callable, Sequence

from .core import (
    ToLValue,
    TypeList,
    atomic_member,
    atomic_member_slot,
    atomic_norm,
    coords,
    default_space,
    make,
    ravel,
    volume,
)
from .elementary import FnExpr, eval_fnexpr, lookup
from .errors import (
    ArityError,
    ConversionError,
    DegenerateShapeError,
    MultipleInferError,
    NotAPermutationError,
    ShapeMismatchError,
    TolIndexError,
    TypeListMismatchError,
    VolumeMismatchError,
)


def op_shape(t: ToLValue) -> ToLValue:
    return atomic_norm(t)


def op_dim(t: ToLValue) -> int:
    if t.dim == 0:
        raise DegenerateShapeError("dim of a dimension-0 value")
    return t.dim


def op_capacity(t: ToLValue) -> int:
    return t.capacity


def op_vol(t: ToLValue) -> int:
    return t.volume


def op_space(t: ToLValue) -> TypeList:
    return TypeList.of(*(default_space(lst[j] for lst in t.data) for j in range(t.capacity)))


def op_convert(t: ToLValue, tl: TypeList) -> ToLValue:
    if tl.capacity != t.capacity:
        raise ConversionError(f"type list {tl} has capacity {tl.capacity}, value has {t.capacity}")
    data = tuple(tuple(sp.cast(x) for sp, x in zip(tl.spaces, lst)) for lst in t.data)
    return t.with_(type_list=tl, data=data)


def _check_coord(t: ToLValue, a: Sequence[int]) -> tuple[int, ...]:
    a = tuple(a)
    if len(a) > t.dim:
        raise TolIndexError(f"coordinate {list(a)} is longer than dimension {t.dim}")
    for x, d in zip(a, t.shape):
        if not 1 <= x <= d:
            raise TolIndexError(f"coordinate {list(a)} out of range for shape {list(t.shape)}")
    return a


def op_part(t: ToLValue, a: Sequence[int]) -> ToLValue:
    """Point member for a full coordinate; the sub-ToL below a prefix otherwise."""
    a = _check_coord(t, a)
    if len(a) == t.dim:
        return atomic_member(t, a)
    rest = t.shape[len(a):]
    step = volume(rest)
    start = ravel(t.shape[:len(a)], a) * step if a else 0
    return t.with_(shape=rest, data=t.data[start:start + step])


def op_part_block(t: ToLValue, a: Sequence[int], b: Sequence[int]) -> ToLValue:
    a, b = _check_coord(t, a), _check_coord(t, b)
    if len(a) != t.dim or len(b) != t.dim:
        raise TolIndexError("block corners must be full coordinates")
    if any(x > y for x, y in zip(a, b)):
        raise TolIndexError(f"empty block {list(a)}..{list(b)}")
    shape = tuple(y - x + 1 for x, y in zip(a, b))
    data = tuple(t.at(tuple(x + o - 1 for x, o in zip(a, c))) for c in coords(shape))
    return t.with_(shape=shape, data=data)


def op_part_slot(t: ToLValue, j: int) -> ToLValue:
    return atomic_member_slot(t, j)


def op_swap(t: ToLValue, d: int, perm: Sequence[int]) -> ToLValue:
    if t.dim == 0:
        t = t.with_(shape=(1,))
    if not 1 <= d <= t.dim:
        raise TolIndexError(f"swap dimension {d} out of range for dimension {t.dim}")
    axis = t.dim - d
    perm = [int(p) for p in perm]
    if sorted(perm) != list(range(1, t.shape[axis] + 1)):
        raise NotAPermutationError(f"{perm} is not a permutation of 1..{t.shape[axis]}")
    data = []
    for c in coords(t.shape):
        src = list(c)
        src[axis] = perm[c[axis] - 1]
        data.append(t.at(src))
    return t.with_(data=tuple(data))


def infer_shape(new_shape: Sequence[int], n: int) -> tuple[int, ...]:
    new_shape = [int(s) for s in new_shape]
    holes = [i for i, s in enumerate(new_shape) if s == -1]
    if len(holes) > 1:
        raise MultipleInferError("at most one -1 entry is allowed")
    if any(s < 1 and s != -1 for s in new_shape):
        raise VolumeMismatchError(f"invalid shape {new_shape}")
    if holes:
        known = math.prod(s for s in new_shape if s != -1)
        if n % known:
            raise VolumeMismatchError(f"cannot infer -1 in {new_shape} for {n} lists")
        new_shape[holes[0]] = n // known
    if math.prod(new_shape) != n:
        raise VolumeMismatchError(f"shape {new_shape} does not hold {n} lists")
    return tuple(new_shape)


def op_reshape(t: ToLValue, new_shape: Sequence[int]) -> ToLValue:
    return t.with_(shape=infer_shape(new_shape, len(t.data)))


def op_tile(t: ToLValue) -> ToLValue:
    if t.dim == 0:
        raise DegenerateShapeError("tile of a dimension-0 value")
    n = t.shape[-1]
    data = tuple(sum(t.data[i:i + n], ()) for i in range(0, len(t.data), n))
    tl = TypeList(t.type_list.spaces * n)
    return t.with_(type_list=tl, shape=t.shape[:-1], data=data)


# -- assembling results -------------------------------------------------------

def _as_value(r: Any) -> ToLValue:
    if isinstance(r, ToLValue):
        return r
    if isinstance(r, tuple):
        return make((r,), ())
    return make(((r,),), ())


def stack(results: Sequence[ToLValue], outer: Sequence[int]) -> ToLValue:
    """Place equally-shaped results at the coordinates of ``outer`` (row-major)."""
    first = results[0]
    for r in results:
        if r.shape != first.shape or r.capacity != first.capacity:
            raise ShapeMismatchError(
                f"map results differ: shape {list(r.shape)} capacity {r.capacity} vs "
                f"shape {list(first.shape)} capacity {first.capacity}")
    data = tuple(lst for r in results for lst in r.data)
    tl = first.type_list
    if len(results) > 1 and any(r.type_list != tl for r in results):
        tl = TypeList.of(*(default_space(lst[j] for lst in data) for j in range(first.capacity)))
    return ToLValue(tl, tuple(outer) + first.shape, data, all(r.static for r in results))


def op_map(t: ToLValue, f: FnExpr | Callable[[ToLValue, tuple], Any],
           iter: Sequence[str] = (), env: dict | None = None) -> ToLValue:
    """Apply ``f`` at every coordinate; results may be numerics, lists or sub-ToLs."""
    results = []
    for c in coords(t.shape):
        elem = atomic_member(t, c)
        if isinstance(f, FnExpr):
            if elem.capacity != 1:
                raise ArityError("function expressions take numeric elements")
            scope = dict(env or {})
            scope.update(zip(iter, c))
            r = eval_fnexpr(f, elem.scalar, c, scope)
        else:
            r = f(elem, c)
        results.append(_as_value(r))
    return stack(results, t.shape)


def _binary(f: Any) -> Callable:
    if isinstance(f, str):
        fn = lookup(f)
        if not fn.accepts(2):
            raise ArityError(f"reduce needs a binary function, {f} is not")
        return lambda x, acc, c: fn(x.scalar, acc.scalar)
    if isinstance(f, FnExpr):
        raise ArityError("reduce takes a binary function name or a callable")
    return f


def op_reduce(t: ToLValue, f: Any, init: Any) -> ToLValue:
    """Left fold in row-major order; ``f(element, acc)`` with init innermost."""
    step = _binary(f)
    acc = _as_value(init)
    for c in coords(t.shape):
        acc = _as_value(step(atomic_member(t, c), acc, c))
    return acc


def op_reduce_indexed(t: ToLValue, f: str, init: Any) -> tuple[Any, tuple[int, ...]]:
    """Fold keeping (best value, its coordinate); the first of equal winners is kept."""
    better = {"max": lookup("gt"), "min": lookup("lt")}[f]
    best, where = init, ()
    for c in coords(t.shape):
        x = atomic_member(t, c).scalar
        if better(x, best):
            best, where = x, c
    return best, where


def op_bracket(items: Sequence[ToLValue], concat: bool = False) -> ToLValue:
    """Bracket literal ``[e1, e2, ...]``.

    Numerics form a vector and equal shapes stack into a new leading
    dimension; otherwise, or when ``concat`` is set, items are concatenated
    along the leading dimension (numerics count as shape [1]).
    """
    items = [i for i in items if i is not None]
    if not items:
        raise ShapeMismatchError("empty bracket literal")
    caps = {i.capacity for i in items}
    if len(caps) != 1:
        raise TypeListMismatchError("bracket items differ in capacity")
    shapes = {i.shape for i in items}
    if not concat and len(shapes) == 1:
        return stack(items, (len(items),))
    parts = [i.with_(shape=(1,)) if i.dim == 0 else i for i in items]
    tails = {p.shape[1:] for p in parts}
    if len(tails) != 1:
        raise ShapeMismatchError(
            "bracket items must agree on trailing dimensions: "
            + ", ".join(str(list(p.shape)) for p in parts))
    lead = sum(p.shape[0] for p in parts)
    return ToLValue(_merged_types(parts), (lead,) + parts[0].shape[1:],
                    tuple(lst for p in parts for lst in p.data), all(p.static for p in parts))


def _merged_types(parts: Sequence[ToLValue]) -> TypeList:
    tl = parts[0].type_list
    if all(p.type_list == tl for p in parts):
        return tl
    data = [lst for p in parts for lst in p.data]
    return TypeList.of(*(default_space(lst[j] for lst in data) for j in range(tl.capacity)))


def lift(apply: Callable[[Sequence[Any]], Any], args: Sequence[ToLValue]) -> ToLValue:
    """Apply a numeric function elementwise, broadcasting numerics."""
    shaped = [a for a in args if not a.is_numeric]
    if not shaped:
        r = apply([a.scalar for a in args])
        return make(((r,),), (), static=all(a.static for a in args))
    shape = shaped[0].shape
    for a in shaped:
        if a.capacity != 1:
            raise ShapeMismatchError("elementwise arithmetic needs capacity 1")
        if a.shape != shape:
            raise ShapeMismatchError(
                f"elementwise shapes differ: {list(a.shape)} vs {list(shape)}")
    out = []
    for i in range(volume(shape)):
        out.append((apply([a.scalar if a.is_numeric else a.data[i][0] for a in args]),))
    return make(tuple(out), shape, static=all(a.static for a in args))
