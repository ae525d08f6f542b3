"""Tensor-of-list values and the five atomic computations.

A ToL is an n-dimensional array (row-major, 1-based coordinates) whose cells
are fixed-capacity lists of numerics. Dimension 0 is allowed and denotes a
bare list; a bare list of capacity 1 is a numeric.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Any, Iterable, Iterator, Sequence

from .errors import (
    ConversionError,
    DegenerateShapeError,
    DomainError,
    ShapeMismatchError,
    TolIndexError,
    TypeListMismatchError,
)

SPACE_IDS = (
    "B", "N", "N*", "Z", "Z*", "Z+", "Z-",
    "Q", "Q*", "Q+", "Q-", "R", "R*", "R+", "R-", "I", "C", "CHAR",
)
_INTEGRAL = {"B", "N", "N*", "Z", "Z*", "Z+", "Z-"}
_UNSUPPORTED = {"I", "C"}


def is_symbolic(x: Any) -> bool:
    return not isinstance(x, (int, float, str))


@dataclass(frozen=True)
class TypeSpace:
    id: str
    bounds: tuple[float, float] | None = None

    def __post_init__(self):
        if self.id not in SPACE_IDS:
            raise TypeListMismatchError(f"unknown type space {self.id!r}")
        if self.bounds is not None and self.bounds[0] > self.bounds[1]:
            raise TypeListMismatchError(f"empty bounds {self.bounds} on {self.id}")

    @property
    def integral(self) -> bool:
        return self.id in _INTEGRAL

    def contains(self, x: Any) -> bool:
        if is_symbolic(x):
            return True
        sid = self.id
        if sid in _UNSUPPORTED:
            return False
        if sid == "CHAR":
            return isinstance(x, str) and len(x) == 1
        if isinstance(x, str):
            return False
        if sid in _INTEGRAL:
            if isinstance(x, float) and not x.is_integer():
                return False
        elif math.isnan(x):
            return False
        ok = {
            "B": lambda v: v in (0, 1),
            "N": lambda v: v >= 0,
            "N*": lambda v: v >= 1,
            "Z": lambda v: True,
            "Z*": lambda v: v != 0,
            "Z+": lambda v: v > 0,
            "Z-": lambda v: v < 0,
        }.get(sid)
        if ok is None:
            suffix = sid[1:]
            ok = {"": lambda v: True, "*": lambda v: v != 0,
                  "+": lambda v: v > 0, "-": lambda v: v < 0}[suffix]
        if not ok(x):
            return False
        if self.bounds is not None:
            return self.bounds[0] <= x <= self.bounds[1]
        return True

    def cast(self, x: Any) -> Any:
        if is_symbolic(x):
            return x
        if self.id in _UNSUPPORTED:
            raise DomainError(f"type space {self.id} is not supported at runtime")
        if self.id == "CHAR":
            if isinstance(x, str):
                y = x
            elif isinstance(x, (int, float)) and float(x).is_integer() and 0 <= x < 0x110000:
                y = chr(int(x))
            else:
                raise ConversionError(f"cannot convert {x!r} to CHAR")
        elif isinstance(x, str):
            y = ord(x)
            if not self.integral:
                y = float(y)
        elif self.integral:
            if isinstance(x, float) and not x.is_integer():
                raise ConversionError(f"{x!r} is not in {self.id}")
            y = int(x)
        else:
            y = float(x)
        if not self.contains(y):
            raise ConversionError(f"{x!r} is not in {self.id}")
        return y

    def __str__(self) -> str:
        if self.bounds is None:
            return self.id
        return f"{self.id}[{self.bounds[0]},{self.bounds[1]}]"


@dataclass(frozen=True)
class TypeList:
    spaces: tuple[TypeSpace, ...]

    def __post_init__(self):
        if len(self.spaces) < 1:
            raise TypeListMismatchError("type list capacity must be >= 1")

    @classmethod
    def of(cls, *ids: str) -> "TypeList":
        return cls(tuple(TypeSpace(i) for i in ids))

    @property
    def capacity(self) -> int:
        return len(self.spaces)

    @property
    def ids(self) -> tuple[str, ...]:
        return tuple(s.id for s in self.spaces)

    def __add__(self, other: "TypeList") -> "TypeList":
        return TypeList(self.spaces + other.spaces)

    def __str__(self) -> str:
        return "[" + ",".join(map(str, self.spaces)) + "]"


def default_space(values: Iterable[Any]) -> str:
    """Narrowest standard space covering ``values`` (bool -> B, int > 0 -> N, ...)."""
    kinds = set()
    for v in values:
        if isinstance(v, bool):
            kinds.add("B")
        elif isinstance(v, int):
            kinds.add("N" if v > 0 else "Z")
        elif isinstance(v, float):
            kinds.add("R")
        elif isinstance(v, str):
            kinds.add("CHAR")
        else:
            kinds.add("R")
    if not kinds:
        return "R"
    if len(kinds) == 1:
        return kinds.pop()
    if "CHAR" in kinds:
        raise TypeListMismatchError("characters mixed with numbers in one slot")
    if "R" in kinds:
        return "R"
    if "Z" in kinds:
        return "Z"
    return "N"  # B mixed with N


def volume(shape: Sequence[int]) -> int:
    return math.prod(shape)


def coords(shape: Sequence[int]) -> Iterator[tuple[int, ...]]:
    """All 1-based coordinates of ``shape`` in row-major order."""
    return itertools.product(*(range(1, d + 1) for d in shape))


def ravel(shape: Sequence[int], coord: Sequence[int]) -> int:
    if len(coord) != len(shape):
        raise TolIndexError(f"coordinate {list(coord)} has length {len(coord)}, "
                            f"value has dimension {len(shape)}")
    flat = 0
    for a, d in zip(coord, shape):
        if not 1 <= a <= d:
            raise TolIndexError(f"coordinate {list(coord)} out of range for shape {list(shape)}")
        flat = flat * d + (a - 1)
    return flat


@dataclass(frozen=True, eq=False)
class ToLValue:
    type_list: TypeList
    shape: tuple[int, ...]
    data: tuple[tuple[Any, ...], ...]
    # derived only from constants, coordinates and shapes
    static: bool = field(default=False, compare=False)
    # lowering provenance
    origin: Any = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if any(not isinstance(d, int) or d < 1 for d in self.shape):
            raise ShapeMismatchError(f"invalid shape {list(self.shape)}")
        if len(self.data) != volume(self.shape):
            raise ShapeMismatchError(
                f"{len(self.data)} lists for shape {list(self.shape)}")
        k = self.type_list.capacity
        for lst in self.data:
            if len(lst) != k:
                raise ShapeMismatchError(f"list {lst!r} does not have capacity {k}")

    @property
    def dim(self) -> int:
        return len(self.shape)

    @property
    def capacity(self) -> int:
        return self.type_list.capacity

    @property
    def volume(self) -> int:
        return volume(self.shape) * self.capacity

    @property
    def is_numeric(self) -> bool:
        return self.dim == 0 and self.capacity == 1

    @property
    def scalar(self) -> Any:
        if not self.is_numeric:
            raise ShapeMismatchError(
                f"expected a numeric, got shape {list(self.shape)} capacity {self.capacity}")
        return self.data[0][0]

    def numerics(self) -> Iterator[Any]:
        for lst in self.data:
            yield from lst

    def at(self, coord: Sequence[int]) -> tuple[Any, ...]:
        return self.data[ravel(self.shape, coord)]

    def validate(self) -> None:
        for lst in self.data:
            for sp, x in zip(self.type_list.spaces, lst):
                if not sp.contains(x):
                    raise ConversionError(f"{x!r} is not in {sp}")

    def with_(self, **kw) -> "ToLValue":
        fields = dict(type_list=self.type_list, shape=self.shape, data=self.data,
                      static=self.static, origin=None)
        fields.update(kw)
        return ToLValue(**fields)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ToLValue):
            return NotImplemented
        return (self.shape == other.shape and self.capacity == other.capacity
                and self.data == other.data)

    def __hash__(self) -> int:
        return hash((self.shape, self.data))

    def to_nested(self) -> Any:
        def cell(lst):
            return lst[0] if len(lst) == 1 else tuple(lst)

        def build(level: int, offset: int) -> Any:
            if level == self.dim:
                return cell(self.data[offset])
            step = volume(self.shape[level + 1:])
            return [build(level + 1, offset + i * step) for i in range(self.shape[level])]

        return build(0, 0)

    def __repr__(self) -> str:
        return f"ToL({self.to_nested()!r}, {self.type_list})"


def make(data: tuple[tuple[Any, ...], ...], shape: Sequence[int],
         type_list: TypeList | None = None, static: bool = False) -> ToLValue:
    """Build a value, inferring the default type list when none is given."""
    data = tuple(tuple(lst) for lst in data)
    if type_list is None:
        k = len(data[0]) if data else 1
        type_list = TypeList.of(*(default_space(lst[j] for lst in data) for j in range(k)))
    return ToLValue(type_list, tuple(shape), data, static)


def tol(obj: Any, type_list: TypeList | Sequence[str] | None = None) -> ToLValue:
    """Build a ToL from nested Python lists; tuples denote lists (cells)."""
    if type_list is not None and not isinstance(type_list, TypeList):
        type_list = TypeList.of(*type_list)
    shape: list[int] = []
    probe = obj
    while isinstance(probe, list):
        if not probe:
            raise ShapeMismatchError("empty dimension")
        shape.append(len(probe))
        probe = probe[0]
    cells: list[tuple] = []

    def walk(x: Any, level: int) -> None:
        if level == len(shape):
            if isinstance(x, list):
                raise ShapeMismatchError("ragged nesting")
            cells.append(tuple(x) if isinstance(x, tuple) else (x,))
            return
        if not isinstance(x, list) or len(x) != shape[level]:
            raise ShapeMismatchError("ragged nesting")
        for y in x:
            walk(y, level + 1)

    walk(obj, 0)
    caps = {len(c) for c in cells}
    if len(caps) != 1:
        raise ShapeMismatchError("lists of different capacity")
    v = make(tuple(cells), shape)
    if type_list is not None:
        if type_list.capacity != v.capacity:
            raise TypeListMismatchError("type list capacity does not match data")
        v = v.with_(type_list=type_list,
                    data=tuple(tuple(sp.cast(x) for sp, x in zip(type_list.spaces, lst))
                               for lst in v.data))
    return v


def scalar(x: Any, static: bool = False) -> ToLValue:
    return make(((x,),), (), static=static)


def zeros(shape: Sequence[int], static: bool = True) -> ToLValue:
    shape = tuple(shape)
    return ToLValue(TypeList.of("Z"), shape, ((0,),) * volume(shape), static)


# -- atomic computations ------------------------------------------------------

def atomic_lambda(f, args: Sequence[Any], consts: Sequence[Any] = ()) -> Any:
    """Apply an elementary function (or its registered name) to numerics."""
    from .elementary import lookup

    if isinstance(f, str):
        f = lookup(f)
    return f(*args, *consts)


def atomic_norm(t: ToLValue) -> ToLValue:
    if t.dim == 0:
        raise DegenerateShapeError("norm of a dimension-0 value")
    return ToLValue(TypeList.of("N*"), (t.dim,), tuple((d,) for d in t.shape), True)


def atomic_capacity(t: ToLValue) -> int:
    return t.capacity


def atomic_member(t: ToLValue, c: Sequence[int]) -> ToLValue:
    c = tuple(int(a) for a in c)
    return ToLValue(t.type_list, (), (t.at(c),), t.static)


def atomic_member_slot(t: ToLValue, j: int) -> ToLValue:
    if not 1 <= j <= t.capacity:
        raise TolIndexError(f"slot {j} out of range for capacity {t.capacity}")
    return ToLValue(TypeList((t.type_list.spaces[j - 1],)), t.shape,
                    tuple((lst[j - 1],) for lst in t.data), t.static)


def _promote(t: ToLValue) -> ToLValue:
    return t.with_(shape=(1,), static=t.static) if t.dim == 0 else t


def _check_same_types(t1: ToLValue, t2: ToLValue) -> None:
    if t1.capacity != t2.capacity:
        raise TypeListMismatchError(
            f"type lists {t1.type_list} and {t2.type_list} differ in capacity")


def _merge_type_lists(t1: ToLValue, t2: ToLValue) -> TypeList:
    if t1.type_list == t2.type_list:
        return t1.type_list
    ids = []
    for j in range(t1.capacity):
        ids.append(default_space(
            itertools.chain((lst[j] for lst in t1.data), (lst[j] for lst in t2.data))))
    return TypeList.of(*ids)


def atomic_join_last(t1: ToLValue, t2: ToLValue) -> ToLValue:
    """Join along the last dimension. Dimension-0 operands count as shape [1]."""
    t1, t2 = _promote(t1), _promote(t2)
    if t1.dim != t2.dim or t1.shape[:-1] != t2.shape[:-1]:
        raise ShapeMismatchError(
            f"cannot join shapes {list(t1.shape)} and {list(t2.shape)} along the last dimension")
    _check_same_types(t1, t2)
    d1, d2 = t1.shape[-1], t2.shape[-1]
    rows = volume(t1.shape[:-1])
    data: list[tuple] = []
    for r in range(rows):
        data.extend(t1.data[r * d1:(r + 1) * d1])
        data.extend(t2.data[r * d2:(r + 1) * d2])
    return ToLValue(_merge_type_lists(t1, t2), t1.shape[:-1] + (d1 + d2,), tuple(data),
                    t1.static and t2.static)


def atomic_join_list(t1: ToLValue, t2: ToLValue) -> ToLValue:
    if t1.shape != t2.shape:
        raise ShapeMismatchError(
            f"cannot join lists of shapes {list(t1.shape)} and {list(t2.shape)}")
    return ToLValue(t1.type_list + t2.type_list, t1.shape,
                    tuple(a + b for a, b in zip(t1.data, t2.data)), t1.static and t2.static)


def atomic_embed(t: ToLValue) -> ToLValue:
    return t.with_(shape=t.shape + (1,))
