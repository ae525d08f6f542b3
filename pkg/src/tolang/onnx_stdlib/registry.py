"""The ONNX operator rows: ToLang source, documented cost formulas, status."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from typing import Any, Callable, Mapping, Optional

from ..core import ToLValue
from ..errors import UnknownOperatorError
from ..evaluator import run_result

SOURCE_VERSION = "v1"

Shapes = Mapping[str, tuple[int, ...]]
Formula = Callable[[Shapes, Mapping[str, Any]], int]

VERIFIED = "VERIFIED"
TRANSCRIBED = "TRANSCRIBED"


@dataclass(frozen=True)
class StdlibOp:
    name: str
    inputs: tuple[str, ...]
    attrs: tuple[str, ...]
    eops_formula: str
    flops_formula: str  # "-" where the row gives none
    status: str
    eops: Optional[Formula] = field(default=None, compare=False, repr=False)
    flops: Optional[Formula] = field(default=None, compare=False, repr=False)
    notes: str = ""

    @property
    def params(self) -> tuple[str, ...]:
        return self.inputs + self.attrs

    @property
    def source(self) -> str:
        return load_source(self.name)


def _vol(shape: tuple[int, ...]) -> int:
    return math.prod(shape)


def vol(name: str = "t", k: int = 1, c: int = 0) -> Formula:
    return lambda sh, at: k * _vol(sh[name]) + c


def _pool(sh: Shapes, at: Mapping[str, Any], klen: int) -> int:
    return (sh["t"][0] + 2 * at["p"] - klen) // at["s"] + 1


def _matmul(sh: Shapes, at: Mapping[str, Any]) -> int:
    return 2 * _vol(sh["a"]) * sh["b"][1]


def _zero(sh: Shapes, at: Mapping[str, Any]) -> int:
    return 0


_POOL = "prod((|t|[axes]+2*p-k)/s+1)*k"
_CONV = "prod((|t|[axes]+2*p-|k|)/s+1)*2*|k|"

_ROWS: list[StdlibOp] = [
    StdlibOp("ArgMax", ("t",), (), "vol(t)", "vol(t)", VERIFIED, vol(), vol(),
             "whole-tensor argmax, 1-based coordinate, fold from -Inf"),
    StdlibOp("ArgMin", ("t",), (), "vol(t)", "vol(t)", VERIFIED, vol(), vol(),
             "whole-tensor argmin, 1-based coordinate, fold from +Inf"),
    StdlibOp("AveragePool", ("t",), ("k", "p", "s"), _POOL, _POOL, VERIFIED,
             lambda sh, at: _pool(sh, at, at["k"]) * at["k"],
             lambda sh, at: _pool(sh, at, at["k"]) * at["k"],
             "1-D, window of k, divide by k, k >= 2"),
    StdlibOp("BatchNormalization", ("t", "mean", "var"), (), "3*vol(t)", "2*vol(t)", VERIFIED,
             vol(k=3), vol(k=2), "divisor sqrt(var) per element"),
    StdlibOp("Celu", ("t",), ("alpha",), "6*vol(t)", "-", VERIFIED, vol(k=6)),
    StdlibOp("Clip", ("t",), ("mi", "ma"), "2*vol(t)", "2*vol(t)", VERIFIED, vol(k=2), vol(k=2)),
    StdlibOp("Concat", ("t1", "t2"), (), "0", "0", VERIFIED, _zero, _zero),
    StdlibOp("Conv", ("t", "k"), ("p", "s"), _CONV, _CONV, VERIFIED,
             lambda sh, at: _pool(sh, at, sh["k"][0]) * 2 * sh["k"][0],
             lambda sh, at: _pool(sh, at, sh["k"][0]) * 2 * sh["k"][0],
             "1-D cross-correlation, kernel indexed by window offset"),
    StdlibOp("ConvTranspose", ("in", "shape"), ("p", "s"), _CONV, _CONV, TRANSCRIBED,
             notes="no kernel or overlap-add in the sketch"),
    StdlibOp("CumSum", ("t",), (), "vol(t)", "vol(t)", VERIFIED, vol(), vol(), "1-D"),
    StdlibOp("DepthToSpace", ("t",), ("b",), "0", "0", VERIFIED, _zero, _zero,
             "DCR order, channel-first without batch"),
    StdlibOp("Dropout", ("t",), ("ratio",), "vol(t)", "vol(t)", TRANSCRIBED,
             notes="scales by a draw instead of masking"),
    StdlibOp("Elu", ("t",), ("alpha",), "5*vol(t)", "-", VERIFIED, vol(k=5),
             notes="alpha >= 1"),
    StdlibOp("Expand", ("t",), ("shape",), "0", "0", VERIFIED, _zero, _zero, "same rank"),
    StdlibOp("EyeLike", (), ("k",), "0", "0", VERIFIED, _zero, _zero),
    StdlibOp("Flatten", ("t",), (), "0", "0", VERIFIED, _zero, _zero, "to one dimension"),
    StdlibOp("Gather", ("t",), ("indices",), "0", "0", VERIFIED, _zero, _zero,
             "leading dimension, 1-based indices"),
    StdlibOp("Gemm", ("a", "b"), (), "2*vol(t1)*|t2|[2]", "2*vol(t1)*|t2|[2]", VERIFIED,
             _matmul, _matmul, "no alpha, beta or bias"),
    StdlibOp("Hardmax", ("t",), ("axes",), "1", "-", TRANSCRIBED,
             notes="sketch folds with max, no one-hot"),
    StdlibOp("HardSigmoid", ("t",), ("alpha", "beta"), "4*vol(t)", "-", VERIFIED, vol(k=4)),
    StdlibOp("HardSwish", ("t",), (), "5*vol(t)", "-", VERIFIED, vol(k=5)),
    StdlibOp("Identity", ("t",), (), "0", "0", VERIFIED, _zero, _zero),
    StdlibOp("LeakyRelu", ("t",), ("alpha",), "2*vol(t)", "-", VERIFIED, vol(k=2),
             notes="0 <= alpha <= 1"),
    StdlibOp("LogSoftmax", ("t",), ("ax",), "2*vol(t)+3", "-", VERIFIED, vol(k=2, c=3),
             notes="measures 3*vol(t) plus one log per fiber"),
    StdlibOp("LpNormalization", ("t",), ("p", "axes"), "3*vol(t)", "3*vol(t)", TRANSCRIBED,
             notes="sketch has no root and no division"),
    StdlibOp("LpPool", ("t", "in"), ("k", "p", "s"), "prod((|t|[axes]+2*p-k)/s+2)*2*k+1", "-",
             TRANSCRIBED, notes="fold reads the whole input"),
    StdlibOp("MatMul", ("a", "b"), (), "2*vol(t1)*|t2|[2]", "2*vol(t1)*|t2|[2]", VERIFIED,
             _matmul, _matmul),
    StdlibOp("MaxPool", ("t",), ("k", "p", "s"), _POOL, _POOL, VERIFIED,
             lambda sh, at: _pool(sh, at, at["k"]) * at["k"],
             lambda sh, at: _pool(sh, at, at["k"]) * at["k"],
             "1-D, zero padding, fold from -Inf"),
    StdlibOp("MaxUnpool", ("in", "shape"), ("p", "s"), _POOL, _POOL, TRANSCRIBED,
             notes="ellipsis repetition, no indices"),
    StdlibOp("Mean", ("t",), (), "vol(t)", "vol(t)", VERIFIED, vol(), vol(),
             "operands stacked on the leading dimension, n >= 2"),
    StdlibOp("OneHot", (), ("indices", "depth"), "0", "-", VERIFIED, _zero, None,
             "1-based indices, values 1/0"),
    StdlibOp("Pad", ("t",), ("p",), "0", "0", VERIFIED, _zero, _zero, "1-D zero padding"),
    StdlibOp("PRelu", ("t", "slope"), (), "2*vol(t)", "-", VERIFIED, vol(k=2),
             notes="scalar slope in [0,1]"),
    StdlibOp("Range", ("start", "limit", "delta"), (), "vol(t)", "vol(t)", TRANSCRIBED,
             notes="start and delta misplaced in the sketch"),
    StdlibOp("ReduceL1", ("t",), ("ax",), "2*vol(t)", "2*vol(t)", VERIFIED, vol(k=2), vol(k=2),
             "|x| costs two, measures 3*vol(t)"),
    StdlibOp("ReduceL2", ("t",), ("ax",), "2*vol(t)", "2*vol(t)", VERIFIED, vol(k=2), vol(k=2),
             "reduced extent >= 2"),
    StdlibOp("ReduceLogSum", ("t",), ("ax",), "2*vol(t)", "2*vol(t)", VERIFIED, vol(k=2),
             vol(k=2), "measures vol(t) plus one log per fiber"),
    StdlibOp("ReduceLogSumExp", ("t",), ("ax",), "3*vol(t)", "3*vol(t)", VERIFIED, vol(k=3),
             vol(k=3), "measures 2*vol(t) plus one log per fiber"),
    StdlibOp("ReduceMax", ("t",), ("ax",), "vol(t)", "vol(t)", VERIFIED, vol(), vol()),
    StdlibOp("ReduceMean", ("t",), ("ax",), "vol(t)", "vol(t)", VERIFIED, vol(), vol(),
             "reduced extent >= 2"),
    StdlibOp("ReduceMin", ("t",), ("ax",), "vol(t)", "vol(t)", VERIFIED, vol(), vol()),
    StdlibOp("ReduceProd", ("t",), ("ax",), "vol(t)", "vol(t)", VERIFIED, vol(), vol()),
    StdlibOp("ReduceSum", ("t",), ("ax",), "vol(t)", "vol(t)", VERIFIED, vol(), vol()),
    StdlibOp("ReduceSumSquare", ("t",), ("ax",), "2*vol(t)", "2*vol(t)", VERIFIED, vol(k=2),
             vol(k=2)),
    StdlibOp("Relu", ("t",), (), "vol(t)", "-", VERIFIED, vol()),
    StdlibOp("Reshape", ("t",), ("sha",), "0", "0", VERIFIED, _zero, _zero),
    StdlibOp("Selu", ("t",), ("alpha", "gamma"), "6*vol(t)", "-", VERIFIED, vol(k=6),
             notes="alpha >= 1"),
    StdlibOp("Shape", ("t",), (), "0", "0", VERIFIED, _zero, _zero),
    StdlibOp("Sigmoid", ("t",), (), "4*vol(t)", "-", VERIFIED, vol(k=4)),
    StdlibOp("Size", ("t",), (), "0", "0", VERIFIED, _zero, _zero),
    StdlibOp("Slice", ("t",), ("starts", "ends", "steps"), "0", "0", VERIFIED, _zero, _zero,
             "leading dimension, 1-based inclusive bounds"),
    StdlibOp("Softmax", ("t",), ("ax",), "2*vol(t)+2", "-", VERIFIED, vol(k=2, c=2),
             notes="measures 3*vol(t)"),
    StdlibOp("Softplus", ("t",), (), "3*vol(t)", "-", VERIFIED, vol(k=3)),
    StdlibOp("Softsign", ("t",), (), "3*vol(t)", "-", VERIFIED, vol(k=3),
             notes="|x| costs two, measures 4*vol(t)"),
    StdlibOp("SpaceToDepth", ("t",), ("b",), "0", "0", VERIFIED, _zero, _zero,
             "DCR order, channel-first without batch"),
    StdlibOp("Split", ("t",), ("parts",), "0", "0", VERIFIED, _zero, _zero,
             "1-D, equal parts stacked"),
    StdlibOp("Sum", ("t",), (), "vol(t)*n", "vol(t)*n", VERIFIED, vol(), vol(),
             "operands stacked on the leading dimension; vol(t) is one operand"),
    StdlibOp("Swish", ("t",), (), "5*vol(t)", "-", VERIFIED, vol(k=5)),
    StdlibOp("ThresholdedRelu", ("t",), ("th",), "2*vol(t)", "-", VERIFIED, vol(k=2)),
    StdlibOp("Transpose", ("t",), ("perm",), "0", "0", VERIFIED, _zero, _zero,
             "1-based permutation"),
]

REGISTRY: dict[str, StdlibOp] = {op.name: op for op in _ROWS}


@lru_cache(maxsize=None)
def load_source(name: str) -> str:
    path = resources.files(__package__) / "sources" / SOURCE_VERSION / f"{name}.tol"
    return path.read_text(encoding="utf-8")


def registry_list() -> list[StdlibOp]:
    return list(_ROWS)


def get(name: str) -> StdlibOp:
    try:
        return REGISTRY[name]
    except KeyError:
        raise UnknownOperatorError(f"no stdlib operator named {name!r}") from None


def run_stdlib(name: str, inputs: Mapping[str, Any], attrs: Mapping[str, Any] | None = None,
               seed: int = 0, memo: bool = True) -> tuple[ToLValue, int]:
    """Run one operator; inputs are data (charged), attrs are static parameters."""
    op = get(name)
    value, report = run_result(op.source, inputs, seed=seed, memo=memo, attrs=attrs)
    return value, report.total
