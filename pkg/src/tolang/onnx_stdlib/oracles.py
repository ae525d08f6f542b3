"""Brute-force numpy references and the shape grid for each VERIFIED operator.

The references are written from the usual operator definitions, not from
the ToLang sources, so a shared mistake would have to be made twice.
Coordinates and indices are 1-based to match ToLang.
"""

from __future__ import annotations

import random
import zlib
from dataclasses import dataclass
from typing import Any, Callable

import numpy as np


@dataclass(frozen=True)
class Instance:
    inputs: dict[str, Any]  # nested lists
    attrs: dict[str, Any]

    def shapes(self) -> dict[str, tuple[int, ...]]:
        return {k: np.shape(v) for k, v in self.inputs.items()}


def _a(x: Any) -> np.ndarray:
    return np.asarray(x, dtype=float)


def _pad1(t: np.ndarray, p: int) -> np.ndarray:
    return np.concatenate([np.zeros(p), t, np.zeros(p)])


def _windows(t: np.ndarray, k: int, p: int, s: int) -> list[np.ndarray]:
    x = _pad1(t, p)
    n_out = (len(t) + 2 * p - k) // s + 1
    return [x[i * s:i * s + k] for i in range(n_out)]


def _argbest(t: np.ndarray, fn) -> Any:
    flat = int(fn(t))
    coord = [c + 1 for c in np.unravel_index(flat, t.shape)]
    return coord[0] if t.ndim == 1 else coord


def _elu(x, alpha):
    return np.where(x > 0, x, alpha * (np.exp(x) - 1))


def _d2s(t: np.ndarray, b: int) -> np.ndarray:
    c, h, w = t.shape
    return t.reshape(b, b, c // (b * b), h, w).transpose(2, 3, 0, 4, 1).reshape(
        c // (b * b), h * b, w * b)


def _s2d(t: np.ndarray, b: int) -> np.ndarray:
    c, h, w = t.shape
    return t.reshape(c, h // b, b, w // b, b).transpose(2, 4, 0, 1, 3).reshape(
        c * b * b, h // b, w // b)


def _softmax(t: np.ndarray, ax: int) -> np.ndarray:
    e = np.exp(t)
    return e / e.sum(axis=ax - 1, keepdims=True)


def _red(fn: Callable) -> Callable:
    return lambda i, a: fn(_a(i["t"]), a["ax"] - 1)


ORACLES: dict[str, Callable[[dict, dict], Any]] = {
    "ArgMax": lambda i, a: _argbest(_a(i["t"]), np.argmax),
    "ArgMin": lambda i, a: _argbest(_a(i["t"]), np.argmin),
    "AveragePool": lambda i, a: [w.sum() / a["k"] for w in
                                 _windows(_a(i["t"]), a["k"], a["p"], a["s"])],
    "MaxPool": lambda i, a: [w.max() for w in _windows(_a(i["t"]), a["k"], a["p"], a["s"])],
    "Conv": lambda i, a: [float(np.dot(w, _a(i["k"]))) for w in
                          _windows(_a(i["t"]), len(i["k"]), a["p"], a["s"])],
    "BatchNormalization": lambda i, a: (_a(i["t"]) - i["mean"]) / np.sqrt(i["var"]),
    "Celu": lambda i, a: np.maximum(0, _a(i["t"])) + np.minimum(
        0, a["alpha"] * (np.exp(_a(i["t"]) / a["alpha"]) - 1)),
    "Clip": lambda i, a: np.clip(_a(i["t"]), a["mi"], a["ma"]),
    "Concat": lambda i, a: np.concatenate([_a(i["t1"]), _a(i["t2"])], axis=0),
    "CumSum": lambda i, a: np.cumsum(_a(i["t"])),
    "DepthToSpace": lambda i, a: _d2s(_a(i["t"]), a["b"]),
    "Elu": lambda i, a: _elu(_a(i["t"]), a["alpha"]),
    "Expand": lambda i, a: np.broadcast_to(_a(i["t"]), a["shape"]),
    "EyeLike": lambda i, a: np.eye(a["k"]),
    "Flatten": lambda i, a: _a(i["t"]).ravel(),
    "Gather": lambda i, a: np.take(_a(i["t"]), np.asarray(a["indices"]) - 1, axis=0),
    "Gemm": lambda i, a: _a(i["a"]) @ _a(i["b"]),
    "MatMul": lambda i, a: _a(i["a"]) @ _a(i["b"]),
    "HardSigmoid": lambda i, a: np.clip(a["alpha"] * _a(i["t"]) + a["beta"], 0, 1),
    "HardSwish": lambda i, a: _a(i["t"]) * np.clip(_a(i["t"]) / 6 + 0.5, 0, 1),
    "Identity": lambda i, a: _a(i["t"]),
    "LeakyRelu": lambda i, a: np.where(_a(i["t"]) >= 0, _a(i["t"]), a["alpha"] * _a(i["t"])),
    "PRelu": lambda i, a: np.where(_a(i["t"]) >= 0, _a(i["t"]), i["slope"] * _a(i["t"])),
    "LogSoftmax": lambda i, a: np.log(_softmax(_a(i["t"]), a["ax"])),
    "Softmax": lambda i, a: _softmax(_a(i["t"]), a["ax"]),
    "Mean": lambda i, a: _a(i["t"]).mean(axis=0),
    "Sum": lambda i, a: _a(i["t"]).sum(axis=0),
    "OneHot": lambda i, a: np.eye(a["depth"])[np.asarray(a["indices"]) - 1],
    "Pad": lambda i, a: _pad1(_a(i["t"]), a["p"]),
    "ReduceSum": _red(lambda t, ax: t.sum(axis=ax, keepdims=True)),
    "ReduceMax": _red(lambda t, ax: t.max(axis=ax, keepdims=True)),
    "ReduceMin": _red(lambda t, ax: t.min(axis=ax, keepdims=True)),
    "ReduceProd": _red(lambda t, ax: t.prod(axis=ax, keepdims=True)),
    "ReduceMean": _red(lambda t, ax: t.mean(axis=ax, keepdims=True)),
    "ReduceSumSquare": _red(lambda t, ax: (t * t).sum(axis=ax, keepdims=True)),
    "ReduceL1": _red(lambda t, ax: np.abs(t).sum(axis=ax, keepdims=True)),
    "ReduceL2": _red(lambda t, ax: np.sqrt((t * t).sum(axis=ax, keepdims=True))),
    "ReduceLogSum": _red(lambda t, ax: np.log(t.sum(axis=ax, keepdims=True))),
    "ReduceLogSumExp": _red(lambda t, ax: np.log(np.exp(t).sum(axis=ax, keepdims=True))),
    "Relu": lambda i, a: np.maximum(_a(i["t"]), 0),
    "Reshape": lambda i, a: _a(i["t"]).reshape(a["sha"]),
    "Selu": lambda i, a: a["gamma"] * _elu(_a(i["t"]), a["alpha"]),
    "Shape": lambda i, a: list(np.shape(i["t"])),
    "Sigmoid": lambda i, a: 1 / (1 + np.exp(-_a(i["t"]))),
    "Size": lambda i, a: int(np.size(i["t"])),
    "Slice": lambda i, a: _a(i["t"])[a["starts"] - 1:a["ends"]:a["steps"]],
    "Softplus": lambda i, a: np.log(1 + np.exp(_a(i["t"]))),
    "Softsign": lambda i, a: _a(i["t"]) / (1 + np.abs(_a(i["t"]))),
    "SpaceToDepth": lambda i, a: _s2d(_a(i["t"]), a["b"]),
    "Split": lambda i, a: _a(i["t"]).reshape(a["parts"], -1),
    "Swish": lambda i, a: _a(i["t"]) / (1 + np.exp(-_a(i["t"]))),
    "ThresholdedRelu": lambda i, a: np.where(_a(i["t"]) > a["th"], _a(i["t"]), 0.0),
    "Transpose": lambda i, a: np.transpose(_a(i["t"]), [p - 1 for p in a["perm"]]),
}


# -- shape grid ---------------------------------------------------------------

def _rng(name: str) -> random.Random:
    return random.Random(zlib.crc32(name.encode()))


def _tensor(rng: random.Random, shape, lo=-3.0, hi=3.0) -> Any:
    if not shape:
        return round(rng.uniform(lo, hi), 6)
    return [_tensor(rng, shape[1:], lo, hi) for _ in range(shape[0])]


_SHAPES = [(5,), (3, 4), (2, 3, 4)]
_REDUCE_GRID = [((6,), 1), ((3, 4), 2), ((3, 4), 1), ((2, 3, 4), 2)]


def grid(name: str) -> list[Instance]:
    """At least three concrete instances, every extent at most 8."""
    rng = _rng(name)
    T = lambda shape, lo=-3.0, hi=3.0: _tensor(rng, shape, lo, hi)  # noqa: E731
    I = Instance  # noqa: E741
    if name in ("MatMul", "Gemm"):
        return [I({"a": T((m, n)), "b": T((n, p))}, {}) for m, n, p in
                [(2, 2, 2), (3, 4, 2), (8, 8, 8), (1, 5, 3)]]
    if name in ("AveragePool", "MaxPool"):
        return [I({"t": T((n,))}, {"k": k, "p": p, "s": s}) for n, k, p, s in
                [(4, 2, 0, 2), (7, 3, 1, 1), (8, 3, 2, 2), (6, 2, 1, 3)]]
    if name == "Conv":
        return [I({"t": T((n,)), "k": T((m,))}, {"p": p, "s": s}) for n, m, p, s in
                [(4, 3, 1, 1), (8, 3, 0, 2), (6, 2, 2, 1)]]
    if name in ("ArgMax", "ArgMin"):
        return [I({"t": T(s)}, {}) for s in [(7,), (3, 4), (2, 3, 2)]]
    if name == "BatchNormalization":
        return [I({"t": T(s), "mean": rng.uniform(-1, 1), "var": rng.uniform(0.5, 4)}, {})
                for s in [(5,), (8, 8), (2, 3, 4)]]
    if name in ("Celu", "Elu", "Selu"):
        attrs = [{"alpha": 1.0, "gamma": 1.0507}, {"alpha": 1.6733, "gamma": 1.0507},
                 {"alpha": 2.5, "gamma": 0.5}]
        if name == "Celu":
            attrs[0] = {"alpha": 0.5}
        return [I({"t": T(s)}, a) for s, a in zip(_SHAPES, attrs)]
    if name == "Clip":
        return [I({"t": T(s)}, {"mi": -1.0, "ma": 1.5}) for s in _SHAPES]
    if name == "Concat":
        return [I({"t1": T((m,) + r), "t2": T((n,) + r)}, {}) for m, n, r in
                [(2, 3, ()), (2, 2, (3,)), (1, 3, (2, 2))]]
    if name == "CumSum":
        return [I({"t": T((n,))}, {}) for n in (1, 5, 8)]
    if name == "DepthToSpace":
        return [I({"t": T((c * b * b, h, w))}, {"b": b}) for c, b, h, w in
                [(1, 2, 2, 2), (2, 2, 1, 3), (2, 2, 2, 1)]]
    if name == "SpaceToDepth":
        return [I({"t": T((c, h * b, w * b))}, {"b": b}) for c, b, h, w in
                [(1, 2, 2, 2), (2, 2, 1, 3), (2, 2, 2, 1)]]
    if name == "Expand":
        return [I({"t": T(s)}, {"shape": list(o)}) for s, o in
                [((2, 1), (2, 3)), ((1,), (5,)), ((1, 3, 1), (2, 3, 4))]]
    if name == "EyeLike":
        return [I({}, {"k": k}) for k in (1, 3, 8)]
    if name in ("Flatten", "Identity", "Shape", "Size", "Relu", "HardSwish", "Sigmoid",
                "Softplus", "Softsign", "Swish"):
        return [I({"t": T(s)}, {}) for s in _SHAPES]
    if name == "Gather":
        return [I({"t": T(s)}, {"indices": idx}) for s, idx in
                [((4,), [2, 1, 4]), ((3, 2), [3, 3]), ((2, 2, 2), [[1, 2], [2, 1]])]]
    if name == "HardSigmoid":
        return [I({"t": T(s)}, {"alpha": 0.2, "beta": 0.5}) for s in _SHAPES]
    if name == "LeakyRelu":
        return [I({"t": T(s)}, {"alpha": a}) for s, a in zip(_SHAPES, (0.01, 0.2, 1.0))]
    if name == "PRelu":
        return [I({"t": T(s), "slope": a}, {}) for s, a in zip(_SHAPES, (0.25, 0.0, 0.5))]
    if name in ("Softmax", "LogSoftmax"):
        return [I({"t": T(s)}, {"ax": ax}) for s, ax in _REDUCE_GRID]
    if name in ("Mean", "Sum"):
        return [I({"t": T(s)}, {}) for s in [(2, 3), (3, 2, 2), (4, 5)]]
    if name == "OneHot":
        return [I({}, {"indices": idx, "depth": d}) for idx, d in
                [([1], 1), ([1, 3, 2], 3), ([5, 1, 8, 8], 8)]]
    if name == "Pad":
        return [I({"t": T((n,))}, {"p": p}) for n, p in [(3, 0), (4, 1), (2, 3)]]
    if name.startswith("Reduce"):
        lo, hi = (0.1, 3.0) if name == "ReduceLogSum" else (-3.0, 3.0)
        if name == "ReduceProd":
            lo, hi = -1.5, 1.5
        return [I({"t": T(s, lo, hi)}, {"ax": ax}) for s, ax in _REDUCE_GRID]
    if name == "Reshape":
        return [I({"t": T(s)}, {"sha": sha}) for s, sha in
                [((6,), [2, 3]), ((3, 4), [-1]), ((2, 3, 4), [4, -1, 2])]]
    if name == "Slice":
        return [I({"t": T(s)}, {"starts": a, "ends": b, "steps": c}) for s, a, b, c in
                [((6,), 2, 6, 2), ((5, 2), 1, 5, 1), ((8,), 3, 3, 1)]]
    if name == "Split":
        return [I({"t": T((n,))}, {"parts": p}) for n, p in [(6, 3), (4, 1), (8, 4)]]
    if name == "ThresholdedRelu":
        return [I({"t": T(s)}, {"th": th}) for s, th in zip(_SHAPES, (1.0, 0.0, -0.5))]
    if name == "Transpose":
        return [I({"t": T(s)}, {"perm": p}) for s, p in
                [((3, 4), [2, 1]), ((2, 3, 4), [3, 1, 2]), ((5,), [1]), ((2, 1, 3), [2, 3, 1])]]
    raise KeyError(f"no grid for {name}")


def expected(name: str, inst: Instance) -> np.ndarray:
    return np.asarray(ORACLES[name](inst.inputs, inst.attrs), dtype=float)
