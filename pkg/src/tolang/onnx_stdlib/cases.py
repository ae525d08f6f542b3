"""Runnable case-study programs and the parse-only listing corpus."""

from __future__ import annotations

from dataclasses import dataclass, field
from importlib import resources
from typing import Any

from .registry import SOURCE_VERSION


@dataclass(frozen=True)
class CaseStudy:
    name: str
    source: str
    inputs: dict[str, Any]  # a small example, data inputs
    attrs: dict[str, Any] = field(default_factory=dict)

    def run(self, inputs=None, attrs=None, seed: int = 0, memo: bool = True):
        from ..evaluator import run
        return run(self.source, inputs if inputs is not None else self.inputs, seed=seed,
                   memo=memo, attrs=attrs if attrs is not None else self.attrs)


_EXAMPLES: dict[str, tuple[dict, dict]] = {
    "matmul": ({"a": [[1, 2], [3, 4]], "b": [[5, 6], [7, 8]]}, {}),
    "conv2d": ({"in": [[1, 2, 3], [4, 5, 6], [7, 8, 9]], "k": [[1, 0], [0, 1]]},
               {"p": 0, "s": 1}),
    "avgpool1d": ({"in": [1, 2, 3, 4]}, {"k": 2, "s": 2, "p": 0}),
    "relax": ({"E": [[0, 1, 4], [1, 0, 2], [4, 2, 0]]}, {}),
    "resnet": ({"x": [[1.0, 2.0, 0.5, -1.0], [0.0, 3.0, -2.0, 1.5],
                      [2.5, -0.5, 1.0, 0.0], [-1.5, 0.5, 2.0, 1.0]],
                "kernel": [[0.0, 0.1, 0.0], [0.2, 1.0, -0.3], [0.0, 0.4, 0.0]]}, {}),
    "kmeans": ({"data": [[0.0, 0.0], [0.5, 0.0], [10.0, 10.0], [10.5, 9.5], [0.0, 1.0]]},
               {"k": 2}),
}

NAMES = tuple(_EXAMPLES)


def _read(folder: str, name: str) -> str:
    path = resources.files(__package__) / "sources" / SOURCE_VERSION / folder / f"{name}.tol"
    return path.read_text(encoding="utf-8")


def case_study(name: str) -> CaseStudy:
    inputs, attrs = _EXAMPLES[name]
    return CaseStudy(name, _read("cases", name), dict(inputs), dict(attrs))


def case_studies() -> dict[str, CaseStudy]:
    return {n: case_study(n) for n in NAMES}


def listings() -> dict[str, str]:
    """The case-study listings as first written; they parse but some do not run."""
    return {n: _read("listings", n) for n in NAMES}


def corpus() -> dict[str, str]:
    """Every checked-in program text: listings, case studies and operator sources."""
    from .registry import load_source, registry_list
    out = {f"listing/{k}": v for k, v in listings().items()}
    out.update({f"case/{k}": c.source for k, c in case_studies().items()})
    out.update({f"op/{op.name}": load_source(op.name) for op in registry_list()})
    return out
