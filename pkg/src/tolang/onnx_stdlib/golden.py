"""Golden EOPs/FLOPs tables: measure every VERIFIED operator over its grid."""

from __future__ import annotations

import csv
import hashlib
import io
import json
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Any, Iterable, Optional

import numpy as np

from ..tensorfile import canonical_json
from .oracles import Instance, expected, grid
from .registry import VERIFIED, get, registry_list, run_stdlib

GOLDEN_VERSION = 1
COLUMNS = ["op", "shape", "eops", "eops_formula", "flops_ref", "ratio"]


@dataclass
class GoldenRecord:
    op: str
    shape: str
    input_digest: str
    eops: int  # measured
    eops_formula: int  # row formula at this instance
    flops_ref: Any  # int, or "-" where the row gives none
    ratio: Any  # eops / flops_ref rounded to 6 places, or "-"
    output: Any  # oracle value, nested lists
    max_abs_err: float

    @property
    def eops_match(self) -> bool:
        return self.eops == self.eops_formula

    @property
    def ok(self) -> bool:
        return self.eops_match and self.max_abs_err <= 1e-9


def shape_label(inst: Instance) -> str:
    parts = []
    for k, v in inst.inputs.items():
        s = np.shape(v)
        parts.append(f"{k}=" + ("x".join(map(str, s)) if s else "scalar"))
    for k, v in inst.attrs.items():
        parts.append(f"{k}={json.dumps(v, separators=(',', ':'))}")
    return " ".join(parts)


def digest(inst: Instance) -> str:
    doc = canonical_json({"inputs": inst.inputs, "attrs": inst.attrs})
    return hashlib.sha256(doc.encode()).hexdigest()[:16]


def measure(name: str, inst: Instance) -> GoldenRecord:
    op = get(name)
    value, eops = run_stdlib(name, inst.inputs, inst.attrs)
    want = expected(name, inst)
    got = np.asarray(value.to_nested(), dtype=float)
    if got.shape != want.shape:
        err = float("inf")
    else:
        err = float(np.max(np.abs(got - want))) if got.size else 0.0
    shapes = inst.shapes()
    formula = op.eops(shapes, inst.attrs)
    flops: Any = "-" if op.flops is None else op.flops(shapes, inst.attrs)
    if flops == "-":
        ratio: Any = "-"
    elif flops == 0:
        ratio = "-" if formula == 0 else "inf"
    else:
        ratio = round(eops / flops, 6)
    return GoldenRecord(name, shape_label(inst), digest(inst), eops, formula, flops, ratio,
                        want.tolist(), err)


def verified_names() -> list[str]:
    return [op.name for op in registry_list() if op.status == VERIFIED]


def golden_table(ops: Optional[Iterable[str]] = None) -> list[GoldenRecord]:
    names = list(ops) if ops is not None else verified_names()
    return [measure(n, inst) for n in names for inst in grid(n)]


def to_csv(records: list[GoldenRecord]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(COLUMNS)
    for r in records:
        w.writerow([r.op, r.shape, r.eops, r.eops_formula, r.flops_ref, r.ratio])
    return buf.getvalue()


def to_json(records: list[GoldenRecord]) -> str:
    rows = []
    for r in records:
        d = asdict(r)
        d.pop("max_abs_err")
        rows.append(d)
    return canonical_json({"version": GOLDEN_VERSION, "records": rows}, indent=1) + "\n"


def default_dir() -> Path:
    return Path(__file__).with_name("goldens") / f"v{GOLDEN_VERSION}"


def write(records: list[GoldenRecord], directory: Path) -> None:
    directory.mkdir(parents=True, exist_ok=True)
    (directory / "eops.csv").write_text(to_csv(records), encoding="utf-8")
    (directory / "eops.json").write_text(to_json(records), encoding="utf-8")


def diff(records: list[GoldenRecord], directory: Path) -> list[str]:
    """Unified diffs between regenerated tables and the files on disk (empty when equal)."""
    import difflib
    out = []
    for fname, text in (("eops.csv", to_csv(records)), ("eops.json", to_json(records))):
        path = directory / fname
        old = path.read_text(encoding="utf-8") if path.exists() else ""
        if old != text:
            out.append("".join(difflib.unified_diff(
                old.splitlines(keepends=True), text.splitlines(keepends=True),
                fromfile=f"{path} (checked in)", tofile=f"{path} (regenerated)")))
    return out
