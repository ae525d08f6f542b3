"""ToLang sources for the ONNX operator rows, their references and golden tables."""

from .registry import (
    REGISTRY,
    TRANSCRIBED,
    VERIFIED,
    StdlibOp,
    get,
    load_source,
    registry_list,
    run_stdlib,
)

__all__ = ["REGISTRY", "StdlibOp", "VERIFIED", "TRANSCRIBED", "get", "load_source",
           "registry_list", "run_stdlib", "golden_table", "case_studies"]


def golden_table(ops=None):
    from .golden import golden_table as _g
    return _g(ops)


def case_studies():
    from .cases import case_studies as _c
    return _c()
