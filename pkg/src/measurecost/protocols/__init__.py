"""End-to-end applications: Zeno stabilisation, five-qubit QEC, work extraction."""

from .qec5 import (
    GapTerms,
    Qec5Result,
    codewords,
    correction_unitaries,
    gap_decomposition,
    logical_state,
    single_point,
    stabilisers,
    sweep,
    syndrome_instrument,
)
from .workext import WorkExtractionPair, efficient_device, inefficient_device, workext_pair
from .zeno import ZenoConfig, ZenoResult, closed_form_error, zeno_device_crosscheck, zeno_run

__all__ = [
    "GapTerms",
    "Qec5Result",
    "WorkExtractionPair",
    "ZenoConfig",
    "ZenoResult",
    "closed_form_error",
    "codewords",
    "correction_unitaries",
    "efficient_device",
    "gap_decomposition",
    "inefficient_device",
    "logical_state",
    "single_point",
    "stabilisers",
    "sweep",
    "syndrome_instrument",
    "workext_pair",
    "zeno_device_crosscheck",
    "zeno_run",
]
