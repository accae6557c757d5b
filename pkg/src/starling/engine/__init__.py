"""Defeasible fixed-point reasoning engine over STAR domains."""

from .backend import kernel_name
from .model import (
    ALL_TRACES,
    Answer,
    Argument,
    ArgumentReport,
    Cell,
    ComprehensionModel,
    ConceptKind,
    CycleBudgetExceeded,
    EngineError,
    Provenance,
    ProvenanceKind,
    SessionResult,
    TimeOutOfRange,
    TraceKind,
    TruthValue,
)
from .semantics import (
    answer_question,
    build_model,
    classify_concept,
    compute_horizon,
    iter_session_results,
    priority_closure,
    resolve_cell,
    run_sessions,
)

__all__ = [
    "ALL_TRACES",
    "Answer",
    "Argument",
    "ArgumentReport",
    "Cell",
    "ComprehensionModel",
    "ConceptKind",
    "CycleBudgetExceeded",
    "EngineError",
    "Provenance",
    "ProvenanceKind",
    "SessionResult",
    "TimeOutOfRange",
    "TraceKind",
    "TruthValue",
    "answer_question",
    "build_model",
    "classify_concept",
    "compute_horizon",
    "iter_session_results",
    "kernel_name",
    "priority_closure",
    "resolve_cell",
    "run_sessions",
]
