"""STAR domain language: AST, parser, validator, and formatter."""

from .ast import (
    ALWAYS,
    Compound,
    Connective,
    Constant,
    Diagnostic,
    Domain,
    FluentsDecl,
    Literal,
    Observation,
    Priority,
    Question,
    Rule,
    RuleKind,
    RuleLabel,
    SessionDecl,
    Severity,
    Span,
    Term,
    TimeRef,
    Variable,
    Visibility,
    functor_arity,
    has_errors,
    is_ground,
    term_variables,
)
from .format import format_domain
from .parser import parse_domain
from .validate import validate_domain

__all__ = [
    "ALWAYS",
    "Compound",
    "Connective",
    "Constant",
    "Diagnostic",
    "Domain",
    "FluentsDecl",
    "Literal",
    "Observation",
    "Priority",
    "Question",
    "Rule",
    "RuleKind",
    "RuleLabel",
    "SessionDecl",
    "Severity",
    "Span",
    "Term",
    "TimeRef",
    "Variable",
    "Visibility",
    "format_domain",
    "functor_arity",
    "has_errors",
    "is_ground",
    "parse_domain",
    "term_variables",
    "validate_domain",
]
