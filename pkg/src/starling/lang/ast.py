"""Typed AST for STAR domain files.

A domain file has two parts: the story (session-tagged observations plus
multiple-choice questions) and the background knowledge (labelled rules with
relative-strength statements). Statement nodes are immutable value objects;
source spans are carried on each statement but excluded from equality so two
parses of equivalent text compare equal regardless of layout.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterator, Union

_CONSTANT_RE = re.compile(r"[a-z][A-Za-z0-9_]*\Z")
_VARIABLE_RE = re.compile(r"[A-Z_][A-Za-z0-9_]*\Z")


@dataclass(frozen=True, slots=True)
class Constant:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True, slots=True)
class Variable:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True, slots=True)
class Compound:
    functor: str
    args: tuple["Term", ...]

    def __str__(self) -> str:
        return f"{self.functor}({','.join(str(a) for a in self.args)})"


Term = Union[Constant, Variable, Compound]


def is_constant_name(name: str) -> bool:
    return _CONSTANT_RE.match(name) is not None


def is_variable_name(name: str) -> bool:
    return _VARIABLE_RE.match(name) is not None


def is_ground(term: Term) -> bool:
    if isinstance(term, Variable):
        return False
    if isinstance(term, Compound):
        return all(is_ground(a) for a in term.args)
    return True


def term_variables(term: Term) -> set[str]:
    """Names of all variables occurring anywhere in the term."""
    if isinstance(term, Variable):
        return {term.name}
    if isinstance(term, Compound):
        out: set[str] = set()
        for a in term.args:
            out |= term_variables(a)
        return out
    return set()


def functor_arity(term: Term) -> tuple[str, int]:
    """The (name, arity) key of an atom; constants have arity 0."""
    if isinstance(term, Compound):
        return term.functor, len(term.args)
    if isinstance(term, Constant):
        return term.name, 0
    raise ValueError(f"variable {term} has no functor")


@dataclass(frozen=True, slots=True)
class Literal:
    """An atom or its single-level negation (written with a leading ``-``)."""

    positive: bool
    atom: Term

    def __str__(self) -> str:
        return str(self.atom) if self.positive else f"-{self.atom}"

    def negated(self) -> "Literal":
        return Literal(not self.positive, self.atom)


@dataclass(frozen=True, slots=True)
class TimeRef:
    """A concrete time-point, or ``None`` for ``always``."""

    t: int | None

    @property
    def is_always(self) -> bool:
        return self.t is None

    def __str__(self) -> str:
        return "always" if self.t is None else str(self.t)


ALWAYS = TimeRef(None)


class RuleKind(Enum):
    """Label namespace letter; p/c/r by convention name the connective used."""

    PROPERTY = "p"
    CAUSAL = "c"
    PRECLUSION = "r"


class Connective(Enum):
    """The verb of a rule; this, not the label letter, fixes its semantics."""

    IMPLIES = "implies"
    CAUSES = "causes"
    PRECLUDES = "precludes"


@dataclass(frozen=True, slots=True)
class RuleLabel:
    kind: RuleKind
    index: int

    def __str__(self) -> str:
        return f"{self.kind.value}({self.index})"


@dataclass(frozen=True, slots=True)
class Span:
    """1-based (line, column) range of a statement or token."""

    line: int
    col: int
    end_line: int
    end_col: int


_NO_SPAN = Span(0, 0, 0, 0)


@dataclass(frozen=True, slots=True)
class Observation:
    session: int
    literal: Literal
    time: TimeRef
    span: Span = field(default=_NO_SPAN, compare=False, repr=False)

    def __str__(self) -> str:
        return f"s({self.session}) :: {self.literal} at {self.time}."


@dataclass(frozen=True, slots=True)
class Question:
    id: int
    choices: tuple[tuple[Literal, int], ...]
    span: Span = field(default=_NO_SPAN, compare=False, repr=False)

    def __str__(self) -> str:
        body = "; ".join(f"{lit} at {t}" for lit, t in self.choices)
        return f"q({self.id}) ?? {body}."


@dataclass(frozen=True, slots=True)
class Rule:
    label: RuleLabel
    connective: Connective
    body: tuple[Literal, ...]
    head: Literal
    span: Span = field(default=_NO_SPAN, compare=False, repr=False)

    def __str__(self) -> str:
        body = ", ".join(str(lit) for lit in self.body) if self.body else "true"
        return f"{self.label} :: {body} {self.connective.value} {self.head}."


@dataclass(frozen=True, slots=True)
class Priority:
    stronger: RuleLabel
    weaker: RuleLabel
    span: Span = field(default=_NO_SPAN, compare=False, repr=False)

    def __str__(self) -> str:
        return f"{self.stronger} >> {self.weaker}."


@dataclass(frozen=True, slots=True)
class Visibility:
    """Which concepts a session renders: everything, or pattern matches."""

    all: bool
    patterns: tuple[Term, ...] = ()

    @staticmethod
    def everything() -> "Visibility":
        return Visibility(all=True)

    @staticmethod
    def concepts(patterns: tuple[Term, ...]) -> "Visibility":
        return Visibility(all=False, patterns=patterns)

    def __str__(self) -> str:
        if self.all:
            return "all"
        return f"[{','.join(str(p) for p in self.patterns)}]"


@dataclass(frozen=True, slots=True)
class SessionDecl:
    session: int
    questions: tuple[int, ...]
    visible: Visibility
    span: Span = field(default=_NO_SPAN, compare=False, repr=False)

    def __str__(self) -> str:
        qs = ",".join(f"q({q})" for q in self.questions)
        return f"session(s({self.session}),[{qs}],{self.visible})."


@dataclass(frozen=True, slots=True)
class FluentsDecl:
    patterns: tuple[Term, ...] = ()
    span: Span = field(default=_NO_SPAN, compare=False, repr=False)

    def __str__(self) -> str:
        return f"fluents([{','.join(str(p) for p in self.patterns)}])."


Statement = Union[Observation, Question, Rule, Priority, SessionDecl, FluentsDecl]


@dataclass
class Domain:
    """Parsed domain file; statement order within each list is file order."""

    observations: list[Observation] = field(default_factory=list)
    questions: list[Question] = field(default_factory=list)
    rules: list[Rule] = field(default_factory=list)
    priorities: list[Priority] = field(default_factory=list)
    sessions: list[SessionDecl] = field(default_factory=list)
    fluents: FluentsDecl = field(default_factory=FluentsDecl)

    def statements(self) -> Iterator[Statement]:
        """All statements in source order (by span), fluents merged as one."""
        stmts: list[Statement] = [
            *self.observations,
            *self.questions,
            *self.rules,
            *self.priorities,
            *self.sessions,
        ]
        if self.fluents.patterns or self.fluents.span != _NO_SPAN:
            stmts.append(self.fluents)
        return iter(sorted(stmts, key=lambda s: (s.span.line, s.span.col)))

    @property
    def source_spans(self) -> list[tuple[Statement, Span]]:
        return [(s, s.span) for s in self.statements()]

    def is_empty(self) -> bool:
        return not (
            self.observations
            or self.questions
            or self.rules
            or self.priorities
            or self.sessions
            or self.fluents.patterns
        )


class Severity(Enum):
    ERROR = "error"
    WARNING = "warning"


@dataclass(frozen=True, slots=True)
class Diagnostic:
    severity: Severity
    code: str
    message: str
    line: int
    col: int
    length: int

    def __str__(self) -> str:
        return f"{self.severity.value} {self.line}:{self.col} {self.code} {self.message}"


def has_errors(diagnostics: list[Diagnostic]) -> bool:
    return any(d.severity is Severity.ERROR for d in diagnostics)
