"""Result types produced by the reasoning engine."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from ..ground import GroundRule
from ..lang.ast import Literal, Observation, RuleLabel, Term


class TruthValue(Enum):
    TRUE = "true"
    FALSE = "false"
    UNKNOWN = "unknown"


class ConceptKind(Enum):
    CONSTANT = "constant"
    FLUENT = "fluent"
    ACTION = "action"


class ProvenanceKind(Enum):
    NONE = "none"
    OBSERVATION = "observation"
    CONSTANT = "constant"
    PROPERTY = "property_rule"
    CAUSAL = "causal_rule"
    INERTIA = "inertia"


@dataclass(frozen=True, slots=True)
class Provenance:
    kind: ProvenanceKind
    rule: RuleLabel | None = None

    def __str__(self) -> str:
        # Raw lines name the winning rule itself; other sources use a word.
        if self.rule is not None:
            return str(self.rule)
        return self.kind.value


PROV_NONE = Provenance(ProvenanceKind.NONE)
PROV_OBSERVATION = Provenance(ProvenanceKind.OBSERVATION)
PROV_CONSTANT = Provenance(ProvenanceKind.CONSTANT)
PROV_INERTIA = Provenance(ProvenanceKind.INERTIA)


@dataclass(frozen=True, slots=True)
class Cell:
    concept: Term
    t: int
    value: TruthValue
    observed: bool
    provenance: Provenance
    kind: ConceptKind


@dataclass(frozen=True, slots=True)
class ComprehensionModel:
    session: int
    horizon: int
    concepts: tuple[Term, ...]
    cells: dict[tuple[Term, int], Cell]

    def cell(self, concept: Term, t: int) -> Cell:
        return self.cells[(concept, t)]

    def value(self, concept: Term, t: int) -> TruthValue:
        return self.cells[(concept, t)].value


Premise = Observation | tuple[GroundRule, tuple[str, ...]]


@dataclass(frozen=True, slots=True)
class Argument:
    """One ground-rule firing: `label#instance@t` concluding (literal, t)."""

    id: str
    conclusion: tuple[Literal, int]
    support: tuple[Premise, ...]


@dataclass(frozen=True, slots=True)
class ArgumentReport:
    universal: tuple[Argument, ...] = ()
    acceptable: frozenset[str] = frozenset()
    retracted: frozenset[str] = frozenset()
    elaborated: frozenset[str] = frozenset()
    qualified: tuple[tuple[str, str], ...] = ()


@dataclass(frozen=True, slots=True)
class Answer:
    question_id: int
    per_choice: tuple[tuple[int, TruthValue], ...]
    selected: int | None


@dataclass(frozen=True, slots=True)
class SessionResult:
    session: int
    model: ComprehensionModel
    answers: tuple[Answer, ...] = ()
    report: ArgumentReport = field(default_factory=ArgumentReport)


class EngineError(Exception):
    pass


class CycleBudgetExceeded(EngineError):
    """The per-time-point chatter did not stabilize within its budget."""

    def __init__(self, session: int, t: int, budget: int):
        super().__init__(
            f"session {session}: no fixed point at t={t} within {budget} sweeps"
        )
        self.session = session
        self.t = t
        self.budget = budget


class TimeOutOfRange(EngineError):
    """A question choice addresses a time-point beyond the model horizon."""

    def __init__(self, question_id: int, t: int, horizon: int):
        super().__init__(f"q({question_id}) asks about t={t} beyond horizon {horizon}")
        self.question_id = question_id
        self.t = t
        self.horizon = horizon


class TraceKind(Enum):
    UNIVERSAL = "universal"
    ACCEPTABLE = "acceptable"
    RETRACTED = "retracted"
    ELABORATED = "elaborated"
    QUALIFIED = "qualified"


ALL_TRACES = frozenset(TraceKind)
