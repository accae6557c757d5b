"""Session models: concept classification, horizons, and the fixed point.

The timeline is the integers 0..H. Property rules support their head at the
body's time-point, causal rules one step later, and preclusion rules block
causal or inertia support one step later without asserting anything. Within
a cell, observations outrank rules, rules outrank inertia, and rules against
rules resolve through the transitive closure of the declared priorities;
unresolved complementary support collapses to Unknown.
"""

from __future__ import annotations

from dataclasses import replace
from typing import Iterable, Iterator, Sequence

from ..ground import GroundProgram, ground_domain
from ..lang.ast import (
    Compound,
    Constant,
    Domain,
    FluentsDecl,
    Literal,
    Observation,
    Question,
    RuleLabel,
    SessionDecl,
    Term,
    Visibility,
    functor_arity,
)
from .arguments import build_trace
from .backend import run_grid
from .encode import encode_program, priority_closure, strictly_stronger
from .model import (
    PROV_CONSTANT,
    PROV_INERTIA,
    PROV_NONE,
    PROV_OBSERVATION,
    Answer,
    ArgumentReport,
    Cell,
    ComprehensionModel,
    ConceptKind,
    CycleBudgetExceeded,
    Provenance,
    ProvenanceKind,
    SessionResult,
    TimeOutOfRange,
    TraceKind,
    TruthValue,
)

_VALUE = {1: TruthValue.TRUE, -1: TruthValue.FALSE, 0: TruthValue.UNKNOWN}


def _pattern_key(pattern: Term) -> tuple[str, int] | None:
    if isinstance(pattern, Compound):
        return pattern.functor, len(pattern.args)
    if isinstance(pattern, Constant):
        return pattern.name, 0
    return None


def _classify(
    observations: Sequence[Observation], fluents: FluentsDecl, concept: Term
) -> ConceptKind:
    for obs in observations:
        if obs.time.is_always and obs.literal.atom == concept:
            return ConceptKind.CONSTANT
    key = functor_arity(concept)
    for pattern in fluents.patterns:
        if _pattern_key(pattern) == key:
            return ConceptKind.FLUENT
    return ConceptKind.ACTION


def classify_concept(d: Domain, concept: Term) -> ConceptKind:
    """Constant if observed `at always`, else declared Fluent, else Action."""
    return _classify(d.observations, d.fluents, concept)


def compute_horizon(d: Domain, slack: int = 2) -> int:
    """Max numeric time-point over observations and questions, plus slack."""
    times = [obs.time.t for obs in d.observations if not obs.time.is_always]
    for q in d.questions:
        times.extend(t for _lit, t in q.choices)
    return (max(times) if times else 0) + slack


def _concept_inventory(g: GroundProgram, extra: tuple[Term, ...]) -> tuple[Term, ...]:
    # Observation and question concepts seed the grid; rule heads join once
    # every body concept is already present (an absent concept can never make
    # the body hold).
    seen: set[Term] = set()
    out: list[Term] = []

    def add(c: Term) -> None:
        if c not in seen:
            seen.add(c)
            out.append(c)

    for obs in g.observations:
        add(obs.literal.atom)
    for c in extra:
        add(c)
    changed = True
    while changed:
        changed = False
        for rule in g.rules:
            if rule.head.atom in seen:
                continue
            if all(lit.atom in seen for lit in rule.body):
                add(rule.head.atom)
                changed = True
    return tuple(out)


def build_model(
    g: GroundProgram,
    session: int,
    H: int,
    trace: Iterable[TraceKind] = frozenset(),
    extra_concepts: tuple[Term, ...] = (),
) -> SessionResult:
    """Model from all observations with session index <= session.

    extra_concepts widens the grid to concepts mentioned outside the ground
    program (question choices). Answers are left empty; run_sessions fills
    them per session declaration.
    """
    wanted = frozenset(trace)
    concepts = _concept_inventory(g, tuple(extra_concepts))
    all_obs = list(g.observations)
    kinds = {c: _classify(all_obs, g.fluents, c) for c in concepts}
    obs = [o for o in all_obs if o.session <= session]
    present = set(concepts)
    rules = [
        r
        for r in g.rules
        if r.head.atom in present and all(lit.atom in present for lit in r.body)
    ]
    enc = encode_program(concepts, kinds, obs, rules, g.priorities, H)
    values, prov_kind, prov_rule, status, fail_t = run_grid(enc)
    if status:
        raise CycleBudgetExceeded(session, fail_t, enc.budget)

    cells: dict[tuple[Term, int], Cell] = {}
    for ci, c in enumerate(concepts):
        for t in range(H + 1):
            pk = int(prov_kind[t, ci])
            if pk == 3:
                prov = Provenance(ProvenanceKind.PROPERTY, enc.rules[prov_rule[t, ci]].origin)
            elif pk == 4:
                prov = Provenance(ProvenanceKind.CAUSAL, enc.rules[prov_rule[t, ci]].origin)
            else:
                prov = (PROV_NONE, PROV_OBSERVATION, PROV_CONSTANT, None, None, PROV_INERTIA)[pk]
            cells[(c, t)] = Cell(
                concept=c,
                t=t,
                value=_VALUE[int(values[t, ci])],
                observed=pk in (1, 2),
                provenance=prov,
                kind=kinds[c],
            )
    model = ComprehensionModel(session=session, horizon=H, concepts=concepts, cells=cells)

    report = ArgumentReport()
    if wanted:
        universal, acceptable, qualified = build_trace(enc, values, prov_kind, obs)
        retracted: frozenset[str] = frozenset()
        elaborated: frozenset[str] = frozenset()
        if session > 0 and wanted & {TraceKind.RETRACTED, TraceKind.ELABORATED}:
            prev = build_model(g, session - 1, H, {TraceKind.ACCEPTABLE}, extra_concepts)
            retracted = prev.report.acceptable - acceptable
            elaborated = acceptable - prev.report.acceptable
        report = ArgumentReport(
            universal=universal if TraceKind.UNIVERSAL in wanted else (),
            acceptable=acceptable if TraceKind.ACCEPTABLE in wanted else frozenset(),
            retracted=retracted if TraceKind.RETRACTED in wanted else frozenset(),
            elaborated=elaborated if TraceKind.ELABORATED in wanted else frozenset(),
            qualified=qualified if TraceKind.QUALIFIED in wanted else (),
        )
    return SessionResult(session=session, model=model, report=report)


def answer_question(m: ComprehensionModel, q: Question) -> Answer:
    """Evaluate each choice literal against its cell; unique True selects."""
    per_choice: list[tuple[int, TruthValue]] = []
    for i, (lit, t) in enumerate(q.choices):
        if t > m.horizon:
            raise TimeOutOfRange(q.id, t, m.horizon)
        cell = m.cells.get((lit.atom, t))
        value = cell.value if cell is not None else TruthValue.UNKNOWN
        if not lit.positive:
            if value is TruthValue.TRUE:
                value = TruthValue.FALSE
            elif value is TruthValue.FALSE:
                value = TruthValue.TRUE
        per_choice.append((i, value))
    hits = [i for i, v in per_choice if v is TruthValue.TRUE]
    selected = hits[0] if len(hits) == 1 else None
    return Answer(question_id=q.id, per_choice=tuple(per_choice), selected=selected)


def _declared_sessions(d: Domain) -> list[SessionDecl]:
    if d.sessions:
        return sorted(d.sessions, key=lambda s: s.session)
    return [SessionDecl(0, (), Visibility.everything())]


def _question_concepts(d: Domain) -> tuple[Term, ...]:
    out: list[Term] = []
    seen: set[Term] = set()
    for q in d.questions:
        for lit, _t in q.choices:
            if lit.atom not in seen:
                seen.add(lit.atom)
                out.append(lit.atom)
    return tuple(out)


def iter_session_results(
    d: Domain, slack: int = 2, trace: Iterable[TraceKind] = frozenset()
) -> Iterator[SessionResult]:
    """One SessionResult per declared session, ascending, computed lazily."""
    wanted = frozenset(trace)
    g = ground_domain(d)
    H = compute_horizon(d, slack)
    extra = _question_concepts(d)
    by_id = {q.id: q for q in d.questions}
    for decl in _declared_sessions(d):
        result = build_model(g, decl.session, H, wanted, extra)
        answers = tuple(answer_question(result.model, by_id[qid]) for qid in decl.questions)
        yield replace(result, answers=answers)


def run_sessions(
    d: Domain, slack: int = 2, trace: Iterable[TraceKind] = frozenset()
) -> list[SessionResult]:
    return list(iter_session_results(d, slack, trace))


def resolve_cell(
    candidates: Sequence[tuple[Literal, Provenance]],
    priorities: set[tuple[RuleLabel, RuleLabel]],
) -> tuple[TruthValue, Provenance]:
    """Single-cell conflict policy over explicit support candidates.

    priorities is the closed >> relation (see priority_closure). Ties inside
    a tier keep the first candidate in list order.
    """
    obs_tier = [
        (lit, p)
        for lit, p in candidates
        if p.kind in (ProvenanceKind.OBSERVATION, ProvenanceKind.CONSTANT)
    ]
    if obs_tier:
        signs = {lit.positive for lit, _p in obs_tier}
        if len(signs) == 2:
            return TruthValue.UNKNOWN, PROV_NONE
        lit, p = obs_tier[0]
        return (TruthValue.TRUE if lit.positive else TruthValue.FALSE), p

    rule_tier = [
        (lit, p)
        for lit, p in candidates
        if p.kind in (ProvenanceKind.PROPERTY, ProvenanceKind.CAUSAL)
    ]
    if rule_tier:
        pos = [(lit, p) for lit, p in rule_tier if lit.positive]
        neg = [(lit, p) for lit, p in rule_tier if not lit.positive]
        alive_pos = [
            (lit, p)
            for lit, p in pos
            if not any(strictly_stronger(priorities, q.rule, p.rule) for _l, q in neg)
        ]
        alive_neg = [
            (lit, p)
            for lit, p in neg
            if not any(strictly_stronger(priorities, q.rule, p.rule) for _l, q in pos)
        ]
        if bool(alive_pos) == bool(alive_neg):
            return TruthValue.UNKNOWN, PROV_NONE
        alive = alive_pos or alive_neg
        winner = alive[0]
        for lit, p in alive:
            if not any(
                q is not p and strictly_stronger(priorities, q.rule, p.rule)
                for _l, q in alive
            ):
                winner = (lit, p)
                break
        lit, p = winner
        return (TruthValue.TRUE if lit.positive else TruthValue.FALSE), p

    inertia_tier = [(lit, p) for lit, p in candidates if p.kind is ProvenanceKind.INERTIA]
    if inertia_tier:
        signs = {lit.positive for lit, _p in inertia_tier}
        if len(signs) == 2:
            return TruthValue.UNKNOWN, PROV_NONE
        lit, p = inertia_tier[0]
        return (TruthValue.TRUE if lit.positive else TruthValue.FALSE), p

    return TruthValue.UNKNOWN, PROV_NONE


__all__ = [
    "answer_question",
    "build_model",
    "classify_concept",
    "compute_horizon",
    "iter_session_results",
    "priority_closure",
    "resolve_cell",
    "run_sessions",
]
