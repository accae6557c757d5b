"""Semantic checks that run after parsing.

Errors make a domain unusable by the engine; warnings flag statements that
are legal but inert (questions no session asks, rules deriving a concept
nothing mentions).
"""

from __future__ import annotations

from .ast import (
    Diagnostic,
    Domain,
    Rule,
    Severity,
    Span,
    functor_arity,
    is_ground,
    term_variables,
)


def validate_domain(d: Domain) -> list[Diagnostic]:
    out: list[Diagnostic] = []

    def error(code: str, message: str, span: Span) -> None:
        out.append(Diagnostic(Severity.ERROR, code, message, span.line, span.col, 1))

    def warning(code: str, message: str, span: Span) -> None:
        out.append(Diagnostic(Severity.WARNING, code, message, span.line, span.col, 1))

    labels = set()
    for rule in d.rules:
        if rule.label in labels:
            error("duplicate-label", f"rule label {rule.label} is already defined", rule.span)
        labels.add(rule.label)

    qids = set()
    for q in d.questions:
        if q.id in qids:
            error("duplicate-question", f"question q({q.id}) is already defined", q.span)
        qids.add(q.id)

    for pr in d.priorities:
        if pr.stronger == pr.weaker:
            error("self-priority", f"{pr.stronger} cannot outrank itself", pr.span)
        for side in (pr.stronger, pr.weaker):
            if side not in labels:
                error("undefined-label", f"priority references undefined rule {side}", pr.span)

    for obs in d.observations:
        if not is_ground(obs.literal.atom):
            error(
                "non-ground-observation",
                f"observation literal {obs.literal} contains variables",
                obs.span,
            )

    for q in d.questions:
        for lit, _t in q.choices:
            if not is_ground(lit.atom):
                error("non-ground-question", f"question literal {lit} contains variables", q.span)

    for rule in d.rules:
        body_vars: set[str] = set()
        for lit in rule.body:
            body_vars |= term_variables(lit.atom)
        loose = sorted(term_variables(rule.head.atom) - body_vars)
        if loose:
            error(
                "unbound-head-variable",
                f"head variable{'s' if len(loose) > 1 else ''} {', '.join(loose)} of {rule.label} "
                "must appear in the body",
                rule.span,
            )

    asked: set[int] = set()
    for sess in d.sessions:
        for qid in sess.questions:
            asked.add(qid)
            if qid not in qids:
                error("undefined-question", f"session s({sess.session}) asks undefined q({qid})", sess.span)

    if d.sessions:
        for q in d.questions:
            if q.id not in asked:
                warning("unused-question", f"q({q.id}) is never asked by any session", q.span)

    mentioned = _mentioned_concepts(d)
    for rule in d.rules:
        key = functor_arity(rule.head.atom)
        if key not in mentioned.get(rule, set()):
            name = f"{key[0]}/{key[1]}"
            warning("unused-concept", f"head concept {name} of {rule.label} appears nowhere else", rule.span)

    return out


def _mentioned_concepts(d: Domain) -> dict[Rule, set[tuple[str, int]]]:
    """For each rule, the concept keys visible anywhere outside its own head."""
    base: set[tuple[str, int]] = set()
    for obs in d.observations:
        base.add(functor_arity(obs.literal.atom))
    for q in d.questions:
        for lit, _t in q.choices:
            base.add(functor_arity(lit.atom))
    per_rule: dict[Rule, set[tuple[str, int]]] = {}
    rule_keys = []
    for rule in d.rules:
        keys = {functor_arity(lit.atom) for lit in rule.body}
        rule_keys.append((rule, keys, functor_arity(rule.head.atom)))
    for rule, _keys, _head in rule_keys:
        seen = set(base)
        for other, other_body, other_head in rule_keys:
            seen |= other_body
            if other is not rule:
                seen.add(other_head)
        per_rule[rule] = seen
    return per_rule
