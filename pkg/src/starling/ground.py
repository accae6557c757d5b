"""Variable elimination: instantiate rule schemas over the constant universe.

Grounding is untyped: every variable ranges over the whole universe, so a
rule with k distinct variables over n terms yields exactly n^k instances.
Nonsensical instances are harmless; their bodies never hold.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .lang.ast import (
    Compound,
    Connective,
    Domain,
    FluentsDecl,
    Literal,
    Observation,
    Priority,
    Rule,
    RuleLabel,
    Term,
    Variable,
    is_ground,
)


@dataclass(frozen=True, slots=True)
class ConstantUniverse:
    """Ground argument-position terms in first-appearance order."""

    constants: tuple[Term, ...]

    def __len__(self) -> int:
        return len(self.constants)

    def __iter__(self):
        return iter(self.constants)

    def __contains__(self, term: Term) -> bool:
        return term in self.constants


@dataclass(frozen=True, slots=True)
class GroundRule:
    origin: RuleLabel
    instance_id: int
    connective: Connective
    body: tuple[Literal, ...]
    head: Literal


@dataclass(frozen=True, slots=True)
class GroundProgram:
    rules: tuple[GroundRule, ...] = ()
    observations: tuple[Observation, ...] = ()
    priorities: tuple[Priority, ...] = ()
    fluents: FluentsDecl = field(default_factory=FluentsDecl)
    universe: ConstantUniverse = ConstantUniverse(())


def _add_argument_terms(atom: Term, seen: set[Term], out: list[Term]) -> None:
    # Argument positions only: the predicate's own functor never enters the
    # universe, but nested compound arguments do, outermost first.
    if not isinstance(atom, Compound):
        return
    for arg in atom.args:
        if is_ground(arg) and arg not in seen:
            seen.add(arg)
            out.append(arg)
        _add_argument_terms(arg, seen, out)


def collect_universe(d: Domain) -> ConstantUniverse:
    """Every ground term at an argument position, deduplicated, in order."""
    seen: set[Term] = set()
    out: list[Term] = []
    for obs in d.observations:
        _add_argument_terms(obs.literal.atom, seen, out)
    for q in d.questions:
        for lit, _t in q.choices:
            _add_argument_terms(lit.atom, seen, out)
    for rule in d.rules:
        for lit in rule.body:
            _add_argument_terms(lit.atom, seen, out)
        _add_argument_terms(rule.head.atom, seen, out)
    return ConstantUniverse(tuple(out))


def _term_variables_ordered(atom: Term, seen: set[str], out: list[str]) -> None:
    if isinstance(atom, Variable):
        if atom.name not in seen:
            seen.add(atom.name)
            out.append(atom.name)
    elif isinstance(atom, Compound):
        for arg in atom.args:
            _term_variables_ordered(arg, seen, out)


def rule_variables(r: Rule) -> list[str]:
    """Distinct variable names in first-occurrence order, body before head."""
    seen: set[str] = set()
    out: list[str] = []
    for lit in r.body:
        _term_variables_ordered(lit.atom, seen, out)
    _term_variables_ordered(r.head.atom, seen, out)
    return out


def _substitute(term: Term, binding: dict[str, Term]) -> Term:
    if isinstance(term, Variable):
        return binding[term.name]
    if isinstance(term, Compound):
        return Compound(term.functor, tuple(_substitute(a, binding) for a in term.args))
    return term


def _substitute_literal(lit: Literal, binding: dict[str, Term]) -> Literal:
    return Literal(lit.positive, _substitute(lit.atom, binding))


def ground_rule(r: Rule, u: ConstantUniverse) -> list[GroundRule]:
    """All instances of r under the full cross product of u."""
    variables = rule_variables(r)
    if not variables:
        return [GroundRule(r.label, 0, r.connective, r.body, r.head)]
    out: list[GroundRule] = []
    for instance_id, values in enumerate(itertools.product(u.constants, repeat=len(variables))):
        binding = dict(zip(variables, values))
        out.append(
            GroundRule(
                r.label,
                instance_id,
                r.connective,
                tuple(_substitute_literal(lit, binding) for lit in r.body),
                _substitute_literal(r.head, binding),
            )
        )
    return out


def ground_domain(d: Domain) -> GroundProgram:
    universe = collect_universe(d)
    rules: list[GroundRule] = []
    for r in d.rules:
        rules.extend(ground_rule(r, universe))
    return GroundProgram(
        rules=tuple(rules),
        observations=tuple(d.observations),
        priorities=tuple(d.priorities),
        fluents=d.fluents,
        universe=universe,
    )


__all__ = [
    "ConstantUniverse",
    "GroundProgram",
    "GroundRule",
    "collect_universe",
    "ground_domain",
    "ground_rule",
    "rule_variables",
]
