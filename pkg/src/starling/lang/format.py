"""Canonical pretty-printer: one statement per line, normalized spacing."""

from __future__ import annotations

from .ast import Domain


def format_domain(d: Domain) -> str:
    """Emit canonical text; parsing it back reproduces d up to source spans.

    Comments are not part of the AST and are dropped. Statements are grouped
    by kind (sessions, fluents, observations, questions, rules, priorities);
    original order is kept within each group.
    """
    lines: list[str] = []
    lines.extend(str(s) for s in d.sessions)
    if d.fluents.patterns:
        lines.append(str(d.fluents))
    lines.extend(str(o) for o in d.observations)
    lines.extend(str(q) for q in d.questions)
    lines.extend(str(r) for r in d.rules)
    lines.extend(str(p) for p in d.priorities)
    return "\n".join(lines)
