"""Serialization of session results: raw text, model documents, rule graphs.

Three output families share this module: the line-oriented raw format
(one line per settled cell, plus answers and report sections), the JSON
model document consumed by user interfaces, and the background-knowledge
rule graph with its DOT rendering.  Everything here is pure formatting;
no truth value is computed or altered, only filtered and printed.
"""

from __future__ import annotations

import json
import re
from collections.abc import Iterable, Iterator, Mapping, Sequence
from typing import Any

from .lang.ast import (
    Compound,
    Constant,
    Domain,
    Literal,
    Term,
    Visibility,
)
from .engine.model import (
    Answer,
    ArgumentReport,
    SessionResult,
    TraceKind,
)

__all__ = [
    "render_raw",
    "iter_raw_lines",
    "render_model_document",
    "parse_model_document",
    "export_bk_graph",
    "graph_to_dot",
    "visible_concepts",
]

SCHEMA_VERSION = 1

# Visibility maps a session index to its filter; a bare filter applies
# to every session, None shows everything.
VisibilitySpec = Visibility | Mapping[int, Visibility] | None


def _concept_key(term: Term) -> tuple[str, int] | None:
    if isinstance(term, Compound):
        return term.functor, len(term.args)
    if isinstance(term, Constant):
        return term.name, 0
    return None


def _vis_for(visible: VisibilitySpec, session: int) -> Visibility | None:
    if visible is None or isinstance(visible, Visibility):
        return visible
    return visible.get(session)


def visible_concepts(
    visible: Visibility | None, concepts: Sequence[Term]
) -> tuple[Term, ...]:
    """Filter grid concepts by a visibility declaration, preserving order."""
    if visible is None or visible.all:
        return tuple(concepts)
    keys = {_concept_key(p) for p in visible.patterns}
    keys.discard(None)
    return tuple(c for c in concepts if _concept_key(c) in keys)


# --- raw text -------------------------------------------------------------

_ID_RE = re.compile(r"([pcr])\((\d+)\)#(\d+)@(\d+)\Z")


def _id_sort_key(arg_id: str) -> tuple:
    m = _ID_RE.match(arg_id)
    if m is None:
        return (1, arg_id)
    kind, index, instance, t = m.groups()
    return (0, kind, int(index), int(instance), int(t))


def _cell_line(concept: Term, t: int, cell) -> str:
    sign = "-" if cell.value.value == "false" else ""
    return (
        f"t={t} {sign}{concept} {cell.value.value}"
        f" {cell.provenance} {cell.kind.value}"
    )


def _answer_line(answer: Answer) -> str:
    if len(answer.per_choice) == 1:
        value = answer.per_choice[0][1].value
    elif answer.selected is None:
        value = "unknown"
    else:
        value = str(answer.selected)
    return f"answer q({answer.question_id}) = {value}"


def _report_lines(
    report: ArgumentReport, requested: Iterable[TraceKind]
) -> Iterator[str]:
    wanted = set(requested)
    for kind in TraceKind:
        if kind not in wanted:
            continue
        if kind is TraceKind.UNIVERSAL:
            ids = [a.id for a in report.universal]
        elif kind is TraceKind.QUALIFIED:
            ids = [f"{w}>{l}" for w, l in report.qualified]
        else:
            members = getattr(report, kind.value)
            ids = sorted(members, key=_id_sort_key)
        yield f"{kind.value}: {' '.join(ids)}".rstrip()


def iter_raw_lines(
    result: SessionResult,
    visible: VisibilitySpec = None,
    report: Iterable[TraceKind] = (),
) -> Iterator[str]:
    """Yield raw lines time-point by time-point (the streaming order).

    Cell lines advance t in the outer loop so consumers can show partial
    timelines while later time-points are still printing.  Line syntax is
    identical to render_raw; only the cell ordering differs.
    """
    model = result.model
    concepts = visible_concepts(_vis_for(visible, result.session), model.concepts)
    yield f"session s({result.session})"
    for t in range(model.horizon + 1):
        for concept in concepts:
            cell = model.cell(concept, t)
            if cell.value.value == "unknown":
                continue
            yield _cell_line(concept, t, cell)
    for answer in result.answers:
        yield _answer_line(answer)
    yield from _report_lines(result.report, report)


def render_raw(
    result: SessionResult,
    visible: VisibilitySpec = None,
    report: Iterable[TraceKind] = (),
) -> str:
    """Render one session as raw text, cells in concept-major order."""
    model = result.model
    concepts = visible_concepts(_vis_for(visible, result.session), model.concepts)
    lines = [f"session s({result.session})"]
    for concept in concepts:
        for t in range(model.horizon + 1):
            cell = model.cell(concept, t)
            if cell.value.value == "unknown":
                continue
            lines.append(_cell_line(concept, t, cell))
    lines.extend(_answer_line(a) for a in result.answers)
    lines.extend(_report_lines(result.report, report))
    return "\n".join(lines) + "\n"


# --- model document -------------------------------------------------------


def _cell_entry(concept: Term, cell) -> dict[str, Any]:
    entry: dict[str, Any] = {
        "concept": str(concept),
        "t": cell.t,
        "value": cell.value.value,
        "observed": cell.observed,
        "provenance": cell.provenance.kind.value,
    }
    if cell.provenance.rule is not None:
        entry["rule"] = str(cell.provenance.rule)
    return entry


def _answer_entry(answer: Answer) -> dict[str, Any]:
    return {
        "question": answer.question_id,
        "selected": answer.selected,
        "values": [value.value for _, value in answer.per_choice],
    }


def _report_entry(report: ArgumentReport) -> dict[str, Any]:
    return {
        "universal": [a.id for a in report.universal],
        "acceptable": sorted(report.acceptable, key=_id_sort_key),
        "retracted": sorted(report.retracted, key=_id_sort_key),
        "elaborated": sorted(report.elaborated, key=_id_sort_key),
        "qualified": [[w, l] for w, l in report.qualified],
    }


def _session_entry(result: SessionResult, visible: Visibility | None) -> dict:
    model = result.model
    concepts = visible_concepts(visible, model.concepts)
    return {
        "id": result.session,
        "horizon": model.horizon,
        "concepts": [
            {"name": str(c), "kind": model.cell(c, 0).kind.value} for c in concepts
        ],
        "cells": [
            _cell_entry(c, model.cell(c, t))
            for c in concepts
            for t in range(model.horizon + 1)
        ],
        "answers": [_answer_entry(a) for a in result.answers],
        "report": _report_entry(result.report),
    }


def render_model_document(
    results: Sequence[SessionResult], visible: VisibilitySpec = None
) -> dict[str, Any]:
    """Build the JSON-ready model document for a list of session results."""
    return {
        "schema_version": SCHEMA_VERSION,
        "sessions": [
            _session_entry(r, _vis_for(visible, r.session)) for r in results
        ],
    }


_TRUTH_WORDS = frozenset({"true", "false", "unknown"})
_PROVENANCE_WORDS = frozenset(
    {"none", "observation", "constant", "property_rule", "causal_rule", "inertia"}
)
_KIND_WORDS = frozenset({"constant", "fluent", "action"})


def _require(cond: bool, problem: str) -> None:
    if not cond:
        raise ValueError(f"model document: {problem}")


def _parse_cell(raw: Mapping[str, Any], horizon: int) -> dict[str, Any]:
    _require(isinstance(raw.get("concept"), str), "cell concept must be a string")
    _require(
        isinstance(raw.get("t"), int) and 0 <= raw["t"] <= horizon,
        "cell t out of range",
    )
    _require(raw.get("value") in _TRUTH_WORDS, f"bad cell value {raw.get('value')!r}")
    _require(isinstance(raw.get("observed"), bool), "cell observed must be boolean")
    _require(
        raw.get("provenance") in _PROVENANCE_WORDS,
        f"bad provenance {raw.get('provenance')!r}",
    )
    entry = {
        "concept": raw["concept"],
        "t": raw["t"],
        "value": raw["value"],
        "observed": raw["observed"],
        "provenance": raw["provenance"],
    }
    if "rule" in raw:
        _require(
            raw["provenance"] in ("property_rule", "causal_rule"),
            "rule field requires a rule provenance",
        )
        _require(isinstance(raw["rule"], str), "cell rule must be a string")
        entry["rule"] = raw["rule"]
    return entry


def _parse_session(raw: Mapping[str, Any]) -> dict[str, Any]:
    for key in ("id", "horizon", "concepts", "cells", "answers", "report"):
        _require(key in raw, f"session missing {key!r}")
    _require(isinstance(raw["id"], int), "session id must be an integer")
    _require(
        isinstance(raw["horizon"], int) and raw["horizon"] >= 0,
        "horizon must be a non-negative integer",
    )
    concepts = []
    for c in raw["concepts"]:
        _require(isinstance(c.get("name"), str), "concept name must be a string")
        _require(c.get("kind") in _KIND_WORDS, f"bad concept kind {c.get('kind')!r}")
        concepts.append({"name": c["name"], "kind": c["kind"]})
    cells = [_parse_cell(c, raw["horizon"]) for c in raw["cells"]]
    _require(
        len(cells) == len(concepts) * (raw["horizon"] + 1),
        "cells length must be concepts x (horizon+1)",
    )
    answers = []
    for a in raw["answers"]:
        _require(isinstance(a.get("question"), int), "answer question must be an id")
        _require(
            a.get("selected") is None or isinstance(a["selected"], int),
            "answer selected must be an index or null",
        )
        values = a.get("values")
        _require(
            isinstance(values, list) and all(v in _TRUTH_WORDS for v in values),
            "answer values must be truth words",
        )
        answers.append(
            {"question": a["question"], "selected": a["selected"], "values": values}
        )
    report = raw["report"]
    parsed_report: dict[str, Any] = {}
    for kind in TraceKind:
        members = report.get(kind.value, [])
        if kind is TraceKind.QUALIFIED:
            _require(
                all(isinstance(p, list) and len(p) == 2 for p in members),
                "qualified entries must be [winner, loser] pairs",
            )
            parsed_report[kind.value] = [[w, l] for w, l in members]
        else:
            _require(
                all(isinstance(m, str) for m in members),
                f"{kind.value} entries must be argument ids",
            )
            parsed_report[kind.value] = list(members)
    return {
        "id": raw["id"],
        "horizon": raw["horizon"],
        "concepts": concepts,
        "cells": cells,
        "answers": answers,
        "report": parsed_report,
    }


def parse_model_document(data: str | Mapping[str, Any]) -> dict[str, Any]:
    """Validate a model document, returning it in normalized dict form.

    Accepts the JSON text or an already-decoded mapping.  Raises
    ValueError on any structural problem; on success every cell field of
    the input is preserved exactly.
    """
    if isinstance(data, str):
        data = json.loads(data)
    _require(isinstance(data, Mapping), "top level must be an object")
    _require(
        data.get("schema_version") == SCHEMA_VERSION,
        f"unsupported schema_version {data.get('schema_version')!r}",
    )
    sessions = data.get("sessions")
    _require(isinstance(sessions, list), "sessions must be a list")
    return {
        "schema_version": SCHEMA_VERSION,
        "sessions": [_parse_session(s) for s in sessions],
    }


# --- rule graph -----------------------------------------------------------


def export_bk_graph(domain: Domain) -> dict[str, Any]:
    """Export the background knowledge as a graph document.

    One node per distinct literal as written in any rule body or head
    (so a and -a are separate nodes sharing a concept), one junction
    node per rule, and one dashed edge per priority from the stronger
    rule to the weaker.
    """
    concept_nodes: list[dict[str, str]] = []
    seen: set[str] = set()
    rule_nodes: list[dict[str, str]] = []
    edges: list[dict[str, str]] = []

    def concept_id(lit: Literal) -> str:
        node_id = str(lit)
        if node_id not in seen:
            seen.add(node_id)
            concept_nodes.append(
                {
                    "id": node_id,
                    "concept": str(lit.atom),
                    "polarity": "+" if lit.positive else "-",
                }
            )
        return node_id

    for rule in domain.rules:
        rule_id = str(rule.label)
        rule_nodes.append(
            {"id": rule_id, "label": rule_id, "kind": rule.label.kind.value}
        )
        for lit in rule.body:
            edges.append(
                {
                    "from": concept_id(lit),
                    "to": rule_id,
                    "style": "solid",
                    "role": "body",
                }
            )
        edges.append(
            {
                "from": rule_id,
                "to": concept_id(rule.head),
                "style": "solid",
                "role": "head",
            }
        )
    for priority in domain.priorities:
        edges.append(
            {
                "from": str(priority.stronger),
                "to": str(priority.weaker),
                "style": "dashed",
                "role": "priority",
            }
        )
    return {"concept_nodes": concept_nodes, "rule_nodes": rule_nodes, "edges": edges}


def _dot_quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def graph_to_dot(graph: Mapping[str, Any]) -> str:
    """Render a graph document as DOT text (layout left to the viewer)."""
    lines = ["digraph background_knowledge {"]
    for node in graph["concept_nodes"]:
        color = "green" if node["polarity"] == "+" else "red"
        lines.append(
            f"  {_dot_quote(node['id'])} [shape=ellipse color={color}];"
        )
    for node in graph["rule_nodes"]:
        lines.append(f"  {_dot_quote(node['id'])} [shape=box];")
    for edge in graph["edges"]:
        attrs = " [style=dashed]" if edge["style"] == "dashed" else ""
        lines.append(
            f"  {_dot_quote(edge['from'])} -> {_dot_quote(edge['to'])}{attrs};"
        )
    lines.append("}")
    return "\n".join(lines) + "\n"
