"""Array encoding of a ground program for the grid kernels.

Concepts, rules, and labels become integer ids; observations become per-cell
sign/kind planes; the priority relation becomes a strict-dominance matrix.
Both kernels consume this layout, so they differ only in execution, never in
semantics.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..ground import GroundRule
from ..lang.ast import Observation, Priority, RuleLabel, Term
from .model import ConceptKind

OBS_NONE = 0
OBS_PLAIN = 1
OBS_CONSTANT = 2
OBS_CONFLICT = 3

KIND_PROPERTY = 0
KIND_CAUSAL = 1
KIND_PRECLUSION = 2

_RULE_KIND_CODE = {"p": KIND_PROPERTY, "c": KIND_CAUSAL, "r": KIND_PRECLUSION}


@dataclass
class EncodedProgram:
    n_concepts: int
    horizon: int
    budget: int
    concepts: tuple[Term, ...]
    fluent: np.ndarray  # int8[n]; 1 where inertia applies
    obs_val: np.ndarray  # int8[H+1, n] in {-1, 0, 1}
    obs_kind: np.ndarray  # int8[H+1, n] in {OBS_*}
    rules: tuple[GroundRule, ...]  # canonical order; indices are rule ids
    r_kind: np.ndarray  # int8[m] in {KIND_*}
    r_head_c: np.ndarray  # int32[m]
    r_head_sign: np.ndarray  # int8[m]
    r_body_off: np.ndarray  # int32[m]
    r_body_len: np.ndarray  # int32[m]
    r_label: np.ndarray  # int32[m] label ids
    body_c: np.ndarray  # int32[total body size]
    body_sign: np.ndarray  # int8[total body size]
    dom: np.ndarray  # int8[L, L]; dom[a, b] = label a strictly outranks b
    hg_off: np.ndarray  # int32[n] per-concept slice into hg_rule
    hg_len: np.ndarray  # int32[n]
    hg_rule: np.ndarray  # int32[m'] rule ids grouped by head concept


def priority_closure(priorities: tuple[Priority, ...]) -> set[tuple[RuleLabel, RuleLabel]]:
    """Transitive closure of the declared >> relation over labels."""
    closure: set[tuple[RuleLabel, RuleLabel]] = {(p.stronger, p.weaker) for p in priorities}
    changed = True
    while changed:
        changed = False
        for a, b in list(closure):
            for c, d in list(closure):
                if b == c and (a, d) not in closure:
                    closure.add((a, d))
                    changed = True
    return closure


def strictly_stronger(
    closure: set[tuple[RuleLabel, RuleLabel]], a: RuleLabel, b: RuleLabel
) -> bool:
    return (a, b) in closure and (b, a) not in closure


def _rule_sort_key(rule: GroundRule) -> tuple[str, int, int]:
    return rule.origin.kind.value, rule.origin.index, rule.instance_id


def encode_program(
    concepts: tuple[Term, ...],
    kinds: dict[Term, ConceptKind],
    observations: list[Observation],
    rules: list[GroundRule],
    priorities: tuple[Priority, ...],
    horizon: int,
) -> EncodedProgram:
    """Encode one session's inputs; observations are pre-filtered by session."""
    n = len(concepts)
    index = {c: i for i, c in enumerate(concepts)}
    fluent = np.zeros(n, dtype=np.int8)
    for c, i in index.items():
        if kinds[c] is ConceptKind.FLUENT:
            fluent[i] = 1

    obs_val = np.zeros((horizon + 1, n), dtype=np.int8)
    obs_kind = np.zeros((horizon + 1, n), dtype=np.int8)
    numeric = [o for o in observations if not o.time.is_always]
    eternal = [o for o in observations if o.time.is_always]
    for obs in numeric:
        c = index.get(obs.literal.atom)
        if c is None or obs.time.t > horizon:
            continue
        _merge_obs(obs_val, obs_kind, c, obs.time.t, 1 if obs.literal.positive else -1, OBS_PLAIN)
    for obs in eternal:
        c = index.get(obs.literal.atom)
        if c is None:
            continue
        sign = 1 if obs.literal.positive else -1
        for t in range(horizon + 1):
            _merge_obs(obs_val, obs_kind, c, t, sign, OBS_CONSTANT)

    ordered = sorted(rules, key=_rule_sort_key)
    m = len(ordered)
    labels: list[RuleLabel] = []
    label_id: dict[RuleLabel, int] = {}
    for rule in ordered:
        if rule.origin not in label_id:
            label_id[rule.origin] = len(labels)
            labels.append(rule.origin)
    for pr in priorities:
        for side in (pr.stronger, pr.weaker):
            if side not in label_id:
                label_id[side] = len(labels)
                labels.append(side)

    r_kind = np.zeros(m, dtype=np.int8)
    r_head_c = np.zeros(m, dtype=np.int32)
    r_head_sign = np.zeros(m, dtype=np.int8)
    r_body_off = np.zeros(m, dtype=np.int32)
    r_body_len = np.zeros(m, dtype=np.int32)
    r_label = np.zeros(m, dtype=np.int32)
    body_c: list[int] = []
    body_sign: list[int] = []
    for i, rule in enumerate(ordered):
        r_kind[i] = _RULE_KIND_CODE[rule.origin.kind.value]
        r_head_c[i] = index[rule.head.atom]
        r_head_sign[i] = 1 if rule.head.positive else -1
        r_label[i] = label_id[rule.origin]
        r_body_off[i] = len(body_c)
        r_body_len[i] = len(rule.body)
        for lit in rule.body:
            body_c.append(index[lit.atom])
            body_sign.append(1 if lit.positive else -1)

    closure = priority_closure(priorities)
    n_labels = len(labels)
    dom = np.zeros((n_labels, n_labels), dtype=np.int8)
    for a in labels:
        for b in labels:
            if strictly_stronger(closure, a, b):
                dom[label_id[a], label_id[b]] = 1

    by_head: list[list[int]] = [[] for _ in range(n)]
    for i in range(m):
        by_head[int(r_head_c[i])].append(i)
    hg_off = np.zeros(n, dtype=np.int32)
    hg_len = np.zeros(n, dtype=np.int32)
    hg_rule_list: list[int] = []
    for c in range(n):
        hg_off[c] = len(hg_rule_list)
        hg_len[c] = len(by_head[c])
        hg_rule_list.extend(by_head[c])

    return EncodedProgram(
        n_concepts=n,
        horizon=horizon,
        budget=4 * n,
        concepts=concepts,
        fluent=fluent,
        obs_val=obs_val,
        obs_kind=obs_kind,
        rules=tuple(ordered),
        r_kind=r_kind,
        r_head_c=r_head_c,
        r_head_sign=r_head_sign,
        r_body_off=r_body_off,
        r_body_len=r_body_len,
        r_label=r_label,
        body_c=np.array(body_c, dtype=np.int32),
        body_sign=np.array(body_sign, dtype=np.int8),
        dom=dom,
        hg_off=hg_off,
        hg_len=hg_len,
        hg_rule=np.array(hg_rule_list, dtype=np.int32),
    )


def _merge_obs(
    obs_val: np.ndarray, obs_kind: np.ndarray, c: int, t: int, sign: int, kind: int
) -> None:
    existing = obs_kind[t, c]
    if existing == OBS_NONE:
        obs_val[t, c] = sign
        obs_kind[t, c] = kind
    elif existing == OBS_CONFLICT:
        return
    elif obs_val[t, c] != sign:
        # Complementary statements of observation strength annihilate; the
        # cell pins to Unknown and rules may not refill it.
        obs_val[t, c] = 0
        obs_kind[t, c] = OBS_CONFLICT
    elif kind == OBS_CONSTANT:
        obs_kind[t, c] = OBS_CONSTANT
