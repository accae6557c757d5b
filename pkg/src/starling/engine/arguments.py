"""Argument traces over a finished grid.

An argument is one ground-rule firing, named `label#instance@t`. Universal
collects every firing whose body holds in the final grid; acceptable keeps
those whose conclusion stands (for preclusion firings: whose block was
effective); qualified pairs record priority defeats and preclusion
blocks/overrides between arguments, kept when the winner is acceptable and
the loser is not.

Premises are wired through a per-time-point justification map built in
dependency order, so support chains are DAGs even when the cell provenance
shows a stronger rule than the one that bootstrapped the value.
"""

from __future__ import annotations

import numpy as np

from ..lang.ast import Literal, Observation
from .encode import KIND_CAUSAL, KIND_PRECLUSION, KIND_PROPERTY, EncodedProgram
from .kernel_py import PK_CAUSAL, PK_INERTIA
from .model import Argument, Premise

# a justification is an observation leaf or a (rule index, time) firing
_Just = Observation | tuple[int, int]


def _arg_id(enc: EncodedProgram, rule_idx: int, t: int) -> str:
    rule = enc.rules[rule_idx]
    return f"{rule.origin}#{rule.instance_id}@{t}"


def _body_holds(enc: EncodedProgram, i: int, row: np.ndarray) -> bool:
    off = enc.r_body_off[i]
    for k in range(off, off + enc.r_body_len[i]):
        if row[enc.body_c[k]] != enc.body_sign[k]:
            return False
    return True


def build_trace(
    enc: EncodedProgram,
    values: np.ndarray,
    prov_kind: np.ndarray,
    observations: list[Observation],
) -> tuple[tuple[Argument, ...], frozenset[str], tuple[tuple[str, str], ...]]:
    """(universal, acceptable ids, qualified pairs) for one session grid."""
    n = enc.n_concepts
    horizon = enc.horizon
    m = len(enc.r_kind)

    timed_obs: dict[tuple[Literal, int], Observation] = {}
    eternal_obs: dict[Literal, Observation] = {}
    for obs in observations:
        if obs.time.is_always:
            eternal_obs.setdefault(obs.literal, obs)
        else:
            timed_obs.setdefault((obs.literal, obs.time.t), obs)

    def holds(c: int, sign: int, t: int) -> bool:
        return values[t, c] == sign

    # firing sets: property at t, causal/preclusion into t
    prop_fired = np.zeros((horizon + 1, m), dtype=np.int8)
    step_fired = np.zeros((horizon + 1, m), dtype=np.int8)
    for t in range(horizon + 1):
        for i in range(m):
            if enc.r_kind[i] == KIND_PROPERTY:
                prop_fired[t, i] = 1 if _body_holds(enc, i, values[t]) else 0
            elif t > 0 and _body_holds(enc, i, values[t - 1]):
                step_fired[t, i] = 1

    universal: list[Argument] = []
    acceptable: set[str] = set()
    prev_just: dict[tuple[int, int], _Just] = {}

    for t in range(horizon + 1):
        just: dict[tuple[int, int], _Just] = {}

        # anchors: observations, then inertia carries, then causal firings
        for c in range(n):
            v = int(values[t, c])
            if v == 0:
                continue
            lit = Literal(v > 0, enc.concepts[c])
            obs = timed_obs.get((lit, t)) or eternal_obs.get(lit)
            if obs is not None:
                just[(c, v)] = obs
        if t > 0:
            for c in range(n):
                v = int(values[t, c])
                key = (c, v)
                if v == 0 or key in just:
                    continue
                if enc.fluent[c] and values[t - 1, c] == v and key in prev_just:
                    just[key] = prev_just[key]
        for i in range(m):
            if enc.r_kind[i] == KIND_CAUSAL and step_fired[t, i]:
                key = (int(enc.r_head_c[i]), int(enc.r_head_sign[i]))
                if key not in just and holds(key[0], key[1], t):
                    just[key] = (i, t)

        # property conclusions join once their premises are justified
        changed = True
        while changed:
            changed = False
            for i in range(m):
                if enc.r_kind[i] != KIND_PROPERTY or not prop_fired[t, i]:
                    continue
                key = (int(enc.r_head_c[i]), int(enc.r_head_sign[i]))
                if key in just or not holds(key[0], key[1], t):
                    continue
                if all(
                    (int(enc.body_c[k]), int(enc.body_sign[k])) in just
                    for k in range(enc.r_body_off[i], enc.r_body_off[i] + enc.r_body_len[i])
                ):
                    just[key] = (i, t)
                    changed = True

        # enumerate this time-point's arguments
        for i in range(m):
            kind = enc.r_kind[i]
            if kind == KIND_PROPERTY:
                if not prop_fired[t, i]:
                    continue
                premise_just = just
            else:
                if not step_fired[t, i]:
                    continue
                premise_just = prev_just
            rule = enc.rules[i]
            support: list[Premise] = []
            for k in range(enc.r_body_off[i], enc.r_body_off[i] + enc.r_body_len[i]):
                entry = premise_just.get((int(enc.body_c[k]), int(enc.body_sign[k])))
                if isinstance(entry, Observation):
                    support.append(entry)
                elif entry is not None:
                    sub_i, sub_t = entry
                    support.append((enc.rules[sub_i], (_arg_id(enc, sub_i, sub_t),)))
            arg_id = _arg_id(enc, i, t)
            universal.append(Argument(arg_id, (rule.head, t), tuple(support)))

            head_c = int(enc.r_head_c[i])
            head_sign = int(enc.r_head_sign[i])
            if kind == KIND_PRECLUSION:
                # effective block: the target does not stand via causal/inertia
                blocked_ok = not (
                    holds(head_c, head_sign, t)
                    and prov_kind[t, head_c] in (PK_CAUSAL, PK_INERTIA)
                )
                if blocked_ok:
                    acceptable.add(arg_id)
            elif holds(head_c, head_sign, t):
                acceptable.add(arg_id)

        prev_just = just

    qualified: list[tuple[str, str]] = []
    _collect_qualified(enc, prop_fired, step_fired, qualified)
    pairs = tuple((w, l) for w, l in qualified if w in acceptable and l not in acceptable)
    return tuple(universal), frozenset(acceptable), pairs


def _collect_qualified(
    enc: EncodedProgram,
    prop_fired: np.ndarray,
    step_fired: np.ndarray,
    out: list[tuple[str, str]],
) -> None:
    m = len(enc.r_kind)
    dom = enc.dom
    for t in range(enc.horizon + 1):
        active = [
            i
            for i in range(m)
            if (enc.r_kind[i] == KIND_PROPERTY and prop_fired[t, i])
            or (enc.r_kind[i] != KIND_PROPERTY and step_fired[t, i])
        ]
        supports = [i for i in active if enc.r_kind[i] != KIND_PRECLUSION]
        blocks = [i for i in active if enc.r_kind[i] == KIND_PRECLUSION]
        for x in supports:
            for y in supports:
                if (
                    enc.r_head_c[x] == enc.r_head_c[y]
                    and enc.r_head_sign[x] != enc.r_head_sign[y]
                    and dom[enc.r_label[x], enc.r_label[y]]
                ):
                    out.append((_arg_id(enc, x, t), _arg_id(enc, y, t)))
        for j in blocks:
            for i in supports:
                if enc.r_kind[i] != KIND_CAUSAL:
                    continue
                if (
                    enc.r_head_c[i] == enc.r_head_c[j]
                    and enc.r_head_sign[i] == enc.r_head_sign[j]
                ):
                    if dom[enc.r_label[i], enc.r_label[j]]:
                        out.append((_arg_id(enc, i, t), _arg_id(enc, j, t)))
                    else:
                        out.append((_arg_id(enc, j, t), _arg_id(enc, i, t)))
