"""Pure-Python grid kernel; the reference twin of the compiled extension.

Row t is computed from the committed row t-1: causal firings, preclusion
blocks, and inertia candidates are frozen first, then property rules chatter
in synchronous sweeps until the row stops changing. The sweep budget is 2x
the ground-literal count (= 4 x concepts); exceeding it reports the
oscillating time-point instead of looping forever.
"""

from __future__ import annotations

import numpy as np

from .encode import (
    KIND_CAUSAL,
    KIND_PRECLUSION,
    KIND_PROPERTY,
    OBS_CONFLICT,
    OBS_CONSTANT,
    OBS_NONE,
    OBS_PLAIN,
    EncodedProgram,
)

PK_NONE = 0
PK_OBSERVATION = 1
PK_CONSTANT = 2
PK_PROPERTY = 3
PK_CAUSAL = 4
PK_INERTIA = 5


def run_grid(enc: EncodedProgram) -> tuple[np.ndarray, np.ndarray, np.ndarray, int, int]:
    """Fill the whole timeline; returns (values, prov_kind, prov_rule, status, fail_t).

    Arrays are indexed [t, concept]. status 0 = stable everywhere;
    status 1 = sweep budget exceeded at fail_t.
    """
    n = enc.n_concepts
    horizon = enc.horizon
    values = np.zeros((horizon + 1, n), dtype=np.int8)
    prov_kind = np.zeros((horizon + 1, n), dtype=np.int8)
    prov_rule = np.full((horizon + 1, n), -1, dtype=np.int32)
    if n == 0:
        return values, prov_kind, prov_rule, 0, -1

    m = len(enc.r_kind)
    live = np.zeros(m, dtype=np.int8)
    inert = np.zeros(n, dtype=np.int8)
    cur = np.zeros(n, dtype=np.int8)
    nxt = np.zeros(n, dtype=np.int8)
    nxt_pk = np.zeros(n, dtype=np.int8)
    nxt_pr = np.full(n, -1, dtype=np.int32)
    fired = np.zeros(m, dtype=np.int8)

    for t in range(horizon + 1):
        live[:] = 0
        inert[:] = 0
        if t > 0:
            prev = values[t - 1]
            for i in range(m):
                if enc.r_kind[i] == KIND_PROPERTY:
                    continue
                live[i] = 1 if _body_holds(enc, i, prev) else 0
            for i in range(m):
                if live[i] and enc.r_kind[i] == KIND_CAUSAL:
                    if _blocked(enc, live, enc.r_head_c[i], enc.r_head_sign[i], enc.r_label[i]):
                        live[i] = 0
            for c in range(n):
                v = prev[c]
                if enc.fluent[c] and v != 0:
                    if not _blocked(enc, live, c, v, -1):
                        inert[c] = v

        cur[:] = 0
        stable = False
        for _sweep in range(enc.budget):
            for i in range(m):
                if enc.r_kind[i] == KIND_PROPERTY:
                    fired[i] = 1 if _body_holds(enc, i, cur) else 0
            changed = False
            for c in range(n):
                v, pk, pr = _combine(enc, c, t, fired, live, inert)
                nxt[c] = v
                nxt_pk[c] = pk
                nxt_pr[c] = pr
                if v != cur[c]:
                    changed = True
            if not changed:
                stable = True
                break
            cur[:] = nxt
        if not stable:
            return values, prov_kind, prov_rule, 1, t
        values[t] = nxt
        prov_kind[t] = nxt_pk
        prov_rule[t] = nxt_pr

    return values, prov_kind, prov_rule, 0, -1


def _body_holds(enc: EncodedProgram, i: int, row: np.ndarray) -> bool:
    off = enc.r_body_off[i]
    for k in range(off, off + enc.r_body_len[i]):
        if row[enc.body_c[k]] != enc.body_sign[k]:
            return False
    return True


def _blocked(enc: EncodedProgram, live: np.ndarray, c: int, sign: int, label: int) -> bool:
    # A live preclusion on the same literal blocks, unless the challenger's
    # label strictly outranks it. Inertia (label -1) never outranks.
    for j in range(len(enc.r_kind)):
        if (
            live[j]
            and enc.r_kind[j] == KIND_PRECLUSION
            and enc.r_head_c[j] == c
            and enc.r_head_sign[j] == sign
        ):
            if label < 0 or not enc.dom[label, enc.r_label[j]]:
                return True
    return False


def _combine(
    enc: EncodedProgram,
    c: int,
    t: int,
    fired: np.ndarray,
    live: np.ndarray,
    inert: np.ndarray,
) -> tuple[int, int, int]:
    ok = enc.obs_kind[t, c]
    if ok == OBS_PLAIN:
        return enc.obs_val[t, c], PK_OBSERVATION, -1
    if ok == OBS_CONSTANT:
        return enc.obs_val[t, c], PK_CONSTANT, -1
    if ok == OBS_CONFLICT:
        return 0, PK_NONE, -1
    assert ok == OBS_NONE

    pos: list[int] = []
    neg: list[int] = []
    off = enc.hg_off[c]
    for idx in range(off, off + enc.hg_len[c]):
        i = enc.hg_rule[idx]
        kind = enc.r_kind[i]
        active = (kind == KIND_PROPERTY and fired[i]) or (kind == KIND_CAUSAL and live[i])
        if active:
            (pos if enc.r_head_sign[i] == 1 else neg).append(i)
    if pos or neg:
        dom = enc.dom
        alive_pos = [
            x for x in pos if not any(dom[enc.r_label[y], enc.r_label[x]] for y in neg)
        ]
        alive_neg = [
            y for y in neg if not any(dom[enc.r_label[x], enc.r_label[y]] for x in pos)
        ]
        if alive_pos and alive_neg:
            return 0, PK_NONE, -1
        alive = alive_pos or alive_neg
        if not alive:
            return 0, PK_NONE, -1
        winner = alive[0]
        for x in alive:
            if not any(y != x and dom[enc.r_label[y], enc.r_label[x]] for y in alive):
                winner = x
                break
        sign = enc.r_head_sign[winner]
        pk = PK_PROPERTY if enc.r_kind[winner] == KIND_PROPERTY else PK_CAUSAL
        return sign, pk, winner
    if inert[c] != 0:
        return inert[c], PK_INERTIA, -1
    return 0, PK_NONE, -1
