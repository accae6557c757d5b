# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled grid kernel; semantics identical to the pure twin (kernel_py)."""

import numpy as np


cdef inline bint _body_holds(
    const signed char[::1] row,
    int off,
    int length,
    const int[::1] body_c,
    const signed char[::1] body_sign,
) noexcept:
    cdef int k
    for k in range(off, off + length):
        if row[body_c[k]] != body_sign[k]:
            return False
    return True


cdef inline bint _blocked(
    int m,
    const signed char[::1] live,
    const signed char[::1] r_kind,
    const int[::1] r_head_c,
    const signed char[::1] r_head_sign,
    const int[::1] r_label,
    const signed char[:, ::1] dom,
    int c,
    int sign,
    int label,
) noexcept:
    cdef int j
    for j in range(m):
        if live[j] and r_kind[j] == 2 and r_head_c[j] == c and r_head_sign[j] == sign:
            if label < 0 or not dom[label, r_label[j]]:
                return True
    return False


def run_grid(enc):
    """Fill the whole timeline; returns (values, prov_kind, prov_rule, status, fail_t)."""
    cdef int n = enc.n_concepts
    cdef int horizon = enc.horizon
    cdef int budget = enc.budget

    values_arr = np.zeros((horizon + 1, n), dtype=np.int8)
    prov_kind_arr = np.zeros((horizon + 1, n), dtype=np.int8)
    prov_rule_arr = np.full((horizon + 1, n), -1, dtype=np.int32)
    if n == 0:
        return values_arr, prov_kind_arr, prov_rule_arr, 0, -1

    cdef signed char[:, ::1] values = values_arr
    cdef signed char[:, ::1] prov_kind = prov_kind_arr
    cdef int[:, ::1] prov_rule = prov_rule_arr

    cdef const signed char[::1] fluent = enc.fluent
    cdef const signed char[:, ::1] obs_val = enc.obs_val
    cdef const signed char[:, ::1] obs_kind = enc.obs_kind
    cdef const signed char[::1] r_kind = enc.r_kind
    cdef const int[::1] r_head_c = enc.r_head_c
    cdef const signed char[::1] r_head_sign = enc.r_head_sign
    cdef const int[::1] r_body_off = enc.r_body_off
    cdef const int[::1] r_body_len = enc.r_body_len
    cdef const int[::1] r_label = enc.r_label
    cdef const int[::1] body_c = enc.body_c
    cdef const signed char[::1] body_sign = enc.body_sign
    cdef const signed char[:, ::1] dom = enc.dom
    cdef const int[::1] hg_off = enc.hg_off
    cdef const int[::1] hg_len = enc.hg_len
    cdef const int[::1] hg_rule = enc.hg_rule

    cdef int m = len(enc.r_kind)
    live_arr = np.zeros(m, dtype=np.int8)
    fired_arr = np.zeros(m, dtype=np.int8)
    inert_arr = np.zeros(n, dtype=np.int8)
    cur_arr = np.zeros(n, dtype=np.int8)
    nxt_arr = np.zeros(n, dtype=np.int8)
    nxt_pk_arr = np.zeros(n, dtype=np.int8)
    nxt_pr_arr = np.full(n, -1, dtype=np.int32)
    pos_arr = np.zeros(m if m > 0 else 1, dtype=np.int32)
    neg_arr = np.zeros(m if m > 0 else 1, dtype=np.int32)
    alive_arr = np.zeros(m if m > 0 else 1, dtype=np.int32)
    cdef signed char[::1] live = live_arr
    cdef signed char[::1] fired = fired_arr
    cdef signed char[::1] inert = inert_arr
    cdef signed char[::1] cur = cur_arr
    cdef signed char[::1] nxt = nxt_arr
    cdef signed char[::1] nxt_pk = nxt_pk_arr
    cdef int[::1] nxt_pr = nxt_pr_arr
    cdef int[::1] pos = pos_arr
    cdef int[::1] neg = neg_arr
    cdef int[::1] alive = alive_arr

    cdef int t, i, c, idx, sweep, a, b, kind
    cdef int v, pk, pr, winner, obs_k
    cdef int npos, nneg, nalive
    cdef bint stable, changed, active, dead, alive_pos, alive_neg

    for t in range(horizon + 1):
        for i in range(m):
            live[i] = 0
        for c in range(n):
            inert[c] = 0
        if t > 0:
            for i in range(m):
                if r_kind[i] == 0:
                    continue
                live[i] = _body_holds(values[t - 1], r_body_off[i], r_body_len[i], body_c, body_sign)
            for i in range(m):
                if live[i] and r_kind[i] == 1:
                    if _blocked(m, live, r_kind, r_head_c, r_head_sign, r_label, dom,
                                r_head_c[i], r_head_sign[i], r_label[i]):
                        live[i] = 0
            for c in range(n):
                v = values[t - 1, c]
                if fluent[c] and v != 0:
                    if not _blocked(m, live, r_kind, r_head_c, r_head_sign, r_label, dom,
                                    c, v, -1):
                        inert[c] = <signed char> v

        for c in range(n):
            cur[c] = 0
        stable = False
        for sweep in range(budget):
            for i in range(m):
                if r_kind[i] == 0:
                    fired[i] = _body_holds(cur, r_body_off[i], r_body_len[i], body_c, body_sign)
            changed = False
            for c in range(n):
                obs_k = obs_kind[t, c]
                if obs_k == 1:
                    v = obs_val[t, c]; pk = 1; pr = -1
                elif obs_k == 2:
                    v = obs_val[t, c]; pk = 2; pr = -1
                elif obs_k == 3:
                    v = 0; pk = 0; pr = -1
                else:
                    # gather active rule supports by head polarity
                    npos = 0
                    nneg = 0
                    for idx in range(hg_off[c], hg_off[c] + hg_len[c]):
                        i = hg_rule[idx]
                        kind = r_kind[i]
                        active = (kind == 0 and fired[i]) or (kind == 1 and live[i])
                        if active:
                            if r_head_sign[i] == 1:
                                pos[npos] = i; npos += 1
                            else:
                                neg[nneg] = i; nneg += 1
                    if npos > 0 or nneg > 0:
                        # a support is alive unless an opposing label strictly outranks it
                        alive_pos = False
                        alive_neg = False
                        nalive = 0
                        for a in range(npos):
                            dead = False
                            for b in range(nneg):
                                if dom[r_label[neg[b]], r_label[pos[a]]]:
                                    dead = True
                                    break
                            if not dead:
                                alive_pos = True
                        for b in range(nneg):
                            dead = False
                            for a in range(npos):
                                if dom[r_label[pos[a]], r_label[neg[b]]]:
                                    dead = True
                                    break
                            if not dead:
                                alive_neg = True
                        if alive_pos and not alive_neg:
                            for a in range(npos):
                                dead = False
                                for b in range(nneg):
                                    if dom[r_label[neg[b]], r_label[pos[a]]]:
                                        dead = True
                                        break
                                if not dead:
                                    alive[nalive] = pos[a]; nalive += 1
                        elif alive_neg and not alive_pos:
                            for b in range(nneg):
                                dead = False
                                for a in range(npos):
                                    if dom[r_label[pos[a]], r_label[neg[b]]]:
                                        dead = True
                                        break
                                if not dead:
                                    alive[nalive] = neg[b]; nalive += 1
                        if nalive > 0:
                            winner = alive[0]
                            for a in range(nalive):
                                dead = False
                                for b in range(nalive):
                                    if alive[b] != alive[a] and dom[r_label[alive[b]], r_label[alive[a]]]:
                                        dead = True
                                        break
                                if not dead:
                                    winner = alive[a]
                                    break
                            v = r_head_sign[winner]
                            pk = 3 if r_kind[winner] == 0 else 4
                            pr = winner
                        else:
                            v = 0; pk = 0; pr = -1
                    elif inert[c] != 0:
                        v = inert[c]; pk = 5; pr = -1
                    else:
                        v = 0; pk = 0; pr = -1
                nxt[c] = <signed char> v
                nxt_pk[c] = <signed char> pk
                nxt_pr[c] = pr
                if v != cur[c]:
                    changed = True
            if not changed:
                stable = True
                break
            for c in range(n):
                cur[c] = nxt[c]
        if not stable:
            return values_arr, prov_kind_arr, prov_rule_arr, 1, t
        for c in range(n):
            values[t, c] = nxt[c]
            prov_kind[t, c] = nxt_pk[c]
            prov_rule[t, c] = nxt_pr[c]

    return values_arr, prov_kind_arr, prov_rule_arr, 0, -1
