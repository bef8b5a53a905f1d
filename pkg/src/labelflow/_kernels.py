"""Numba-compiled inner loops shared by the propagation engine and metrics.

All label ids live in ``[0, n)`` so per-label scratch arrays are indexable
directly. Scratch arrays are zeroed via the touched list before returning,
keeping each call O(degree).
"""

import numpy as np
from numba import njit

CLASSIC = 0
LEUNG = 1
CLPA = 2


@njit(cache=True)
def decide_one(indptr, indices, deg_pow, labels_src, strengths_src, pops_src,
               closed_src, v, variant, cap, p, delta, u1, u2,
               counts, score, touched, ties):
    """Next (label, strength) for node v, reading only the *_src state.

    classic: most frequent neighbor label; tie -> with prob p uniform among
    the maximal set, else keep current when maximal, else uniform.
    leung: argmax of sum(strength * degree^m) per label; ties as classic p=0;
    strength = max over winning holders - delta, floored at 0.
    clpa: classic restricted to labels below capacity and not flagged closed
    (a label that filled up stays closed for the rest of its cycle even if
    members leave); the current label is always admissible. An empty
    candidate set keeps the current label.
    """
    cur = labels_src[v]
    start = indptr[v]
    end = indptr[v + 1]
    if start == end:
        return cur, strengths_src[v]

    n_touched = 0
    if variant == LEUNG:
        for i in range(start, end):
            u = indices[i]
            lab = labels_src[u]
            if counts[lab] == 0:
                touched[n_touched] = lab
                n_touched += 1
            counts[lab] += 1
            score[lab] += strengths_src[u] * deg_pow[u]
    else:
        for i in range(start, end):
            lab = labels_src[indices[i]]
            if counts[lab] == 0:
                touched[n_touched] = lab
                n_touched += 1
            counts[lab] += 1

    n_ties = 0
    if variant == LEUNG:
        best_score = -1.0
        for j in range(n_touched):
            lab = touched[j]
            s = score[lab]
            if s > best_score:
                best_score = s
                ties[0] = lab
                n_ties = 1
            elif s == best_score:
                ties[n_ties] = lab
                n_ties += 1
    else:
        best = -1
        for j in range(n_touched):
            lab = touched[j]
            if variant == CLPA and lab != cur and (pops_src[lab] >= cap or closed_src[lab]):
                continue
            c = counts[lab]
            if c > best:
                best = c
                ties[0] = lab
                n_ties = 1
            elif c == best:
                ties[n_ties] = lab
                n_ties += 1

    if n_ties == 0:
        new_label = cur
    elif n_ties == 1:
        new_label = ties[0]
    elif u1 < p:
        new_label = ties[np.int64(u2 * n_ties)]
    else:
        keep = False
        for j in range(n_ties):
            if ties[j] == cur:
                keep = True
                break
        new_label = cur if keep else ties[np.int64(u2 * n_ties)]

    new_strength = strengths_src[v]
    if variant == LEUNG:
        top = -1.0
        for i in range(start, end):
            u = indices[i]
            if labels_src[u] == new_label and strengths_src[u] > top:
                top = strengths_src[u]
        if top >= 0.0:
            new_strength = max(top - delta, 0.0)

    for j in range(n_touched):
        counts[touched[j]] = 0
        score[touched[j]] = 0.0
    return new_label, new_strength


@njit(cache=True)
def run_sweep(indptr, indices, deg_pow, labels, labels_src,
              strengths, strengths_src, pops, pops_src, closed, closed_src,
              order, uniforms, variant, cap, p, delta,
              counts, score, touched, ties, update_counter, check_every):
    """One full visitation round; returns the number of label changes.

    Async mode passes the live arrays as both the working and *_src
    parameters; sync mode passes frozen copies as *_src. Two uniforms are
    consumed per visited node regardless of need, so the random stream
    position depends only on the visit index.
    """
    n = labels.size
    changes = 0
    for idx in range(order.size):
        v = order[idx]
        if indptr[v] == indptr[v + 1]:
            continue
        cur = labels_src[v]
        new_label, new_strength = decide_one(
            indptr, indices, deg_pow, labels_src, strengths_src, pops_src,
            closed_src, v, variant, cap, p, delta,
            uniforms[2 * idx], uniforms[2 * idx + 1],
            counts, score, touched, ties)
        if variant == LEUNG:
            strengths[v] = new_strength
        if new_label != cur:
            if variant == CLPA and pops_src[new_label] >= cap:
                raise AssertionError("capacity invariant violated: full label gained a node")
            pops[cur] -= 1
            pops[new_label] += 1
            if pops[new_label] >= cap:
                closed[new_label] = 1
            labels[v] = new_label
            changes += 1
        update_counter[0] += 1
        if check_every > 0 and update_counter[0] % check_every == 0:
            recount = np.zeros(n, dtype=np.int64)
            for i in range(n):
                recount[labels[i]] += 1
            for lab in range(n):
                if recount[lab] != pops[lab]:
                    raise AssertionError("population bookkeeping diverged from labels")
    return changes


@njit(cache=True)
def count_dissatisfied(indptr, indices, labels, counts, touched):
    """Nodes with strictly more neighbors in some other community than their own."""
    total = 0
    for v in range(labels.size):
        start = indptr[v]
        end = indptr[v + 1]
        if start == end:
            continue
        n_touched = 0
        for i in range(start, end):
            lab = labels[indices[i]]
            if counts[lab] == 0:
                touched[n_touched] = lab
                n_touched += 1
            counts[lab] += 1
        own = counts[labels[v]]
        for j in range(n_touched):
            if touched[j] != labels[v] and counts[touched[j]] > own:
                total += 1
                break
        for j in range(n_touched):
            counts[touched[j]] = 0
    return total
