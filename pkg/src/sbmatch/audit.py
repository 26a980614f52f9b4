"""Invariant checks over stream states and greedy matchings.

Every checker returns a list of human-readable violations; an empty list
means the property holds.
"""

from __future__ import annotations

from .ledger import MATROID
from .matroids import max_weight_base

TOL = 1e-9


def _lt(a, b):
    """``a < b`` beyond relative tolerance."""
    return a < b - TOL * max(1.0, abs(a), abs(b))


def _ne(a, b):
    return abs(a - b) > TOL * max(1.0, abs(a), abs(b))


def check_positive_gains(state):
    return [f"e{el.index}: gain {el.gain} <= 0" for el in state.stored if not el.gain > 0]


def check_thresholds(state):
    """Stored elements passed the strict threshold and split value into gain + w*."""
    out = []
    p = state.params
    for el in state.stored:
        vertex_part = sum(w for o, w in el.w_star.items() if o != MATROID)
        w_m = el.w_star.get(MATROID, 0.0)
        if not el.value > p.alpha * (vertex_part + p.gamma * w_m):
            out.append(f"e{el.index}: value {el.value} fails the threshold")
        if _ne(el.value, el.gain + vertex_part + w_m):
            out.append(f"e{el.index}: value {el.value} != gain + sum w*")
        for owner, slot in el.slots.items():
            if _ne(slot.reduced_weight, el.w_star[owner] + el.gain):
                out.append(f"e{el.index}/{owner}: reduced weight != w* + gain")
    return out


def check_prefix_gains(state):
    """Each reduced weight equals the gain sum at or below it in its queue.

    Holds exactly for runs without eviction and before finalization.
    """
    out = []
    for owner, qs in state.ledger.queue_sets.items():
        for q in range(len(qs)):
            acc = 0.0
            for el in reversed(qs.chain(q)):
                acc += el.gain
                if _ne(el.reduced_weight(owner), acc):
                    out.append(f"{owner}/{q} e{el.index}: reduced {el.reduced_weight(owner)} != prefix {acc}")
    return out


def check_prefix_gains_lower(state):
    """Eviction runs: reduced weights dominate the surviving prefix sums."""
    out = []
    for owner, qs in state.ledger.queue_sets.items():
        for q in range(len(qs)):
            acc = 0.0
            for el in reversed(qs.chain(q)):
                acc += el.gain
                if _lt(el.reduced_weight(owner), acc):
                    out.append(f"{owner}/{q} e{el.index}: reduced weight below prefix sum")
    return out


def check_queue_weights(state):
    """Queue weights sum to incident gains; tops are the heaviest elements."""
    out = []
    by_vertex = {}
    for el in state.stored:
        for v in el.edge.endpoints:
            by_vertex.setdefault(v, []).append(el)
    for v in state.ledger.vertex_owners():
        qs = state.ledger[v]
        incident = by_vertex.get(v, [])
        g = sum(el.gain for el in incident)
        if _ne(qs.total_weight(), g):
            out.append(f"vertex {v}: queue weight {qs.total_weight()} != incident gain {g}")
        out += _heaviest_on_top(qs, v, incident)
    return out


def _heaviest_on_top(qs, v, incident):
    tops = {id(t) for t in qs.top_elements()}
    rest = [el.reduced_weight(v) for el in incident if id(el) not in tops]
    if rest and qs.top_elements():
        lightest_top = min(t.reduced_weight(v) for t in qs.top_elements())
        if _lt(lightest_top, max(rest)):
            return [f"vertex {v}: a non-top element outweighs a top"]
    if rest and len(qs.top_elements()) < len(qs):
        return [f"vertex {v}: an empty queue while elements are buried"]
    return []


def check_tops_heaviest(state):
    """Second half of :func:`check_queue_weights`, valid under eviction too."""
    out = []
    for v in state.ledger.vertex_owners():
        incident = [el for el in state.stored if v in el.edge.endpoints]
        out += _heaviest_on_top(state.ledger[v], v, incident)
    return out


def check_chains(state):
    """Links are mutually consistent, acyclic and descend in arrival order."""
    out = []
    for owner, qs in state.ledger.queue_sets.items():
        for q in range(len(qs)):
            seen = set()
            c, above = qs.tops[q], None
            n = 0
            while c is not None:
                if id(c) in seen:
                    out.append(f"{owner}/{q}: cycle at e{c.index}")
                    break
                seen.add(id(c))
                slot = c.slots[owner]
                if slot.queue != q:
                    out.append(f"{owner}/{q}: e{c.index} believes it is in queue {slot.queue}")
                if slot.above is not above:
                    out.append(f"{owner}/{q}: e{c.index} has a stale successor link")
                if above is not None and not c.index < above.index:
                    out.append(f"{owner}/{q}: e{c.index} below a later-or-equal e{above.index}")
                n += 1
                above, c = c, slot.below
            if n != qs.lengths[q]:
                out.append(f"{owner}/{q}: length {qs.lengths[q]} but chain has {n}")
    return out


def check_evictions(state):
    eps = state.params.eps
    return [
        f"e{ev.evictor} evicted e{ev.evicted} with gain ratio below 1/eps"
        for ev in state.evictions
        if _lt(ev.evictor_gain, ev.evicted_gain / eps)
    ]


def check_non_erasable_depth(state):
    """With eviction on, at most ``beta`` unmarked elements per queue."""
    beta = state.params.depth
    out = []
    for owner, qs in state.ledger.queue_sets.items():
        for q in range(len(qs)):
            live = sum(1 for el in qs.chain(q) if not el.erasable)
            if live > beta:
                out.append(f"{owner}/{q}: {live} unmarked elements exceed beta={beta}")
    return out


def check_gain_vs_value(state):
    """``g(S) >= eps/(1+eps) * f(S | empty)`` for grow-only runs."""
    eps = state.params.eps
    if eps <= 0 or state.evictions or state.ledger.removed:
        return []
    stored = [el.index for el in state.stored]
    f_s = state.objective.value(stored) - state.objective.f_empty
    replayed = sum(el.value for el in state.stored)
    out = []
    if _ne(f_s, replayed):
        out.append(f"committed marginals sum to {replayed}, oracle says {f_s}")
    if _lt(state.gain_total, eps / (1 + eps) * f_s):
        out.append(f"g(S)={state.gain_total} below eps/(1+eps) f(S|0)={eps / (1 + eps) * f_s}")
    return out


def check_topset_gain(state):
    """Gain retained by the final top set, after :func:`finalize_topset`."""
    if state.finalized is None:
        return ["state not finalized"]
    eps, gamma = state.params.eps, state.params.gamma
    factor = 1 + 1 / (gamma * (1 + eps) - 1)
    g_f = sum(el.gain for el in state.finalized)
    g_s = state.gain_before_finalize
    if _lt(factor * g_f, g_s):
        return [f"{factor} * g(S_f)={factor * g_f} below g(S)={g_s}"]
    return []


def check_matroid_top(state, arrived=None):
    """Top(Q_M) is a maximum-weight base under the matroid reduced weights.

    ``arrived`` optionally maps discarded edges to their ``w*_M``; the
    optimum over stored plus discarded edges must not exceed the tops.
    """
    qs = state.ledger[MATROID]
    tops = qs.top_elements()
    top_total = sum(el.reduced_weight(MATROID) for el in tops)
    weights = {el.index: el.reduced_weight(MATROID) for el in state.stored}
    out = []
    if not state.matroid.is_independent([el.index for el in tops]):
        out.append("matroid tops are dependent")
    _, best = max_weight_base(state.matroid, weights, weights)
    if _ne(best, top_total):
        out.append(f"top weight {top_total} != max base weight {best} over S")
    if arrived:
        allw = dict(arrived)
        allw.update(weights)
        _, best_all = max_weight_base(state.matroid, allw, allw)
        if _ne(best_all, top_total):
            out.append(f"top weight {top_total} != max base weight {best_all} over arrivals")
    return out


def check_matching(state, matching):
    """Feasibility, one selection per queue and the chain-payment claim."""
    out = []
    inst = state.instance
    load = {}
    used_queues = set()
    pool = state.finalized if state.mode == "matroid" else state.stored
    by_index = {el.index: el for el in pool}
    for e in matching.edges:
        el = by_index.get(e)
        if el is None:
            out.append(f"e{e} selected but not a candidate")
            continue
        for v in el.edge.endpoints:
            load[v] = load.get(v, 0) + 1
            key = (v, el.slots[v].queue)
            if key in used_queues:
                out.append(f"two selections in queue {key}")
            used_queues.add(key)
    for v, n in load.items():
        if n > inst.capacities[v]:
            out.append(f"vertex {v}: degree {n} > capacity {inst.capacities[v]}")
    if state.matroid is not None and not state.matroid.is_independent(matching.edges):
        out.append("matching is dependent in the matroid")
    covered = set(matching.edges)
    for e, marked in matching.provenance.items():
        if any(x >= e for x in marked):
            out.append(f"e{e} marked a later element")
        covered |= marked
    missing = sorted(by_index.keys() - covered)
    if missing:
        out.append(f"elements neither selected nor paid for: {missing}")
    return out


def check_greedy_value(state, matching):
    """``w(M) >= g(S)`` (weighted) or ``f(M) >= g(S) + f(empty)``."""
    pool = state.finalized if state.mode == "matroid" else state.stored
    g = sum(el.gain for el in pool)
    floor = g if state.mode == "weighted" else g + state.objective.f_empty
    if _lt(matching.value, floor):
        return [f"objective {matching.value} below gain floor {floor}"]
    return []
