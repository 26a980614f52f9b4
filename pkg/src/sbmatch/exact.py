"""Exhaustive solvers used as ground truth on desk-scale instances."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .errors import AssertionFailure, TooLarge
from .ledger import MATROID
from .objectives import LinearObjective

MAX_EDGES = 22
TOL = 1e-9


@dataclass
class ExactResult:
    optimum_set: tuple
    optimum_value: float
    explored: int


def _better(val, key, best_val, best_key):
    """Strictly better by tolerance, or tied with a lexicographically smaller set."""
    scale = TOL * max(1.0, abs(best_val))
    if val > best_val + scale:
        return True
    return val >= best_val - scale and key < best_key


def exact_bmatching(instance, oracle, matroid=None, limit=MAX_EDGES) -> ExactResult:
    """Best feasible edge set by depth-first search with feasibility pruning.

    Among optima (within tolerance) the lexicographically smallest ordinal
    tuple wins. Linear objectives additionally prune on the remaining-weight
    bound.
    """
    m = instance.m
    if m > limit:
        raise TooLarge(f"{m} edges exceed the enumeration guard of {limit}")
    edges = instance.edges
    load = [0] * instance.n
    caps = instance.capacities
    linear = isinstance(oracle, LinearObjective)
    suffix = [0.0] * (m + 1)
    if linear:
        for t in range(m - 1, -1, -1):
            suffix[t] = suffix[t + 1] + max(0.0, oracle.weights[edges[t].index])

    chosen = []
    best = {"val": None, "key": None}
    explored = 0
    cache = {}

    def value_of(key):
        if key not in cache:
            cache[key] = oracle.value(key)
        return cache[key]

    def dfs(t, running):
        nonlocal explored
        if linear and best["val"] is not None:
            if running + suffix[t] < best["val"] - TOL * max(1.0, abs(best["val"])):
                return
        if t == m:
            explored += 1
            key = tuple(chosen)
            val = running if linear else value_of(key)
            if best["val"] is None or _better(val, key, best["val"], best["key"]):
                best["val"], best["key"] = val, key
            return
        edge = edges[t]
        if all(load[v] < caps[v] for v in edge.endpoints):
            chosen.append(edge.index)
            if matroid is None or matroid.is_independent(chosen):
                for v in edge.endpoints:
                    load[v] += 1
                dfs(t + 1, running + (oracle.weights[edge.index] if linear else 0.0))
                for v in edge.endpoints:
                    load[v] -= 1
            chosen.pop()
        dfs(t + 1, running)

    dfs(0, 0.0)
    key = best["key"]
    return ExactResult(key, value_of(key) if not linear else oracle.value(key), explored)


def is_feasible(instance, edges, matroid=None):
    load = {}
    for e in edges:
        for v in instance.edge(e).endpoints:
            load[v] = load.get(v, 0) + 1
            if load[v] > instance.capacities[v]:
                return False
    return matroid is None or matroid.is_independent(edges)


def brute_force_bmatching(instance, oracle, matroid=None, limit=16) -> ExactResult:
    """Unpruned scan over all ``2^m`` subsets; a cross-check for the DFS."""
    m = instance.m
    if m > limit:
        raise TooLarge(f"{m} edges exceed the brute-force guard of {limit}")
    ordinals = [e.index for e in instance.edges]
    best_val, best_key, explored = None, None, 0
    for size in range(m + 1):
        for key in combinations(ordinals, size):
            if not is_feasible(instance, key, matroid):
                continue
            explored += 1
            val = oracle.value(key)
            if best_val is None or _better(val, key, best_val, best_key):
                best_val, best_key = val, key
    return ExactResult(best_key, best_val, explored)


def exact_weighted_vs_gain(instance, state, exact=None):
    """Check the gain bounds of a weighted run against the optimum.

    Asserts ``2 (1+eps) g(S) >= w(OPT)`` (``k`` in place of 2 for
    hypergraphs) and, per vertex, that the queue weight dominates the
    reduced weights of the optimum's edges. Discarded edges take their
    reduced weight from a traced replay of the same run.
    Raises :class:`AssertionFailure` with a counterexample dump.
    """
    from .streaming import stream_weighted

    if exact is None:
        exact = exact_bmatching(instance, LinearObjective(instance.weights()))
    opt = exact.optimum_value
    params = state.params
    g = state.gain_total
    if params.d == 0:
        bound = instance.k * params.alpha * g
    elif instance.k == 2:
        # evicted elements have left S; the eviction bound carries the slack
        bound = 2 * (1 + 6 * params.eps) * g
    else:
        bound = None
    report = {"gain": g, "optimum": opt, "gain_bound": bound, "vertices_checked": 0}
    if bound is not None and bound < opt - TOL * max(1.0, opt):
        raise AssertionFailure(
            f"gain bound violated: {bound} < {opt}",
            {"optimum_set": exact.optimum_set, "stored": [el.index for el in state.stored], **report},
        )

    replay = stream_weighted(instance, params, trace=True)
    # w_u(e) = w*_u(e) + g(e), with g = 0 for discarded edges
    reduced = {rec.index: {u: w + rec.gain for u, w in rec.w_star.items()} for rec in replay.trace}

    for v, qs in replay.ledger.queue_sets.items():
        if v == MATROID:
            continue
        mine = [e for e in exact.optimum_set if v in instance.edge(e).endpoints]
        lhs = qs.total_weight()
        rhs = sum(reduced[e][v] for e in mine)
        report["vertices_checked"] += 1
        if lhs < rhs - TOL * max(1.0, rhs):
            raise AssertionFailure(
                f"vertex {v}: queue weight {lhs} below optimum share {rhs}",
                {"vertex": v, "optimum_edges": mine, "queue_weight": lhs, "share": rhs},
            )
    return report
