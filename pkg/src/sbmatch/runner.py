"""Named algorithm pipelines, guarantee-matching defaults and JSON reports."""

from __future__ import annotations

import math
import statistics
import time
from concurrent.futures import ProcessPoolExecutor

from . import audit
from .errors import InvalidP, InvalidParams
from .exact import exact_bmatching
from .greedy import build
from .matroids import build_matroid
from .objectives import build_objective, linear_objective
from .streaming import (
    StreamParams,
    finalize_topset,
    stream_matroid,
    stream_submodular,
    stream_weighted,
)

ALGORITHMS = (
    "weighted",
    "weighted-mem",
    "submod-mono",
    "submod-nonmono",
    "matroid-mono",
    "matroid-nonmono",
)
RANDOMIZED = ("submod-nonmono", "matroid-nonmono")


def default_params(alg, k, *, eps=None, gamma=None, p=None, d=None, seed=0):
    """Fill unset parameters with the values the guarantees are stated for."""
    if alg not in ALGORITHMS:
        raise InvalidParams(f"unknown algorithm {alg!r}")
    if alg == "weighted":
        eps = 0.0 if eps is None else eps
        d = 0 if d is None else d
    elif alg == "weighted-mem":
        eps = 0.1 if eps is None else eps
        d = 1 if d is None else d
    elif alg == "submod-mono":
        eps = 1 / math.sqrt(2) if eps is None else eps
    elif alg == "submod-nonmono":
        eps = math.sqrt(3) / 2 if eps is None else eps
        p = 1 / (3 + 2 * eps) if p is None else p
    else:
        eps = 1.0 if eps is None else eps
        gamma = 2.0 if gamma is None else gamma
        if alg == "matroid-nonmono" and p is None:
            p = 1 / (1 + (k + gamma) * (1 + eps))
    if alg in ("weighted", "weighted-mem", "submod-mono", "matroid-mono"):
        if p is not None and p != 1:
            raise InvalidP(f"{alg} is deterministic; p must be 1")
        p = 1.0
    return StreamParams(
        eps=float(eps),
        d=int(d or 0),
        p=float(p),
        gamma=2.0 if gamma is None else float(gamma),
        seed=seed,
    )


def approximation_bound(alg, k, params, monotone=True):
    """Worst-case ratio OPT / f(M) the analysis guarantees, or None."""
    eps, p, gamma = params.eps, params.p, params.gamma
    if alg.startswith("weighted"):
        if params.d == 0:
            return k * (1 + eps)
        return 2 * (1 + 6 * eps) if k == 2 else None
    if eps <= 0:
        return None
    if alg.startswith("submod"):
        if k != 2:
            return None
        base = 2 * (1 + eps) + (1 + eps) / eps
        if p == 1:
            return base if monotone else None
        return base / (1 - p)
    base = (1 + 1 / (gamma * (1 + eps) - 1)) * ((1 + eps) * (k + gamma) + 1 + 1 / eps)
    if p == 1:
        return base if monotone else None
    return base / (1 - p)


def run_pipeline(instance, alg, params, *, observer=None):
    """Stream, finalize when needed, and build the matching."""
    if alg.startswith("weighted"):
        state = stream_weighted(instance, params, observer=observer)
    elif alg.startswith("submod"):
        state = stream_submodular(instance, build_objective(instance), params, observer=observer)
    else:
        matroid = build_matroid(instance)
        if matroid is None:
            raise InvalidParams(f"{alg} needs a matroid in the instance")
        state = stream_matroid(instance, build_objective(instance), matroid, params, observer=observer)
        finalize_topset(state)
    return state, build(state)


def objective_for(instance, alg):
    return linear_objective(instance) if alg.startswith("weighted") else build_objective(instance)


def solve_exact(instance, alg):
    matroid = build_matroid(instance) if alg.startswith("matroid") else None
    return exact_bmatching(instance, objective_for(instance, alg), matroid)


def realized_ratio(exact_value, achieved):
    if achieved > 0:
        return exact_value / achieved
    return 1.0 if exact_value <= 0 else None


def run_audits(state, matching):
    """Named invariant checks appropriate to the run; name -> violations."""
    checks = {
        "positive_gains": audit.check_positive_gains(state),
        "thresholds": audit.check_thresholds(state),
        "matching": audit.check_matching(state, matching),
        "greedy_value": audit.check_greedy_value(state, matching),
    }
    if state.mode == "matroid":
        checks["topset_gain"] = audit.check_topset_gain(state)
    else:
        checks["chains"] = audit.check_chains(state)
        if state.params.d == 0:
            checks["prefix_gains"] = audit.check_prefix_gains(state)
            checks["queue_weights"] = audit.check_queue_weights(state)
            checks["gain_vs_value"] = audit.check_gain_vs_value(state)
        else:
            checks["tops_heaviest"] = audit.check_tops_heaviest(state)
            checks["evictions"] = audit.check_evictions(state)
            checks["non_erasable_depth"] = audit.check_non_erasable_depth(state)
    return checks


def make_report(instance, alg, params, *, source=None, verify=False, audits=False):
    t0 = time.perf_counter()
    state, matching = run_pipeline(instance, alg, params)
    wall = time.perf_counter() - t0
    lengths = state.queue_max_lengths()
    report = {
        "algorithm": alg,
        "instance": source,
        "n": instance.n,
        "m": instance.m,
        "k": instance.k,
        "params": {
            "eps": params.eps,
            "d": params.d,
            "beta": params.depth,
            "p": params.p,
            "gamma": params.gamma if alg.startswith("matroid") else None,
        },
        "seed": params.seed,
        "stored_peak": state.peak_stored,
        "stored_final": len(state.ledger.stored),
        "finalized_size": len(state.finalized) if state.finalized is not None else None,
        "queue_max_length": max(lengths.values(), default=0),
        "queue_max_lengths": {f"{o}/{q}": n for (o, q), n in lengths.items() if n},
        "gain_total": state.gain_before_finalize if state.finalized is not None else state.gain_total,
        "evictions": len(state.evictions),
        "oracle_calls": state.oracle_calls,
        "coin_draws": state.coin_draws,
        "marginal_ratio_proxy": state.marginal_ratio(),
        "matching": list(matching.edges),
        "objective_value": matching.value,
        "bound": approximation_bound(alg, instance.k, params, state.objective.monotone),
        "exact_value": None,
        "exact_set": None,
        "realized_ratio": None,
    }
    if verify:
        exact = solve_exact(instance, alg)
        report["exact_value"] = exact.optimum_value
        report["exact_set"] = list(exact.optimum_set)
        report["realized_ratio"] = realized_ratio(exact.optimum_value, matching.value)
    if audits:
        report["checks"] = run_audits(state, matching)
    report["wall_time"] = wall
    return report


def _replica(args):
    instance, alg, params = args
    _, matching = run_pipeline(instance, alg, params)
    return matching.value


def montecarlo(instance, alg, params, replicas, *, base_seed=0, jobs=1, verify=False, source=None):
    """Independent seeded replicas; replica ``i`` uses seed ``base_seed + i``."""
    if alg not in RANDOMIZED:
        raise InvalidP(f"montecarlo needs a randomized algorithm, not {alg}")
    if replicas < 1:
        raise InvalidParams("replicas must be positive")
    t0 = time.perf_counter()
    tasks = [
        (instance, alg, StreamParams(params.eps, params.d, params.p, params.gamma, base_seed + i))
        for i in range(replicas)
    ]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            values = list(pool.map(_replica, tasks, chunksize=max(1, replicas // (4 * jobs))))
    else:
        values = [_replica(t) for t in tasks]
    mean = statistics.fmean(values)
    std = statistics.stdev(values) if replicas > 1 else 0.0
    monotone = objective_for(instance, alg).monotone
    bound = approximation_bound(alg, instance.k, params, monotone)
    report = {
        "algorithm": alg,
        "instance": source,
        "replicas": replicas,
        "base_seed": base_seed,
        "params": {"eps": params.eps, "d": params.d, "p": params.p, "gamma": params.gamma},
        "mean": mean,
        "std": std,
        "stderr": std / math.sqrt(replicas),
        "min": min(values),
        "max": max(values),
        "bound": bound,
        "exact_value": None,
        "mean_ratio": None,
        "mean_within_bound": None,
    }
    if verify:
        exact = solve_exact(instance, alg)
        report["exact_value"] = exact.optimum_value
        report["mean_ratio"] = realized_ratio(exact.optimum_value, mean)
        if bound is not None:
            report["mean_within_bound"] = bound * mean >= exact.optimum_value * (1 - 1e-9)
    report["wall_time"] = time.perf_counter() - t0
    return report
