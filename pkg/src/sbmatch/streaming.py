"""Single-pass streaming phases that fill the queue ledger.

One engine covers all variants:

* weighted: store ``e`` iff ``w(e) > (1+eps) * sum_u w*_u(e)``; ``eps = 0`` is
  the exact local-ratio rule, ``d = 1`` enables lazy eviction of deep
  queue elements;
* submodular: ``w(e)`` becomes the marginal ``f(e | S)`` and a stored
  candidate survives a coin of bias ``p``;
* matroid: an extra matroid queue set whose tops always form a max-weight
  base under the reduced weights, with the matroid term scaled by ``gamma``
  in the threshold only.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from typing import Optional

from .errors import InvalidP, InvalidParams, InvalidSpec
from .ledger import MATROID, Ledger, StoredElement
from .objectives import linear_objective, session

_PTOL = 1e-12


def eviction_depth(eps):
    """Longest queue kept before marking: ``ceil(1 + log_{1+eps}(1/eps^2))``."""
    return math.ceil(1 + 2 * math.log(1 / eps) / math.log1p(eps))


@dataclass
class StreamParams:
    eps: float = 0.0
    d: int = 0
    p: float = 1.0
    gamma: float = 2.0
    seed: int = 0
    beta: Optional[int] = None  # None: derived from eps when d == 1

    @property
    def alpha(self):
        return 1.0 + self.eps

    @property
    def depth(self):
        if self.beta is not None:
            return self.beta
        return eviction_depth(self.eps) if self.d else None


@dataclass
class Arrival:
    """What happened to one edge of the stream (kept only when tracing)."""

    index: int
    w_star: dict
    queues: dict
    value: float
    threshold: float
    passed: bool
    coin: Optional[bool] = None
    stored: bool = False
    gain: float = 0.0
    circuit: Optional[frozenset] = None
    matroid_top: Optional[frozenset] = None


@dataclass
class Eviction:
    evictor: int
    evicted: int
    evictor_gain: float
    evicted_gain: float


@dataclass
class StreamState:
    instance: object
    mode: str
    params: StreamParams
    ledger: Ledger
    objective: object
    matroid: object = None
    rng: Optional[random.Random] = None
    session: object = None
    inserted: list = field(default_factory=list)
    peak_stored: int = 0
    gain_inserted: float = 0.0
    oracle_calls: int = 0
    coin_draws: int = 0
    min_positive_marginal: Optional[float] = None
    max_positive_marginal: Optional[float] = None
    evictions: list = field(default_factory=list)
    trace: Optional[list] = None
    finalized: Optional[list] = None
    gain_before_finalize: Optional[float] = None

    @property
    def stored(self):
        """Current ``S`` in arrival order."""
        return list(self.ledger.stored.values())

    @property
    def gain_total(self):
        """``g(S)`` over the current stored set."""
        return sum(el.gain for el in self.ledger.stored.values())

    def queue_max_lengths(self):
        return {
            (owner, q): n
            for owner, qs in self.ledger.queue_sets.items()
            for q, n in enumerate(qs.max_lengths)
        }

    def marginal_ratio(self):
        if not self.min_positive_marginal:
            return None
        return self.max_positive_marginal / self.min_positive_marginal


def _check_p(p, lo, hi, what):
    if not 0 < p <= 1:
        raise InvalidP(f"p must lie in (0, 1], got {p}")
    if p == 1:
        return
    if not (lo - _PTOL <= p <= hi + _PTOL):
        raise InvalidP(f"{what}: p must lie in [{lo:.6g}, {hi:.6g}] or equal 1, got {p}")


def _check_common(params):
    if params.eps < 0:
        raise InvalidParams(f"eps must be non-negative, got {params.eps}")
    if params.d not in (0, 1):
        raise InvalidParams(f"d must be 0 or 1, got {params.d}")
    if params.d == 1:
        if not 0 < params.eps <= 0.25:
            raise InvalidParams("eviction (d = 1) needs 0 < eps <= 1/4")
        if params.depth < 1:
            raise InvalidParams("eviction depth must be at least 1")


def _new_state(instance, mode, params, objective, matroid, trace):
    ledger = Ledger(instance.capacities, matroid.rank if matroid is not None else None)
    return StreamState(
        instance=instance,
        mode=mode,
        params=params,
        ledger=ledger,
        objective=objective,
        matroid=matroid,
        rng=random.Random(params.seed),
        session=session(objective) if mode != "weighted" else None,
        trace=[] if trace else None,
    )


def _matroid_slot(state, e):
    """``(w*_M, queue, circuit)`` for arriving edge ``e``; queue None for a loop."""
    qs = state.ledger[MATROID]
    top = {el.index: (q, el) for q, el in enumerate(qs.tops) if el is not None}
    circuit = state.matroid.find_circuit(frozenset(top), e)
    if circuit is None:
        return 0.0, qs.first_empty(), None
    rest = circuit - {e}
    if not rest:
        return None, None, circuit
    w_m = min(top[x][1].reduced_weight(MATROID) for x in rest)
    q = min(top[x][0] for x in rest if top[x][1].reduced_weight(MATROID) == w_m)
    return w_m, q, circuit


def _arrive(state, edge):
    ledger = state.ledger
    params = state.params
    e = edge.index

    w_star, queues = {}, {}
    for u in edge.endpoints:
        queues[u], w_star[u] = ledger[u].min_top()
    base = sum(w_star.values())

    w_m, circuit = 0.0, None
    if state.matroid is not None:
        w_m, q_m, circuit = _matroid_slot(state, e)
        if q_m is None:
            # a loop of the matroid can never be part of a feasible solution
            return Arrival(e, w_star, queues, 0.0, math.inf, False, circuit=circuit)
        w_star[MATROID], queues[MATROID] = w_m, q_m

    if state.session is None:
        value = edge.weight
    else:
        value = state.session.marginal(e)
        state.oracle_calls += 1
    if value > 0:
        if state.min_positive_marginal is None or value < state.min_positive_marginal:
            state.min_positive_marginal = value
        if state.max_positive_marginal is None or value > state.max_positive_marginal:
            state.max_positive_marginal = value

    threshold = params.alpha * (base + params.gamma * w_m)
    rec = Arrival(e, w_star, queues, value, threshold, value > threshold, circuit=circuit)
    if not rec.passed:
        return rec
    if params.p < 1:
        state.coin_draws += 1
        rec.coin = state.rng.random() < params.p
        if not rec.coin:
            return rec

    gain = value - base - w_m
    el = StoredElement(edge, gain, value, dict(w_star))
    ledger.add(el)
    depth = params.depth
    for u in edge.endpoints:
        ledger.push(u, queues[u], el, w_star[u] + gain)
        if params.d and ledger[u].lengths[queues[u]] > depth:
            victim = ledger.mark_erasable(u, queues[u], depth)
            if victim is not None:
                state.evictions.append(Eviction(e, victim.index, gain, victim.gain))
    if state.matroid is not None:
        ledger.push(MATROID, queues[MATROID], el, w_m + gain)
    if state.session is not None:
        state.session.commit(e)

    state.inserted.append(e)
    state.gain_inserted += gain
    state.peak_stored = max(state.peak_stored, len(ledger.stored))
    rec.stored, rec.gain = True, gain
    return rec


def _run(state, observer):
    for edge in state.instance.edges:
        rec = _arrive(state, edge)
        if state.matroid is not None:
            rec.matroid_top = frozenset(el.index for el in state.ledger[MATROID].top_elements())
        if state.trace is not None:
            state.trace.append(rec)
        if observer is not None:
            observer(state, rec)
    return state


def stream_weighted(instance, params=None, *, trace=False, observer=None) -> StreamState:
    """Weighted streaming phase; ``eps = 0, d = 0`` is the exact rule."""
    params = params or StreamParams()
    _check_common(params)
    if params.p != 1:
        raise InvalidP("the weighted phase is deterministic; p must be 1")
    state = _new_state(instance, "weighted", params, linear_objective(instance), None, trace)
    return _run(state, observer)


def stream_submodular(instance, oracle, params=None, *, trace=False, observer=None) -> StreamState:
    params = params or StreamParams()
    _check_common(params)
    _check_p(params.p, 1 / (3 + 2 * params.eps), 0.5, "submodular phase")
    state = _new_state(instance, "submodular", params, oracle, None, trace)
    return _run(state, observer)


def stream_matroid(instance, oracle, matroid, params=None, *, trace=False, observer=None) -> StreamState:
    params = params or StreamParams(eps=1.0, gamma=2.0)
    _check_common(params)
    if not params.gamma > 1:
        raise InvalidParams(f"gamma must exceed 1, got {params.gamma}")
    if matroid.rank < 1:
        raise InvalidSpec("matroid rank must be at least 1")
    kg = instance.k + params.gamma
    _check_p(params.p, 1 / (1 + kg * params.alpha), 1 / kg, "matroid phase")
    state = _new_state(instance, "matroid", params, oracle, matroid, trace)
    return _run(state, observer)


def finalize_topset(state) -> frozenset:
    """Keep only the matroid-queue tops and rewire the vertex chains to them."""
    if state.mode != "matroid":
        raise InvalidParams("finalize_topset applies to matroid runs only")
    if state.finalized is not None:
        return frozenset(el.index for el in state.finalized)
    tops = state.ledger[MATROID].top_elements()
    keep = frozenset(el.index for el in tops)
    state.gain_before_finalize = state.gain_total
    state.ledger.rewire_to(keep, owners=state.ledger.vertex_owners())
    state.finalized = sorted(tops, key=lambda el: el.index)
    assert state.matroid.is_independent(keep)
    return keep
