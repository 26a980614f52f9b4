"""Reverse-arrival greedy over the stored set, guided by the queue chains."""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import NotFinalized


@dataclass
class Matching:
    edges: tuple  # ordinals, ascending
    value: float
    selection_order: tuple = ()
    # selected ordinal -> ordinals its chain walks switched off (itself excluded)
    provenance: dict = field(default_factory=dict)


def candidates(state):
    if state.mode == "matroid":
        if state.finalized is None:
            raise NotFinalized("run finalize_topset before building the matching")
        return list(state.finalized)
    return state.stored


def build(state) -> Matching:
    pool = candidates(state)
    for el in pool:
        el.alive = True
    chosen = []
    provenance = {}
    for el in reversed(pool):
        if not el.alive:
            continue
        chosen.append(el.index)
        marked = set()
        for u in el.edge.endpoints:
            c = el
            while c is not None:
                c.alive = False
                marked.add(c.index)
                c = c.slots[u].below
        marked.discard(el.index)
        provenance[el.index] = frozenset(marked)
    edges = tuple(sorted(chosen))
    return Matching(edges, state.objective.value(edges), tuple(chosen), provenance)
