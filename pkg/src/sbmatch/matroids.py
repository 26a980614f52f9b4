"""Matroid oracles over edge ordinals, circuits and max-weight bases."""

from __future__ import annotations

from collections import Counter

from .errors import DependentInput, InvalidSpec


class Matroid:
    rank = 0

    def is_independent(self, edges) -> bool:
        raise NotImplementedError

    def find_circuit(self, independent, e):
        return find_circuit(self, independent, e)


class UniformMatroid(Matroid):
    def __init__(self, rank):
        if rank < 0:
            raise InvalidSpec("uniform matroid rank must be non-negative")
        self.rank = rank

    def is_independent(self, edges):
        return len(set(edges)) <= self.rank


class PartitionMatroid(Matroid):
    """Edges without a part are unconstrained; parts without a cap get cap 1."""

    def __init__(self, parts, caps, ground=None):
        if any(c < 0 for c in caps.values()):
            raise InvalidSpec("part capacities must be non-negative")
        self.parts = dict(parts)
        self.caps = dict(caps)
        ground = set(ground) if ground is not None else set(self.parts)
        sizes = Counter(self.parts[e] for e in ground if e in self.parts)
        free = sum(1 for e in ground if e not in self.parts)
        self.rank = free + sum(min(self.cap(p), s) for p, s in sizes.items())

    def cap(self, part):
        return self.caps.get(part, 1)

    def is_independent(self, edges):
        used = Counter(self.parts[e] for e in set(edges) if e in self.parts)
        return all(c <= self.cap(p) for p, c in used.items())

    def find_circuit(self, independent, e):
        if not self.is_independent(independent):
            raise DependentInput("circuit search needs an independent set")
        if e not in self.parts:
            return None
        p = self.parts[e]
        same = [x for x in independent if x != e and self.parts.get(x) == p]
        if len(same) < self.cap(p):
            return None
        return frozenset(same) | {e}


def _find(parent, x):
    while parent[x] != x:
        parent[x] = parent[parent[x]]
        x = parent[x]
    return x


class GraphicMatroid(Matroid):
    """Cycle matroid of an auxiliary multigraph; ``aux`` maps edge -> (u, v)."""

    def __init__(self, aux, aux_n):
        for e, (u, v) in aux.items():
            if not (0 <= u < aux_n and 0 <= v < aux_n):
                raise InvalidSpec(f"auxiliary edge of {e} leaves [0, {aux_n})")
        self.aux = dict(aux)
        self.aux_n = aux_n
        parent = list(range(aux_n))
        for u, v in self.aux.values():
            parent[_find(parent, u)] = _find(parent, v)
        components = len({_find(parent, x) for x in range(aux_n)})
        self.rank = aux_n - components

    def is_independent(self, edges):
        parent = list(range(self.aux_n))
        for e in set(edges):
            u, v = self.aux[e]
            ru, rv = _find(parent, u), _find(parent, v)
            if ru == rv:
                return False
            parent[ru] = rv
        return True

    def find_circuit(self, independent, e):
        if not self.is_independent(independent):
            raise DependentInput("circuit search needs an independent set")
        u, v = self.aux[e]
        if u == v:
            return frozenset({e})
        adj = {}
        for x in independent:
            if x == e:
                continue
            a, b = self.aux[x]
            adj.setdefault(a, []).append((b, x))
            adj.setdefault(b, []).append((a, x))
        # forest, so the u-v path is unique if it exists
        back = {u: None}
        stack = [u]
        while stack:
            a = stack.pop()
            for b, x in adj.get(a, ()):
                if b not in back:
                    back[b] = (a, x)
                    stack.append(b)
        if v not in back:
            return None
        path = {e}
        node = v
        while back[node] is not None:
            node, x = back[node]
            path.add(x)
        return frozenset(path)


def uniform_matroid(r):
    return UniformMatroid(r)


def partition_matroid(parts, caps, ground=None):
    return PartitionMatroid(parts, caps, ground)


def graphic_matroid(aux_edges, aux_n):
    return GraphicMatroid(aux_edges, aux_n)


def build_matroid(instance):
    spec = instance.matroid
    if spec is None:
        return None
    if spec.kind == "uniform":
        return uniform_matroid(spec.rank)
    if spec.kind == "partition":
        return partition_matroid(spec.parts, spec.caps, ground=[e.index for e in instance.edges])
    if spec.kind == "graphic":
        return graphic_matroid(spec.aux, spec.aux_n)
    raise InvalidSpec(f"unknown matroid kind {spec.kind!r}")


def find_circuit(m, independent, e):
    """The unique circuit of ``independent + e``, or None if that set is independent.

    Uses one independence query per element of ``independent``: ``x`` lies on
    the circuit iff removing it restores independence.
    """
    base = frozenset(independent) - {e}
    if not m.is_independent(base):
        raise DependentInput("circuit search needs an independent set")
    whole = base | {e}
    if m.is_independent(whole):
        return None
    return frozenset(x for x in base if m.is_independent(whole - {x})) | {e}


def max_weight_base(m, weights, universe):
    """Matroid greedy by descending weight; returns ``(base, total)``.

    Ties are broken by element ordinal so the result is deterministic.
    """
    base = set()
    for e in sorted(universe, key=lambda x: (-weights[x], x)):
        if m.is_independent(base | {e}):
            base.add(e)
    return frozenset(base), sum(weights[e] for e in base)
