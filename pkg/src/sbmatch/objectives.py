"""Set-function oracles over edge ordinals and grow-only marginal sessions."""

from __future__ import annotations

from .errors import DoubleCommit, InvalidSpec, UnknownItem


class Objective:
    """A non-negative set function over edge ordinals.

    Subclasses implement :meth:`value`; :meth:`gain` may be overridden when
    a marginal can be computed without two full evaluations.
    """

    monotone = True

    def value(self, edges) -> float:
        raise NotImplementedError

    @property
    def f_empty(self):
        return self.value(())

    def gain(self, members, e):
        """``f(e | members)`` for ``e`` not in ``members``."""
        return self.value(set(members) | {e}) - self.value(members)


class LinearObjective(Objective):
    def __init__(self, weights):
        self.weights = dict(weights)

    def value(self, edges):
        return sum(self.weights[e] for e in edges)

    def gain(self, members, e):
        return self.weights[e]


class CoverageObjective(Objective):
    """Total weight of the items covered by at least one chosen edge."""

    def __init__(self, items, covers):
        for e, its in covers.items():
            missing = set(its) - items.keys()
            if missing:
                raise UnknownItem(f"edge {e} covers undeclared items {sorted(missing)}")
        if any(w < 0 for w in items.values()):
            raise InvalidSpec("item weights must be non-negative")
        self.items = dict(items)
        self.covers = {e: frozenset(s) for e, s in covers.items()}

    def covered(self, edges):
        out = set()
        for e in edges:
            out |= self.covers.get(e, frozenset())
        return out

    def value(self, edges):
        return sum(self.items[i] for i in self.covered(edges))

    def gain(self, members, e):
        seen = self.covered(members)
        return sum(self.items[i] for i in self.covers.get(e, ()) if i not in seen)


class CutObjective(Objective):
    """Weight of interactions with exactly one side in the chosen set.

    Non-negative and submodular, but not monotone.
    """

    monotone = False

    def __init__(self, interactions):
        if any(w < 0 for w in interactions.values()):
            raise InvalidSpec("interaction weights must be non-negative")
        self.interactions = {}
        self.neighbours = {}
        for (a, b), w in interactions.items():
            key = (min(a, b), max(a, b))
            self.interactions[key] = self.interactions.get(key, 0.0) + w
        for (a, b), w in self.interactions.items():
            self.neighbours.setdefault(a, {})[b] = w
            self.neighbours.setdefault(b, {})[a] = w

    def value(self, edges):
        chosen = set(edges)
        return sum(w for (a, b), w in self.interactions.items() if (a in chosen) != (b in chosen))

    def gain(self, members, e):
        out = 0.0
        for b, w in self.neighbours.get(e, {}).items():
            out += -w if b in members else w
        return out


def build_objective(instance) -> Objective:
    spec = instance.objective
    if spec.kind == "linear":
        return linear_objective(instance)
    if spec.kind == "coverage":
        return coverage_objective(spec.items, spec.covers)
    if spec.kind == "cut":
        return cut_objective(spec.interactions)
    raise InvalidSpec(f"unknown objective kind {spec.kind!r}")


def linear_objective(instance):
    return LinearObjective(instance.weights())


def coverage_objective(items, covers):
    return CoverageObjective(items, covers)


def cut_objective(interactions):
    return CutObjective(interactions)


class MarginalSession:
    """Marginal values against a committed set that only grows."""

    def __init__(self, oracle):
        self.oracle = oracle
        self.members = set()
        self.order = []
        self.current = oracle.f_empty

    def marginal(self, e):
        if e in self.members:
            return 0.0
        return self.oracle.gain(self.members, e)

    def commit(self, e):
        if e in self.members:
            raise DoubleCommit(f"edge {e} already committed")
        self.current += self.oracle.gain(self.members, e)
        self.members.add(e)
        self.order.append(e)

    def value(self):
        return self.current


def session(oracle):
    return MarginalSession(oracle)
