"""Per-owner queue sets over shared element records.

Each stored edge is one :class:`StoredElement`. It sits in exactly one queue
of every owner it belongs to: one per endpoint, plus the matroid owner when
the run is matroid-constrained. Queues are intrusive stacks. Every element
keeps, per owner, a ``below`` link (its predecessor) and an ``above`` link
(its successor), so an element can be spliced out of the middle of a queue.
"""

from __future__ import annotations

MATROID = "M"


class Slot:
    """Position of an element in the queue set of one owner."""

    __slots__ = ("owner", "queue", "reduced_weight", "below", "above")

    def __init__(self, owner, queue, reduced_weight, below=None):
        self.owner = owner
        self.queue = queue
        self.reduced_weight = reduced_weight
        self.below = below
        self.above = None


class StoredElement:
    __slots__ = ("edge", "gain", "value", "w_star", "slots", "alive", "erasable", "removed")

    def __init__(self, edge, gain, value=None, w_star=None):
        self.edge = edge
        self.gain = gain
        # w(e) or f(e|S) at arrival, and the per-owner minimum top weights
        self.value = value
        self.w_star = w_star or {}
        self.slots = {}
        self.alive = True
        self.erasable = False
        self.removed = False

    @property
    def index(self):
        return self.edge.index

    def reduced_weight(self, owner):
        return self.slots[owner].reduced_weight

    def below(self, owner):
        return self.slots[owner].below

    def __repr__(self):
        return f"<e{self.index} g={self.gain:g}>"


class QueueSet:
    """The queues of one owner (a vertex or the matroid)."""

    def __init__(self, owner, size):
        self.owner = owner
        self.tops = [None] * size
        self.lengths = [0] * size
        self.max_lengths = [0] * size

    def __len__(self):
        return len(self.tops)

    def weight(self, q):
        top = self.tops[q]
        return 0.0 if top is None else top.slots[self.owner].reduced_weight

    def min_top(self):
        """``(q, w)``: the lightest queue, smallest index on ties."""
        best_q, best_w = 0, self.weight(0) if self.tops else 0.0
        for q in range(1, len(self.tops)):
            w = self.weight(q)
            if w < best_w:
                best_q, best_w = q, w
        return best_q, best_w

    def push(self, q, el, reduced_weight):
        """Put ``el`` on top of queue ``q``; returns the element it covers."""
        prev = self.tops[q]
        slot = Slot(self.owner, q, reduced_weight, below=prev)
        el.slots[self.owner] = slot
        if prev is not None:
            prev.slots[self.owner].above = el
        self.tops[q] = el
        self.lengths[q] += 1
        if self.lengths[q] > self.max_lengths[q]:
            self.max_lengths[q] = self.lengths[q]
        return prev

    def chain(self, q):
        """Elements of queue ``q`` from the top down."""
        out = []
        c = self.tops[q]
        while c is not None:
            out.append(c)
            c = c.slots[self.owner].below
        return out

    def is_top(self, el):
        slot = el.slots.get(self.owner)
        return slot is not None and self.tops[slot.queue] is el

    def top_elements(self):
        return [t for t in self.tops if t is not None]

    def first_empty(self):
        for q, t in enumerate(self.tops):
            if t is None:
                return q
        return None

    def total_weight(self):
        return sum(self.weight(q) for q in range(len(self.tops)))


class Ledger:
    """All queue sets of a run together with the stored set ``S``.

    Elements marked erasable are removed lazily, the first time they are not
    the top of any of their queues.
    """

    def __init__(self, capacities, matroid_rank=None):
        self.queue_sets = {v: QueueSet(v, b) for v, b in enumerate(capacities)}
        if matroid_rank is not None:
            self.queue_sets[MATROID] = QueueSet(MATROID, matroid_rank)
        self.stored = {}
        self.removed = []

    def __getitem__(self, owner):
        return self.queue_sets[owner]

    def add(self, el):
        self.stored[el.index] = el

    def push(self, owner, q, el, reduced_weight):
        prev = self.queue_sets[owner].push(q, el, reduced_weight)
        if prev is not None and prev.erasable:
            self._collect(prev)
        return prev

    def is_top_anywhere(self, el):
        return any(self.queue_sets[o].is_top(el) for o in el.slots)

    def mark_erasable(self, owner, q, depth):
        """Mark the ``depth + 1``-th element from the top of queue ``q``.

        Returns the element if this call newly marked it, else None.
        """
        qs = self.queue_sets[owner]
        c = qs.tops[q]
        for _ in range(depth):
            if c is None:
                break
            c = c.slots[owner].below
        if c is None:
            raise ValueError(f"queue {owner}/{q} holds at most {depth} elements")
        if c.erasable:
            return None
        c.erasable = True
        self._collect(c)
        return c

    def _collect(self, el):
        if el.removed or self.is_top_anywhere(el):
            return
        for owner, slot in el.slots.items():
            below, above = slot.below, slot.above
            if below is not None:
                below.slots[owner].above = above
            if above is not None:
                above.slots[owner].below = below
            self.queue_sets[owner].lengths[slot.queue] -= 1
        el.removed = True
        del self.stored[el.index]
        self.removed.append(el.index)

    def rewire_to(self, keep, owners=None):
        """Drop every element outside ``keep`` (edge ordinals) from the chains.

        Only the queue sets of ``owners`` are rewired (default: all).
        """
        keep = set(keep)
        for owner in self.queue_sets if owners is None else owners:
            qs = self.queue_sets[owner]
            for q in range(len(qs)):
                kept = [el for el in qs.chain(q) if el.index in keep]
                for upper, lower in zip(kept, kept[1:] + [None]):
                    upper.slots[owner].below = lower
                    if lower is not None:
                        lower.slots[owner].above = upper
                if kept:
                    kept[0].slots[owner].above = None
                qs.tops[q] = kept[0] if kept else None
                qs.lengths[q] = len(kept)

    def vertex_owners(self):
        return [o for o in self.queue_sets if o != MATROID]
