import random

import pytest

from sbmatch import StreamParams, audit, stream_weighted
from sbmatch.instance import HyperEdge
from sbmatch.ledger import Ledger, QueueSet, StoredElement

from corpus import golden, geometric_instance


def element(i, gain=1.0, ends=(0, 1)):
    return StoredElement(HyperEdge(i, ends, gain), gain)


def test_min_top_empty():
    assert QueueSet(0, 3).min_top() == (0, 0.0)


def test_min_top_golden():
    state = stream_weighted(golden(), StreamParams())
    qs = state.ledger[0]
    # after e1 and e2 the tops weigh 2 (e1's queue) and 7; e3 went onto e1's queue
    assert [el.index for el in qs.chain(0)] == [3, 1]
    assert [el.index for el in qs.chain(1)] == [2]
    rec = stream_weighted(golden(), StreamParams(), trace=True).trace[2]
    assert (rec.queues[0], rec.w_star[0]) == (0, 2.0)


def test_min_top_tie_smallest_index():
    qs = QueueSet(0, 2)
    qs.push(0, element(1, 3.0), 3.0)
    qs.push(1, element(2, 3.0), 3.0)
    assert qs.min_top() == (0, 3.0)


def test_push_onto_empty():
    qs = QueueSet(0, 1)
    el = element(1)
    assert qs.push(0, el, 1.0) is None
    assert qs.tops[0] is el and el.below(0) is None and qs.lengths[0] == 1


def test_push_stack_order():
    qs = QueueSet(0, 1)
    a, b = element(2), element(1)
    qs.push(0, b, 1.0)
    qs.push(0, a, 2.0)
    assert qs.tops[0] is a and a.below(0) is b and b.slots[0].above is a
    assert qs.lengths[0] == 2 and qs.max_lengths[0] == 2


def test_mark_erasable_counts_from_top():
    ledger = Ledger([1, 1])
    a, b, c, d = (element(i) for i in range(1, 5))
    for el in (a, b, c, d):
        ledger.add(el)
        ledger.push(0, 0, el, el.index)
    assert ledger.mark_erasable(0, 0, 2) is b
    assert b.erasable and not (a.erasable or c.erasable or d.erasable)


def test_mark_erasable_needs_depth():
    ledger = Ledger([1])
    el = element(1, ends=(0,))
    ledger.add(el)
    ledger.push(0, 0, el, 1.0)
    with pytest.raises(ValueError):
        ledger.mark_erasable(0, 0, 1)


def test_erasable_top_elsewhere_is_kept_until_covered():
    ledger = Ledger([1, 1, 1])
    a = element(1, ends=(0, 1))
    ledger.add(a)
    ledger.push(0, 0, a, 1.0)
    ledger.push(1, 0, a, 1.0)
    b = element(2, ends=(0, 2))
    ledger.add(b)
    ledger.push(0, 0, b, 2.0)
    ledger.push(2, 0, b, 1.0)

    assert ledger.mark_erasable(0, 0, 1) is a
    # still the top of vertex 1's queue
    assert not a.removed and 1 in ledger.stored

    c = element(3, ends=(1, 2))
    ledger.add(c)
    ledger.push(1, 0, c, 2.0)
    assert a.removed and 1 not in ledger.stored
    assert b.below(0) is None and ledger[0].lengths[0] == 1
    assert ledger[1].chain(0) == [c] and ledger.removed == [1]


def test_interior_removal_splices_links():
    ledger = Ledger([1, 1, 1, 1])
    a, b, c = element(1, ends=(0, 1)), element(2, ends=(0, 2)), element(3, ends=(0, 3))
    for el in (a, b, c):
        ledger.add(el)
        ledger.push(0, 0, el, el.index)
    # b is covered at vertex 0 and also top at vertex 2
    ledger.push(2, 0, b, 1.0)
    ledger.mark_erasable(0, 0, 1)
    assert not b.removed
    d = element(4, ends=(2, 3))
    ledger.add(d)
    ledger.push(2, 0, d, 5.0)
    assert b.removed
    assert c.below(0) is a and a.slots[0].above is c
    assert [el.index for el in ledger[0].chain(0)] == [3, 1]


def test_eviction_keeps_surviving_prefix_sums_dominant():
    # replay with and without eviction: same insertions, and reduced weights
    # of survivors stay >= the sums over the shortened chains
    removed = 0
    for seed in range(20):
        inst = geometric_instance(seed)
        plain = stream_weighted(inst, StreamParams(eps=0.25))
        lazy = stream_weighted(inst, StreamParams(eps=0.25, d=1))
        assert plain.inserted == lazy.inserted
        assert audit.check_prefix_gains_lower(lazy) == []
        assert audit.check_chains(lazy) == []
        removed += len(lazy.ledger.removed)
    assert removed > 0


def test_rewire_keep_all_is_noop():
    ledger = Ledger([1, 1])
    els = [element(i) for i in (1, 2, 3)]
    for el in els:
        ledger.add(el)
        ledger.push(0, 0, el, el.index)
    ledger.rewire_to({1, 2, 3})
    assert ledger[0].chain(0) == els[::-1]


def test_rewire_single_skip():
    ledger = Ledger([1, 1])
    a, b, c = (element(i) for i in (1, 2, 3))
    for el in (a, b, c):
        ledger.add(el)
        ledger.push(0, 0, el, el.index)
    ledger.rewire_to({1, 3}, owners=[0])
    assert ledger[0].chain(0) == [c, a]
    assert c.below(0) is a and a.slots[0].above is c and ledger[0].lengths[0] == 2


def test_rewire_pops_tops_outside_keep():
    ledger = Ledger([1, 1])
    a, b = element(1), element(2)
    for el in (a, b):
        ledger.add(el)
        ledger.push(0, 0, el, el.index)
    ledger.rewire_to({1}, owners=[0])
    assert ledger[0].tops[0] is a and a.slots[0].above is None
    ledger.rewire_to(set(), owners=[0])
    assert ledger[0].tops[0] is None and ledger[0].lengths[0] == 0


def test_rewire_random_chains_only_visit_keep():
    rng = random.Random(5)
    for trial in range(50):
        ledger = Ledger([3, 2, 2, 1])
        for i in range(1, 30):
            ends = tuple(rng.sample(range(4), 2))
            el = element(i, ends=ends)
            ledger.add(el)
            for u in ends:
                q, w = ledger[u].min_top()
                ledger.push(u, q, el, w + 1)
        keep = {i for i in range(1, 30) if rng.random() < 0.4}
        ledger.rewire_to(keep)
        for owner, qs in ledger.queue_sets.items():
            for q in range(len(qs)):
                chain = qs.chain(q)
                assert all(el.index in keep for el in chain)
                assert len(chain) == qs.lengths[q]
                # brute force: the kept members of the original queue, in order
                expected = sorted(
                    (el.index for el in ledger.stored.values() if owner in el.slots
                     and el.slots[owner].queue == q and el.index in keep),
                    reverse=True,
                )
                assert [el.index for el in chain] == expected
