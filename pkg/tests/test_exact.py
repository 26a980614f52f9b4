import itertools
import random

import pytest

from sbmatch import (
    AssertionFailure,
    StreamParams,
    TooLarge,
    brute_force_bmatching,
    build_objective,
    exact_bmatching,
    exact_weighted_vs_gain,
    generate_random,
    linear_objective,
    parse_instance,
    stream_weighted,
)
from sbmatch.exact import is_feasible
from sbmatch.matroids import build_matroid

from corpus import DATA, golden, coverage_corpus, cut_corpus, matroid_corpus, weighted_corpus


def test_golden():
    inst = golden()
    res = exact_bmatching(inst, linear_objective(inst))
    assert res.optimum_value == 11 and res.optimum_set == (2, 3)


def test_empty_instance():
    inst = parse_instance((DATA / "empty.txt").read_bytes())
    res = exact_bmatching(inst, linear_objective(inst))
    assert res.optimum_set == () and res.optimum_value == 0 and res.explored == 1


def corpora():
    yield from ((i, linear_objective(i), None) for i in weighted_corpus(40, m_max=10))
    yield from ((i, build_objective(i), None) for i in coverage_corpus(20))
    yield from ((i, build_objective(i), None) for i in cut_corpus(20))
    yield from ((i, build_objective(i), build_matroid(i))
                for i in matroid_corpus(20, kinds=("partition", "uniform", "graphic")))


def test_pruned_equals_full_scan():
    count = 0
    for inst, f, m in corpora():
        a = exact_bmatching(inst, f, m)
        b = brute_force_bmatching(inst, f, m)
        assert a.optimum_set == b.optimum_set
        assert a.optimum_value == pytest.approx(b.optimum_value)
        count += 1
    assert count == 100


def test_optimum_is_locally_maximal():
    # dropping an optimum edge or adding a feasible one never improves beyond tolerance
    for inst, f, m in corpora():
        res = exact_bmatching(inst, f, m)
        opt = set(res.optimum_set)
        assert is_feasible(inst, opt, m)
        for e in opt:
            assert f.value(opt - {e}) <= res.optimum_value + 1e-9
        for e in (x.index for x in inst.edges):
            if e not in opt and is_feasible(inst, opt | {e}, m):
                assert f.value(opt | {e}) <= res.optimum_value + 1e-9


def test_tie_break_lexicographic():
    inst = parse_instance("p bmatching 2 3 2\ne 0 1 5\ne 0 1 5\ne 0 1 5\n")
    assert exact_bmatching(inst, linear_objective(inst)).optimum_set == (1,)


def test_too_large():
    inst = generate_random(0, 30, 23, 2, 2, 5)
    with pytest.raises(TooLarge):
        exact_bmatching(inst, linear_objective(inst))
    with pytest.raises(TooLarge):
        brute_force_bmatching(generate_random(0, 30, 17, 2, 2, 5), linear_objective(inst))


def test_weighted_vs_gain_golden():
    inst = golden()
    report = exact_weighted_vs_gain(inst, stream_weighted(inst))
    assert report["gain"] == 11 and report["optimum"] == 11 and report["gain_bound"] == 22
    assert report["vertices_checked"] == inst.n


def test_weighted_vs_gain_single_edge():
    inst = parse_instance("p bmatching 2 1 2\ne 0 1 4.5\n")
    report = exact_weighted_vs_gain(inst, stream_weighted(inst))
    assert report["gain"] == report["optimum"] == 4.5


def test_weighted_vs_gain_corpus():
    for inst in weighted_corpus(500):
        exact_weighted_vs_gain(inst, stream_weighted(inst))


def test_weighted_vs_gain_detects_bad_state():
    inst = golden()
    state = stream_weighted(inst)
    for el in state.stored:
        el.gain = 0.1
    with pytest.raises(AssertionFailure) as info:
        exact_weighted_vs_gain(inst, state)
    assert info.value.details["optimum_set"] == (2, 3)
