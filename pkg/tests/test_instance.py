import pytest
from hypothesis import given, settings, strategies as st

from sbmatch import (
    DuplicateCapacity,
    InvalidParams,
    MalformedLine,
    SelfLoop,
    UniformityMismatch,
    UnknownItem,
    UnknownVertex,
    generate_random,
    parse_instance,
    serialize_instance,
    with_coverage,
    with_cut,
    with_matroid,
)

from corpus import golden


def test_minimal_file():
    inst = parse_instance(b"p bmatching 2 1 2\nc 0 1\nc 1 1\ne 0 1 5.0\n")
    assert inst.n == 2 and inst.k == 2 and inst.m == 1
    assert inst.capacities == (1, 1)
    (e,) = inst.edges
    assert e.index == 1 and e.endpoints == (0, 1) and e.weight == 5.0
    assert inst.objective.kind == "linear" and inst.matroid is None


def test_golden_file():
    inst = golden()
    assert inst.capacities == (2, 1, 1, 1)
    assert [(e.index, e.endpoints, e.weight) for e in inst.edges] == [
        (1, (0, 1), 2.0),
        (2, (0, 2), 7.0),
        (3, (0, 3), 4.0),
    ]


def test_absent_capacity_defaults_to_one():
    inst = parse_instance("p bmatching 3 0 2\nc 2 4\n")
    assert inst.capacities == (1, 1, 4)


def test_comments_and_blank_lines():
    inst = parse_instance("# hdr\n\np bmatching 2 1 2  # trailing\n e 0 1 3 \n")
    assert inst.edges[0].weight == 3.0


@pytest.mark.parametrize(
    "text, exc",
    [
        ("p bmatching 2 1 2\ne 0 0 1.0\n", SelfLoop),
        ("p bmatching 2 1 2\ne 0 2 1.0\n", UnknownVertex),
        ("p bmatching 2 0 2\nc 0 1\nc 0 2\n", DuplicateCapacity),
        ("p bmatching 3 1 2\ne 0 1 2 1.0\n", UniformityMismatch),
        ("p bmatching 2 1 2\ne 0 1 1.0\nz 1\n", MalformedLine),
        ("e 0 1 1.0\n", MalformedLine),
        ("p bmatching 2 2 2\ne 0 1 1.0\n", MalformedLine),
        ("p bmatching 2 1 1\ne 0 1.0\n", MalformedLine),
        ("p bmatching 2 1 2\ne 0 1 -1\n", MalformedLine),
        ("p bmatching 2 1 2\ne 0 1 abc\n", MalformedLine),
        ("p bmatching 2 1 2\ne 0 1 1\ng 1 a\n", UnknownItem),
        ("p bmatching 2 1 2\ne 0 1 1\nx 1 2 3\n", MalformedLine),
        ("p bmatching 2 1 2\ne 0 1 1\npart 1 A\n", MalformedLine),
        ("p bmatching 2 1 2\ne 0 1 1\nm graphic 3\n", MalformedLine),
        ("", MalformedLine),
    ],
)
def test_rejections(text, exc):
    with pytest.raises(exc):
        parse_instance(text)


def test_selfloop_reports_ordinal():
    with pytest.raises(SelfLoop) as info:
        parse_instance("p bmatching 3 2 2\ne 0 1 1\ne 2 2 1\n")
    assert info.value.ordinal == 2


def test_malformed_reports_line():
    with pytest.raises(MalformedLine) as info:
        parse_instance("p bmatching 2 1 2\n\ne 0 1 1\nq\n")
    assert info.value.line_no == 4


def test_objective_and_matroid_lines():
    text = """p bmatching 3 3 2
e 0 1 0
e 1 2 0
e 0 2 0
i a 2.5
i b 1
g 1 a
g 2 a b
m partition
part 1 P
part 2 P
part 3 Q
pcap P 1
"""
    inst = parse_instance(text)
    assert inst.objective.kind == "coverage"
    assert inst.objective.covers == {1: frozenset("a"), 2: frozenset("ab")}
    assert inst.matroid.kind == "partition"
    assert inst.matroid.parts == {1: "P", 2: "P", 3: "Q"}
    assert inst.matroid.caps == {"P": 1}


def test_parallel_edges_kept():
    inst = parse_instance("p bmatching 2 2 2\ne 0 1 1\ne 1 0 2\n")
    assert inst.m == 2


def test_generate_empty():
    inst = generate_random(1, 5, 0, 2, 2, 10)
    assert inst.m == 0 and inst.n == 5


def test_generate_deterministic():
    assert generate_random(3, 8, 12, 2, 3, 20) == generate_random(3, 8, 12, 2, 3, 20)
    assert generate_random(3, 8, 12, 2, 3, 20) != generate_random(4, 8, 12, 2, 3, 20)


def test_generate_three_uniform_round_trip():
    inst = generate_random(7, 8, 12, 3, 2, 20)
    assert all(len(set(e.endpoints)) == 3 for e in inst.edges)
    assert all(1 <= e.weight <= 20 and e.weight == int(e.weight) for e in inst.edges)
    assert all(1 <= b <= 2 for b in inst.capacities)
    assert parse_instance(serialize_instance(inst)) == inst


@pytest.mark.parametrize("args", [(0, 1, 0, 2, 1, 1), (0, 5, -1, 2, 1, 1), (0, 5, 3, 2, 0, 1), (0, 5, 3, 1, 1, 1)])
def test_generate_invalid(args):
    with pytest.raises(InvalidParams):
        generate_random(*args)


@settings(max_examples=60, deadline=None)
@given(
    seed=st.integers(0, 10**6),
    n=st.integers(3, 9),
    m=st.integers(0, 12),
    k=st.integers(2, 3),
    extra=st.sampled_from(["none", "coverage", "cut"]),
    mat=st.sampled_from(["none", "uniform", "partition", "graphic"]),
)
def test_round_trip(seed, n, m, k, extra, mat):
    inst = generate_random(seed, n, m, k, 3, 50)
    if extra == "coverage":
        inst = with_coverage(inst, seed, 6)
    elif extra == "cut":
        inst = with_cut(inst, seed, 0.5)
    if mat != "none":
        inst = with_matroid(inst, seed, mat)
    text = serialize_instance(inst)
    assert parse_instance(text) == inst
    assert serialize_instance(parse_instance(text)) == text
