"""Problem instances: edge streams, capacities, objective and matroid data.

Instances are read from a line-oriented text format::

    p bmatching <n> <m> <k>
    c <vertex> <capacity>
    e <v_1> ... <v_k> <weight>
    i <item-id> <item-weight>
    g <edge-ordinal> <item-id>...
    x <edge-ordinal-a> <edge-ordinal-b> <weight>
    m uniform <rank> | m partition | m graphic <aux-n>
    part <edge-ordinal> <part-id>
    pcap <part-id> <cap>
    aux <edge-ordinal> <u> <v>
    o linear|coverage|cut

The objective kind is inferred from the ``i``/``g``/``x`` lines; the optional
``o`` line states it explicitly (needed when that data is empty).
Edge ordinals are 1-based arrival indices; ``#`` starts a comment.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field, replace
from typing import Optional

from .errors import (
    DuplicateCapacity,
    InvalidParams,
    MalformedLine,
    SelfLoop,
    UniformityMismatch,
    UnknownItem,
    UnknownVertex,
)


@dataclass(frozen=True)
class HyperEdge:
    index: int
    endpoints: tuple
    weight: float = 0.0


@dataclass(frozen=True)
class ObjectiveSpec:
    """``kind`` is one of ``linear``, ``coverage`` or ``cut``."""

    kind: str = "linear"
    items: dict = field(default_factory=dict)  # item id -> weight
    covers: dict = field(default_factory=dict)  # edge ordinal -> frozenset of item ids
    interactions: dict = field(default_factory=dict)  # (a, b) with a < b -> weight


@dataclass(frozen=True)
class MatroidSpec:
    """``kind`` is one of ``uniform``, ``partition`` or ``graphic``."""

    kind: str
    rank: int = 0
    parts: dict = field(default_factory=dict)  # edge ordinal -> part id
    caps: dict = field(default_factory=dict)  # part id -> capacity
    aux_n: int = 0
    aux: dict = field(default_factory=dict)  # edge ordinal -> (u, v)


@dataclass(frozen=True)
class Instance:
    n: int
    k: int
    capacities: tuple
    edges: tuple
    objective: ObjectiveSpec = field(default_factory=ObjectiveSpec)
    matroid: Optional[MatroidSpec] = None

    @property
    def m(self):
        return len(self.edges)

    def capacity(self, v):
        return self.capacities[v]

    def edge(self, ordinal):
        return self.edges[ordinal - 1]

    def weights(self):
        return {e.index: e.weight for e in self.edges}


def _int(tok, line_no):
    try:
        return int(tok)
    except ValueError:
        raise MalformedLine(line_no, f"expected an integer, got {tok!r}") from None


def _float(tok, line_no):
    try:
        x = float(tok)
    except ValueError:
        raise MalformedLine(line_no, f"expected a number, got {tok!r}") from None
    if x != x or x in (float("inf"), float("-inf")):
        raise MalformedLine(line_no, "weights must be finite")
    return x


def parse_instance(text) -> Instance:
    """Parse an instance from ``str`` or ``bytes``."""
    if isinstance(text, (bytes, bytearray)):
        text = text.decode("utf-8")

    header = None
    caps = {}
    raw_edges = []  # (line_no, endpoints, weight)
    items = {}
    covers = {}
    interactions = {}
    matroid_kind = None
    matroid_args = {}
    parts = {}
    pcaps = {}
    aux = {}
    declared = None
    # objective/matroid references are validated once m is known
    ordinal_refs = []

    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tok = line.split()
        kind = tok[0]
        if header is None and kind != "p":
            raise MalformedLine(line_no, "the 'p' header must come first")

        if kind == "p":
            if header is not None:
                raise MalformedLine(line_no, "duplicate header")
            if len(tok) != 5 or tok[1] != "bmatching":
                raise MalformedLine(line_no, "expected 'p bmatching <n> <m> <k>'")
            n, m, k = (_int(t, line_no) for t in tok[2:])
            if n < 0 or m < 0:
                raise MalformedLine(line_no, "n and m must be non-negative")
            if k < 2:
                raise MalformedLine(line_no, "uniformity k must be at least 2")
            header = (n, m, k, line_no)
        elif kind == "c":
            if len(tok) != 3:
                raise MalformedLine(line_no, "expected 'c <vertex> <capacity>'")
            v, b = _int(tok[1], line_no), _int(tok[2], line_no)
            if not 0 <= v < header[0]:
                raise UnknownVertex(f"line {line_no}: vertex {v} outside [0, {header[0]})")
            if v in caps:
                raise DuplicateCapacity(f"line {line_no}: capacity of vertex {v} given twice")
            if b < 1:
                raise MalformedLine(line_no, "capacities must be positive")
            caps[v] = b
        elif kind == "e":
            if len(tok) < 3:
                raise MalformedLine(line_no, "expected 'e <v_1> ... <v_k> <weight>'")
            ordinal = len(raw_edges) + 1
            ends = tuple(_int(t, line_no) for t in tok[1:-1])
            w = _float(tok[-1], line_no)
            if w < 0:
                raise MalformedLine(line_no, "weights must be non-negative")
            if len(ends) != header[2]:
                raise UniformityMismatch(
                    f"line {line_no}: edge {ordinal} has {len(ends)} endpoints, expected {header[2]}"
                )
            if len(set(ends)) != len(ends):
                raise SelfLoop(ordinal)
            for v in ends:
                if not 0 <= v < header[0]:
                    raise UnknownVertex(f"line {line_no}: vertex {v} outside [0, {header[0]})")
            raw_edges.append((line_no, ends, w))
        elif kind == "i":
            if len(tok) != 3:
                raise MalformedLine(line_no, "expected 'i <item-id> <item-weight>'")
            w = _float(tok[2], line_no)
            if w < 0:
                raise MalformedLine(line_no, "item weights must be non-negative")
            if tok[1] in items:
                raise MalformedLine(line_no, f"item {tok[1]} declared twice")
            items[tok[1]] = w
        elif kind == "g":
            if len(tok) < 2:
                raise MalformedLine(line_no, "expected 'g <edge-ordinal> <item-id>...'")
            e = _int(tok[1], line_no)
            ordinal_refs.append((line_no, e))
            covers.setdefault(e, set()).update(tok[2:])
        elif kind == "x":
            if len(tok) != 4:
                raise MalformedLine(line_no, "expected 'x <a> <b> <weight>'")
            a, b = _int(tok[1], line_no), _int(tok[2], line_no)
            w = _float(tok[3], line_no)
            if a == b:
                raise MalformedLine(line_no, "interaction of an edge with itself")
            if w < 0:
                raise MalformedLine(line_no, "interaction weights must be non-negative")
            key = (min(a, b), max(a, b))
            if key in interactions:
                raise MalformedLine(line_no, f"interaction {key} given twice")
            ordinal_refs += [(line_no, a), (line_no, b)]
            interactions[key] = w
        elif kind == "m":
            if matroid_kind is not None:
                raise MalformedLine(line_no, "duplicate matroid line")
            if len(tok) < 2 or tok[1] not in ("uniform", "partition", "graphic"):
                raise MalformedLine(line_no, "expected 'm uniform|partition|graphic ...'")
            matroid_kind = tok[1]
            if matroid_kind == "partition":
                if len(tok) != 2:
                    raise MalformedLine(line_no, "expected 'm partition'")
            else:
                if len(tok) != 3:
                    raise MalformedLine(line_no, f"expected 'm {matroid_kind} <int>'")
                x = _int(tok[2], line_no)
                if x < 0:
                    raise MalformedLine(line_no, "matroid parameter must be non-negative")
                matroid_args["rank" if matroid_kind == "uniform" else "aux_n"] = x
        elif kind == "part":
            if len(tok) != 3:
                raise MalformedLine(line_no, "expected 'part <edge-ordinal> <part-id>'")
            e = _int(tok[1], line_no)
            if e in parts:
                raise MalformedLine(line_no, f"edge {e} assigned to two parts")
            ordinal_refs.append((line_no, e))
            parts[e] = tok[2]
        elif kind == "pcap":
            if len(tok) != 3:
                raise MalformedLine(line_no, "expected 'pcap <part-id> <cap>'")
            c = _int(tok[2], line_no)
            if c < 0:
                raise MalformedLine(line_no, "part capacities must be non-negative")
            if tok[1] in pcaps:
                raise MalformedLine(line_no, f"capacity of part {tok[1]} given twice")
            pcaps[tok[1]] = c
        elif kind == "aux":
            if len(tok) != 4:
                raise MalformedLine(line_no, "expected 'aux <edge-ordinal> <u> <v>'")
            e = _int(tok[1], line_no)
            if e in aux:
                raise MalformedLine(line_no, f"auxiliary edge of {e} given twice")
            ordinal_refs.append((line_no, e))
            aux[e] = (_int(tok[2], line_no), _int(tok[3], line_no))
        elif kind == "o":
            if len(tok) != 2 or tok[1] not in ("linear", "coverage", "cut"):
                raise MalformedLine(line_no, "expected 'o linear|coverage|cut'")
            if declared is not None:
                raise MalformedLine(line_no, "duplicate objective line")
            declared = tok[1]
        else:
            raise MalformedLine(line_no, f"unknown line kind {kind!r}")

    if header is None:
        raise MalformedLine(0, "missing 'p bmatching' header")
    n, m, k, header_line = header
    if len(raw_edges) != m:
        raise MalformedLine(header_line, f"header announces {m} edges, found {len(raw_edges)}")
    for line_no, e in ordinal_refs:
        if not 1 <= e <= m:
            raise MalformedLine(line_no, f"edge ordinal {e} outside [1, {m}]")

    inferred = "coverage" if items or covers else "cut" if interactions else None
    if declared is not None and inferred not in (None, declared):
        raise MalformedLine(header_line, f"objective declared {declared} but data is {inferred}")
    kind = declared or inferred or "linear"
    if kind == "coverage":
        if interactions:
            raise MalformedLine(header_line, "coverage and cut data in the same file")
        for e, its in covers.items():
            missing = sorted(set(its) - items.keys())
            if missing:
                raise UnknownItem(f"edge {e} covers undeclared items {missing}")
        objective = ObjectiveSpec(
            "coverage", items=items, covers={e: frozenset(s) for e, s in covers.items()}
        )
    elif kind == "cut":
        objective = ObjectiveSpec("cut", interactions=interactions)
    else:
        objective = ObjectiveSpec("linear")

    if matroid_kind is None:
        if parts or pcaps or aux:
            raise MalformedLine(header_line, "matroid data without an 'm' line")
        matroid = None
    elif matroid_kind == "uniform":
        matroid = MatroidSpec("uniform", rank=matroid_args["rank"])
    elif matroid_kind == "partition":
        matroid = MatroidSpec("partition", parts=parts, caps=pcaps)
    else:
        aux_n = matroid_args["aux_n"]
        for e, (u, v) in aux.items():
            if not (0 <= u < aux_n and 0 <= v < aux_n):
                raise UnknownVertex(f"auxiliary edge of {e} leaves [0, {aux_n})")
        if len(aux) != m:
            raise MalformedLine(header_line, "graphic matroid needs an 'aux' line per edge")
        matroid = MatroidSpec("graphic", aux_n=aux_n, aux=aux)

    edges = tuple(HyperEdge(t, ends, w) for t, (_, ends, w) in enumerate(raw_edges, start=1))
    capacities = tuple(caps.get(v, 1) for v in range(n))
    return Instance(n, k, capacities, edges, objective, matroid)


def _num(x):
    return repr(float(x))


def serialize_instance(inst: Instance) -> str:
    out = [f"p bmatching {inst.n} {inst.m} {inst.k}"]
    out += [f"c {v} {b}" for v, b in enumerate(inst.capacities) if b != 1]
    out += ["e " + " ".join(map(str, e.endpoints)) + " " + _num(e.weight) for e in inst.edges]
    obj = inst.objective
    if obj.kind != "linear" and not (obj.items or obj.covers or obj.interactions):
        out.append(f"o {obj.kind}")
    if obj.kind == "coverage":
        out += [f"i {item} {_num(w)}" for item, w in obj.items.items()]
        for e in sorted(obj.covers):
            out.append(" ".join(["g", str(e), *sorted(obj.covers[e])]))
    elif obj.kind == "cut":
        out += [f"x {a} {b} {_num(w)}" for (a, b), w in sorted(obj.interactions.items())]
    mat = inst.matroid
    if mat is not None:
        if mat.kind == "uniform":
            out.append(f"m uniform {mat.rank}")
        elif mat.kind == "partition":
            out.append("m partition")
            out += [f"part {e} {p}" for e, p in sorted(mat.parts.items())]
            out += [f"pcap {p} {c}" for p, c in sorted(mat.caps.items())]
        else:
            out.append(f"m graphic {mat.aux_n}")
            out += [f"aux {e} {u} {v}" for e, (u, v) in sorted(mat.aux.items())]
    return "\n".join(out) + "\n"


def generate_random(seed, n, m, k, b_max, w_max) -> Instance:
    """Random ``k``-uniform instance with a linear objective.

    Endpoints are drawn uniformly without replacement, weights are integers
    in ``[1, w_max]`` and capacities integers in ``[1, b_max]``.
    """
    if k < 2 or n < k or m < 0 or b_max < 1 or w_max < 1:
        raise InvalidParams(f"need k >= 2, n >= k, m >= 0, b_max >= 1, w_max >= 1 (got {locals()})")
    rng = random.Random(seed)
    capacities = tuple(rng.randint(1, b_max) for _ in range(n))
    edges = tuple(
        HyperEdge(t, tuple(rng.sample(range(n), k)), float(rng.randint(1, w_max)))
        for t in range(1, m + 1)
    )
    return Instance(n, k, capacities, edges)


def with_coverage(inst: Instance, seed, n_items, w_max=10, max_cover=3) -> Instance:
    """Attach a weighted-coverage objective; each edge covers 1..max_cover items."""
    if n_items < 1 or w_max < 1 or max_cover < 1:
        raise InvalidParams("coverage generator needs n_items, w_max, max_cover >= 1")
    rng = random.Random(seed)
    items = {f"t{j}": float(rng.randint(1, w_max)) for j in range(n_items)}
    names = list(items)
    covers = {
        e.index: frozenset(rng.sample(names, rng.randint(1, min(max_cover, n_items))))
        for e in inst.edges
    }
    return replace(inst, objective=ObjectiveSpec("coverage", items=items, covers=covers))


def with_cut(inst: Instance, seed, density=0.5, w_max=10) -> Instance:
    """Attach a cut objective over random edge-pair interactions."""
    if not 0 <= density <= 1 or w_max < 1:
        raise InvalidParams("cut generator needs density in [0, 1] and w_max >= 1")
    rng = random.Random(seed)
    interactions = {}
    for a in range(1, inst.m + 1):
        for b in range(a + 1, inst.m + 1):
            if rng.random() < density:
                interactions[(a, b)] = float(rng.randint(1, w_max))
    return replace(inst, objective=ObjectiveSpec("cut", interactions=interactions))


def with_matroid(inst: Instance, seed, kind, *, rank=None, n_parts=3, cap_max=2, aux_n=4) -> Instance:
    """Attach a random uniform, partition or graphic matroid."""
    rng = random.Random(seed)
    if kind == "uniform":
        r = rank if rank is not None else rng.randint(1, max(1, inst.m))
        spec = MatroidSpec("uniform", rank=r)
    elif kind == "partition":
        if n_parts < 1 or cap_max < 1:
            raise InvalidParams("partition generator needs n_parts, cap_max >= 1")
        parts = {e.index: f"P{rng.randrange(n_parts)}" for e in inst.edges}
        caps = {f"P{j}": rng.randint(1, cap_max) for j in range(n_parts)}
        spec = MatroidSpec("partition", parts=parts, caps=caps)
    elif kind == "graphic":
        if aux_n < 2:
            raise InvalidParams("graphic generator needs aux_n >= 2")
        aux = {e.index: tuple(rng.sample(range(aux_n), 2)) for e in inst.edges}
        spec = MatroidSpec("graphic", aux_n=aux_n, aux=aux)
    else:
        raise InvalidParams(f"unknown matroid kind {kind!r}")
    return replace(inst, matroid=spec)
