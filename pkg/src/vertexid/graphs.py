"""Partition functions of directed trivalent graphs.

Each vertex node has three half-edge slots in anticlockwise cyclic order and
a starting slot. Each edge either joins two slots (internal; carries a loop
variable z_e and a summed partition) or leaves one slot open (external;
carries the empty partition). The graph function is

    Z = sum over internal-edge partition assignments of
        prod_e z_e^{|p_e|} * prod_v C(triple_v)

where a vertex's triple is read anticlockwise from its starting slot: an
incoming edge contributes its partition, an outgoing edge the transpose.
Cyclic symmetry of the vertex makes the starting slots immaterial, which is
exactly what `rotate_start` exercises.

Per-edge summation bounds come from the z-windows: a partition of size n on
edge e contributes z_e^n, so sizes beyond the window cannot matter.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from itertools import product as iproduct
from typing import Optional

from .partitions import Partition, empty, partitions_up_to
from .parampoly import RING_Q
from .series import MultiSeries, TruncationSpec, first_mismatch
from .vertex import vertex, vertex_valuation_bound

EXTERNAL = "external"


class GraphError(ValueError):
    pass


@dataclass(frozen=True)
class VertexNode:
    slots: tuple[str, str, str]
    start: int = 0

    def __post_init__(self):
        if len(self.slots) != 3:
            raise GraphError(f"vertex needs exactly three slots, got {self.slots}")
        if self.start not in (0, 1, 2):
            raise GraphError(f"start slot must be 0..2, got {self.start}")


@dataclass(frozen=True)
class Edge:
    tail: str
    head: Optional[str]  # None marks an external edge
    z_index: Optional[int] = None

    @property
    def external(self) -> bool:
        return self.head is None


@dataclass(frozen=True)
class Graph:
    vertices: tuple[VertexNode, ...]
    edges: tuple[Edge, ...]

    def __post_init__(self):
        bound: dict[str, int] = {}
        for e in self.edges:
            ends = [e.tail] if e.external else [e.tail, e.head]
            for s in ends:
                bound[s] = bound.get(s, 0) + 1
            if not e.external and (e.z_index is None or not 1 <= e.z_index <= 4):
                raise GraphError(f"internal edge {e} needs z_index in 1..4")
        slots = [s for v in self.vertices for s in v.slots]
        if len(set(slots)) != len(slots):
            raise GraphError("duplicate slot ids")
        for s in slots:
            if bound.get(s, 0) != 1:
                raise GraphError(f"slot {s!r} must be bound exactly once, found {bound.get(s, 0)}")
        for s in bound:
            if s not in slots:
                raise GraphError(f"edge references unknown slot {s!r}")

    @property
    def internal_edges(self) -> tuple[Edge, ...]:
        return tuple(e for e in self.edges if not e.external)

    def max_z_index(self) -> int:
        return max((e.z_index for e in self.internal_edges), default=0)

    # -- JSON schema ---------------------------------------------------------
    def to_json(self) -> dict:
        return {
            "vertices": [{"slots": list(v.slots), "start": v.start} for v in self.vertices],
            "edges": [
                {
                    "tail": e.tail,
                    "head": EXTERNAL if e.external else e.head,
                    **({} if e.z_index is None else {"z_index": e.z_index}),
                }
                for e in self.edges
            ],
        }

    @classmethod
    def from_json(cls, data: dict) -> "Graph":
        try:
            vertices = tuple(
                VertexNode(tuple(v["slots"]), int(v.get("start", 0))) for v in data["vertices"]
            )
            edges = []
            for e in data["edges"]:
                head = e["head"]
                edges.append(
                    Edge(
                        tail=e["tail"],
                        head=None if head == EXTERNAL else head,
                        z_index=e.get("z_index"),
                    )
                )
        except (KeyError, TypeError) as exc:
            raise GraphError(f"malformed graph JSON near {exc!r}") from exc
        return cls(vertices, tuple(edges))

    @classmethod
    def load(cls, path: str) -> "Graph":
        with open(path, "r", encoding="utf-8") as fh:
            try:
                data = json.load(fh)
            except json.JSONDecodeError as exc:
                raise GraphError(f"{path}: invalid JSON at line {exc.lineno} col {exc.colno}") from exc
        return cls.from_json(data)


def rotate_start(g: Graph, vertex_index: int, steps: int) -> Graph:
    if not 0 <= vertex_index < len(g.vertices):
        raise GraphError(f"no vertex {vertex_index}")
    v = g.vertices[vertex_index]
    rotated = replace(v, start=(v.start + steps) % 3)
    return Graph(g.vertices[:vertex_index] + (rotated,) + g.vertices[vertex_index + 1 :], g.edges)


def _vertex_triple(v: VertexNode, assignment: dict[str, tuple[Partition, bool]]) -> tuple[Partition, Partition, Partition]:
    triple = []
    for k in range(3):
        slot = v.slots[(v.start + k) % 3]
        entry = assignment.get(slot)
        if entry is None:
            triple.append(empty())
        else:
            p, incoming = entry
            triple.append(p if incoming else p.transpose())
    return tuple(triple)


def evaluate(g: Graph, spec: TruncationSpec) -> MultiSeries:
    """Sum the graph function over internal-edge partition assignments."""
    internal = g.internal_edges
    if internal and spec.nz < g.max_z_index():
        raise GraphError(
            f"graph uses z{g.max_z_index()} but the window has {spec.nz} z-variables"
        )

    caps = []
    for e in internal:
        lo, hi = spec.z_windows[e.z_index - 1]
        caps.append(max(hi, 0))

    total = MultiSeries.zero(spec, RING_Q)
    for parts in iproduct(*(partitions_up_to(c) for c in caps)):
        z_exps = [0] * spec.nz
        for e, p in zip(internal, parts):
            z_exps[e.z_index - 1] += p.size
        if not spec.contains((0, *z_exps)):
            continue

        assignment: dict[str, tuple[Partition, bool]] = {}
        for e, p in zip(internal, parts):
            assignment[e.head] = (p, True)
            assignment[e.tail] = (p, False)

        triples = [_vertex_triple(v, assignment) for v in g.vertices]
        bounds = [vertex_valuation_bound(*t) for t in triples]
        neg_sum = sum(min(0, b) for b in bounds)
        padded = spec.with_u(min(spec.u_lo, neg_sum), spec.u_hi - neg_sum)

        term = MultiSeries.one(padded, RING_Q)
        for t in triples:
            term = term * vertex(t[0], t[1], t[2], padded)
            if term.is_zero():
                break
        term = term.shift(0, tuple(z_exps))
        total = total + term.restrict(spec)
    return total


def check_rotations(g: Graph, spec: TruncationSpec):
    """Start-slot invariance: evaluate all single-vertex rotations.

    Returns (ok, label, mismatch) where label names the first failing
    rotation.
    """
    base = evaluate(g, spec)
    for idx in range(len(g.vertices)):
        for steps in (1, 2):
            rotated = evaluate(rotate_start(g, idx, steps), spec)
            diff = first_mismatch(base, rotated)
            if diff is not None:
                return False, f"vertex {idx} rotated by {steps}", diff
    return True, None, None


# -- built-in graphs ---------------------------------------------------------

def one_vertex_graph() -> Graph:
    """Two trivalent nodes joined by a single z1 edge, four external legs."""
    return Graph(
        vertices=(
            VertexNode(("a_ext1", "a_ext2", "a_in")),
            VertexNode(("b_ext1", "b_ext2", "b_in")),
        ),
        edges=(
            Edge("a_ext1", None),
            Edge("a_ext2", None),
            Edge("b_ext1", None),
            Edge("b_ext2", None),
            Edge(tail="b_in", head="a_in", z_index=1),
        ),
    )


def two_loop_graph() -> Graph:
    """Two nodes joined by two internal edges (z1, z2), two external legs."""
    return Graph(
        vertices=(
            VertexNode(("a_ext", "a_sig", "a_tau")),
            VertexNode(("b_ext", "b_sig", "b_tau")),
        ),
        edges=(
            Edge("a_ext", None),
            Edge("b_ext", None),
            Edge(tail="b_sig", head="a_sig", z_index=1),
            Edge(tail="a_tau", head="b_tau", z_index=2),
        ),
    )


def four_loop_graph() -> Graph:
    """Four nodes in a cycle, four internal edges z1..z4, four external legs."""
    return Graph(
        vertices=(
            VertexNode(("v1_sig", "v1_tau", "v1_ext")),
            VertexNode(("v2_sig", "v2_nu", "v2_ext")),
            VertexNode(("v3_lam", "v3_nu", "v3_ext")),
            VertexNode(("v4_lam", "v4_tau", "v4_ext")),
        ),
        edges=(
            Edge("v1_ext", None),
            Edge("v2_ext", None),
            Edge("v3_ext", None),
            Edge("v4_ext", None),
            Edge(tail="v1_sig", head="v2_sig", z_index=1),
            Edge(tail="v4_tau", head="v1_tau", z_index=2),
            Edge(tail="v3_lam", head="v4_lam", z_index=3),
            Edge(tail="v2_nu", head="v3_nu", z_index=4),
        ),
    )


BUILTIN_GRAPHS = {
    "one-vertex": one_vertex_graph,
    "two-loop": two_loop_graph,
    "four-loop": four_loop_graph,
}


def builtin(name: str) -> Graph:
    try:
        return BUILTIN_GRAPHS[name]()
    except KeyError:
        raise GraphError(f"unknown builtin graph {name!r}; have {sorted(BUILTIN_GRAPHS)}")
