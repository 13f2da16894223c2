"""Finite directed multigraphs with dense integer vertices.

Vertices are ``0 .. n-1``.  Edges are records with a positional id, so two
parallel edges (or two loops at one vertex) stay distinguishable.  Graphs are
immutable; every transformation builds a new value.

Text format::

    # comment
    vertices 3
    edge 0 1
    edge 1 1

The first non-comment line declares the vertex count; each ``edge`` line adds
one edge, and repeated lines add parallel edges.
"""

from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .errors import DomainError, ParseError
from .exact_linear import IntMatrix

__all__ = [
    "Edge",
    "Multigraph",
    "Relabeling",
    "adjacency_matrix",
    "delete_vertex",
    "parse_graph",
    "serialize_graph",
    "random_graph",
]


@dataclass(frozen=True)
class Edge:
    id: int
    source: int
    target: int

    @property
    def is_loop(self) -> bool:
        return self.source == self.target


@dataclass(frozen=True)
class Multigraph:
    vertex_count: int
    edges: tuple[Edge, ...] = ()

    def __post_init__(self):
        n = self.vertex_count
        if n < 0:
            raise DomainError(f"negative vertex count {n}")
        for k, e in enumerate(self.edges):
            if e.id != k:
                raise DomainError(f"edge ids must be dense and ordered; position {k} has id {e.id}")
            if not (0 <= e.source < n and 0 <= e.target < n):
                raise DomainError(f"edge {e.id} ({e.source}->{e.target}) leaves vertex range [0, {n})")

    @classmethod
    def from_pairs(cls, vertex_count: int, pairs: Iterable[tuple[int, int]]) -> Multigraph:
        """Build a graph from ``(source, target)`` pairs; ids follow iteration order."""
        return cls(vertex_count, tuple(Edge(k, s, t) for k, (s, t) in enumerate(pairs)))

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    @property
    def vertices(self) -> range:
        return range(self.vertex_count)

    def pairs(self) -> list[tuple[int, int]]:
        return [(e.source, e.target) for e in self.edges]

    def out_degree(self, v: int) -> int:
        return sum(1 for e in self.edges if e.source == v)

    def in_degree(self, v: int) -> int:
        return sum(1 for e in self.edges if e.target == v)

    def out_edges(self) -> list[list[Edge]]:
        """Outgoing edge lists indexed by vertex, each in id order."""
        out: list[list[Edge]] = [[] for _ in range(self.vertex_count)]
        for e in self.edges:
            out[e.source].append(e)
        return out

    def adjacency_matrix(self) -> IntMatrix:
        return adjacency_matrix(self)

    def disjoint_union(self, other: Multigraph) -> Multigraph:
        """``self`` followed by ``other`` with its vertices shifted past ours."""
        n = self.vertex_count
        return Multigraph.from_pairs(
            n + other.vertex_count,
            self.pairs() + [(s + n, t + n) for s, t in other.pairs()],
        )


def adjacency_matrix(g: Multigraph) -> IntMatrix:
    """Entry ``(i, j)`` counts the edges from ``i`` to ``j``."""
    counts = Counter((e.source, e.target) for e in g.edges)
    n = g.vertex_count
    return IntMatrix(tuple(tuple(counts[i, j] for j in range(n)) for i in range(n)))


@dataclass(frozen=True)
class Relabeling:
    """Where surviving vertices and edges went after one or more deletions.

    Keys are indices in the older graph; deleted items are absent.
    """

    vertices: Mapping[int, int] = field(default_factory=dict)
    edges: Mapping[int, int] = field(default_factory=dict)

    @classmethod
    def identity(cls, g: Multigraph) -> Relabeling:
        return cls({v: v for v in g.vertices}, {e.id: e.id for e in g.edges})

    def then(self, later: Relabeling) -> Relabeling:
        """Compose: apply ``self`` first, then ``later``."""
        return Relabeling(
            {v: later.vertices[w] for v, w in self.vertices.items() if w in later.vertices},
            {e: later.edges[f] for e, f in self.edges.items() if f in later.edges},
        )


def delete_vertex(g: Multigraph, v: int) -> tuple[Multigraph, Relabeling]:
    """Remove ``v`` and every edge touching it.

    Surviving vertices keep their relative order (``w > v`` shifts down by
    one) and surviving edges are renumbered densely in their old order.
    """
    if not 0 <= v < g.vertex_count:
        raise DomainError(f"vertex {v} out of range for graph with {g.vertex_count} vertices")
    vmap = {w: (w if w < v else w - 1) for w in g.vertices if w != v}
    emap: dict[int, int] = {}
    new_edges = []
    for e in g.edges:
        if e.source == v or e.target == v:
            continue
        emap[e.id] = len(new_edges)
        new_edges.append(Edge(len(new_edges), vmap[e.source], vmap[e.target]))
    return Multigraph(g.vertex_count - 1, tuple(new_edges)), Relabeling(vmap, emap)


def _parse_index(token: str, lineno: int) -> int:
    try:
        value = int(token, 10)
    except ValueError:
        raise ParseError(f"expected a non-negative integer, got {token!r}", lineno) from None
    if value < 0:
        raise ParseError(f"negative index {value}", lineno)
    return value


def parse_graph(text: str | bytes) -> Multigraph:
    """Read the line-oriented graph format. Edge ids follow line order."""
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"input is not UTF-8: {exc}") from None
    n = None
    pairs = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if n is None:
            if parts[0] != "vertices" or len(parts) != 2:
                raise ParseError(f"expected 'vertices <n>' header, got {line!r}", lineno)
            n = _parse_index(parts[1], lineno)
            continue
        if parts[0] != "edge" or len(parts) != 3:
            raise ParseError(f"expected 'edge <src> <dst>', got {line!r}", lineno)
        s, t = _parse_index(parts[1], lineno), _parse_index(parts[2], lineno)
        for x in (s, t):
            if x >= n:
                raise ParseError(f"vertex index {x} out of range for {n} vertices", lineno)
        pairs.append((s, t))
    if n is None:
        raise ParseError("missing 'vertices <n>' header")
    return Multigraph.from_pairs(n, pairs)


def serialize_graph(g: Multigraph) -> str:
    lines = [f"vertices {g.vertex_count}"]
    lines.extend(f"edge {e.source} {e.target}" for e in g.edges)
    return "\n".join(lines) + "\n"


def random_graph(max_vertices: int, max_edges: int, seed: int) -> Multigraph:
    """Seeded random multigraph.

    The vertex count is uniform on ``[0, max_vertices]`` and the edge count
    uniform on ``[0, max_edges]`` (zero when there are no vertices); endpoints
    are drawn independently and uniformly.
    """
    if max_vertices < 0 or max_edges < 0:
        raise DomainError("bounds must be non-negative")
    rng = random.Random(seed)
    n = rng.randint(0, max_vertices)
    m = rng.randint(0, max_edges) if n else 0
    return Multigraph.from_pairs(n, [(rng.randrange(n), rng.randrange(n)) for _ in range(m)])
