"""Directed circuits, vertex-disjoint circuit families and their signed count.

A circuit is a set of edges that can be laid out as a directed cycle whose
edges have pairwise distinct sources.  Its identity is the edge set; the
stored edge order is a canonical representative that starts at the smallest
vertex.

Families of pairwise vertex-disjoint circuits are the independent sets of a
conflict graph on circuits.  Counting them signed by the parity of their size
recovers ``det(I - A)``, which is what :func:`ps_via_circuits` computes.
"""

from __future__ import annotations

import sys
from collections import defaultdict
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .errors import DomainError, ResourceLimitError
from .exact_linear import (
    DEFAULT_FACTORIAL_LIMIT,
    Permutation,
    all_permutations,
    identity_minus,
    signed_elementary_product,
)
from .multigraph import Multigraph

__all__ = [
    "DEFAULT_CIRCUIT_CAP",
    "DEFAULT_NODE_CAP",
    "Circuit",
    "ConflictGraph",
    "SignedCount",
    "ClassProductRow",
    "enumerate_circuits",
    "induced_permutation",
    "iter_families",
    "materialize_families",
    "signed_family_count",
    "ps_via_circuits",
    "group_by_induced_permutation",
    "class_product_table",
]

DEFAULT_CIRCUIT_CAP = 10**6
DEFAULT_NODE_CAP = 10**7


@dataclass(frozen=True, eq=False)
class Circuit:
    """A directed circuit.

    ``edge_order[i]`` leaves ``vertex_order[i]`` and enters
    ``vertex_order[i + 1]`` (wrapping around); ``vertex_order[0]`` is the
    smallest vertex.  Equality and hashing use the edge set only.
    """

    edge_order: tuple[int, ...]
    vertex_order: tuple[int, ...]

    @classmethod
    def from_edges(cls, g: Multigraph, edge_ids: Iterable[int]) -> Circuit:
        """Arrange an edge set into its canonical cycle, or raise DomainError."""
        ids = sorted(set(edge_ids))
        if not ids:
            raise DomainError("a circuit needs at least one edge")
        by_source: dict[int, int] = {}
        for k in ids:
            e = g.edges[k]
            if e.source in by_source:
                raise DomainError(f"edges {by_source[e.source]} and {k} share source {e.source}")
            by_source[e.source] = k
        start = min(by_source)
        edges, verts = [], []
        v = start
        while True:
            if v not in by_source:
                raise DomainError(f"edge set {ids} does not close up at vertex {v}")
            k = by_source[v]
            edges.append(k)
            verts.append(v)
            v = g.edges[k].target
            if v == start:
                break
            if len(edges) > len(ids):
                raise DomainError(f"edge set {ids} is not a single cycle")
        if len(edges) != len(ids):
            raise DomainError(f"edge set {ids} splits into more than one cycle")
        return cls(tuple(edges), tuple(verts))

    @property
    def edge_ids(self) -> frozenset[int]:
        return frozenset(self.edge_order)

    @property
    def vertex_set(self) -> frozenset[int]:
        return frozenset(self.vertex_order)

    @property
    def size(self) -> int:
        return len(self.edge_order)

    @property
    def vertex_mask(self) -> int:
        mask = 0
        for v in self.vertex_order:
            mask |= 1 << v
        return mask

    @property
    def sort_key(self) -> tuple[int, int, tuple[int, ...]]:
        return (self.vertex_order[0], len(self.edge_order), tuple(sorted(self.edge_order)))

    def __eq__(self, other):
        if not isinstance(other, Circuit):
            return NotImplemented
        return self.edge_ids == other.edge_ids

    def __hash__(self):
        return hash(self.edge_ids)

    def __str__(self) -> str:
        parts = [f"{v} -{e}->" for v, e in zip(self.vertex_order, self.edge_order)]
        return "(" + " ".join(parts) + f" {self.vertex_order[0]})"


@dataclass(frozen=True)
class SignedCount:
    even: int = 0
    odd: int = 0

    @property
    def value(self) -> int:
        return self.even - self.odd

    @property
    def total(self) -> int:
        return self.even + self.odd

    def __add__(self, other: SignedCount) -> SignedCount:
        return SignedCount(self.even + other.even, self.odd + other.odd)


def _strong_component_above(out_edges, s: int, n: int) -> set[int]:
    """Vertices >= s that lie on a common cycle with ``s`` in the induced subgraph."""
    into: list[list[int]] = [[] for _ in range(n)]
    for v in range(s, n):
        for e in out_edges[v]:
            if e.target >= s:
                into[e.target].append(v)

    def reach(adj):
        seen = {s}
        todo = [s]
        while todo:
            v = todo.pop()
            for w in adj(v):
                if w not in seen:
                    seen.add(w)
                    todo.append(w)
        return seen

    fwd = reach(lambda v: (e.target for e in out_edges[v] if e.target >= s))
    back = reach(lambda v: into[v])
    return fwd & back


def _cycles_through(out_edges, s: int, allowed: set[int]) -> Iterator[list[int]]:
    """Johnson's circuit search rooted at ``s``, branching over edges.

    Yields edge-id paths.  Branching on edges rather than neighbours makes
    parallel edges produce distinct circuits; a loop at ``s`` is yielded as a
    one-edge path and loops elsewhere are skipped because their endpoint is
    already blocked.
    """
    succ = {v: [e for e in out_edges[v] if e.target in allowed] for v in allowed}
    blocked = {v: False for v in allowed}
    blocked_by: dict[int, set[int]] = defaultdict(set)

    def unblock(u):
        todo = [u]
        while todo:
            x = todo.pop()
            if blocked[x]:
                blocked[x] = False
                todo.extend(blocked_by[x])
                blocked_by[x].clear()

    path: list[int] = []
    blocked[s] = True
    # frame: [vertex, edge iterator, found-a-cycle flag]
    frames = [[s, iter(succ[s]), False]]
    while frames:
        frame = frames[-1]
        v, it = frame[0], frame[1]
        for e in it:
            w = e.target
            if w == s:
                yield path + [e.id]
                frame[2] = True
            elif not blocked[w]:
                path.append(e.id)
                blocked[w] = True
                frames.append([w, iter(succ[w]), False])
                break
        else:
            frames.pop()
            found = frame[2]
            if found:
                unblock(v)
            else:
                for e in succ[v]:
                    blocked_by[e.target].add(v)
            if frames:
                path.pop()
                frames[-1][2] = frames[-1][2] or found


def enumerate_circuits(g: Multigraph, cap: int = DEFAULT_CIRCUIT_CAP) -> list[Circuit]:
    """Every circuit of ``g`` exactly once, in canonical order.

    Raises :class:`ResourceLimitError` as soon as more than ``cap`` circuits
    have been found.
    """
    out_edges = g.out_edges()
    n = g.vertex_count
    found: list[Circuit] = []
    for s in range(n):
        allowed = _strong_component_above(out_edges, s, n)
        if len(allowed) == 1 and not any(e.target == s for e in out_edges[s]):
            continue
        for edge_path in _cycles_through(out_edges, s, allowed):
            verts = [s] + [g.edges[k].target for k in edge_path[:-1]]
            found.append(Circuit(tuple(edge_path), tuple(verts)))
            if len(found) > cap:
                raise ResourceLimitError(
                    "circuit cap", cap, f"graph has more than {cap} circuits (circuit cap)"
                )
    found.sort(key=lambda c: c.sort_key)
    return found


class ConflictGraph:
    """Circuits joined whenever their vertex sets meet.

    ``conflicts[i]`` is a bitmask over circuit indices; bit ``i`` itself is
    set too.  Independent sets are exactly the vertex-disjoint families.
    """

    def __init__(self, circuits: Sequence[Circuit]):
        self.circuits = tuple(circuits)
        # circuits through each vertex, as a bitmask over circuit indices
        through: dict[int, int] = defaultdict(int)
        for i, c in enumerate(self.circuits):
            for v in c.vertex_order:
                through[v] |= 1 << i
        conflicts = []
        for c in self.circuits:
            mask = 0
            for v in c.vertex_order:
                mask |= through[v]
            conflicts.append(mask)
        self.conflicts = tuple(conflicts)

    def __len__(self) -> int:
        return len(self.circuits)

    def edge_count(self) -> int:
        return sum(bin(c).count("1") - 1 for c in self.conflicts) // 2

    def adjacent(self, i: int, j: int) -> bool:
        return i != j and bool(self.conflicts[i] >> j & 1)


def _check_node_cap(nodes: int, cap: int | None) -> None:
    if cap is not None and nodes > cap:
        raise ResourceLimitError(
            "node cap", cap, f"family walk visited more than {cap} nodes (node cap)"
        )


def _groups_by_min_vertex(
    circuits: Sequence[Circuit], n: int
) -> list[list[tuple[int, int]]]:
    """``groups[w]`` lists ``(index, vertex mask)`` of circuits whose smallest vertex is ``w``."""
    groups: list[list[tuple[int, int]]] = [[] for _ in range(n)]
    for i, c in enumerate(circuits):
        groups[c.vertex_order[0]].append((i, c.vertex_mask))
    return groups


def _vertex_bound(circuits: Sequence[Circuit]) -> int:
    return max((max(c.vertex_order) for c in circuits), default=-1) + 1


def iter_families(
    circuits: Sequence[Circuit], node_cap: int | None = DEFAULT_NODE_CAP
) -> Iterator[tuple[int, ...]]:
    """Yield every vertex-disjoint family as a tuple of circuit indices.

    The empty family comes first.  With circuits in canonical order, the
    indices within a family are increasing.  Circuits in a family have distinct smallest vertices, so the walk only
    extends a family by circuits whose smallest vertex exceeds that of the
    last one added; conflicts are tested on vertex bitmasks.
    """
    n = _vertex_bound(circuits)
    groups = _groups_by_min_vertex(circuits, n)
    chosen: list[int] = []
    nodes = 1
    yield ()

    def candidates(first: int, used: int) -> Iterator[tuple[int, int, int]]:
        for w in range(first, n):
            if used >> w & 1:
                continue
            for i, mask in groups[w]:
                if not mask & used:
                    yield w, i, mask

    # frame: (vertices used so far, iterator over extending circuits)
    stack = [(0, candidates(0, 0))]
    while stack:
        used, it = stack[-1]
        step = next(it, None)
        if step is None:
            stack.pop()
            if chosen:
                chosen.pop()
            continue
        w, i, mask = step
        chosen.append(i)
        nodes += 1
        _check_node_cap(nodes, node_cap)
        yield tuple(chosen)
        stack.append((used | mask, candidates(w + 1, used | mask)))


def materialize_families(
    circuits: Sequence[Circuit], family_cap: int = DEFAULT_NODE_CAP
) -> list[tuple[Circuit, ...]]:
    """All vertex-disjoint families as circuit tuples, capped at ``family_cap``."""
    return [
        tuple(circuits[i] for i in fam) for fam in iter_families(circuits, node_cap=family_cap)
    ]


def signed_family_count(
    g: Multigraph, circuits: Sequence[Circuit], node_cap: int | None = DEFAULT_NODE_CAP
) -> SignedCount:
    """Count vertex-disjoint families of ``circuits`` by parity of size.

    Same walk as :func:`iter_families`, but only the current branch is kept
    and nothing is materialized.
    """
    n = max(g.vertex_count, _vertex_bound(circuits))
    groups = _groups_by_min_vertex(circuits, n)
    counts = [0, 0]
    nodes = 0

    def walk(first: int, used: int, parity: int) -> None:
        nonlocal nodes
        nodes += 1
        _check_node_cap(nodes, node_cap)
        counts[parity] += 1
        for w in range(first, n):
            if used >> w & 1:
                continue
            for _, mask in groups[w]:
                if not mask & used:
                    walk(w + 1, used | mask, parity ^ 1)

    depth_needed = n + 100
    if sys.getrecursionlimit() < depth_needed:
        sys.setrecursionlimit(depth_needed)
    walk(0, 0, 0)
    return SignedCount(counts[0], counts[1])


def ps_via_circuits(
    g: Multigraph,
    circuit_cap: int = DEFAULT_CIRCUIT_CAP,
    node_cap: int | None = DEFAULT_NODE_CAP,
) -> int:
    """Parry-Sullivan number as (#even families) - (#odd families)."""
    return signed_family_count(g, enumerate_circuits(g, circuit_cap), node_cap).value


def induced_permutation(g: Multigraph, family: Iterable[Circuit]) -> Permutation:
    """Send each source vertex of a family edge to that edge's target; fix the rest."""
    images = list(range(g.vertex_count))
    covered: set[int] = set()
    for c in family:
        for k in c.edge_order:
            e = g.edges[k]
            if e.source in covered:
                raise DomainError(
                    f"family is not vertex-disjoint: vertex {e.source} is used twice"
                )
            covered.add(e.source)
            images[e.source] = e.target
    return Permutation(tuple(images))


def group_by_induced_permutation(
    g: Multigraph,
    circuits: Sequence[Circuit] | None = None,
    circuit_cap: int = DEFAULT_CIRCUIT_CAP,
    node_cap: int | None = DEFAULT_NODE_CAP,
) -> dict[Permutation, SignedCount]:
    """Signed family counts split by induced permutation, sorted by permutation.

    Permutations induced by no family are left out.
    """
    if circuits is None:
        circuits = enumerate_circuits(g, circuit_cap)
    even: dict[Permutation, int] = defaultdict(int)
    odd: dict[Permutation, int] = defaultdict(int)
    for fam in iter_families(circuits, node_cap):
        rho = induced_permutation(g, (circuits[i] for i in fam))
        if len(fam) % 2:
            odd[rho] += 1
        else:
            even[rho] += 1
    keys = sorted(set(even) | set(odd))
    return {rho: SignedCount(even.get(rho, 0), odd.get(rho, 0)) for rho in keys}


@dataclass(frozen=True)
class ClassProductRow:
    permutation: Permutation
    class_value: int
    elementary_product: int

    @property
    def agrees(self) -> bool:
        return self.class_value == self.elementary_product


def class_product_table(
    g: Multigraph,
    limit: int = DEFAULT_FACTORIAL_LIMIT,
    circuit_cap: int = DEFAULT_CIRCUIT_CAP,
    node_cap: int | None = DEFAULT_NODE_CAP,
) -> list[ClassProductRow]:
    """Compare, for every permutation, its term of ``det(I - A)`` with the
    signed count of the families inducing it (0 for an empty class)."""
    if g.vertex_count > limit:
        raise ResourceLimitError(
            "factorial limit", limit,
            f"{g.vertex_count} vertices exceeds factorial limit {limit}",
        )
    classes = group_by_induced_permutation(g, None, circuit_cap, node_cap)
    m = identity_minus(g.adjacency_matrix())
    return [
        ClassProductRow(
            rho,
            classes.get(rho, SignedCount()).value,
            signed_elementary_product(m, rho),
        )
        for rho in all_permutations(g.vertex_count)
    ]
