"""Source and sink elimination.

Deleting a source, a sink or an isolated vertex (with its edges) leaves the
set of circuits untouched, so ``det(I - A)`` does not change.
:func:`reduce_to_closure` applies such deletions until none is possible.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .errors import DomainError
from .multigraph import Multigraph, Relabeling, delete_vertex

__all__ = [
    "VertexKind",
    "ReductionStep",
    "ReductionTrace",
    "classify_vertex",
    "eliminate",
    "reduce_to_closure",
    "replay",
]


class VertexKind(str, enum.Enum):
    SOURCE = "source"
    SINK = "sink"
    ISOLATED = "isolated"
    INTERNAL = "internal"


def classify_vertex(g: Multigraph, v: int) -> VertexKind:
    """A loop counts toward both degrees, so a looped vertex is internal."""
    if not 0 <= v < g.vertex_count:
        raise DomainError(f"vertex {v} out of range for graph with {g.vertex_count} vertices")
    indeg, outdeg = g.in_degree(v), g.out_degree(v)
    if indeg == 0 and outdeg == 0:
        return VertexKind.ISOLATED
    if indeg == 0:
        return VertexKind.SOURCE
    if outdeg == 0:
        return VertexKind.SINK
    return VertexKind.INTERNAL


def eliminate(g: Multigraph, v: int) -> Multigraph:
    """Delete a source, sink or isolated vertex. Internal vertices are refused."""
    return _eliminate(g, v)[0]


def _eliminate(g: Multigraph, v: int) -> tuple[Multigraph, Relabeling, VertexKind]:
    kind = classify_vertex(g, v)
    if kind is VertexKind.INTERNAL:
        raise DomainError(f"vertex {v} is neither a source, a sink nor isolated")
    h, relabel = delete_vertex(g, v)
    return h, relabel, kind


@dataclass(frozen=True)
class ReductionStep:
    vertex: int  # index in the input graph
    kind: VertexKind

    def to_json(self) -> dict:
        return {"vertex": self.vertex, "kind": self.kind.value}


@dataclass(frozen=True)
class ReductionTrace:
    steps: tuple[ReductionStep, ...]
    final: Multigraph
    relabeling: Relabeling  # input graph -> final graph


def reduce_to_closure(g: Multigraph) -> ReductionTrace:
    """Repeatedly eliminate the lowest-indexed non-internal vertex."""
    relabel = Relabeling.identity(g)
    original = list(g.vertices)  # current index -> input index
    steps = []
    while True:
        for v in g.vertices:
            if classify_vertex(g, v) is not VertexKind.INTERNAL:
                break
        else:
            return ReductionTrace(tuple(steps), g, relabel)
        g, step_map, kind = _eliminate(g, v)
        steps.append(ReductionStep(original[v], kind))
        del original[v]
        relabel = relabel.then(step_map)


def replay(g: Multigraph, steps: tuple[ReductionStep, ...]) -> Multigraph:
    """Re-apply recorded eliminations to ``g``; raises if a step is not legal."""
    original = list(g.vertices)
    for step in steps:
        v = original.index(step.vertex)
        g, _, kind = _eliminate(g, v)
        if kind is not step.kind:
            raise DomainError(f"vertex {step.vertex} is {kind.value}, trace says {step.kind.value}")
        del original[v]
    return g
