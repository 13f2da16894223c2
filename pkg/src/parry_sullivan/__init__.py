"""Parry-Sullivan numbers of finite directed multigraphs.

``det(I - A)`` is computed exactly and cross-checked against a signed count
of vertex-disjoint circuit families.
"""

from .circuits import (
    Circuit,
    SignedCount,
    class_product_table,
    enumerate_circuits,
    group_by_induced_permutation,
    induced_permutation,
    ps_via_circuits,
    signed_family_count,
)
from .errors import DomainError, ParseError, ResourceLimitError
from .exact_linear import (
    IntMatrix,
    Permutation,
    cycle_decomposition,
    determinant,
    identity_minus,
    leibniz_determinant,
    ps_via_determinant,
    sign,
    signed_elementary_product,
)
from .flow_moves import classify_vertex, eliminate, reduce_to_closure
from .multigraph import (
    Edge,
    Multigraph,
    adjacency_matrix,
    delete_vertex,
    parse_graph,
    random_graph,
    serialize_graph,
)

__version__ = "0.1.0"
