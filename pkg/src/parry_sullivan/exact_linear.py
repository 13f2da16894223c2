"""Exact integer matrices, determinants and permutation signs.

Everything here works over Python ints, so no intermediate value is ever
rounded or truncated.  Two determinant routes are provided and kept
deliberately independent of each other:

* :func:`determinant` uses fraction-free (Bareiss) elimination and is the
  production path.
* :func:`leibniz_determinant` sums one signed elementary product per
  permutation.  It is factorial in the matrix order and only meant as an
  oracle for small matrices.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import TYPE_CHECKING, Iterable, Iterator, Sequence

from .errors import DomainError, ResourceLimitError

if TYPE_CHECKING:
    from .multigraph import Multigraph

__all__ = [
    "IntMatrix",
    "Permutation",
    "CycleDecomposition",
    "DEFAULT_FACTORIAL_LIMIT",
    "identity_minus",
    "determinant",
    "leibniz_determinant",
    "signed_elementary_product",
    "cycle_decomposition",
    "sign",
    "inversion_sign",
    "all_permutations",
    "ps_via_determinant",
]

DEFAULT_FACTORIAL_LIMIT = 8


@dataclass(frozen=True)
class IntMatrix:
    """Square matrix of arbitrary-precision integers, stored row-major."""

    rows: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        n = len(self.rows)
        for r in self.rows:
            if len(r) != n:
                raise DomainError(f"matrix is not square: row of length {len(r)} in order {n}")

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable[int]]) -> IntMatrix:
        return cls(tuple(tuple(int(x) for x in r) for r in rows))

    @classmethod
    def zeros(cls, n: int) -> IntMatrix:
        return cls(tuple((0,) * n for _ in range(n)))

    @classmethod
    def identity(cls, n: int) -> IntMatrix:
        return cls(tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))

    @property
    def order(self) -> int:
        return len(self.rows)

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.rows[i][j]

    def transpose(self) -> IntMatrix:
        return IntMatrix(tuple(zip(*self.rows)) if self.rows else ())

    def minor(self, k: int) -> IntMatrix:
        """Drop row ``k`` and column ``k``."""
        return IntMatrix(
            tuple(r[:k] + r[k + 1:] for i, r in enumerate(self.rows) if i != k)
        )

    def permuted(self, perm: Sequence[int]) -> IntMatrix:
        """Simultaneous row/column relabeling: result[i][j] = self[perm[i]][perm[j]]."""
        return IntMatrix(tuple(tuple(self.rows[p][q] for q in perm) for p in perm))

    def to_lines(self) -> list[str]:
        return [" ".join(str(x) for x in r) for r in self.rows]

    def __str__(self) -> str:
        return "\n".join(self.to_lines())


def identity_minus(a: IntMatrix) -> IntMatrix:
    """Return ``I - a``."""
    return IntMatrix(
        tuple(
            tuple(int(i == j) - x for j, x in enumerate(row))
            for i, row in enumerate(a.rows)
        )
    )


def determinant(m: IntMatrix) -> int:
    """Exact determinant by Bareiss fraction-free elimination.

    Every division performed is exact, so intermediate entries stay integral
    and are bounded by minors of ``m``.  The empty matrix has determinant 1.
    """
    n = m.order
    if n == 0:
        return 1
    a = [list(r) for r in m.rows]
    sgn = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for p in range(k + 1, n):
                if a[p][k] != 0:
                    a[k], a[p] = a[p], a[k]
                    sgn = -sgn
                    break
            else:
                return 0
        pivot = a[k][k]
        row_k = a[k]
        for i in range(k + 1, n):
            row_i = a[i]
            aik = row_i[k]
            for j in range(k + 1, n):
                row_i[j] = (pivot * row_i[j] - aik * row_k[j]) // prev
            row_i[k] = 0
        prev = pivot
    return sgn * a[n - 1][n - 1]


@dataclass(frozen=True, order=True)
class Permutation:
    """A bijection of ``{0, ..., n-1}``; ``images[i]`` is the image of ``i``."""

    images: tuple[int, ...]

    def __post_init__(self):
        if sorted(self.images) != list(range(len(self.images))):
            raise DomainError(f"not a permutation: {list(self.images)}")

    @classmethod
    def identity(cls, n: int) -> Permutation:
        return cls(tuple(range(n)))

    @classmethod
    def from_cycles(cls, n: int, cycles: Iterable[Sequence[int]]) -> Permutation:
        images = list(range(n))
        for cyc in cycles:
            for a, b in zip(cyc, tuple(cyc[1:]) + tuple(cyc[:1])):
                images[a] = b
        return cls(tuple(images))

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i]

    def __len__(self) -> int:
        return len(self.images)

    def is_identity(self) -> bool:
        return all(i == x for i, x in enumerate(self.images))

    def __str__(self) -> str:
        return "[" + ", ".join(map(str, self.images)) + "]"


@dataclass(frozen=True)
class CycleDecomposition:
    """Nontrivial cycles (length >= 2) and fixed points of a permutation."""

    degree: int
    cycles: tuple[tuple[int, ...], ...]
    fixed_points: tuple[int, ...]

    @property
    def cycle_count(self) -> int:
        return len(self.cycles)

    @property
    def fixed_count(self) -> int:
        return len(self.fixed_points)

    @property
    def transposition_count(self) -> int:
        # each j-cycle is a product of j - 1 transpositions
        return self.degree - (self.cycle_count + self.fixed_count)


def cycle_decomposition(rho: Permutation) -> CycleDecomposition:
    """Split ``rho`` into disjoint cycles.

    Each cycle starts at its smallest element and cycles are listed by that
    element, which makes the decomposition canonical.
    """
    n = rho.degree
    seen = [False] * n
    cycles = []
    fixed = []
    for start in range(n):
        if seen[start]:
            continue
        cyc = [start]
        seen[start] = True
        v = rho.images[start]
        while v != start:
            cyc.append(v)
            seen[v] = True
            v = rho.images[v]
        if len(cyc) == 1:
            fixed.append(start)
        else:
            cycles.append(tuple(cyc))
    return CycleDecomposition(n, tuple(cycles), tuple(fixed))


def sign(rho: Permutation) -> int:
    """Sign of ``rho`` from its cycle structure: ``(-1) ** (n - (m + k))``."""
    return -1 if cycle_decomposition(rho).transposition_count % 2 else 1


def inversion_sign(rho: Permutation) -> int:
    """Sign of ``rho`` from the parity of its inversion count."""
    im = rho.images
    inv = sum(1 for i, j in itertools.combinations(range(len(im)), 2) if im[i] > im[j])
    return -1 if inv % 2 else 1


def all_permutations(n: int) -> Iterator[Permutation]:
    """All of S_n in lexicographic order of image tuples."""
    for p in itertools.permutations(range(n)):
        yield Permutation(p)


def signed_elementary_product(m: IntMatrix, rho: Permutation) -> int:
    """``sign(rho) * prod_i m[i, rho(i)]``: one term of the Leibniz expansion."""
    if m.order != rho.degree:
        raise DomainError(
            f"matrix order {m.order} does not match permutation degree {rho.degree}"
        )
    prod = 1
    for i, j in enumerate(rho.images):
        prod *= m.rows[i][j]
        if prod == 0:
            return 0
    return sign(rho) * prod


def leibniz_determinant(m: IntMatrix, limit: int = DEFAULT_FACTORIAL_LIMIT) -> int:
    """Determinant as a sum over all permutations. Raises past order ``limit``."""
    if m.order > limit:
        raise ResourceLimitError(
            "factorial limit", limit,
            f"Leibniz expansion of order {m.order} exceeds factorial limit {limit}",
        )
    return sum(signed_elementary_product(m, rho) for rho in all_permutations(m.order))


def ps_via_determinant(g: Multigraph) -> int:
    """Parry-Sullivan number of ``g`` as ``det(I - A)``."""
    return determinant(identity_minus(g.adjacency_matrix()))
