"""Lazy column generation for subset-intersection and inclusion maps.

A map is a recipe, never a stored matrix: each column is produced on
demand from the subset indexing it, and a full dense matrix exists only
inside the explicit export helpers.  A column of the intersection matrix
is generated by choosing i elements inside the column's subset and k - i
outside, so the cost is the column weight C(n,i) * C(m-n,k-i) rather
than a scan of all C(m,k) row subsets.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import IO, Iterator, Sequence

from .linalg import FieldSpec, ModuleVector, write_triplet_matrix
from .subsets import (
    KSubset,
    binomial,
    colex_rank,
    colex_unrank,
    complement,
    iter_ksubsets,
)


@dataclass(frozen=True)
class IncidenceSpec:
    """Parameters (m, k, n, i) of a subset-intersection incidence matrix.

    Rows are indexed by the k-subsets and columns by the n-subsets of an
    m-element ground set, in colex order; the (S, T) entry is 1 exactly
    when |S intersect T| = i.
    """

    m: int
    k: int
    n: int
    i: int

    def __post_init__(self) -> None:
        if not (0 <= self.i <= self.k <= self.n <= self.m):
            raise ValueError(f"need 0 <= i <= k <= n <= m, got {self}")

    @property
    def n_rows(self) -> int:
        return binomial(self.m, self.k)

    @property
    def n_cols(self) -> int:
        return binomial(self.m, self.n)


def normalize_spec(spec: IncidenceSpec) -> tuple[IncidenceSpec, bool]:
    """Equivalent spec in normal form, plus a column-complement flag.

    Disjointness (i = 0) is rewritten as inclusion into the complement,
    and the pairs/1-intersection family is folded to n <= m/2.  When the
    flag is True, column T of the returned spec is column X \\ T of the
    original; both rewrites leave every row untouched.
    """
    m, k, n, i = spec.m, spec.k, spec.n, spec.i
    if i == 0 and 0 < k <= m - n:
        return IncidenceSpec(m, k, m - n, k), True
    if (k, i) == (2, 1) and 2 * n > m and m - n >= 2:
        return IncidenceSpec(m, 2, m - n, 1), True
    return spec, False


def _elements(subset, m: int, size: int | None = None) -> tuple[int, ...]:
    if isinstance(subset, KSubset):
        if subset.m != m:
            raise ValueError(f"subset ground set {subset.m} != expected {m}")
        elems = subset.elements
    else:
        elems = tuple(subset)
        if any(b <= a for a, b in zip(elems, elems[1:])):
            raise ValueError(f"subset must be strictly increasing, got {elems}")
        if elems and not (0 <= elems[0] and elems[-1] < m):
            raise ValueError(f"subset {elems} outside [0, {m})")
    if size is not None and len(elems) != size:
        raise ValueError(f"subset {elems} does not have size {size}")
    return elems


def intersection_column(
    spec: IncidenceSpec, subset, field: FieldSpec
) -> ModuleVector:
    """Column of the incidence matrix indexed by the n-subset `subset`:
    the indicator of the k-subsets meeting it in exactly i elements."""
    t = _elements(subset, spec.m, spec.n)
    outside = complement(t, spec.m)
    coeffs = [0] * binomial(spec.m, spec.k)
    for inner in combinations(t, spec.i):
        for outer in combinations(outside, spec.k - spec.i):
            coeffs[colex_rank(tuple(sorted(inner + outer)))] = 1
    return ModuleVector(spec.k, spec.m, coeffs, field)


def inclusion_column(
    from_size: int, to_size: int, subset, m: int, field: FieldSpec
) -> ModuleVector:
    """Image of a from_size-subset under the inclusion map down to
    to_size-subsets: the indicator of its to_size-subsets."""
    if not 0 <= to_size <= from_size <= m:
        raise ValueError(f"need 0 <= to <= from <= m, got {to_size}, {from_size}, {m}")
    t = _elements(subset, m, from_size)
    coeffs = [0] * binomial(m, to_size)
    for part in combinations(t, to_size):
        coeffs[colex_rank(part)] = 1
    return ModuleVector(to_size, m, coeffs, field)


def superset_column(
    from_size: int, to_size: int, subset, m: int, field: FieldSpec
) -> ModuleVector:
    """Image of a from_size-subset under the lift to to_size-subsets: the
    indicator of its to_size-supersets."""
    if not 0 <= from_size <= to_size <= m:
        raise ValueError(f"need 0 <= from <= to <= m, got {from_size}, {to_size}, {m}")
    t = _elements(subset, m, from_size)
    coeffs = [0] * binomial(m, to_size)
    for extra in combinations(complement(t, m), to_size - from_size):
        coeffs[colex_rank(tuple(sorted(t + extra)))] = 1
    return ModuleVector(to_size, m, coeffs, field)


class LinearMap:
    """A linear map between tabloid modules, defined by its column action.

    Subclasses provide m, field, domain_size, codomain_size, and column();
    apply() extends the column action linearly.
    """

    m: int
    field: FieldSpec

    @property
    def domain_size(self) -> int:
        raise NotImplementedError

    @property
    def codomain_size(self) -> int:
        raise NotImplementedError

    def column(self, subset) -> ModuleVector:
        raise NotImplementedError

    def apply(self, v: ModuleVector) -> ModuleVector:
        if v.m != self.m or v.part_size != self.domain_size or v.field != self.field:
            raise ValueError("vector does not live in the map's domain module")
        p = self.field.characteristic
        acc = [0] * binomial(self.m, self.codomain_size)
        for idx, c in enumerate(v.coeffs):
            if not c:
                continue
            col = self.column(colex_unrank(idx, self.domain_size, self.m))
            for pos, entry in enumerate(col.coeffs):
                if entry:
                    acc[pos] += c * entry
        if p:
            acc = [x % p for x in acc]
        return ModuleVector(self.codomain_size, self.m, acc, self.field)


@dataclass(frozen=True)
class IntersectionMap(LinearMap):
    """Sends an n-subset to the sum of the k-subsets meeting it in exactly
    i elements; its matrix is the incidence matrix of `spec`."""

    spec: IncidenceSpec
    field: FieldSpec

    @property
    def m(self) -> int:
        return self.spec.m

    @property
    def domain_size(self) -> int:
        return self.spec.n

    @property
    def codomain_size(self) -> int:
        return self.spec.k

    def column(self, subset) -> ModuleVector:
        return intersection_column(self.spec, subset, self.field)


@dataclass(frozen=True)
class InclusionMap(LinearMap):
    """Sends a from_size-subset to the sum of its to_size-subsets."""

    m: int
    from_size: int
    to_size: int
    field: FieldSpec

    def __post_init__(self) -> None:
        if not 0 <= self.to_size <= self.from_size <= self.m:
            raise ValueError(f"need 0 <= to <= from <= m, got {self}")

    @property
    def domain_size(self) -> int:
        return self.from_size

    @property
    def codomain_size(self) -> int:
        return self.to_size

    def column(self, subset) -> ModuleVector:
        return inclusion_column(self.from_size, self.to_size, subset, self.m, self.field)


@dataclass(frozen=True)
class SupersetMap(LinearMap):
    """Sends a from_size-subset to the sum of its to_size-supersets."""

    m: int
    from_size: int
    to_size: int
    field: FieldSpec

    def __post_init__(self) -> None:
        if not 0 <= self.from_size <= self.to_size <= self.m:
            raise ValueError(f"need 0 <= from <= to <= m, got {self}")

    @property
    def domain_size(self) -> int:
        return self.from_size

    @property
    def codomain_size(self) -> int:
        return self.to_size

    def column(self, subset) -> ModuleVector:
        return superset_column(self.from_size, self.to_size, subset, self.m, self.field)


@dataclass(frozen=True)
class ComposedMap(LinearMap):
    """Composition outer(inner(.)) of two maps sharing the middle module."""

    outer: LinearMap
    inner: LinearMap

    def __post_init__(self) -> None:
        if self.inner.codomain_size != self.outer.domain_size:
            raise ValueError("inner codomain does not match outer domain")
        if self.inner.m != self.outer.m or self.inner.field != self.outer.field:
            raise ValueError("composed maps must share ground set and field")

    @property
    def m(self) -> int:
        return self.inner.m

    @property
    def field(self) -> FieldSpec:
        return self.inner.field

    @property
    def domain_size(self) -> int:
        return self.inner.domain_size

    @property
    def codomain_size(self) -> int:
        return self.outer.codomain_size

    def column(self, subset) -> ModuleVector:
        return self.outer.apply(self.inner.column(subset))

    def apply(self, v: ModuleVector) -> ModuleVector:
        return self.outer.apply(self.inner.apply(v))


def matrix_columns(spec: IncidenceSpec, field: FieldSpec) -> Iterator[ModuleVector]:
    """Columns of the incidence matrix, in colex order of their subsets."""
    for t in iter_ksubsets(spec.m, spec.n):
        yield intersection_column(spec, t, field)


def dense_matrix(spec: IncidenceSpec, field: FieldSpec) -> list[list[int]]:
    """Materialize the incidence matrix row-major.  Small specs only."""
    rows = [[0] * spec.n_cols for _ in range(spec.n_rows)]
    for c, col in enumerate(matrix_columns(spec, field)):
        for r, v in enumerate(col.coeffs):
            if v:
                rows[r][c] = v
    return rows


def export_matrix(spec: IncidenceSpec, field: FieldSpec, stream: IO[str]) -> None:
    """Stream the incidence matrix to `stream` in triplet format without
    materializing it."""

    def entries() -> Iterator[tuple[int, int, int]]:
        for c, col in enumerate(matrix_columns(spec, field)):
            for r, v in enumerate(col.coeffs):
                if v:
                    yield (r, c, v)

    write_triplet_matrix(
        stream, spec.n_rows, spec.n_cols, field.characteristic, entries()
    )
