"""Exact linear algebra over prime fields and the rationals.

The workhorse is EchelonBasis: an incrementally maintained reduced
row-echelon set of vectors.  Rank queries stream candidate vectors
through it one at a time, so a matrix with far more columns than rows is
never materialized; memory stays at O(length * rank).

Representation per characteristic:
  - GF(2): rows are Python ints with bit i holding coordinate i, so a
    full elimination step is one xor over machine words.
  - GF(p), p odd: dense lists of reduced residues (p < 2**31, so a
    product of two residues fits comfortably in a machine word).
  - characteristic 0: dense lists of exact Fractions, used for
    small-scale subspace work; large-scale rational rank goes through
    the random-prime probe in rank_rational instead.
"""

from __future__ import annotations

import random
from bisect import bisect_left
from dataclasses import dataclass
from fractions import Fraction
from typing import IO, Iterable, Sequence

from .subsets import binomial

#: Seed used whenever a caller does not supply its own RNG.
DEFAULT_SEED = 1729

#: Default cap (per dimension) for dense integer computations.
SNF_SIZE_CAP = 500

#: Dimension cap below which rank_rational double-checks the random-prime
#: probe with fraction-free integer elimination.
CONFIRM_DIM_CAP = 300


class SizeCapError(ValueError):
    """A dense-computation size cap was exceeded."""


class InternalCheckError(RuntimeError):
    """Two independent computations of the same quantity disagreed."""


# Witness set is deterministic for every n below 3_474_749_660_383,
# far beyond the 2**31 field-size cap.
_MR_BASES = (2, 3, 5, 7, 11, 13)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin primality test for n < 3.4e12."""
    if n < 2:
        return False
    for q in _MR_BASES:
        if n % q == 0:
            return n == q
    d = n - 1
    s = (d & -d).bit_length() - 1
    d >>= s
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class FieldSpec:
    """Coefficient field: characteristic 0 (exact rationals) or GF(p)."""

    characteristic: int

    def __post_init__(self) -> None:
        p = self.characteristic
        if p == 0:
            return
        if p >= 1 << 31 or not is_prime(p):
            raise ValueError(f"characteristic must be 0 or a prime below 2**31, got {p}")

    def reduce(self, x: int) -> int:
        return x % self.characteristic if self.characteristic else x


RATIONALS = FieldSpec(0)
GF2 = FieldSpec(2)


@dataclass
class ModuleVector:
    """Dense element of the tabloid module for the two-part shape
    (m - part_size, part_size).

    Coordinate i is the coefficient of the part_size-subset with colex
    rank i.  Coefficients are kept reduced when the characteristic is
    nonzero.
    """

    part_size: int
    m: int
    coeffs: list
    field: FieldSpec

    def __post_init__(self) -> None:
        expected = binomial(self.m, self.part_size)
        if len(self.coeffs) != expected:
            raise ValueError(
                f"vector for part size {self.part_size} of a {self.m}-set "
                f"needs {expected} coefficients, got {len(self.coeffs)}"
            )

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def scaled(self, c: int) -> "ModuleVector":
        p = self.field.characteristic
        if p:
            data = [x * c % p for x in self.coeffs]
        else:
            data = [x * c for x in self.coeffs]
        return ModuleVector(self.part_size, self.m, data, self.field)


def zero_vector(m: int, part_size: int, field: FieldSpec) -> ModuleVector:
    return ModuleVector(part_size, m, [0] * binomial(m, part_size), field)


class EchelonBasis:
    """Reduced row-echelon basis, grown by inserting one vector at a time.

    Single-owner mutable: hand out snapshots with copy() rather than
    sharing.  Pivot columns are kept sorted; each row has leading
    coefficient 1 in its pivot column and is fully reduced against every
    other pivot.
    """

    def __init__(self, field: FieldSpec, length: int):
        if length < 0:
            raise ValueError("ambient length must be nonnegative")
        self.field = field
        self.length = length
        self.pivots: list[int] = []
        self.rows: list = []

    @property
    def rank(self) -> int:
        return len(self.rows)

    def copy(self) -> "EchelonBasis":
        dup = EchelonBasis(self.field, self.length)
        dup.pivots = list(self.pivots)
        if self.field.characteristic == 2:
            dup.rows = list(self.rows)
        else:
            dup.rows = [list(row) for row in self.rows]
        return dup

    def insert(self, vector) -> bool:
        """Extend the span by `vector`; returns True iff it was absorbed
        (already in the span, rank unchanged)."""
        data = self._coerce(vector)
        if self.field.characteristic == 2:
            return self._insert_bits(_pack_bits(data))
        return self._insert_dense(data)

    def _coerce(self, vector) -> Sequence:
        if isinstance(vector, ModuleVector):
            if vector.field != self.field:
                raise ValueError(
                    f"vector field {vector.field} != basis field {self.field}"
                )
            data = vector.coeffs
        else:
            data = vector
        if len(data) != self.length:
            raise ValueError(f"vector length {len(data)} != basis length {self.length}")
        return data

    def _insert_bits(self, bits: int) -> bool:
        for pivot, row in zip(self.pivots, self.rows):
            if bits >> pivot & 1:
                bits ^= row
        if bits == 0:
            return True
        pivot = (bits & -bits).bit_length() - 1
        for idx, row in enumerate(self.rows):
            if row >> pivot & 1:
                self.rows[idx] = row ^ bits
        at = bisect_left(self.pivots, pivot)
        self.pivots.insert(at, pivot)
        self.rows.insert(at, bits)
        return False

    def _insert_dense(self, data: Sequence) -> bool:
        p = self.field.characteristic
        if p:
            v = [c % p for c in data]
            for pivot, row in zip(self.pivots, self.rows):
                c = v[pivot]
                if c:
                    v = [(a - c * b) % p for a, b in zip(v, row)]
        else:
            v = list(data)
            for pivot, row in zip(self.pivots, self.rows):
                c = v[pivot]
                if c:
                    v = [a - c * b for a, b in zip(v, row)]
        lead = next((i for i, c in enumerate(v) if c), None)
        if lead is None:
            return True
        if p:
            inv = pow(v[lead], -1, p)
            v = [c * inv % p for c in v]
        else:
            lc = Fraction(v[lead])
            v = [Fraction(c) / lc for c in v]
        for idx, row in enumerate(self.rows):
            c = row[lead]
            if c:
                if p:
                    self.rows[idx] = [(a - c * b) % p for a, b in zip(row, v)]
                else:
                    self.rows[idx] = [a - c * b for a, b in zip(row, v)]
        at = bisect_left(self.pivots, lead)
        self.pivots.insert(at, lead)
        self.rows.insert(at, v)
        return False

    def _absorb_internal_row(self, row) -> None:
        # `row` uses this basis's internal representation already.
        if self.field.characteristic == 2:
            self._insert_bits(row)
        else:
            self._insert_dense(row)


def _pack_bits(data: Sequence[int]) -> int:
    bits = 0
    for i, c in enumerate(data):
        if c % 2:
            bits |= 1 << i
    return bits


def rank_streaming(
    columns: Iterable[ModuleVector],
    field: FieldSpec,
    early_stop: int | None = None,
) -> tuple[int, bool]:
    """Rank of the span of a column stream over a prime field.

    Returns (rank, truncated); truncated is True when early_stop was hit.
    Once the basis fills the ambient space the rest of the stream is
    skipped, which is exact: no further vector can raise the rank.
    """
    if field.characteristic == 0:
        raise ValueError("rank_streaming needs a prime field; use rank_rational")
    basis: EchelonBasis | None = None
    for column in columns:
        if basis is None:
            basis = EchelonBasis(field, len(column.coeffs))
        basis.insert(column)
        if early_stop is not None and basis.rank >= early_stop:
            return basis.rank, True
        if basis.rank == basis.length:
            break
    return (basis.rank if basis is not None else 0), False


def _random_probe_prime(rng: random.Random) -> int:
    """A prime in [2**30, 2**31), drawn from rng."""
    while True:
        n = rng.randrange(1 << 30, 1 << 31) | 1
        while n < 1 << 31:
            if is_prime(n):
                return n
            n += 2
        # fell off the top of the window (needs a ~200-long prime gap); redraw


def rank_rational(
    columns: Sequence[ModuleVector], rng: random.Random | None = None
) -> int:
    """Rank over the rationals of a sequence of integer columns.

    The rank is probed modulo a random 31-bit prime; it can only drop
    below the rational rank if that prime divides a nonzero determinantal
    divisor.  When both dimensions are small the probe is confirmed by
    fraction-free integer elimination, and any disagreement raises
    InternalCheckError because it can only mean an arithmetic bug.
    """
    cols = list(columns)
    if not cols:
        return 0
    length = len(cols[0].coeffs)
    for c in cols:
        if c.field.characteristic != 0:
            raise ValueError("rank_rational expects characteristic-0 columns")
        if len(c.coeffs) != length:
            raise ValueError("column length mismatch")
    if rng is None:
        rng = random.Random(DEFAULT_SEED)
    probe = FieldSpec(_random_probe_prime(rng))
    basis = EchelonBasis(probe, length)
    for col in cols:
        basis.insert(col.coeffs)
        if basis.rank == length:
            break
    rank = basis.rank
    if length <= CONFIRM_DIM_CAP and len(cols) <= CONFIRM_DIM_CAP:
        rows = [[col.coeffs[r] for col in cols] for r in range(length)]
        exact = _fraction_free_rank(rows)
        if exact != rank:
            raise InternalCheckError(
                f"rank mod {probe.characteristic} gave {rank}, "
                f"integer elimination gave {exact}"
            )
    return rank


def _fraction_free_rank(rows: Sequence[Sequence[int]]) -> int:
    """Rank over Q by division-free integer elimination (exact)."""
    mat = [list(r) for r in rows]
    n_rows = len(mat)
    n_cols = len(mat[0]) if mat else 0
    rank = 0
    prev = 1
    for col in range(n_cols):
        pivot_row = next((i for i in range(rank, n_rows) if mat[i][col]), None)
        if pivot_row is None:
            continue
        mat[rank], mat[pivot_row] = mat[pivot_row], mat[rank]
        pivot = mat[rank][col]
        top = mat[rank]
        for i in range(rank + 1, n_rows):
            row = mat[i]
            f = row[col]
            for j in range(col, n_cols):
                q, rem = divmod(pivot * row[j] - f * top[j], prev)
                if rem:
                    raise InternalCheckError("fraction-free elimination lost exactness")
                row[j] = q
        prev = pivot
        rank += 1
        if rank == n_rows:
            break
    return rank


def sum_dim(a: EchelonBasis, b: EchelonBasis) -> int:
    """Dimension of A + B.  Neither basis is modified."""
    if a.field != b.field or a.length != b.length:
        raise ValueError("bases live in different ambient spaces")
    joined = a.copy()
    for row in b.rows:
        if a.field.characteristic == 2:
            joined._absorb_internal_row(row)
        else:
            joined._absorb_internal_row(list(row))
    return joined.rank


def intersect_dim(a: EchelonBasis, b: EchelonBasis) -> int:
    """Dimension of A intersect B, via dim A + dim B - dim(A + B)."""
    return a.rank + b.rank - sum_dim(a, b)


@dataclass(frozen=True)
class SNFResult:
    """Diagonal of the Smith normal form plus the rank over the rationals.

    Entries are nonnegative, each nonzero entry divides the next, and for
    every prime p the count of entries not divisible by p is the p-rank.
    """

    diagonal: tuple[int, ...]
    rank: int

    def count_not_divisible(self, p: int) -> int:
        return sum(1 for d in self.diagonal if d % p)


def smith_normal_form(
    matrix: Sequence[Sequence[int]], size_cap: int = SNF_SIZE_CAP
) -> SNFResult:
    """Elementary divisors of a dense integer matrix.

    Repeated smallest-magnitude pivoting over exact big integers; dense
    and quadratic-ish, hence the size cap.  The divisibility chain is
    enforced by pulling any offending entry into the pivot row before the
    pivot is frozen.
    """
    a = [list(row) for row in matrix]
    n_rows = len(a)
    n_cols = len(a[0]) if a else 0
    if any(len(row) != n_cols for row in a):
        raise ValueError("matrix rows have unequal lengths")
    if n_rows > size_cap or n_cols > size_cap:
        raise SizeCapError(f"matrix is {n_rows}x{n_cols}; SNF cap is {size_cap}")
    diag: list[int] = []
    t = 0
    limit = min(n_rows, n_cols)
    while t < limit:
        loc = _smallest_nonzero(a, t, n_rows, n_cols)
        if loc is None:
            break
        _move_to_pivot(a, t, loc)
        while True:
            if a[t][t] < 0:
                a[t] = [-x for x in a[t]]
            pivot = a[t][t]
            reduced_something = False
            for i in range(t + 1, n_rows):
                x = a[i][t]
                if x:
                    q = x // pivot
                    if q:
                        row_t = a[t]
                        a[i] = [y - q * z for y, z in zip(a[i], row_t)]
                    if a[i][t]:
                        reduced_something = True
            for j in range(t + 1, n_cols):
                x = a[t][j]
                if x:
                    q = x // pivot
                    if q:
                        for row in a:
                            row[j] -= q * row[t]
                    if a[t][j]:
                        reduced_something = True
            if reduced_something:
                loc = _smallest_nonzero(a, t, n_rows, n_cols)
                _move_to_pivot(a, t, loc)
                continue
            offender = _divisibility_offender(a, t, pivot, n_rows, n_cols)
            if offender is None:
                break
            # Fold the offending row into the pivot row; the next clearing
            # pass then shrinks the pivot.
            a[t] = [y + z for y, z in zip(a[t], a[offender])]
        diag.append(a[t][t])
        t += 1
    diagonal = diag + [0] * (limit - len(diag))
    for d, e in zip(diagonal, diagonal[1:]):
        if e and (d == 0 or e % d):
            raise InternalCheckError("divisibility chain violated in SNF")
    return SNFResult(tuple(diagonal), len(diag))


def _smallest_nonzero(a, t, n_rows, n_cols):
    best = None
    best_val = None
    for i in range(t, n_rows):
        row = a[i]
        for j in range(t, n_cols):
            x = row[j]
            if x:
                x = abs(x)
                if best_val is None or x < best_val:
                    best = (i, j)
                    best_val = x
                    if x == 1:
                        return best
    return best


def _move_to_pivot(a, t, loc):
    i, j = loc
    if i != t:
        a[t], a[i] = a[i], a[t]
    if j != t:
        for row in a:
            row[t], row[j] = row[j], row[t]


def _divisibility_offender(a, t, pivot, n_rows, n_cols):
    if pivot == 1:
        return None
    for i in range(t + 1, n_rows):
        row = a[i]
        for j in range(t + 1, n_cols):
            if row[j] % pivot:
                return i
    return None


@dataclass(frozen=True)
class TripletMatrix:
    """Matrix parsed from the sparse triplet text format.

    The format is: a header line "rows cols M" (M = modulus, 0 for plain
    integers), then one "r c v" line per nonzero with 1-based r and c,
    terminated by "0 0 0".  Entries here are stored 0-based.
    """

    n_rows: int
    n_cols: int
    modulus: int
    entries: tuple[tuple[int, int, int], ...]

    def to_dense(self) -> list[list[int]]:
        dense = [[0] * self.n_cols for _ in range(self.n_rows)]
        for r, c, v in self.entries:
            dense[r][c] += v
        return dense


def write_triplet_matrix(
    stream: IO[str],
    n_rows: int,
    n_cols: int,
    modulus: int,
    entries: Iterable[tuple[int, int, int]],
) -> None:
    """Write a matrix in the sparse triplet text format (entries 0-based
    in, 1-based on the wire)."""
    stream.write(f"{n_rows} {n_cols} {modulus}\n")
    for r, c, v in entries:
        stream.write(f"{r + 1} {c + 1} {v}\n")
    stream.write("0 0 0\n")


def read_triplet_matrix(stream: IO[str]) -> TripletMatrix:
    """Parse the sparse triplet text format; see TripletMatrix."""
    header = stream.readline().split()
    if len(header) != 3:
        raise ValueError("triplet header must be 'rows cols modulus'")
    n_rows, n_cols, modulus = (int(x) for x in header)
    if n_rows < 0 or n_cols < 0 or modulus < 0:
        raise ValueError("triplet header fields must be nonnegative")
    entries: list[tuple[int, int, int]] = []
    for line in stream:
        parts = line.split()
        if not parts:
            continue
        if len(parts) != 3:
            raise ValueError(f"malformed triplet line: {line!r}")
        r, c, v = (int(x) for x in parts)
        if (r, c, v) == (0, 0, 0):
            return TripletMatrix(n_rows, n_cols, modulus, tuple(entries))
        if not (1 <= r <= n_rows and 1 <= c <= n_cols):
            raise ValueError(f"triplet entry ({r}, {c}) outside {n_rows}x{n_cols}")
        entries.append((r - 1, c - 1, v))
    raise ValueError("missing '0 0 0' terminator")
