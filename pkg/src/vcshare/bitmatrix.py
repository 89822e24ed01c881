"""Dense Boolean matrices and column permutations.

Everything here is immutable and pure; matrices are tiny (at most a few
hundred columns), so values are plain tuples of 0/1 ints.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .errors import CapacityError

PERMUTATION_CAP = 8  # 8! = 40320; larger factorials are rejected, not endured

Bits = tuple[int, ...]


@dataclass(frozen=True)
class BitMatrix:
    """Row-major dense 0/1 matrix."""

    rows: int
    cols: int
    bits: Bits

    def __post_init__(self):
        if self.rows < 1 or self.cols < 1:
            raise ValueError(f"matrix dimensions must be positive, got {self.rows}x{self.cols}")
        if len(self.bits) != self.rows * self.cols:
            raise ValueError(f"expected {self.rows * self.cols} bits, got {len(self.bits)}")
        if any(b not in (0, 1) for b in self.bits):
            raise ValueError("matrix entries must be 0 or 1")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> "BitMatrix":
        if not rows:
            raise ValueError("at least one row required")
        width = len(rows[0])
        if any(len(r) != width for r in rows):
            raise ValueError("ragged rows")
        return cls(len(rows), width, tuple(b for r in rows for b in r))

    def row(self, i: int) -> Bits:
        if not 0 <= i < self.rows:
            raise ValueError(f"row index {i} out of range for {self.rows} rows")
        return self.bits[i * self.cols : (i + 1) * self.cols]

    def column(self, j: int) -> Bits:
        if not 0 <= j < self.cols:
            raise ValueError(f"column index {j} out of range for {self.cols} columns")
        return self.bits[j :: self.cols]

    def columns(self) -> tuple[Bits, ...]:
        return tuple(self.column(j) for j in range(self.cols))

    def __str__(self) -> str:
        return "\n".join("".join(map(str, self.row(i))) for i in range(self.rows))


@dataclass(frozen=True)
class ColumnPermutation:
    """Bijection on column indices; source column j lands at position mapping[j]."""

    mapping: tuple[int, ...]

    def __post_init__(self):
        if sorted(self.mapping) != list(range(len(self.mapping))):
            raise ValueError(f"not a bijection on 0..{len(self.mapping) - 1}: {self.mapping}")

    @classmethod
    def identity(cls, m: int) -> "ColumnPermutation":
        return cls(tuple(range(m)))

    def __len__(self) -> int:
        return len(self.mapping)

    def inverse(self) -> "ColumnPermutation":
        inv = [0] * len(self.mapping)
        for j, p in enumerate(self.mapping):
            inv[p] = j
        return ColumnPermutation(tuple(inv))

    def then(self, other: "ColumnPermutation") -> "ColumnPermutation":
        """Composition: apply self, then other."""
        if len(other) != len(self):
            raise ValueError("size mismatch")
        return ColumnPermutation(tuple(other.mapping[p] for p in self.mapping))


def hamming_weight(v: Iterable[int]) -> int:
    """Number of 1 entries in a bit sequence."""
    return sum(v)


def or_rows(m: BitMatrix, row_set: Iterable[int]) -> Bits:
    """Bitwise OR of the selected rows (the stacked subpixel pattern)."""
    indices = sorted(set(row_set))
    if not indices:
        raise ValueError("row_set must be non-empty")
    if indices[0] < 0 or indices[-1] >= m.rows:
        raise ValueError(f"row indices {indices} out of range for {m.rows} rows")
    acc = list(m.row(indices[0]))
    for i in indices[1:]:
        base = i * m.cols
        for j in range(m.cols):
            if m.bits[base + j]:
                acc[j] = 1
    return tuple(acc)


def complement(m: BitMatrix) -> BitMatrix:
    """Flip every bit."""
    return BitMatrix(m.rows, m.cols, tuple(1 - b for b in m.bits))


def permute_columns(m: BitMatrix, p: ColumnPermutation) -> BitMatrix:
    """Rearrange columns: output column p.mapping[j] equals input column j."""
    if len(p) != m.cols:
        raise ValueError(f"permutation of size {len(p)} applied to {m.cols} columns")
    out = [0] * (m.rows * m.cols)
    for i in range(m.rows):
        base = i * m.cols
        for j, target in enumerate(p.mapping):
            out[base + target] = m.bits[base + j]
    return BitMatrix(m.rows, m.cols, tuple(out))


def take_rows(m: BitMatrix, indices: Sequence[int]) -> BitMatrix:
    """Submatrix restricted to the given rows, in the given order."""
    return BitMatrix.from_rows([m.row(i) for i in indices])


def enumerate_permutations(m: int, cap: int = PERMUTATION_CAP) -> Iterator[ColumnPermutation]:
    """Yield every permutation of size m exactly once (m! total)."""
    if m < 1:
        raise ValueError("permutation size must be at least 1")
    if m > cap:
        raise CapacityError(f"refusing to enumerate {m}! permutations (cap is {cap}!)")
    return (ColumnPermutation(p) for p in itertools.permutations(range(m)))


def random_permutation(m: int, rng: random.Random) -> ColumnPermutation:
    """Uniformly random permutation of size m drawn from rng."""
    mapping = list(range(m))
    rng.shuffle(mapping)
    return ColumnPermutation(tuple(mapping))


def or_weight_extremes(m: BitMatrix, q: int) -> tuple[int, int]:
    """(min, max) Hamming weight of the OR over all q-row subsets."""
    if not 1 <= q <= m.rows:
        raise ValueError(f"subset size {q} out of range for {m.rows} rows")
    lo, hi = m.cols + 1, -1
    for subset in itertools.combinations(range(m.rows), q):
        w = hamming_weight(or_rows(m, subset))
        lo = min(lo, w)
        hi = max(hi, w)
    return lo, hi


__all__ = [
    "Bits",
    "BitMatrix",
    "ColumnPermutation",
    "hamming_weight",
    "or_rows",
    "complement",
    "permute_columns",
    "take_rows",
    "enumerate_permutations",
    "random_permutation",
    "or_weight_extremes",
    "PERMUTATION_CAP",
]
