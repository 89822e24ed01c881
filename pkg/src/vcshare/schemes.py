"""Scheme constructions: (3,n), (k,k), and the composed (k,n).

A scheme is represented by its two canonical matrices; the share
collections are the column permutations of those and are never
materialized. The decision weight d and contrast alpha are always
recomputed from the matrices by enumerating k-row ORs, never trusted
from a formula.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Literal, Mapping

from .bitmatrix import BitMatrix, complement, or_weight_extremes
from .errors import CapacityError, DegenerateFamilyError

K_OF_K_CAP = 6  # m = 2^(k-1) = 32 at the cap; beyond that audits stop being desk-scale
EXHAUSTIVE_FAMILY_CAP = 10**6  # bound on k^n


@dataclass(frozen=True)
class SchemeBasis:
    """A validated (k,n) visual secret sharing basis.

    ``white_canonical`` / ``black_canonical`` are the n x m matrices whose
    column permutations form the white and black share collections. ``d``
    is the black decision weight, ``alpha`` the relative contrast, and
    ``r`` the size of each collection (m! column permutations).
    """

    n: int
    k: int
    m: int
    white_canonical: BitMatrix
    black_canonical: BitMatrix
    d: int
    alpha: Fraction
    r: int

    def __post_init__(self):
        if not 2 <= self.k <= self.n:
            raise ValueError(f"need 2 <= k <= n, got k={self.k}, n={self.n}")
        for name, mat in (("white", self.white_canonical), ("black", self.black_canonical)):
            if (mat.rows, mat.cols) != (self.n, self.m):
                raise ValueError(f"{name} canonical is {mat.rows}x{mat.cols}, expected {self.n}x{self.m}")
        if not 1 <= self.d <= self.m:
            raise ValueError(f"d={self.d} outside [1, {self.m}]")
        gap = self.alpha * self.m
        if gap.denominator != 1 or gap <= 0:
            raise ValueError(f"alpha*m must be a positive integer, got {gap}")
        black_min, _ = or_weight_extremes(self.black_canonical, self.k)
        _, white_max = or_weight_extremes(self.white_canonical, self.k)
        if black_min < self.d:
            raise ValueError(f"some black k-stack weighs {black_min} < d={self.d}")
        if white_max > self.d - gap:
            raise ValueError(f"some white k-stack weighs {white_max} > d - alpha*m = {self.d - gap}")

    def canonical(self, color: int) -> BitMatrix:
        """Canonical matrix for a pixel color (0 = white, 1 = black)."""
        if color not in (0, 1):
            raise ValueError(f"pixel color must be 0 or 1, got {color}")
        return self.black_canonical if color else self.white_canonical


def _derive_d_alpha(white: BitMatrix, black: BitMatrix, k: int) -> tuple[int, Fraction]:
    # d = weakest black k-stack; alpha = its margin over the strongest white k-stack
    black_min, _ = or_weight_extremes(black, k)
    _, white_max = or_weight_extremes(white, k)
    return black_min, Fraction(black_min - white_max, white.cols)


def build_three_of_n(n: int) -> SchemeBasis:
    """(3,n) scheme: black canonical is all-ones n x (n-2) beside the identity.

    Pixel expansion is 2n-2; the white canonical is the complement.
    """
    if n < 3:
        raise ValueError(f"need n >= 3, got {n}")
    m = 2 * n - 2
    rows = [[1] * (n - 2) + [1 if j == i else 0 for j in range(n)] for i in range(n)]
    black = BitMatrix.from_rows(rows)
    white = complement(black)
    d, alpha = _derive_d_alpha(white, black, 3)
    return SchemeBasis(n=n, k=3, m=m, white_canonical=white, black_canonical=black,
                       d=d, alpha=alpha, r=factorial(m))


def build_k_of_k(k: int, cap: int = K_OF_K_CAP) -> SchemeBasis:
    """(k,k) scheme from subset parity: white columns are the even-cardinality
    subsets of the participants, black columns the odd ones.

    Columns are ordered by increasing characteristic mask (participant 0 as
    the most significant bit), which makes the construction reproducible.
    """
    if k < 2:
        raise ValueError(f"need k >= 2, got {k}")
    if k > cap:
        raise CapacityError(f"k={k} exceeds the (k,k) construction cap of {cap}")
    m = 2 ** (k - 1)
    even = [mask for mask in range(2**k) if bin(mask).count("1") % 2 == 0]
    odd = [mask for mask in range(2**k) if bin(mask).count("1") % 2 == 1]

    def from_masks(masks: list[int]) -> BitMatrix:
        rows = [[(mask >> (k - 1 - i)) & 1 for mask in masks] for i in range(k)]
        return BitMatrix.from_rows(rows)

    white, black = from_masks(even), from_masks(odd)
    d, alpha = _derive_d_alpha(white, black, k)
    return SchemeBasis(n=k, k=k, m=m, white_canonical=white, black_canonical=black,
                       d=d, alpha=alpha, r=factorial(m))


@dataclass(frozen=True)
class FunctionFamily:
    """A collection of maps {0..n-1} -> {0..k-1} used to lift (k,k) to (k,n)."""

    n: int
    k: int
    functions: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if not self.functions:
            raise ValueError("family must contain at least one function")
        for h in self.functions:
            if len(h) != self.n or any(not 0 <= v < self.k for v in h):
                raise ValueError(f"not a total map {{0..{self.n - 1}}} -> {{0..{self.k - 1}}}: {h}")

    @property
    def size(self) -> int:
        return len(self.functions)


def build_function_family(
    n: int,
    k: int,
    mode: Literal["exhaustive", "sampled"] = "exhaustive",
    size: int | None = None,
    seed: int | None = None,
    cap: int = EXHAUSTIVE_FAMILY_CAP,
) -> FunctionFamily:
    """All k^n maps (exhaustive) or ``size`` uniform iid maps (sampled, seeded)."""
    if k > n:
        raise ValueError(f"need k <= n, got k={k}, n={n}")
    if mode == "exhaustive":
        if k**n > cap:
            raise CapacityError(f"{k}^{n} = {k**n} functions exceeds the exhaustive cap of {cap}")
        functions = tuple(itertools.product(range(k), repeat=n))
    elif mode == "sampled":
        if size is None or size < 1:
            raise ValueError("sampled mode needs a positive size")
        if seed is None:
            raise ValueError("sampled mode needs an explicit seed")
        rng = random.Random(seed)
        functions = tuple(tuple(rng.randrange(k) for _ in range(n)) for _ in range(size))
    else:
        raise ValueError(f"unknown mode {mode!r}")
    return FunctionFamily(n=n, k=k, functions=functions)


@dataclass(frozen=True)
class FamilyAnalysis:
    """Per-subset distributions of the number of distinct values a random
    family member takes on each k-subset of participants.

    ``betas[B][q-1]`` is the probability of exactly q distinct values on B.
    """

    k: int
    betas: Mapping[tuple[int, ...], tuple[Fraction, ...]]
    min_beta_k: Fraction


def analyze_family(family: FunctionFamily, subset_size: int) -> FamilyAnalysis:
    """Exact distinct-value distributions over every subset of the given size."""
    if subset_size != family.k:
        raise ValueError(f"subset size must equal the range size {family.k}, got {subset_size}")
    k, total = family.k, family.size
    betas: dict[tuple[int, ...], tuple[Fraction, ...]] = {}
    for subset in itertools.combinations(range(family.n), subset_size):
        counts = [0] * k
        for h in family.functions:
            distinct = len({h[i] for i in subset})
            counts[distinct - 1] += 1
        betas[subset] = tuple(Fraction(c, total) for c in counts)
    min_beta_k = min(dist[k - 1] for dist in betas.values())
    return FamilyAnalysis(k=k, betas=betas, min_beta_k=min_beta_k)


def build_k_of_n(base: SchemeBasis, n: int, family: FunctionFamily) -> SchemeBasis:
    """Lift a (k,k) base scheme to (k,n) through a function family.

    Participant i's composed row is the concatenation, one block per family
    member h, of base row h(i). Blocks are laid out family-major, so the
    composed pixel expansion is base.m * family.size. Randomizing a pixel
    code is still a single uniform column permutation of the result: the
    per-member choice of base matrix followed by a global shuffle induces
    exactly that distribution.
    """
    if base.n != base.k:
        raise ValueError(f"base must be a (k,k) scheme, got ({base.k},{base.n})")
    if family.n != n:
        raise ValueError(f"family domain {family.n} does not match n={n}")
    if family.k != base.k:
        raise ValueError(f"family range {family.k} does not match base k={base.k}")
    if n < base.k:
        raise ValueError(f"need n >= k, got n={n}, k={base.k}")

    analysis = analyze_family(family, base.k)
    if analysis.min_beta_k == 0:
        bad = next(B for B, dist in analysis.betas.items() if dist[base.k - 1] == 0)
        raise DegenerateFamilyError(
            f"no family member takes {base.k} distinct values on subset {bad}; "
            "that subset of participants could never recover the secret"
        )

    def compose(canonical: BitMatrix) -> BitMatrix:
        rows = []
        for i in range(n):
            row: list[int] = []
            for h in family.functions:
                row.extend(canonical.row(h[i]))
            rows.append(row)
        return BitMatrix.from_rows(rows)

    white, black = compose(base.white_canonical), compose(base.black_canonical)
    black_min, _ = or_weight_extremes(black, base.k)
    _, white_max = or_weight_extremes(white, base.k)
    if black_min <= white_max:
        raise DegenerateFamilyError(
            f"family is too skewed: weakest black stack ({black_min}) does not beat "
            f"the strongest white stack ({white_max}), so no uniform threshold exists"
        )
    m = base.m * family.size
    return SchemeBasis(n=n, k=base.k, m=m, white_canonical=white, black_canonical=black,
                       d=black_min, alpha=Fraction(black_min - white_max, m),
                       r=base.r ** family.size)


__all__ = [
    "SchemeBasis",
    "FunctionFamily",
    "FamilyAnalysis",
    "build_three_of_n",
    "build_k_of_k",
    "build_function_family",
    "analyze_family",
    "build_k_of_n",
    "K_OF_K_CAP",
    "EXHAUSTIVE_FAMILY_CAP",
]
