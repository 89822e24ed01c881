"""Exhaustive verification of scheme contrast and security.

Contrast is checked by enumerating the OR weight of every row subset of
both canonicals (weights are invariant under column permutation, so the
canonicals stand in for the whole collections). Security is checked as
exact multiset equality of the restricted matrices over the permutation
group, either by full enumeration at small pixel expansion or through the
column-multiset canonical form, which is equivalent: permuting columns
cannot change the multiset of restricted columns, and two restrictions
with equal column multisets generate identical permutation multisets.
"""

from __future__ import annotations

import dataclasses
import itertools
import random
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Literal, Mapping

from .bitmatrix import PERMUTATION_CAP, BitMatrix, hamming_weight, or_rows, or_weight_extremes
from .codec import encode_pixel
from .errors import CapacityError
from .schemes import FunctionFamily, SchemeBasis, build_k_of_n


@dataclass(frozen=True)
class SubsetWeights:
    """OR-weight extremes over all subsets of one size."""

    q: int
    white_min: int
    white_max: int
    black_min: int
    black_max: int


@dataclass(frozen=True)
class ContrastReport:
    by_size: tuple[SubsetWeights, ...]
    derived_d: int
    derived_alpha: Fraction
    stored_match: bool
    passed: bool


def contrast_audit(basis: SchemeBasis) -> ContrastReport:
    """Recompute d and alpha from scratch and compare with the stored values."""
    rows = []
    for q in range(1, basis.n + 1):
        w_lo, w_hi = or_weight_extremes(basis.white_canonical, q)
        b_lo, b_hi = or_weight_extremes(basis.black_canonical, q)
        rows.append(SubsetWeights(q=q, white_min=w_lo, white_max=w_hi,
                                  black_min=b_lo, black_max=b_hi))
    at_k = rows[basis.k - 1]
    derived_d = at_k.black_min
    derived_alpha = Fraction(at_k.black_min - at_k.white_max, basis.m)
    stored_match = derived_d == basis.d and derived_alpha == basis.alpha
    passed = (derived_alpha > 0
              and at_k.black_min >= derived_d
              and at_k.white_max <= derived_d - derived_alpha * basis.m
              and stored_match)
    return ContrastReport(by_size=tuple(rows), derived_d=derived_d,
                          derived_alpha=derived_alpha, stored_match=stored_match,
                          passed=passed)


Method = Literal["auto", "full", "columns"]


@dataclass(frozen=True)
class SecurityCheck:
    """Multiset-equality result for all row subsets of one size."""

    q: int
    method: str
    subsets_checked: int
    matrices_per_side: int
    passed: bool


@dataclass(frozen=True)
class SecurityReport:
    checks: tuple[SecurityCheck, ...]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)


def _column_codes(matrix: BitMatrix, rows: tuple[int, ...]) -> list[int]:
    # each restricted column packed into an int, row order preserved
    codes = []
    for j in range(matrix.cols):
        code = 0
        for i in rows:
            code = (code << 1) | matrix.bits[i * matrix.cols + j]
        codes.append(code)
    return codes


def security_audit(basis: SchemeBasis, q: int, method: Method = "auto",
                   cap: int = PERMUTATION_CAP) -> SecurityCheck:
    """Compare the white and black q-row restriction multisets exactly.

    ``full`` enumerates all m! column permutations; ``columns`` compares the
    column multisets of the restrictions, which decides the same question
    without the factorial walk. ``auto`` picks full enumeration when m is
    within the cap.
    """
    if not 1 <= q < basis.k:
        raise ValueError(f"security is checked below the threshold: need 1 <= q < {basis.k}, got {q}")
    if method == "auto":
        method = "full" if basis.m <= cap else "columns"
    if method == "full" and basis.m > cap:
        raise CapacityError(f"full enumeration of {basis.m}! permutations exceeds the cap of {cap}!")

    subsets = list(itertools.combinations(range(basis.n), q))
    per_side = 0
    passed = True
    for subset in subsets:
        white_cols = _column_codes(basis.white_canonical, subset)
        black_cols = _column_codes(basis.black_canonical, subset)
        if method == "columns":
            per_side = basis.m
            if Counter(white_cols) != Counter(black_cols):
                passed = False
                break
        else:
            white_seen: Counter = Counter()
            black_seen: Counter = Counter()
            for perm in itertools.permutations(range(basis.m)):
                white_seen[tuple(white_cols[j] for j in perm)] += 1
                black_seen[tuple(black_cols[j] for j in perm)] += 1
            per_side = sum(white_seen.values())
            if white_seen != black_seen:
                passed = False
                break
    return SecurityCheck(q=q, method=method, subsets_checked=len(subsets),
                         matrices_per_side=per_side, passed=passed)


def security_report(basis: SchemeBasis, method: Method = "auto",
                    cap: int = PERMUTATION_CAP) -> SecurityReport:
    """Run security_audit for every sub-threshold subset size."""
    return SecurityReport(checks=tuple(security_audit(basis, q, method=method, cap=cap)
                                       for q in range(1, basis.k)))


def corrupted_copy(basis: SchemeBasis) -> SchemeBasis:
    """Negative control: clear the first set bit of the white canonical.

    The result still satisfies the contrast invariants (white OR weights can
    only shrink) but must be caught by any honest security audit, so a
    vacuously passing checker is detected.
    """
    white = basis.white_canonical
    hot = white.bits.index(1)
    bits = white.bits[:hot] + (0,) + white.bits[hot + 1 :]
    flipped = BitMatrix(white.rows, white.cols, bits)
    return dataclasses.replace(basis, white_canonical=flipped)


@dataclass(frozen=True)
class ComposedSecurityReport:
    """Sub-threshold stacking analysis of a composed (k,n) scheme.

    For q below the threshold every collection member yields the same q-row
    OR weight, equal for white and black; ``expected_by_subset`` holds that
    weight per subset, cross-checked against the distinct-value
    distribution of the function family.
    """

    q: int
    f_values: tuple[int, ...]
    expected_by_subset: Mapping[tuple[int, ...], int]
    colors_match: bool
    formula_matches: bool
    trials_run: int
    trials_passed: int

    @property
    def passed(self) -> bool:
        return self.colors_match and self.formula_matches and self.trials_passed == self.trials_run


def _uniform_or_weight(matrix: BitMatrix, q: int) -> int:
    lo, hi = or_weight_extremes(matrix, q)
    if lo != hi:
        raise ValueError(f"{q}-row OR weight is not uniform across subsets ({lo}..{hi})")
    return lo


def composed_security_audit(base: SchemeBasis, family: FunctionFamily, q: int,
                            trials: int = 0, seed: int = 0) -> ComposedSecurityReport:
    """Verify that stacking q < k composed shares reveals nothing by weight.

    Exact part: for every q-subset B, sum f(|h(B)|) over the family for both
    colors and check the totals agree and equal the family's distinct-value
    distribution contracted against f. Optional trials additionally drive
    the real encoder and check each sampled code stacks to the same weight.
    """
    if not 1 <= q < base.k:
        raise ValueError(f"need 1 <= q < {base.k}, got {q}")
    if base.n != base.k:
        raise ValueError(f"base must be a (k,k) scheme, got ({base.k},{base.n})")

    # f(q') = OR weight of q' distinct base rows; must not depend on the color
    f_values = []
    for q_prime in range(1, q + 1):
        white_f = _uniform_or_weight(base.white_canonical, q_prime)
        black_f = _uniform_or_weight(base.black_canonical, q_prime)
        if white_f != black_f:
            raise ValueError(f"base scheme leaks at {q_prime} rows: {white_f} != {black_f}")
        f_values.append(white_f)

    expected: dict[tuple[int, ...], int] = {}
    colors_match = True
    formula_matches = True
    for subset in itertools.combinations(range(family.n), q):
        white_total = 0
        black_total = 0
        distinct_counts = Counter()
        for h in family.functions:
            rows = sorted({h[i] for i in subset})
            distinct_counts[len(rows)] += 1
            white_total += hamming_weight(or_rows(base.white_canonical, rows))
            black_total += hamming_weight(or_rows(base.black_canonical, rows))
        if white_total != black_total:
            colors_match = False
        by_distribution = sum(distinct_counts[d] * f_values[d - 1] for d in distinct_counts)
        if by_distribution != white_total:
            formula_matches = False
        expected[subset] = white_total

    trials_passed = 0
    if trials > 0:
        composed = build_k_of_n(base, family.n, family)
        rng = random.Random(seed)
        subsets = list(expected)
        for _ in range(trials):
            subset = subsets[rng.randrange(len(subsets))]
            color = rng.randrange(2)
            code = encode_pixel(composed, color, rng)
            weight = hamming_weight(or_rows(code.matrix, subset))
            if weight == expected[subset]:
                trials_passed += 1
    return ComposedSecurityReport(q=q, f_values=tuple(f_values), expected_by_subset=expected,
                                  colors_match=colors_match, formula_matches=formula_matches,
                                  trials_run=max(trials, 0), trials_passed=trials_passed)


__all__ = [
    "SubsetWeights",
    "ContrastReport",
    "SecurityCheck",
    "SecurityReport",
    "ComposedSecurityReport",
    "contrast_audit",
    "security_audit",
    "security_report",
    "corrupted_copy",
    "composed_security_audit",
]
