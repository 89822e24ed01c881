import itertools
from fractions import Fraction

import pytest

from vcshare.bitmatrix import hamming_weight, or_rows
from vcshare.errors import CapacityError, DegenerateFamilyError
from vcshare.schemes import (
    FunctionFamily,
    analyze_family,
    build_function_family,
    build_k_of_k,
    build_k_of_n,
    build_three_of_n,
)

from reference import (
    KK3_BLACK,
    KK3_WHITE,
    KK4_BLACK,
    KK4_WHITE,
    THREE_FIVE_BLACK,
    THREE_FIVE_WHITE,
    oracle_subset_weights,
    rows,
)


class TestThreeOfN:
    def test_matches_reference_matrices(self):
        basis = build_three_of_n(5)
        assert tuple(basis.black_canonical.row(i) for i in range(5)) == rows(THREE_FIVE_BLACK)
        assert tuple(basis.white_canonical.row(i) for i in range(5)) == rows(THREE_FIVE_WHITE)
        assert basis.m == 8

    def test_derived_contrast_n5(self):
        # oracle: every white triplet weighs 5, every black triplet 6
        assert oracle_subset_weights(THREE_FIVE_WHITE, 3) == {5}
        assert oracle_subset_weights(THREE_FIVE_BLACK, 3) == {6}
        basis = build_three_of_n(5)
        assert basis.d == 6
        assert basis.alpha == Fraction(1, 8)

    def test_n3_shape(self):
        basis = build_three_of_n(3)
        assert basis.m == 4
        assert basis.black_canonical.row(0) == (1, 1, 0, 0)
        assert basis.black_canonical.row(1) == (1, 0, 1, 0)
        assert basis.black_canonical.row(2) == (1, 0, 0, 1)

    @pytest.mark.parametrize("n", range(3, 9))
    def test_row_weights(self, n):
        basis = build_three_of_n(n)
        for i in range(n):
            assert hamming_weight(basis.white_canonical.row(i)) == n - 1
            assert hamming_weight(basis.black_canonical.row(i)) == n - 1

    @pytest.mark.parametrize("n", range(3, 9))
    def test_triplet_weights(self, n):
        basis = build_three_of_n(n)
        for triple in itertools.combinations(range(n), 3):
            assert hamming_weight(or_rows(basis.white_canonical, triple)) == n
            assert hamming_weight(or_rows(basis.black_canonical, triple)) == n + 1

    @pytest.mark.parametrize("n", range(3, 9))
    def test_pair_structure(self, n):
        # any two shares: n-2 common black subpixels, one individual from each
        basis = build_three_of_n(n)
        for canonical in (basis.black_canonical, basis.white_canonical):
            for i, j in itertools.combinations(range(n), 2):
                a, b = canonical.row(i), canonical.row(j)
                common = sum(1 for x, y in zip(a, b) if x and y)
                only_a = sum(1 for x, y in zip(a, b) if x and not y)
                only_b = sum(1 for x, y in zip(a, b) if y and not x)
                assert common == n - 2
                assert only_a == 1 and only_b == 1

    @pytest.mark.parametrize("n", range(3, 9))
    def test_alpha_formula(self, n):
        basis = build_three_of_n(n)
        assert basis.d == n + 1
        assert basis.alpha == Fraction(1, 2 * n - 2)
        assert basis.r == __import__("math").factorial(2 * n - 2)

    def test_rejects_small_n(self):
        with pytest.raises(ValueError):
            build_three_of_n(2)


class TestKofK:
    def test_k3_matches_reference(self):
        basis = build_k_of_k(3)
        assert tuple(basis.white_canonical.row(i) for i in range(3)) == rows(KK3_WHITE)
        assert tuple(basis.black_canonical.row(i) for i in range(3)) == rows(KK3_BLACK)
        assert (basis.m, basis.alpha, basis.r) == (4, Fraction(1, 4), 24)

    def test_k4_matches_reference(self):
        basis = build_k_of_k(4)
        assert tuple(basis.white_canonical.row(i) for i in range(4)) == rows(KK4_WHITE)
        assert tuple(basis.black_canonical.row(i) for i in range(4)) == rows(KK4_BLACK)

    def test_k4_full_stack_weights(self):
        basis = build_k_of_k(4)
        assert hamming_weight(or_rows(basis.white_canonical, range(4))) == 7
        assert hamming_weight(or_rows(basis.black_canonical, range(4))) == 8

    def test_k2_by_subset_oracle(self):
        # subsets of {0,1}: even {∅, {0,1}}, odd {{0}, {1}}
        basis = build_k_of_k(2)
        assert basis.white_canonical.bits == (0, 1, 0, 1)
        assert basis.black_canonical.bits == (0, 1, 1, 0)

    @pytest.mark.parametrize("k", range(2, 7))
    def test_family_invariants(self, k):
        basis = build_k_of_k(k)
        m = 2 ** (k - 1)
        assert basis.m == m
        assert hamming_weight(or_rows(basis.white_canonical, range(k))) == m - 1
        assert hamming_weight(or_rows(basis.black_canonical, range(k))) == m
        for j in range(m):
            assert hamming_weight(basis.white_canonical.column(j)) % 2 == 0
            assert hamming_weight(basis.black_canonical.column(j)) % 2 == 1
        # no pair of participants is redundant: rows may repeat in one matrix
        # (they do at k=2) but never in both at once
        for i, j in itertools.combinations(range(k), 2):
            assert not (basis.white_canonical.row(i) == basis.white_canonical.row(j)
                        and basis.black_canonical.row(i) == basis.black_canonical.row(j))
        if k >= 3:
            for canonical in (basis.white_canonical, basis.black_canonical):
                assert len({canonical.row(i) for i in range(k)}) == k

    def test_rejects_k1(self):
        with pytest.raises(ValueError):
            build_k_of_k(1)

    def test_cap(self):
        with pytest.raises(CapacityError):
            build_k_of_k(7)


class TestFunctionFamily:
    def test_exhaustive_count(self):
        assert build_function_family(4, 3).size == 81

    def test_exhaustive_two_points(self):
        family = build_function_family(2, 2)
        assert set(family.functions) == {(0, 0), (0, 1), (1, 0), (1, 1)}

    def test_sampled_deterministic(self):
        a = build_function_family(5, 3, mode="sampled", size=100, seed=7)
        b = build_function_family(5, 3, mode="sampled", size=100, seed=7)
        assert a == b
        assert a.size == 100

    def test_sampled_needs_seed(self):
        with pytest.raises(ValueError):
            build_function_family(5, 3, mode="sampled", size=10)

    def test_rejects_k_above_n(self):
        with pytest.raises(ValueError):
            build_function_family(2, 3)

    def test_exhaustive_cap(self):
        with pytest.raises(CapacityError):
            build_function_family(20, 3)


class TestAnalyzeFamily:
    def test_exhaustive_n4_k3(self):
        # of the 27 restrictions to a 3-subset, exactly 3! are injective
        family = build_function_family(4, 3)
        analysis = analyze_family(family, 3)
        for dist in analysis.betas.values():
            assert dist[2] == Fraction(2, 9)
        assert analysis.min_beta_k == Fraction(2, 9)

    @pytest.mark.parametrize("k", [2, 3, 4])
    def test_full_domain_injection_rate(self, k):
        family = build_function_family(k, k)
        analysis = analyze_family(family, k)
        fact = __import__("math").factorial(k)
        assert analysis.betas[tuple(range(k))][k - 1] == Fraction(fact, k**k)

    def test_constant_family(self):
        family = FunctionFamily(n=4, k=3, functions=((0,) * 4, (1,) * 4, (2,) * 4))
        analysis = analyze_family(family, 3)
        for dist in analysis.betas.values():
            assert dist[0] == 1
            assert all(b == 0 for b in dist[1:])

    def test_wrong_subset_size(self):
        with pytest.raises(ValueError):
            analyze_family(build_function_family(4, 3), 2)


class TestKofN:
    def test_pixel_expansion(self):
        composed = build_k_of_n(build_k_of_k(3), 4, build_function_family(4, 3))
        assert composed.m == 324
        assert composed.n == 4 and composed.k == 3

    def test_identity_family_reduces_to_base(self):
        base = build_k_of_k(3)
        identity = FunctionFamily(n=3, k=3, functions=((0, 1, 2),))
        composed = build_k_of_n(base, 3, identity)
        assert composed.white_canonical == base.white_canonical
        assert composed.black_canonical == base.black_canonical
        assert (composed.d, composed.alpha) == (base.d, base.alpha)
        assert composed.r == base.r

    def test_contrast_bound(self):
        base = build_k_of_k(3)
        family = build_function_family(4, 3)
        composed = build_k_of_n(base, 4, family)
        beta_k = analyze_family(family, 3).min_beta_k
        assert composed.alpha >= beta_k * base.alpha

    def test_block_assembly(self):
        # participant i's block for member h is base row h(i), family-major
        base = build_k_of_k(3)
        family = build_function_family(4, 3)
        composed = build_k_of_n(base, 4, family)
        for i in range(4):
            row = composed.black_canonical.row(i)
            for pos, h in enumerate(family.functions):
                block = row[pos * base.m : (pos + 1) * base.m]
                assert block == base.black_canonical.row(h[i])

    def test_degenerate_family_rejected(self):
        base = build_k_of_k(3)
        constant = FunctionFamily(n=4, k=3, functions=((0,) * 4, (1,) * 4))
        with pytest.raises(DegenerateFamilyError):
            build_k_of_n(base, 4, constant)

    def test_family_mismatch_rejected(self):
        base = build_k_of_k(3)
        with pytest.raises(ValueError):
            build_k_of_n(base, 5, build_function_family(4, 3))

    def test_base_must_be_k_of_k(self):
        with pytest.raises(ValueError):
            build_k_of_n(build_three_of_n(5), 6, build_function_family(6, 5))


class TestSubThresholdWeights:
    """Expected stacked weight below threshold is color-blind (checked exactly)."""

    @pytest.mark.parametrize("q", [1, 2])
    def test_expected_weights_equal(self, q):
        base = build_k_of_k(3)
        family = build_function_family(4, 3)
        for subset in itertools.combinations(range(4), q):
            white = black = 0
            for h in family.functions:
                picked = sorted({h[i] for i in subset})
                white += hamming_weight(or_rows(base.white_canonical, picked))
                black += hamming_weight(or_rows(base.black_canonical, picked))
            assert white == black
