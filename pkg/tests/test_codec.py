import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from vcshare.bitmatrix import hamming_weight
from vcshare.codec import (
    BinaryImage,
    StackedGrid,
    decode,
    decode_threshold,
    default_layout,
    encode_pixel,
    split_image,
    stack,
)
from vcshare.schemes import build_k_of_k, build_three_of_n

from reference import THREE_FIVE_BLACK, THREE_FIVE_WHITE, bits, oracle_subset_weights


class IdentityRng:
    """Stand-in generator whose shuffle leaves lists untouched."""

    def shuffle(self, x):
        pass


@pytest.fixture
def basis():
    return build_three_of_n(5)


@pytest.fixture
def layout():
    return default_layout(8)


class TestDefaultLayout:
    def test_m8(self):
        layout = default_layout(8)
        assert (layout.block_w, layout.block_h) == (3, 3)
        assert layout.pad_cells == 1

    def test_m4(self):
        layout = default_layout(4)
        assert (layout.block_w, layout.block_h) == (2, 2)
        assert layout.pad_cells == 0

    def test_m1(self):
        layout = default_layout(1)
        assert (layout.block_w, layout.block_h) == (1, 1)

    @pytest.mark.parametrize("m", range(1, 40))
    def test_near_square(self, m):
        layout = default_layout(m)
        assert layout.block_w * layout.block_h >= m
        assert abs(layout.block_w - layout.block_h) <= 1

    def test_row_major_placement(self):
        assert default_layout(8).placement[:4] == ((0, 0), (0, 1), (0, 2), (1, 0))


class TestEncodePixel:
    def test_identity_black_is_canonical(self, basis):
        code = encode_pixel(basis, 1, IdentityRng())
        assert code.matrix == basis.black_canonical

    def test_white_rows_always_weigh_4(self, basis):
        for seed in range(20):
            code = encode_pixel(basis, 0, random.Random(seed))
            assert all(hamming_weight(code.matrix.row(i)) == 4 for i in range(5))

    def test_same_seed_same_code(self, basis):
        a = encode_pixel(basis, 1, random.Random(99))
        b = encode_pixel(basis, 1, random.Random(99))
        assert a == b

    def test_columns_are_a_permutation(self, basis):
        code = encode_pixel(basis, 1, random.Random(3))
        assert sorted(code.matrix.columns()) == sorted(basis.black_canonical.columns())


class TestSplitImage:
    def test_identity_forced_blocks(self, basis, layout, monkeypatch):
        monkeypatch.setattr("vcshare.codec.pixel_rng", lambda seed, x, y: IdentityRng())
        shares = split_image(BinaryImage(1, 1, b"\x01"), basis, layout, seed=0)
        for i, share in enumerate(shares):
            assert share.mapped_bits(0, 0) == bits(THREE_FIVE_BLACK[i])
            # pad cell is the bottom-right corner of the 3x3 block
            assert share.grid[8] == layout.pad_value

    def test_share_dimensions(self, basis, layout):
        img = BinaryImage(2, 2, bytes([0, 1, 1, 0]))
        shares = split_image(img, basis, layout, seed=5)
        assert len(shares) == 5
        assert all((s.grid_width, s.grid_height) == (6, 6) for s in shares)

    def test_deterministic(self, basis, layout):
        img = BinaryImage(3, 2, bytes([0, 1, 1, 0, 1, 0]))
        a = split_image(img, basis, layout, seed="run")
        b = split_image(img, basis, layout, seed="run")
        assert a == b

    def test_seed_changes_shares(self, basis, layout):
        img = BinaryImage(3, 2, bytes([0, 1, 1, 0, 1, 0]))
        assert split_image(img, basis, layout, 1) != split_image(img, basis, layout, 2)

    def test_layout_mismatch(self, basis):
        with pytest.raises(ValueError):
            split_image(BinaryImage(1, 1, b"\x00"), basis, default_layout(4), 0)


class TestStack:
    def test_all_five_black(self, basis, layout):
        shares = split_image(BinaryImage(1, 1, b"\x01"), basis, layout, seed=11)
        stacked = stack(shares)
        assert hamming_weight(stacked.mapped_bits(0, 0)) == 8

    def test_single_share_unchanged(self, basis, layout):
        shares = split_image(BinaryImage(1, 1, b"\x01"), basis, layout, seed=11)
        assert stack(shares[:1]).grid == shares[0].grid

    def test_three_identity_shares(self, basis, layout, monkeypatch):
        monkeypatch.setattr("vcshare.codec.pixel_rng", lambda seed, x, y: IdentityRng())
        shares = split_image(BinaryImage(1, 1, b"\x01"), basis, layout, seed=0)
        stacked = stack(shares[:3])
        assert stacked.mapped_bits(0, 0) == bits("11111100")

    def test_duplicate_index_rejected(self, basis, layout):
        shares = split_image(BinaryImage(1, 1, b"\x01"), basis, layout, seed=11)
        with pytest.raises(ValueError):
            stack([shares[0], shares[0]])

    def test_dimension_mismatch_rejected(self, basis, layout):
        a = split_image(BinaryImage(1, 1, b"\x01"), basis, layout, seed=1)
        b = split_image(BinaryImage(2, 1, b"\x01\x00"), basis, layout, seed=1)
        with pytest.raises(ValueError):
            stack([a[0], b[1]])

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            stack([])


class TestDecode:
    def test_thresholds_from_oracle(self, basis):
        # brute-force oracle over the transcribed matrices
        assert oracle_subset_weights(THREE_FIVE_WHITE, 3) == {5}
        assert oracle_subset_weights(THREE_FIVE_BLACK, 3) == {6}
        assert oracle_subset_weights(THREE_FIVE_BLACK, 4) == {7}
        assert decode_threshold(basis, 3) == 6
        assert decode_threshold(basis, 4) == 7
        assert decode_threshold(basis, 5) == 8

    def test_three_share_weights_decide(self, basis, layout):
        img = BinaryImage(2, 1, bytes([1, 0]))
        shares = split_image(img, basis, layout, seed=4)
        stacked = stack(shares[:3])
        assert hamming_weight(stacked.mapped_bits(0, 0)) == 6
        assert hamming_weight(stacked.mapped_bits(1, 0)) == 5
        assert decode(stacked, basis) == img

    def test_all_five_weights(self, basis, layout):
        img = BinaryImage(2, 1, bytes([1, 0]))
        stacked = stack(split_image(img, basis, layout, seed=4))
        assert hamming_weight(stacked.mapped_bits(0, 0)) == 8
        assert hamming_weight(stacked.mapped_bits(1, 0)) == 5
        assert decode(stacked, basis) == img

    def test_all_white_secret(self, basis, layout):
        img = BinaryImage(2, 2, bytes(4))
        stacked = stack(split_image(img, basis, layout, seed=8)[1:4])
        assert decode(stacked, basis) == img

    def test_below_threshold_refused(self, basis, layout):
        shares = split_image(BinaryImage(1, 1, b"\x01"), basis, layout, seed=1)
        with pytest.raises(ValueError):
            decode(stack(shares[:2]), basis)

    def test_scheme_mismatch_refused(self, basis):
        other = build_k_of_k(3)
        shares = split_image(BinaryImage(1, 1, b"\x01"), other, default_layout(4), seed=1)
        with pytest.raises(ValueError):
            decode(stack(shares), basis)


class TestSubThreshold:
    def test_single_share_weight_hides_color(self, basis, layout):
        img = BinaryImage(2, 1, bytes([1, 0]))
        for seed in range(10):
            for share in split_image(img, basis, layout, seed=seed):
                assert hamming_weight(share.mapped_bits(0, 0)) == 4
                assert hamming_weight(share.mapped_bits(1, 0)) == 4

    def test_pad_cells_constant(self, basis):
        for pad in (0, 1):
            layout = default_layout(8, pad_value=pad)
            img = BinaryImage(2, 2, bytes([1, 0, 0, 1]))
            shares = split_image(img, basis, layout, seed=3)
            mapped = set(layout.placement)
            for share in shares + (stack(shares),):
                grid = share.grid
                for y in range(2):
                    for x in range(2):
                        for r in range(3):
                            for c in range(3):
                                if (r, c) not in mapped:
                                    assert grid[(y * 3 + r) * 6 + x * 3 + c] == pad


@given(
    width=st.integers(1, 6),
    height=st.integers(1, 6),
    seed=st.integers(0, 2**16),
    data=st.data(),
)
@settings(max_examples=25, deadline=None)
def test_round_trip_any_k_subset(width, height, seed, data):
    basis = build_three_of_n(5)
    layout = default_layout(8)
    pix = bytes(data.draw(st.lists(st.integers(0, 1), min_size=width * height,
                                   max_size=width * height)))
    img = BinaryImage(width, height, pix)
    shares = split_image(img, basis, layout, seed)
    subset = data.draw(st.sampled_from(list(itertools.combinations(range(5), 3))))
    assert decode(stack([shares[i] for i in subset]), basis) == img


@given(seed=st.integers(0, 2**16))
@settings(max_examples=10, deadline=None)
def test_round_trip_k_of_k(seed):
    basis = build_k_of_k(4)
    layout = default_layout(basis.m)
    img = BinaryImage(3, 3, bytes([1, 0, 1, 0, 1, 0, 0, 0, 1]))
    shares = split_image(img, basis, layout, seed)
    assert decode(stack(shares), basis) == img
