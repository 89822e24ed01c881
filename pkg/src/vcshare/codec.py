"""Pixel-by-pixel share encoding, image splitting, stacking, and decoding.

Each secret pixel expands into an m-subpixel block per share. Blocks are
laid out in near-square arrays; cells not covered by the m subpixels carry
a constant pad value so padding can never leak the secret.
"""

from __future__ import annotations

import functools
import math
import random
from dataclasses import dataclass
from typing import Sequence

from .bitmatrix import BitMatrix, Bits, hamming_weight, or_weight_extremes, permute_columns, random_permutation
from .schemes import SchemeBasis

Seed = int | str


@dataclass(frozen=True)
class BinaryImage:
    """Monochrome image; pixel value 1 is black, 0 is white."""

    width: int
    height: int
    pixels: bytes

    def __post_init__(self):
        if self.width < 1 or self.height < 1:
            raise ValueError(f"image dimensions must be positive, got {self.width}x{self.height}")
        if len(self.pixels) != self.width * self.height:
            raise ValueError(f"expected {self.width * self.height} pixels, got {len(self.pixels)}")
        if any(p not in (0, 1) for p in self.pixels):
            raise ValueError("pixel values must be 0 or 1")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> "BinaryImage":
        height = len(rows)
        width = len(rows[0]) if rows else 0
        if any(len(r) != width for r in rows):
            raise ValueError("ragged rows")
        return cls(width, height, bytes(p for r in rows for p in r))

    def pixel(self, x: int, y: int) -> int:
        return self.pixels[y * self.width + x]

    @property
    def pixel_count(self) -> int:
        return self.width * self.height


@dataclass(frozen=True)
class SubpixelLayout:
    """Arrangement of m subpixels inside a block_w x block_h cell array."""

    m: int
    block_w: int
    block_h: int
    placement: tuple[tuple[int, int], ...]
    pad_value: int

    def __post_init__(self):
        if self.pad_value not in (0, 1):
            raise ValueError("pad_value must be 0 or 1")
        if self.block_w * self.block_h < self.m:
            raise ValueError(f"{self.block_w}x{self.block_h} block cannot hold {self.m} subpixels")
        if abs(self.block_w - self.block_h) > 1:
            raise ValueError(f"block {self.block_w}x{self.block_h} distorts the aspect ratio")
        if len(self.placement) != self.m:
            raise ValueError(f"placement maps {len(self.placement)} subpixels, expected {self.m}")
        seen = set()
        for r, c in self.placement:
            if not (0 <= r < self.block_h and 0 <= c < self.block_w):
                raise ValueError(f"placement cell {(r, c)} outside the block")
            seen.add((r, c))
        if len(seen) != self.m:
            raise ValueError("placement must be injective")

    @property
    def pad_cells(self) -> int:
        return self.block_w * self.block_h - self.m


def default_layout(m: int, pad_value: int = 1) -> SubpixelLayout:
    """Near-square row-major layout for m subpixels."""
    if m < 1:
        raise ValueError(f"need m >= 1, got {m}")
    block_h = math.isqrt(m - 1) + 1  # ceil(sqrt(m))
    block_w = -(-m // block_h)
    placement = tuple((s // block_w, s % block_w) for s in range(m))
    return SubpixelLayout(m=m, block_w=block_w, block_h=block_h,
                          placement=placement, pad_value=pad_value)


@dataclass(frozen=True)
class PixelCode:
    """One encoded secret pixel: row i is participant i's subpixel pattern."""

    matrix: BitMatrix


@dataclass(frozen=True)
class ShareImage:
    """One participant's share: the full subpixel grid of a split secret."""

    index: int
    width: int
    height: int
    layout: SubpixelLayout
    grid: bytes

    def __post_init__(self):
        if len(self.grid) != self.grid_width * self.grid_height:
            raise ValueError(f"grid has {len(self.grid)} cells, expected {self.grid_width * self.grid_height}")

    @property
    def grid_width(self) -> int:
        return self.width * self.layout.block_w

    @property
    def grid_height(self) -> int:
        return self.height * self.layout.block_h

    def mapped_bits(self, x: int, y: int) -> Bits:
        """The m subpixels of secret pixel (x, y), pad cells excluded."""
        return _read_mapped(self.grid, self.width, self.layout, x, y)


@dataclass(frozen=True)
class StackedGrid:
    """Cell-wise OR of one or more aligned shares."""

    width: int
    height: int
    layout: SubpixelLayout
    count: int
    grid: bytes

    def mapped_bits(self, x: int, y: int) -> Bits:
        return _read_mapped(self.grid, self.width, self.layout, x, y)


def _read_mapped(grid: bytes, width: int, layout: SubpixelLayout, x: int, y: int) -> Bits:
    grid_w = width * layout.block_w
    top, left = y * layout.block_h, x * layout.block_w
    return tuple(grid[(top + r) * grid_w + left + c] for r, c in layout.placement)


def pixel_rng(seed: Seed, x: int, y: int) -> random.Random:
    """Independent per-pixel stream; string seeding keeps it stable across runs."""
    return random.Random(f"{seed}/{x}/{y}")


def encode_pixel(basis: SchemeBasis, color: int, rng: random.Random) -> PixelCode:
    """Uniformly random member of the color's collection."""
    perm = random_permutation(basis.m, rng)
    return PixelCode(matrix=permute_columns(basis.canonical(color), perm))


def split_image(img: BinaryImage, basis: SchemeBasis, layout: SubpixelLayout,
                seed: Seed) -> tuple[ShareImage, ...]:
    """Split a secret into n shares, one pixel code per secret pixel.

    Each pixel draws from its own (seed, x, y) stream, so the result is
    deterministic and independent of traversal order.
    """
    if layout.m != basis.m:
        raise ValueError(f"layout holds {layout.m} subpixels but the scheme needs {basis.m}")
    grids = [bytearray([layout.pad_value]) * (img.width * layout.block_w * img.height * layout.block_h)
             for _ in range(basis.n)]
    grid_w = img.width * layout.block_w
    for y in range(img.height):
        for x in range(img.width):
            code = encode_pixel(basis, img.pixel(x, y), pixel_rng(seed, x, y))
            _write_code(grids, code, layout, grid_w, x, y)
    return tuple(ShareImage(index=i, width=img.width, height=img.height,
                            layout=layout, grid=bytes(g)) for i, g in enumerate(grids))


def _write_code(grids: list[bytearray], code: PixelCode, layout: SubpixelLayout,
                grid_w: int, x: int, y: int) -> None:
    top, left = y * layout.block_h, x * layout.block_w
    mat = code.matrix
    for i, grid in enumerate(grids):
        base = i * mat.cols
        for s, (r, c) in enumerate(layout.placement):
            grid[(top + r) * grid_w + left + c] = mat.bits[base + s]


def stack(shares: Sequence[ShareImage]) -> StackedGrid:
    """Cell-wise OR of the given shares (physical transparency stacking)."""
    if not shares:
        raise ValueError("nothing to stack")
    first = shares[0]
    indices = set()
    for s in shares:
        if (s.width, s.height, s.layout) != (first.width, first.height, first.layout):
            raise ValueError("shares differ in dimensions or layout")
        if s.index in indices:
            raise ValueError(f"share {s.index} supplied twice")
        indices.add(s.index)
    acc = int.from_bytes(first.grid, "big")
    for s in shares[1:]:
        acc |= int.from_bytes(s.grid, "big")
    grid = acc.to_bytes(len(first.grid), "big")
    return StackedGrid(width=first.width, height=first.height, layout=first.layout,
                       count=len(shares), grid=grid)


@functools.lru_cache(maxsize=None)
def decode_threshold(basis: SchemeBasis, stacked_count: int) -> int:
    """Minimum black OR-weight over stacked_count rows; the decision cutoff."""
    if stacked_count < basis.k:
        raise ValueError(f"{stacked_count} shares stacked, threshold is {basis.k}")
    if stacked_count > basis.n:
        raise ValueError(f"cannot stack {stacked_count} of {basis.n} shares")
    black_min, _ = or_weight_extremes(basis.black_canonical, stacked_count)
    _, white_max = or_weight_extremes(basis.white_canonical, stacked_count)
    if white_max >= black_min:
        raise ValueError(f"scheme has no decision margin for {stacked_count} stacked shares")
    return black_min


def decode(stacked: StackedGrid, basis: SchemeBasis) -> BinaryImage:
    """Threshold each stacked block back to a secret pixel."""
    if stacked.layout.m != basis.m:
        raise ValueError(f"stack carries {stacked.layout.m} subpixels but the scheme needs {basis.m}")
    cutoff = decode_threshold(basis, stacked.count)
    pixels = bytearray(stacked.width * stacked.height)
    for y in range(stacked.height):
        for x in range(stacked.width):
            weight = hamming_weight(stacked.mapped_bits(x, y))
            pixels[y * stacked.width + x] = 1 if weight >= cutoff else 0
    return BinaryImage(stacked.width, stacked.height, bytes(pixels))


__all__ = [
    "Seed",
    "BinaryImage",
    "SubpixelLayout",
    "PixelCode",
    "ShareImage",
    "StackedGrid",
    "default_layout",
    "pixel_rng",
    "encode_pixel",
    "split_image",
    "stack",
    "decode_threshold",
    "decode",
]
