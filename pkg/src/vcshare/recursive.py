"""Recursive hiding: embed the shares of a smaller secret, bit for bit,
inside designated regions of a larger secret's shares.

The embedding mechanism is constrained sampling: when a pixel of the
larger secret sits under an embedded region of share j, its code is drawn
uniformly from the members of the correct color collection whose row j
equals the embedded block's bits. Feasibility only needs every canonical
row to have the same Hamming weight, which all constructions here satisfy,
so the larger shares stay perfectly valid and perfectly sized.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Sequence

from .bitmatrix import BitMatrix, Bits, ColumnPermutation, hamming_weight, permute_columns
from .codec import (
    BinaryImage,
    PixelCode,
    Seed,
    ShareImage,
    SubpixelLayout,
    _write_code,
    default_layout,
    encode_pixel,
    pixel_rng,
    split_image,
)
from .errors import InfeasibleConstraintError
from .schemes import SchemeBasis

Region = tuple[tuple[int, int], ...]  # ordered (x, y) pixel positions in the larger secret


@dataclass(frozen=True)
class Placement:
    """Where each share of a smaller secret lives inside the larger shares.

    ``regions[j]`` lists, in the smaller secret's row-major pixel order, the
    larger-secret pixel positions that hold share j's blocks.
    """

    regions: tuple[Region, ...]


@dataclass(frozen=True)
class EmbeddingConstraint:
    """One pinned pixel code: row ``share_index`` must equal ``required_row``."""

    share_index: int
    position: tuple[int, int]
    required_row: Bits


@dataclass(frozen=True)
class SecretChain:
    """Secrets ordered smallest first, with a placement per adjacent pair."""

    basis: SchemeBasis
    secrets: tuple[BinaryImage, ...]
    placements: tuple[Placement, ...]

    def __post_init__(self):
        if not self.secrets:
            raise ValueError("chain needs at least one secret")
        if len(self.placements) != len(self.secrets) - 1:
            raise ValueError(f"{len(self.secrets)} secrets need {len(self.secrets) - 1} placements, "
                             f"got {len(self.placements)}")
        weights = {hamming_weight(self.basis.canonical(color).row(i))
                   for color in (0, 1) for i in range(self.basis.n)}
        if len(weights) > 1:
            raise ValueError(f"canonical row weights {sorted(weights)} are not constant; "
                             "this scheme cannot host embedded shares")
        for small, large, placement in zip(self.secrets, self.secrets[1:], self.placements):
            if small.pixel_count * self.basis.n > large.pixel_count:
                raise ValueError(f"{self.basis.n} copies of a {small.pixel_count}-pixel secret "
                                 f"cannot fit in {large.pixel_count} pixels")
            _check_placement(placement, small, large, self.basis.n)

    @classmethod
    def with_band_placements(cls, basis: SchemeBasis, secrets: Sequence[BinaryImage]) -> "SecretChain":
        """Chain using the default horizontal-band placement at every level."""
        placements = tuple(default_placement(small, large, basis.n)
                           for small, large in zip(secrets, list(secrets)[1:]))
        return cls(basis=basis, secrets=tuple(secrets), placements=placements)


def _check_placement(placement: Placement, small: BinaryImage, large: BinaryImage, n: int) -> None:
    if len(placement.regions) != n:
        raise ValueError(f"placement has {len(placement.regions)} regions, expected {n}")
    occupied: set[tuple[int, int]] = set()
    for j, region in enumerate(placement.regions):
        if len(region) != small.pixel_count:
            raise ValueError(f"region {j} holds {len(region)} pixels, "
                             f"the embedded secret has {small.pixel_count}")
        for x, y in region:
            if not (0 <= x < large.width and 0 <= y < large.height):
                raise ValueError(f"region {j} position {(x, y)} outside the {large.width}x{large.height} secret")
            if (x, y) in occupied:
                raise ValueError(f"position {(x, y)} claimed by two regions; "
                                 "a pixel code can only pin one row")
            occupied.add((x, y))


def band_placement(small_size: tuple[int, int], large_size: tuple[int, int], n: int) -> Placement:
    """Band placement from (width, height) pairs alone."""
    small_w, small_h = small_size
    large_w, large_h = large_size
    pixel_count = small_w * small_h
    band_h = large_h // n
    if band_h < 1:
        raise ValueError(f"cannot cut {large_h} rows into {n} bands")
    if pixel_count > band_h * large_w:
        raise ValueError(f"a {pixel_count}-pixel share does not fit in a "
                         f"{large_w}x{band_h} band")
    regions = []
    for j in range(n):
        top = j * band_h
        band = [(x, y) for y in range(top, large_h if j == n - 1 else top + band_h)
                for x in range(large_w)]
        regions.append(tuple(band[:pixel_count]))
    return Placement(regions=tuple(regions))


def default_placement(small: BinaryImage, large: BinaryImage, n: int) -> Placement:
    """Horizontal bands, top-aligned: share j fills band j row-major."""
    return band_placement((small.width, small.height), (large.width, large.height), n)


def sample_constrained_permutation(canonical: BitMatrix, row: int, target: Bits,
                                   rng: random.Random) -> ColumnPermutation:
    """Uniform column permutation sending the given canonical row onto target.

    The 1-columns of the row are shuffled onto the 1-positions of the target
    and the 0-columns onto the 0-positions, so the draw is uniform over the
    w! * (m-w)! satisfying permutations.
    """
    source = canonical.row(row)
    if len(target) != len(source):
        raise InfeasibleConstraintError(f"target has {len(target)} bits, row has {len(source)}")
    if hamming_weight(target) != hamming_weight(source):
        raise InfeasibleConstraintError(
            f"target weight {hamming_weight(target)} != row weight {hamming_weight(source)}")
    one_slots = [p for p, b in enumerate(target) if b]
    zero_slots = [p for p, b in enumerate(target) if not b]
    rng.shuffle(one_slots)
    rng.shuffle(zero_slots)
    mapping = [0] * len(source)
    ones = iter(one_slots)
    zeros = iter(zero_slots)
    for j, b in enumerate(source):
        mapping[j] = next(ones) if b else next(zeros)
    return ColumnPermutation(tuple(mapping))


@dataclass(frozen=True)
class EmbedResult:
    """Shares produced at every chain level plus the constraints applied.

    ``level_shares[i]`` are the shares of ``chain.secrets[i]``; the last
    entry is the deliverable. ``constraints[i]`` records how level i's
    shares were pinned inside level i+1.
    """

    level_shares: tuple[tuple[ShareImage, ...], ...]
    constraints: tuple[tuple[EmbeddingConstraint, ...], ...]

    @property
    def shares(self) -> tuple[ShareImage, ...]:
        return self.level_shares[-1]


def embed_chain(chain: SecretChain, seed: Seed,
                layout: SubpixelLayout | None = None) -> EmbedResult:
    """Split every secret in the chain, hiding each level's shares in the next.

    The smallest secret is split normally with the caller's seed (a chain of
    length one is therefore identical to a plain split); deeper levels draw
    from per-level streams so pixels stay independently seeded.
    """
    basis = chain.basis
    if layout is None:
        layout = default_layout(basis.m)
    levels = [split_image(chain.secrets[0], basis, layout, seed)]
    all_constraints: list[tuple[EmbeddingConstraint, ...]] = []
    for depth in range(1, len(chain.secrets)):
        img = chain.secrets[depth]
        placement = chain.placements[depth - 1]
        small = chain.secrets[depth - 1]
        prev = levels[-1]
        pinned: dict[tuple[int, int], EmbeddingConstraint] = {}
        for j, region in enumerate(placement.regions):
            for idx, pos in enumerate(region):
                u, v = idx % small.width, idx // small.width
                pinned[pos] = EmbeddingConstraint(share_index=j, position=pos,
                                                  required_row=prev[j].mapped_bits(u, v))
        grids = [bytearray([layout.pad_value]) * (img.width * layout.block_w * img.height * layout.block_h)
                 for _ in range(basis.n)]
        grid_w = img.width * layout.block_w
        level_seed = f"{seed}/L{depth}"
        for y in range(img.height):
            for x in range(img.width):
                rng = pixel_rng(level_seed, x, y)
                color = img.pixel(x, y)
                constraint = pinned.get((x, y))
                if constraint is None:
                    code = encode_pixel(basis, color, rng)
                else:
                    perm = sample_constrained_permutation(
                        basis.canonical(color), constraint.share_index,
                        constraint.required_row, rng)
                    code = PixelCode(permute_columns(basis.canonical(color), perm))
                _write_code(grids, code, layout, grid_w, x, y)
        levels.append(tuple(ShareImage(index=i, width=img.width, height=img.height,
                                       layout=layout, grid=bytes(g))
                            for i, g in enumerate(grids)))
        all_constraints.append(tuple(pinned[pos] for pos in sorted(pinned, key=lambda p: (p[1], p[0]))))
    return EmbedResult(level_shares=tuple(levels), constraints=tuple(all_constraints))


def extract_level(shares: Sequence[ShareImage], placement: Placement,
                  small_width: int, small_height: int) -> tuple[ShareImage, ...]:
    """Read one level of embedded shares back out of their host regions."""
    if not shares:
        raise ValueError("no shares supplied")
    indices = sorted(s.index for s in shares)
    if indices != list(range(len(placement.regions))):
        raise ValueError(f"need shares 0..{len(placement.regions) - 1}, got indices {indices}")
    by_index = {s.index: s for s in shares}
    layout = shares[0].layout
    extracted = []
    for j, region in enumerate(placement.regions):
        if len(region) != small_width * small_height:
            raise ValueError(f"region {j} holds {len(region)} blocks, "
                             f"expected {small_width * small_height}")
        host = by_index[j]
        grid = bytearray([layout.pad_value]) * (small_width * layout.block_w * small_height * layout.block_h)
        grid_w = small_width * layout.block_w
        for idx, (x, y) in enumerate(region):
            if not (0 <= x < host.width and 0 <= y < host.height):
                raise ValueError(f"region {j} position {(x, y)} outside the host share")
            u, v = idx % small_width, idx // small_width
            bits = host.mapped_bits(x, y)
            top, left = v * layout.block_h, u * layout.block_w
            for s, (r, c) in enumerate(layout.placement):
                grid[(top + r) * grid_w + left + c] = bits[s]
        extracted.append(ShareImage(index=j, width=small_width, height=small_height,
                                    layout=layout, grid=bytes(grid)))
    return tuple(extracted)


def extract_embedded(shares: Sequence[ShareImage], chain: SecretChain) -> tuple[tuple[ShareImage, ...], ...]:
    """Recover the embedded shares of every smaller secret in the chain.

    Element i of the result holds the shares of ``chain.secrets[i]``, for
    every level below the largest.
    """
    recovered: list[tuple[ShareImage, ...]] = []
    current = tuple(shares)
    for depth in range(len(chain.secrets) - 1, 0, -1):
        small = chain.secrets[depth - 1]
        current = extract_level(current, chain.placements[depth - 1], small.width, small.height)
        recovered.append(current)
    return tuple(reversed(recovered))


__all__ = [
    "Region",
    "Placement",
    "EmbeddingConstraint",
    "SecretChain",
    "EmbedResult",
    "band_placement",
    "default_placement",
    "sample_constrained_permutation",
    "embed_chain",
    "extract_level",
    "extract_embedded",
]
