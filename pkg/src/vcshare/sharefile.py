"""Share files on disk: PBM payload plus a JSON sidecar header.

The payload is the full subpixel grid as an ordinary PBM so any viewer can
overlay shares; the sidecar pins down scheme, layout, and geometry so the
tools refuse to combine shares that do not belong together. Seeds are
never written: a share file must not help its holder reconstruct anything.
"""

from __future__ import annotations

import json
import sys
from dataclasses import dataclass
from pathlib import Path

from .codec import BinaryImage, ShareImage, StackedGrid, SubpixelLayout
from .errors import FileFormatError, HeaderMismatchError
from .pbm import read_pbm, write_pbm
from .scheme_spec import SchemeSpec, parse_scheme

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

HEADER_FORMAT = "vcshare-header/1"

LevelShape = tuple[int, int]  # (width, height)


@dataclass(frozen=True)
class ShareHeader:
    kind: str  # "share" | "stacked"
    scheme: SchemeSpec
    m: int
    secret_width: int
    secret_height: int
    layout: SubpixelLayout
    share_index: int | None = None
    stacked_count: int | None = None
    stacked_indices: tuple[int, ...] | None = None
    chain_levels: tuple[LevelShape, ...] | None = None  # smallest level first, host last

    def compatible_with(self, other: "ShareHeader") -> bool:
        return (self.scheme, self.m, self.secret_width, self.secret_height, self.layout) == \
               (other.scheme, other.m, other.secret_width, other.secret_height, other.layout)


def require_compatible(headers: list[ShareHeader]) -> None:
    for h in headers[1:]:
        if not h.compatible_with(headers[0]):
            raise HeaderMismatchError(
                f"share headers disagree ({headers[0].scheme.text} {headers[0].secret_width}x"
                f"{headers[0].secret_height} vs {h.scheme.text} {h.secret_width}x{h.secret_height}); "
                "refusing to combine shares from different splits")


def sidecar_path(pbm_path: str | Path) -> Path:
    return Path(str(pbm_path) + ".json")


def _layout_to_json(layout: SubpixelLayout) -> dict:
    return {"m": layout.m, "block_w": layout.block_w, "block_h": layout.block_h,
            "pad_value": layout.pad_value,
            "placement": [[r, c] for r, c in layout.placement]}


def _layout_from_json(obj: dict) -> SubpixelLayout:
    return SubpixelLayout(m=obj["m"], block_w=obj["block_w"], block_h=obj["block_h"],
                          pad_value=obj["pad_value"],
                          placement=tuple((r, c) for r, c in obj["placement"]))


def _header_to_json(header: ShareHeader) -> dict:
    doc: dict = {
        "format": HEADER_FORMAT,
        "kind": header.kind,
        "scheme": {"descriptor": header.scheme.text, "n": header.scheme.n,
                   "k": header.scheme.k, "m": header.m},
        "secret": {"width": header.secret_width, "height": header.secret_height},
        "layout": _layout_to_json(header.layout),
    }
    if header.share_index is not None:
        doc["share_index"] = header.share_index
    if header.stacked_count is not None:
        doc["stacked_count"] = header.stacked_count
        doc["stacked_indices"] = list(header.stacked_indices or ())
    if header.chain_levels is not None:
        doc["chain"] = {"placement": "bands",
                        "levels": [{"width": w, "height": h} for w, h in header.chain_levels]}
    return doc


def _header_from_json(doc: dict, path: Path) -> ShareHeader:
    try:
        if doc["format"] != HEADER_FORMAT:
            raise FileFormatError(f"{path}: unknown header format {doc['format']!r}")
        chain = None
        if "chain" in doc:
            chain = tuple((lv["width"], lv["height"]) for lv in doc["chain"]["levels"])
        return ShareHeader(
            kind=doc["kind"],
            scheme=parse_scheme(doc["scheme"]["descriptor"]),
            m=doc["scheme"]["m"],
            secret_width=doc["secret"]["width"],
            secret_height=doc["secret"]["height"],
            layout=_layout_from_json(doc["layout"]),
            share_index=doc.get("share_index"),
            stacked_count=doc.get("stacked_count"),
            stacked_indices=tuple(doc["stacked_indices"]) if "stacked_indices" in doc else None,
            chain_levels=chain,
        )
    except (KeyError, TypeError) as exc:
        raise FileFormatError(f"{path}: incomplete share header ({exc})") from exc


def write_share(share: ShareImage, scheme: SchemeSpec, path: str | Path,
                chain_levels: tuple[LevelShape, ...] | None = None) -> None:
    """Write <path> (PBM grid) and <path>.json (header)."""
    path = Path(path)
    payload = BinaryImage(share.grid_width, share.grid_height, share.grid)
    write_pbm(payload, path)
    header = ShareHeader(kind="share", scheme=scheme, m=share.layout.m,
                         secret_width=share.width, secret_height=share.height,
                         layout=share.layout, share_index=share.index,
                         chain_levels=chain_levels)
    sidecar_path(path).write_text(json.dumps(_header_to_json(header), indent=1) + "\n")


def write_stacked(stacked: StackedGrid, scheme: SchemeSpec, indices: tuple[int, ...],
                  path: str | Path) -> None:
    path = Path(path)
    grid_w = stacked.width * stacked.layout.block_w
    grid_h = stacked.height * stacked.layout.block_h
    write_pbm(BinaryImage(grid_w, grid_h, stacked.grid), path)
    header = ShareHeader(kind="stacked", scheme=scheme, m=stacked.layout.m,
                         secret_width=stacked.width, secret_height=stacked.height,
                         layout=stacked.layout, stacked_count=stacked.count,
                         stacked_indices=indices)
    sidecar_path(path).write_text(json.dumps(_header_to_json(header), indent=1) + "\n")


def read_share(path: str | Path) -> tuple[ShareImage, ShareHeader]:
    """Read a share PBM and its sidecar; validates geometry against the header."""
    path = Path(path)
    side = sidecar_path(path)
    if not side.exists():
        raise FileFormatError(f"{path}: missing sidecar header {side.name}")
    try:
        doc = json.loads(side.read_text())
    except json.JSONDecodeError as exc:
        raise FileFormatError(f"{side}: not valid JSON ({exc})") from exc
    header = _header_from_json(doc, side)
    if header.kind != "share" or header.share_index is None:
        raise FileFormatError(f"{path}: not a share file (kind={header.kind!r})")
    payload = read_pbm(path)
    expect_w = header.secret_width * header.layout.block_w
    expect_h = header.secret_height * header.layout.block_h
    if (payload.width, payload.height) != (expect_w, expect_h):
        raise FileFormatError(f"{path}: grid is {payload.width}x{payload.height}, "
                              f"header implies {expect_w}x{expect_h}")
    share = ShareImage(index=header.share_index, width=header.secret_width,
                       height=header.secret_height, layout=header.layout,
                       grid=payload.pixels)
    return share, header


@dataclass(frozen=True)
class ChainManifest:
    """Parsed chain description: which secrets to nest, and how."""

    scheme: SchemeSpec
    seed: int | str
    secret_paths: tuple[Path, ...]  # smallest first
    pad_value: int
    placement: str  # "bands" | "explicit"
    explicit_regions: tuple | None = None  # per level: per share: [[x, y], ...]


def load_manifest(path: str | Path) -> ChainManifest:
    path = Path(path)
    try:
        doc = tomllib.loads(path.read_text())
    except tomllib.TOMLDecodeError as exc:
        raise FileFormatError(f"{path}: not valid TOML ({exc})") from exc
    try:
        scheme = parse_scheme(doc["scheme"])
        seed = doc["seed"]
        secrets = tuple(path.parent / p for p in doc["secrets"])
    except KeyError as exc:
        raise FileFormatError(f"{path}: manifest is missing {exc}") from exc
    if not isinstance(seed, (int, str)):
        raise FileFormatError(f"{path}: seed must be an integer or string")
    if not secrets:
        raise FileFormatError(f"{path}: no secrets listed")
    pad = doc.get("pad", 1)
    if pad not in (0, 1):
        raise FileFormatError(f"{path}: pad must be 0 or 1")
    placement = doc.get("placement", "bands")
    regions = None
    if placement == "explicit":
        try:
            regions = tuple(tuple(tuple((int(x), int(y)) for x, y in region)
                                  for region in level["regions"])
                            for level in doc["levels"])
        except (KeyError, TypeError, ValueError) as exc:
            raise FileFormatError(f"{path}: explicit placement needs [[levels]] tables "
                                  f"with regions ({exc})") from exc
    elif placement != "bands":
        raise FileFormatError(f"{path}: placement must be 'bands' or 'explicit'")
    return ChainManifest(scheme=scheme, seed=seed, secret_paths=secrets,
                         pad_value=pad, placement=placement, explicit_regions=regions)


__all__ = [
    "HEADER_FORMAT",
    "ShareHeader",
    "ChainManifest",
    "require_compatible",
    "sidecar_path",
    "write_share",
    "write_stacked",
    "read_share",
    "load_manifest",
]
