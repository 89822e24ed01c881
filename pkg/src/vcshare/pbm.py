"""Portable bitmap I/O: P1 (plain) and P4 (packed) read, P4 write.

PBM and this package agree that 1 means black. Reads are bit-exact; P4 row
padding bits are ignored on read and zeroed on write.
"""

from __future__ import annotations

from pathlib import Path

from .codec import BinaryImage
from .errors import PbmError

_WS = b" \t\r\n\x0b\x0c"


class _Scanner:
    def __init__(self, data: bytes):
        self.data = data
        self.pos = 0

    def skip_separators(self) -> None:
        while self.pos < len(self.data):
            byte = self.data[self.pos : self.pos + 1]
            if byte in (b"#",):
                while self.pos < len(self.data) and self.data[self.pos : self.pos + 1] != b"\n":
                    self.pos += 1
            elif byte and byte in _WS:
                self.pos += 1
            else:
                return

    def read_int(self, what: str) -> int:
        self.skip_separators()
        start = self.pos
        while self.pos < len(self.data) and self.data[self.pos : self.pos + 1].isdigit():
            self.pos += 1
        if self.pos == start:
            raise PbmError(f"expected {what}", start)
        return int(self.data[start : self.pos])


def parse_pbm(data: bytes) -> BinaryImage:
    """Decode P1 or P4 bytes into a BinaryImage."""
    if len(data) < 2:
        raise PbmError("not a PBM file", 0)
    magic = data[:2]
    if magic not in (b"P1", b"P4"):
        raise PbmError(f"unsupported magic {magic!r}", 0)
    scan = _Scanner(data)
    scan.pos = 2
    width = scan.read_int("width")
    height = scan.read_int("height")
    if width < 1 or height < 1:
        raise PbmError(f"bad dimensions {width}x{height}", 2)

    if magic == b"P1":
        pixels = bytearray()
        needed = width * height
        while len(pixels) < needed:
            scan.skip_separators()
            if scan.pos >= len(data):
                raise PbmError(f"raster ends after {len(pixels)} of {needed} pixels", scan.pos)
            ch = data[scan.pos : scan.pos + 1]
            if ch not in (b"0", b"1"):
                raise PbmError(f"unexpected raster byte {ch!r}", scan.pos)
            pixels.append(ch[0] - ord("0"))
            scan.pos += 1
        return BinaryImage(width, height, bytes(pixels))

    # P4: exactly one separator byte after the height, then packed rows
    if scan.pos >= len(data) or data[scan.pos : scan.pos + 1] not in _WS:
        raise PbmError("expected single whitespace before raster", scan.pos)
    scan.pos += 1
    row_bytes = (width + 7) // 8
    needed = row_bytes * height
    if len(data) - scan.pos < needed:
        raise PbmError(f"raster holds {len(data) - scan.pos} of {needed} bytes", len(data))
    pixels = bytearray(width * height)
    for y in range(height):
        row_start = scan.pos + y * row_bytes
        for x in range(width):
            byte = data[row_start + (x >> 3)]
            pixels[y * width + x] = (byte >> (7 - (x & 7))) & 1
    return BinaryImage(width, height, bytes(pixels))


def render_pbm(img: BinaryImage) -> bytes:
    """Encode as P4 with zeroed padding bits."""
    row_bytes = (img.width + 7) // 8
    out = bytearray(f"P4\n{img.width} {img.height}\n".encode("ascii"))
    for y in range(img.height):
        row = bytearray(row_bytes)
        base = y * img.width
        for x in range(img.width):
            if img.pixels[base + x]:
                row[x >> 3] |= 0x80 >> (x & 7)
        out.extend(row)
    return bytes(out)


def read_pbm(path: str | Path) -> BinaryImage:
    return parse_pbm(Path(path).read_bytes())


def write_pbm(img: BinaryImage, path: str | Path) -> None:
    Path(path).write_bytes(render_pbm(img))


__all__ = ["parse_pbm", "render_pbm", "read_pbm", "write_pbm"]
