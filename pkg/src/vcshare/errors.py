"""Exceptions shared across the package."""

from __future__ import annotations


class CapacityError(ValueError):
    """An enumeration or construction exceeds its configured size cap."""


class DegenerateFamilyError(ValueError):
    """A function family cannot support the requested composed scheme."""


class InfeasibleConstraintError(ValueError):
    """No column permutation can satisfy an embedding constraint."""


class FileFormatError(ValueError):
    """A file on disk is not in the expected format."""


class PbmError(FileFormatError):
    """Malformed portable-bitmap data.

    ``offset`` is the byte position at which parsing failed.
    """

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (byte offset {offset})")
        self.offset = offset


class HeaderMismatchError(ValueError):
    """Share files with incompatible headers were combined."""


__all__ = [
    "CapacityError",
    "DegenerateFamilyError",
    "InfeasibleConstraintError",
    "FileFormatError",
    "PbmError",
    "HeaderMismatchError",
]
