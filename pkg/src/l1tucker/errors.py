"""Exception types shared across file-format readers."""
from __future__ import annotations


class FormatError(Exception):
    """Malformed input file; ``offset`` is the failing byte position if known."""

    def __init__(self, message: str, offset: int | None = None):
        if offset is not None:
            message = f"{message} (at byte {offset})"
        super().__init__(message)
        self.offset = offset
