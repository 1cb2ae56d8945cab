from __future__ import annotations

import enum


class ErrorKind(enum.Enum):
    INVALID_CHARACTER = "InvalidCharacter"
    INVALID_PADDING = "InvalidPadding"
    NON_CANONICAL_TRAILING_BITS = "NonCanonicalTrailingBits"
    TRUNCATED_INPUT = "TruncatedInput"

    def __str__(self) -> str:
        return self.value


class DecodeError(ValueError):
    """Raised when base64 input cannot be decoded.

    ``offset`` is the index of the first offending byte in the input that
    was handed to the decoder.
    """

    def __init__(self, kind: ErrorKind, offset: int):
        super().__init__(f"{kind.value} at byte {offset}")
        self.kind = kind
        self.offset = offset

    def shifted(self, delta: int) -> "DecodeError":
        return DecodeError(self.kind, self.offset + delta)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DecodeError):
            return NotImplemented
        return (self.kind, self.offset) == (other.kind, other.offset)

    def __hash__(self) -> int:
        return hash((self.kind, self.offset))

    def __repr__(self) -> str:
        return f"DecodeError({self.kind.value}, {self.offset})"
