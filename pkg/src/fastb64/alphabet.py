"""Forward and inverse base64 character tables."""

from __future__ import annotations

import enum
from dataclasses import dataclass

PAD = 0x3D  # '='

# Any inverse entry >= 64 is not a data character; one comparison rejects it.
INVALID = 0xFF


class Variant(enum.Enum):
    STANDARD = "standard"
    URL_SAFE = "url-safe"


@dataclass(frozen=True)
class Alphabet:
    variant: Variant
    forward: bytes
    inverse: bytes
    pad: int = PAD

    @classmethod
    def build(cls, variant: Variant, chars: bytes) -> "Alphabet":
        if len(chars) != 64 or len(set(chars)) != 64:
            raise ValueError("alphabet must hold 64 distinct characters")
        if PAD in chars:
            raise ValueError("padding character cannot be a data character")
        inverse = bytearray([INVALID] * 256)
        for value, char in enumerate(chars):
            inverse[char] = value
        return cls(variant, bytes(chars), bytes(inverse))

    def lookup_forward(self, value: int) -> int:
        return self.forward[value]

    def lookup_inverse(self, byte: int) -> int:
        return self.inverse[byte]

    def is_data(self, byte: int) -> bool:
        return self.inverse[byte] < 64


_COMMON = b"ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789"

STANDARD = Alphabet.build(Variant.STANDARD, _COMMON + b"+/")
URL_SAFE = Alphabet.build(Variant.URL_SAFE, _COMMON + b"-_")


def get_alphabet(variant: Variant) -> Alphabet:
    return URL_SAFE if variant is Variant.URL_SAFE else STANDARD
