"""Canonical-encoding checks on the last group of a base64 string.

A decoder can accept strings that no encoder would ever produce: the bits
left over after the final output byte may be non-zero, and a stream may
end in three '=' characters.  These checks reject both.  They only look at
the final group, so they cost nothing measurable and are opt-in
(``CodecConfig.strict``); the base64 standard does not require them.
"""

from __future__ import annotations

from .alphabet import PAD, STANDARD, Alphabet
from .errors import DecodeError, ErrorKind


def validate_final_quad(last4: bytes, alphabet: Alphabet = STANDARD) -> None:
    """Raise ``DecodeError`` unless ``last4`` is a canonical final quad.

    Offsets in the raised error are relative to ``last4``.
    """
    if len(last4) != 4:
        raise ValueError("final quad must hold exactly four characters")
    pads = len(last4) - len(bytes(last4).rstrip(bytes([PAD])))
    if pads > 2:
        raise DecodeError(ErrorKind.INVALID_PADDING, 4 - pads)
    _check_group(last4[: 4 - pads], alphabet, 0)


def validate_unpadded_tail(tail: bytes, alphabet: Alphabet = STANDARD) -> None:
    """Same check for a final group of 2 or 3 characters with no padding."""
    if len(tail) not in (2, 3):
        raise ValueError("unpadded tail must hold 2 or 3 characters")
    _check_group(tail, alphabet, 0)


def _check_group(data_chars: bytes, alphabet: Alphabet, base: int) -> None:
    inverse = alphabet.inverse
    for i, char in enumerate(data_chars):
        if char == PAD:
            raise DecodeError(ErrorKind.INVALID_PADDING, base + i)
        if inverse[char] >= 64:
            raise DecodeError(ErrorKind.INVALID_CHARACTER, base + i)
    count = len(data_chars)
    if count == 2 and (inverse[data_chars[1]] * 16) % 256 != 0:
        raise DecodeError(ErrorKind.NON_CANONICAL_TRAILING_BITS, base + 1)
    if count == 3 and (inverse[data_chars[2]] * 64) % 256 != 0:
        raise DecodeError(ErrorKind.NON_CANONICAL_TRAILING_BITS, base + 2)


def check_canonical_tail(data: bytes, start: int, alphabet: Alphabet) -> None:
    """Apply the final-group checks to ``data[start:]`` (absolute offsets)."""
    n = len(data)
    if n - start <= 0:
        return
    rem = (n - start) % 4
    if rem == 0:
        base = n - 4
        try:
            validate_final_quad(bytes(data[base:n]), alphabet)
        except DecodeError as exc:
            raise exc.shifted(base) from None
    elif rem in (2, 3):
        base = n - rem
        try:
            validate_unpadded_tail(bytes(data[base:n]), alphabet)
        except DecodeError as exc:
            raise exc.shifted(base) from None
