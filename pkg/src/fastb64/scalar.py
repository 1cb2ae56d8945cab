"""Scalar base64 codecs.

``encode_scalar``/``decode_scalar`` follow the textbook group-at-a-time
algorithms and serve as the correctness oracle for every other path.
The ``_fast`` variants use the larger lookup tables popularised by the
Chromium codec: two 256-entry character tables for encoding and four
256-entry 32-bit tables for decoding, where an invalid character sets a
flag byte that survives the OR of the four lookups.

Decoding rules shared by all decoders in this package:

* a data character is one whose inverse-table entry is < 64;
* '=' may only appear as the last one or two characters of the final
  quad, and only as a suffix; anywhere else it is ``INVALID_PADDING``;
* with ``Padding.REQUIRED`` a trailing partial group is
  ``TRUNCATED_INPUT`` (offset = start of that group); with
  ``Padding.ALLOW_UNPADDED`` a trailing group of 2 or 3 data characters
  decodes as if padded, and a lone trailing character is truncated;
* errors are reported for the first offending byte in stream order.

``final=False`` decodes a non-final segment of a longer stream: every
quad is treated as a body quad, so any '=' is an error and no strict
canonicality check runs.
"""

from __future__ import annotations

from .alphabet import PAD, Alphabet
from .config import DEFAULT_CONFIG, CodecConfig, Padding
from .errors import DecodeError, ErrorKind
from .strict import check_canonical_tail

_BAD = 0x01FFFFFF
_FLAG = 0xFF000000


# --------------------------------------------------------------------------
# encoding


def encode_scalar(data: bytes, config: CodecConfig = DEFAULT_CONFIG) -> bytes:
    forward = config.alphabet.forward
    n = len(data)
    out = bytearray()
    full = n - n % 3
    for i in range(0, full, 3):
        s0, s1, s2 = data[i], data[i + 1], data[i + 2]
        out.append(forward[s0 // 4])
        out.append(forward[(s0 * 16) % 64 + s1 // 16])
        out.append(forward[(s1 * 4) % 64 + s2 // 64])
        out.append(forward[s2 % 64])
    _encode_tail(data, full, config, out)
    return bytes(out)


def _encode_tail(data: bytes, i: int, config: CodecConfig, out: bytearray) -> None:
    n = len(data)
    if i >= n:
        return
    forward = config.alphabet.forward
    s0 = data[i]
    out.append(forward[s0 // 4])
    if i == n - 1:
        out.append(forward[(s0 * 16) % 64])
        if config.pad_output:
            out += b"=="
    else:
        s1 = data[i + 1]
        out.append(forward[(s0 * 16) % 64 + s1 // 16])
        out.append(forward[(s1 * 4) % 64])
        if config.pad_output:
            out.append(PAD)


class _EncodeTables:
    def __init__(self, alphabet: Alphabet):
        fwd = alphabet.forward
        self.div4 = bytes(fwd[x >> 2] for x in range(256))
        self.mod64 = bytes(fwd[x & 63] for x in range(256))


_encode_tables: dict = {}


def _get_encode_tables(alphabet: Alphabet) -> _EncodeTables:
    tables = _encode_tables.get(alphabet.variant)
    if tables is None:
        tables = _encode_tables[alphabet.variant] = _EncodeTables(alphabet)
    return tables


def encode_scalar_fast(data: bytes, config: CodecConfig = DEFAULT_CONFIG) -> bytes:
    tables = _get_encode_tables(config.alphabet)
    div4, mod64 = tables.div4, tables.mod64
    n = len(data)
    full = n - n % 3
    out = bytearray(full // 3 * 4)
    j = 0
    for i in range(0, full, 3):
        s0, s1, s2 = data[i], data[i + 1], data[i + 2]
        out[j] = div4[s0]
        out[j + 1] = mod64[((s0 << 4) | (s1 >> 4)) & 0xFF]
        out[j + 2] = mod64[((s1 << 2) | (s2 >> 6)) & 0xFF]
        out[j + 3] = mod64[s2]
        j += 4
    _encode_tail(data, full, config, out)
    return bytes(out)


# --------------------------------------------------------------------------
# decoding


def locate_invalid(data: bytes, start: int, end: int, alphabet: Alphabet) -> DecodeError | None:
    """First non-data byte in ``data[start:end]``, as a body-quad error."""
    inverse = alphabet.inverse
    for i in range(start, end):
        char = data[i]
        if inverse[char] >= 64:
            kind = ErrorKind.INVALID_PADDING if char == PAD else ErrorKind.INVALID_CHARACTER
            return DecodeError(kind, i)
    return None


def _body_error(data: bytes, start: int, end: int, alphabet: Alphabet) -> DecodeError:
    err = locate_invalid(data, start, end, alphabet)
    if err is None:  # pragma: no cover - callers only get here on a bad quad
        raise AssertionError("no invalid byte in failing range")
    return err


def _decode_final_quad(data: bytes, i: int, alphabet: Alphabet, out: bytearray) -> None:
    inverse = alphabet.inverse
    c0, c1, c2, c3 = data[i], data[i + 1], data[i + 2], data[i + 3]
    a, b = inverse[c0], inverse[c1]
    if a >= 64 or b >= 64:
        raise _body_error(data, i, i + 2, alphabet)
    if c2 == PAD:
        if c3 != PAD:
            raise DecodeError(ErrorKind.INVALID_PADDING, i + 2)
        out.append(((a * 4) + (b // 16)) & 0xFF)
        return
    c = inverse[c2]
    if c >= 64:
        raise DecodeError(ErrorKind.INVALID_CHARACTER, i + 2)
    if c3 == PAD:
        out.append(((a * 4) + (b // 16)) & 0xFF)
        out.append(((b * 16) % 256) + (c // 4))
        return
    d = inverse[c3]
    if d >= 64:
        raise DecodeError(ErrorKind.INVALID_CHARACTER, i + 3)
    out.append(((a * 4) + (b // 16)) & 0xFF)
    out.append(((b * 16) % 256) + (c // 4))
    out.append(((c * 64) % 256) + d)


def _decode_partial(data: bytes, i: int, config: CodecConfig, out: bytearray) -> None:
    """Trailing group of 1..3 characters starting at ``i``."""
    n = len(data)
    err = locate_invalid(data, i, n, config.alphabet)
    if err is not None:
        raise err
    if n - i == 1 or config.padding is Padding.REQUIRED:
        raise DecodeError(ErrorKind.TRUNCATED_INPUT, i)
    inverse = config.alphabet.inverse
    a, b = inverse[data[i]], inverse[data[i + 1]]
    out.append(((a * 4) + (b // 16)) & 0xFF)
    if n - i == 3:
        c = inverse[data[i + 2]]
        out.append(((b * 16) % 256) + (c // 4))


def _final_layout(n: int, start: int, final: bool) -> tuple[int, bool]:
    """Return (end of body quads, whether a complete final quad follows)."""
    rem = (n - start) % 4
    full = n - rem
    if final and rem == 0 and full > start:
        return full - 4, True
    return full, False


def decode_scalar_range(
    data: bytes, start: int, config: CodecConfig = DEFAULT_CONFIG, *, final: bool = True
) -> bytes:
    """Decode ``data[start:]`` with error offsets relative to ``data``."""
    alphabet = config.alphabet
    inverse = alphabet.inverse
    n = len(data)
    body_end, has_final_quad = _final_layout(n, start, final)
    out = bytearray()
    for i in range(start, body_end, 4):
        a = inverse[data[i]]
        b = inverse[data[i + 1]]
        c = inverse[data[i + 2]]
        d = inverse[data[i + 3]]
        if a >= 64 or b >= 64 or c >= 64 or d >= 64:
            raise _body_error(data, i, i + 4, alphabet)
        out.append((a * 4) + (b // 16) & 0xFF)
        out.append((b * 16) % 256 + (c // 4))
        out.append((c * 64) % 256 + d)
    _decode_rest(data, start, body_end, has_final_quad, config, out, final)
    return bytes(out)


def _decode_rest(data, start, body_end, has_final_quad, config, out, final) -> None:
    n = len(data)
    if has_final_quad:
        _decode_final_quad(data, body_end, config.alphabet, out)
    elif body_end < n:
        if not final:
            err = locate_invalid(data, body_end, n, config.alphabet)
            raise err if err is not None else DecodeError(ErrorKind.TRUNCATED_INPUT, body_end)
        _decode_partial(data, body_end, config, out)
    if final and config.strict:
        check_canonical_tail(data, start, config.alphabet)


def decode_scalar(data: bytes, config: CodecConfig = DEFAULT_CONFIG, *, final: bool = True) -> bytes:
    return decode_scalar_range(data, 0, config, final=final)


class _DecodeTables:
    """Four 256-entry tables whose OR packs one quad into three bytes.

    Little-endian word layout: byte 0 = a<<2 | b>>4, byte 1 = b<<4 | c>>2,
    byte 2 = c<<6 | d, byte 3 = error flag.
    """

    def __init__(self, alphabet: Alphabet):
        inverse = alphabet.inverse
        t1, t2, t3, t4 = [], [], [], []
        for char in range(256):
            v = inverse[char]
            if v >= 64:
                t1.append(_BAD)
                t2.append(_BAD)
                t3.append(_BAD)
                t4.append(_BAD)
                continue
            t1.append(v << 2)
            t2.append((v >> 4) | ((v & 0x0F) << 12))
            t3.append((v >> 2) << 8 | ((v & 0x03) << 22))
            t4.append(v << 16)
        self.a1, self.a2, self.a3, self.a4 = t1, t2, t3, t4


_decode_tables: dict = {}


def _get_decode_tables(alphabet: Alphabet) -> _DecodeTables:
    tables = _decode_tables.get(alphabet.variant)
    if tables is None:
        tables = _decode_tables[alphabet.variant] = _DecodeTables(alphabet)
    return tables


def decode_scalar_fast(
    data: bytes, config: CodecConfig = DEFAULT_CONFIG, *, final: bool = True
) -> bytes:
    tables = _get_decode_tables(config.alphabet)
    a1, a2, a3, a4 = tables.a1, tables.a2, tables.a3, tables.a4
    n = len(data)
    body_end, has_final_quad = _final_layout(n, 0, final)
    out = bytearray(body_end // 4 * 3)
    j = 0
    for i in range(0, body_end, 4):
        z = a1[data[i]] | a2[data[i + 1]] | a3[data[i + 2]] | a4[data[i + 3]]
        if z & _FLAG:
            raise _body_error(data, i, i + 4, config.alphabet)
        out[j] = z & 0xFF
        out[j + 1] = (z >> 8) & 0xFF
        out[j + 2] = z >> 16
        j += 3
    _decode_rest(data, 0, body_end, has_final_quad, config, out, final)
    return bytes(out)
