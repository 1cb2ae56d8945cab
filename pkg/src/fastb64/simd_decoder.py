"""Vectorized decoder: 32 characters to 24 bytes per block.

Translation validates every character with a nibble bitset (a byte is a
data character iff ``lut_lo[low nibble] & lut_hi[high nibble] == 0``) and
converts it by adding an offset looked up from the high nibble.  Packing
merges 6-bit fields with two multiply-add steps, then gathers the 24 data
bytes with an in-lane byte shuffle and a cross-lane 32-bit permute.

Padding never reaches the vector path: blocks only run while at least 45
characters remain, so the final quads always go to the scalar decoder.
"""

from __future__ import annotations

from dataclasses import dataclass

from .alphabet import Variant, get_alphabet
from .config import DEFAULT_CONFIG, CodecConfig
from .errors import DecodeError
from .scalar import decode_scalar_range, locate_invalid
from .vector_engine import resolve_engine

TAIL_THRESHOLD = 45
BLOCK_IN = 32
BLOCK_OUT = 24


def _signed(values) -> bytes:
    return bytes(x & 0xFF for x in values)


@dataclass(frozen=True)
class DecodeKernelConstants:
    lut_lo: bytes
    lut_hi: bytes
    lut_roll: bytes
    special: int  # the character that needs its own roll slot
    # AND-ed with cmpeq(chars, special) before it is added to the high
    # nibble; 0xFF keeps the plain -1 adjustment
    special_adjust: int
    mask_2f: int = 0x2F
    pack_maddubs_const: int = 0x01400140
    pack_madd_const: int = 0x00011000
    pack_shuffle: bytes = _signed((2, 1, 0, 6, 5, 4, 10, 9, 8, 14, 13, 12, -1, -1, -1, -1))
    pack_permute: tuple = (0, 1, 2, 4, 5, 6, -1, -1)


STANDARD_CONSTANTS = DecodeKernelConstants(
    lut_lo=bytes([0x15, 0x11, 0x11, 0x11, 0x11, 0x11, 0x11, 0x11,
                  0x11, 0x11, 0x13, 0x1A, 0x1B, 0x1B, 0x1B, 0x1A]),
    lut_hi=bytes([0x10, 0x10, 0x01, 0x02, 0x04, 0x08, 0x04, 0x08,
                  0x10, 0x10, 0x10, 0x10, 0x10, 0x10, 0x10, 0x10]),
    lut_roll=_signed((0, 16, 19, 4, -65, -65, -71, -71, 0, 0, 0, 0, 0, 0, 0, 0)),
    special=ord("/"),
    special_adjust=0xFF,
)

# '-' (0x2D) is the only data character with high nibble 2.  '_' (0x5F)
# shares high nibble 5 with 'P'..'Z' but 0x7F is invalid, so nibble 7 gets
# its own bitset bit (0x20).  '_' needs offset -32 while 'P'..'Z' need -65:
# its compare mask is narrowed to +4, moving it to the unused roll slot 9.
URL_SAFE_CONSTANTS = DecodeKernelConstants(
    lut_lo=bytes([0x15, 0x11, 0x11, 0x11, 0x11, 0x11, 0x11, 0x11,
                  0x11, 0x11, 0x13, 0x3B, 0x3B, 0x3A, 0x3B, 0x33]),
    lut_hi=bytes([0x10, 0x10, 0x01, 0x02, 0x04, 0x08, 0x04, 0x20,
                  0x10, 0x10, 0x10, 0x10, 0x10, 0x10, 0x10, 0x10]),
    lut_roll=_signed((0, 0, 17, 4, -65, -65, -71, -71, 0, -32, 0, 0, 0, 0, 0, 0)),
    special=ord("_"),
    special_adjust=0x04,
)


def kernel_constants(variant: Variant = Variant.STANDARD) -> DecodeKernelConstants:
    return URL_SAFE_CONSTANTS if variant is Variant.URL_SAFE else STANDARD_CONSTANTS


class _Prepared:
    def __init__(self, eng, consts: DecodeKernelConstants):
        self.lut_lo = eng.vec(consts.lut_lo * 2)
        self.lut_hi = eng.vec(consts.lut_hi * 2)
        self.lut_roll = eng.vec(consts.lut_roll * 2)
        self.mask_2f = eng.splat8(consts.mask_2f)
        self.special = eng.splat8(consts.special)
        self.adjust = None if consts.special_adjust == 0xFF else eng.splat8(consts.special_adjust)
        self.maddubs = eng.splat32(consts.pack_maddubs_const)
        self.madd = eng.splat32(consts.pack_madd_const)
        self.pack_shuffle = eng.vec(consts.pack_shuffle * 2)
        self.pack_permute = consts.pack_permute


_prepared: dict = {}


def _prepare(eng, variant: Variant) -> _Prepared:
    key = (eng.name, variant)
    prepared = _prepared.get(key)
    if prepared is None:
        prepared = _prepared[key] = _Prepared(eng, kernel_constants(variant))
    return prepared


def translate_from_ascii(chars, engine=None, variant: Variant = Variant.STANDARD):
    """Return ``(ok, sixbit)`` for a 32-character block.

    ``ok`` is false when any byte of the block is not a data character; it
    does not say which one.  With the batched backend ``ok`` is an array
    with one flag per block.
    """
    eng = resolve_engine(engine)
    k = _prepare(eng, variant)
    hi_nibbles = eng.and_(eng.shr32(chars, 4), k.mask_2f)
    lo_nibbles = eng.and_(chars, k.mask_2f)
    lo = eng.shuffle_bytes_in_lanes(k.lut_lo, lo_nibbles)
    hi = eng.shuffle_bytes_in_lanes(k.lut_hi, hi_nibbles)
    eq_special = eng.cmpeq_i8(chars, k.special)
    if k.adjust is not None:
        eq_special = eng.and_(eq_special, k.adjust)
    roll = eng.shuffle_bytes_in_lanes(k.lut_roll, eng.add_i8(eq_special, hi_nibbles))
    ok = eng.testz(lo, hi)
    return ok, eng.add_i8(chars, roll)


def dec_reshuffle(sixbit, engine=None, variant: Variant = Variant.STANDARD):
    """Pack 32 six-bit values into 24 bytes; returns the 32-byte vector
    whose first 24 bytes hold the output."""
    eng = resolve_engine(engine)
    k = _prepare(eng, variant)
    merged = eng.maddubs(sixbit, k.maddubs)
    words = eng.madd_i16(merged, k.madd)
    packed = eng.shuffle_bytes_in_lanes(words, k.pack_shuffle)
    return eng.permute32_across_lanes(packed, k.pack_permute)


def _block_error(data: bytes, block: int, variant: Variant) -> DecodeError:
    start = BLOCK_IN * block
    err = locate_invalid(data, start, start + BLOCK_IN, get_alphabet(variant))
    if err is None:  # pragma: no cover - the bitset test is exact
        raise AssertionError(f"block {block} flagged invalid but rescan found nothing")
    return err


def _decode_blocks_serial(eng, data: bytes, nblocks: int, variant: Variant) -> bytes:
    out = bytearray(nblocks * BLOCK_OUT)
    for i in range(nblocks):
        ok, sixbit = translate_from_ascii(eng.load32(data, BLOCK_IN * i), eng, variant)
        if not ok:
            raise _block_error(data, i, variant)
        eng.store24(out, BLOCK_OUT * i, dec_reshuffle(sixbit, eng, variant))
    return bytes(out)


def _decode_blocks_batched(eng, data: bytes, nblocks: int, variant: Variant) -> bytes:
    import numpy as np

    chars = np.frombuffer(data, dtype=np.uint8, count=nblocks * BLOCK_IN).reshape(nblocks, BLOCK_IN)
    ok, sixbit = translate_from_ascii(chars, eng, variant)
    if not ok.all():
        raise _block_error(data, int(np.argmin(ok)), variant)
    packed = dec_reshuffle(sixbit, eng, variant)
    return eng.to_bytes(packed[:, :BLOCK_OUT])


def decode_simd(
    data: bytes, config: CodecConfig = DEFAULT_CONFIG, engine=None, *, final: bool = True
) -> bytes:
    """Decode ``data``; result and errors are identical to ``decode_scalar``."""
    eng = resolve_engine(engine)
    data = bytes(data)
    n = len(data)
    nblocks = 0 if n < TAIL_THRESHOLD else (n - TAIL_THRESHOLD) // BLOCK_IN + 1
    head = b""
    if nblocks:
        head = (_decode_blocks_batched if eng.batched else _decode_blocks_serial)(
            eng, data, nblocks, config.variant
        )
    return head + decode_scalar_range(data, BLOCK_IN * nblocks, config, final=final)
