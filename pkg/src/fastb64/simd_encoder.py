"""Vectorized encoder: 24 input bytes to 32 characters per block.

Each block is loaded 4 bytes *before* its first input byte, so that every
16-byte lane holds exactly four 3-byte chunks (bytes 4..15 of the low
lane, bytes 0..11 of the high lane).  ``enc_reshuffle`` spreads each chunk
over a 32-bit word with one 6-bit field per byte, and
``translate_to_ascii`` turns the 6-bit values into characters by adding a
per-range offset chosen with a 16-entry shuffle lookup.
"""

from __future__ import annotations

from dataclasses import dataclass

from .alphabet import Variant
from .config import DEFAULT_CONFIG, CodecConfig
from .scalar import encode_scalar
from .vector_engine import resolve_engine

# Fewer remaining input bytes than this and the scalar encoder takes over;
# a block reads 28 bytes past its start.
TAIL_THRESHOLD = 28
BLOCK_IN = 24
BLOCK_OUT = 32


def _lane_shuffle() -> bytes:
    # listed high byte first, as _mm256_set_epi8 takes them
    high_first = (
        10, 11, 9, 10, 7, 8, 6, 7, 4, 5, 3, 4, 1, 2, 0, 1,
        14, 15, 13, 14, 11, 12, 10, 11, 8, 9, 7, 8, 5, 6, 4, 5,
    )
    return bytes(reversed(high_first))


def _offsets(variant: Variant) -> bytes:
    table = [71] + [-4] * 10 + [-19, -16, 65, 0, 0]
    if variant is Variant.URL_SAFE:
        table[11] = ord("-") - 62
        table[12] = ord("_") - 63
    return bytes(x & 0xFF for x in table)


@dataclass(frozen=True)
class EncodeKernelConstants:
    lane_shuffle: bytes
    mask_ac: int = 0x0FC0FC00
    mulhi_const: int = 0x04000040
    mask_bd: int = 0x003F03F0
    mullo_const: int = 0x01000010
    offsets: bytes = b""

    @classmethod
    def for_variant(cls, variant: Variant) -> "EncodeKernelConstants":
        return cls(lane_shuffle=_lane_shuffle(), offsets=_offsets(variant))


_CONSTANTS = {v: EncodeKernelConstants.for_variant(v) for v in Variant}


def kernel_constants(variant: Variant = Variant.STANDARD) -> EncodeKernelConstants:
    return _CONSTANTS[variant]


class _Prepared:
    """Kernel constants materialised as engine vectors (cached per engine)."""

    def __init__(self, eng, consts: EncodeKernelConstants):
        self.shuffle = eng.vec(consts.lane_shuffle)
        self.mask_ac = eng.splat32(consts.mask_ac)
        self.mulhi = eng.splat32(consts.mulhi_const)
        self.mask_bd = eng.splat32(consts.mask_bd)
        self.mullo = eng.splat32(consts.mullo_const)
        self.offsets = eng.vec(consts.offsets * 2)
        self.b51 = eng.splat8(51)
        self.b26 = eng.splat8(26)
        self.b13 = eng.splat8(13)


_prepared: dict = {}


def _prepare(eng, variant: Variant) -> _Prepared:
    key = (eng.name, variant)
    prepared = _prepared.get(key)
    if prepared is None:
        prepared = _prepared[key] = _Prepared(eng, _CONSTANTS[variant])
    return prepared


def enc_reshuffle(raw, engine=None, variant: Variant = Variant.STANDARD):
    """Unpack four 3-byte chunks per lane into one 6-bit field per byte.

    Word layout afterwards (little endian): byte 0 = first character's
    value, byte 3 = fourth character's value.
    """
    eng = resolve_engine(engine)
    k = _prepare(eng, variant)
    v = eng.shuffle_bytes_in_lanes(raw, k.shuffle)
    t0 = eng.and_(v, k.mask_ac)
    t1 = eng.mulhi_u16(t0, k.mulhi)
    t2 = eng.and_(v, k.mask_bd)
    t3 = eng.mullo_i16(t2, k.mullo)
    return eng.or_(t1, t3)


def translate_to_ascii(sixbit, engine=None, variant: Variant = Variant.STANDARD):
    """Map bytes in [0, 64) to base64 characters without a 64-entry table.

    reduced = max(x - 51, 0), forced to 13 where x < 26; the character is
    x + offsets[reduced].  ``cmpgt_i8`` is signed, which is safe because
    every input byte is below 64.
    """
    eng = resolve_engine(engine)
    k = _prepare(eng, variant)
    reduced = eng.saturating_sub_u8(sixbit, k.b51)
    less = eng.cmpgt_i8(k.b26, sixbit)
    reduced = eng.or_(reduced, eng.and_(less, k.b13))
    offsets = eng.shuffle_bytes_in_lanes(k.offsets, reduced)
    return eng.add_i8(offsets, sixbit)


def _encode_blocks_serial(eng, data: bytes, nblocks: int, variant: Variant) -> bytes:
    out = bytearray(nblocks * BLOCK_OUT)
    # first block would start 4 bytes before the buffer: stage it
    scratch = bytes(4) + data[:TAIL_THRESHOLD]
    for i in range(nblocks):
        raw = eng.load32(scratch, 0) if i == 0 else eng.load32(data, BLOCK_IN * i - 4)
        chars = translate_to_ascii(enc_reshuffle(raw, eng, variant), eng, variant)
        eng.store32(out, BLOCK_OUT * i, chars)
    return bytes(out)


def _encode_blocks_batched(eng, data: bytes, nblocks: int, variant: Variant) -> bytes:
    import numpy as np

    used = BLOCK_IN * (nblocks - 1) + TAIL_THRESHOLD
    # staging shifts everything by 4 so block 0 needs no read before the buffer
    staged = np.zeros(used + 4, dtype=np.uint8)
    staged[4:] = np.frombuffer(data, dtype=np.uint8, count=used)
    windows = np.arange(nblocks, dtype=np.intp)[:, None] * BLOCK_IN + np.arange(32, dtype=np.intp)
    raw = staged[windows]
    chars = translate_to_ascii(enc_reshuffle(raw, eng, variant), eng, variant)
    return eng.to_bytes(chars)


def encode_simd(data: bytes, config: CodecConfig = DEFAULT_CONFIG, engine=None) -> bytes:
    """Encode ``data``; output is identical to ``encode_scalar``."""
    eng = resolve_engine(engine)
    data = bytes(data)
    n = len(data)
    nblocks = 0 if n < TAIL_THRESHOLD else (n - TAIL_THRESHOLD) // BLOCK_IN + 1
    if not nblocks:
        return encode_scalar(data, config)
    blocks = (_encode_blocks_batched if eng.batched else _encode_blocks_serial)(
        eng, data, nblocks, config.variant
    )
    return blocks + encode_scalar(data[BLOCK_IN * nblocks :], config)
