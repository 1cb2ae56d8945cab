"""Wide-vector operations used by the vectorized kernels.

Two backends expose the same operations:

``ReferenceEngine``
    Normative semantics.  A vector is a ``bytes`` object of 16 or 32
    bytes and every operation is written out lane by lane, mirroring the
    x86 instruction it stands for (``vpshufb``, ``vpmulhuw``, ...).

``NumpyEngine``
    The accelerated backend.  A vector is a ``uint8`` array whose last
    axis holds the 16 or 32 bytes; leading axes are a batch of independent
    vectors, so one call processes every block of an input at once.
    Constants may be passed as 1-D arrays and broadcast against a batch.

Operations on 32-byte vectors that are "lane local" treat bytes 0-15 and
16-31 as two independent 16-byte lanes, exactly like AVX2.
"""

from __future__ import annotations

import os
import struct
from array import array
from functools import lru_cache

try:
    import numpy as np
except ImportError:  # pragma: no cover - numpy is a declared dependency
    np = None

ENV_DISABLE = "FASTB64_NO_ACCEL"


def hardware_available() -> bool:
    """True when the accelerated backend can be used on this host."""
    if np is None:
        return False
    return os.environ.get(ENV_DISABLE, "") not in ("1", "true", "yes")


# byte -> signed 8-bit value
_S8 = [x - 256 if x > 127 else x for x in range(256)]
_ZERO128 = bytes(128)
# byte -> ASCII '0' or '1' for its most significant bit
_MSB_DIGIT = b"0" * 128 + b"1" * 128
# width -> integer with 0x01 in every byte
_REPEAT = {w: int.from_bytes(b"\x01" * w, "little") for w in (16, 32)}


class ReferenceEngine:
    name = "emulated"
    batched = False

    # -- construction -----------------------------------------------------

    @staticmethod
    def vec(data) -> bytes:
        return bytes(data)

    @staticmethod
    def splat8(x: int, width: int = 32) -> bytes:
        return bytes([x & 0xFF]) * width

    @staticmethod
    def splat32(x: int, width: int = 32) -> bytes:
        return struct.pack("<I", x & 0xFFFFFFFF) * (width // 4)

    @staticmethod
    def to_bytes(v) -> bytes:
        return bytes(v)

    # -- lane-wise byte operations ---------------------------------------

    @staticmethod
    def shuffle_bytes_in_lanes(v: bytes, idx: bytes) -> bytes:
        # per lane, a 256-entry table: index j < 128 picks lane[j % 16],
        # index j >= 128 (high bit set) gives zero
        return b"".join(
            idx[i : i + 16].translate(v[i : i + 16] * 8 + _ZERO128) for i in range(0, len(idx), 16)
        )

    @staticmethod
    def add_i8(a: bytes, b: bytes) -> bytes:
        # add the low 7 bits of every byte at once, then fix up bit 7
        # without letting carries cross into the next byte
        n = len(a)
        x, y = int.from_bytes(a, "little"), int.from_bytes(b, "little")
        low, high = _REPEAT[n] * 0x7F, _REPEAT[n] * 0x80
        return (((x & low) + (y & low)) ^ ((x ^ y) & high)).to_bytes(n, "little")

    @staticmethod
    def saturating_sub_u8(a: bytes, b: bytes) -> bytes:
        return bytes([x - y if x > y else 0 for x, y in zip(a, b)])

    @staticmethod
    def and_(a: bytes, b: bytes) -> bytes:
        n = len(a)
        return (int.from_bytes(a, "little") & int.from_bytes(b, "little")).to_bytes(n, "little")

    @staticmethod
    def or_(a: bytes, b: bytes) -> bytes:
        n = len(a)
        return (int.from_bytes(a, "little") | int.from_bytes(b, "little")).to_bytes(n, "little")

    @staticmethod
    def cmpeq_i8(a: bytes, b: bytes) -> bytes:
        n = len(a)
        diff = int.from_bytes(a, "little") ^ int.from_bytes(b, "little")
        low, high = _REPEAT[n] * 0x7F, _REPEAT[n] * 0x80
        # bit 7 of each byte ends up set iff that byte of diff is non-zero
        nonzero = (((diff & low) + low) | diff) & high
        return (((high ^ nonzero) >> 7) * 0xFF).to_bytes(n, "little")

    @staticmethod
    def cmpgt_i8(a: bytes, b: bytes) -> bytes:
        return bytes([0xFF if _S8[x] > _S8[y] else 0 for x, y in zip(a, b)])

    # -- 16-bit / 32-bit element operations ------------------------------

    @staticmethod
    def mulhi_u16(a: bytes, b: bytes) -> bytes:
        wa, wb = array("H", a), array("H", b)
        return array("H", [(x * y) >> 16 for x, y in zip(wa, wb)]).tobytes()

    @staticmethod
    def mullo_i16(a: bytes, b: bytes) -> bytes:
        wa, wb = array("H", a), array("H", b)
        return array("H", [(x * y) & 0xFFFF for x, y in zip(wa, wb)]).tobytes()

    @staticmethod
    def maddubs(a: bytes, b: bytes) -> bytes:
        # signed saturation to [-32768, 32767]
        return array("h", [
            s if -32768 <= (s := x0 * _S8[y0] + x1 * _S8[y1]) <= 32767 else (32767 if s > 0 else -32768)
            for x0, x1, y0, y1 in zip(a[0::2], a[1::2], b[0::2], b[1::2])
        ]).tobytes()

    @staticmethod
    def madd_i16(a: bytes, b: bytes) -> bytes:
        wa, wb = array("h", a), array("h", b)
        return array("I", [
            (x0 * y0 + x1 * y1) & 0xFFFFFFFF
            for x0, x1, y0, y1 in zip(wa[0::2], wa[1::2], wb[0::2], wb[1::2])
        ]).tobytes()

    @staticmethod
    def shr32(v: bytes, k: int) -> bytes:
        words = array("I", v)
        return array("I", [w >> k for w in words]).tobytes()

    @staticmethod
    def permute32_across_lanes(v: bytes, idx) -> bytes:
        words = array("I", v)
        return array("I", [words[j & 7] for j in idx]).tobytes()

    # -- reductions -------------------------------------------------------

    @staticmethod
    def testz(a: bytes, b: bytes) -> bool:
        return not (int.from_bytes(a, "little") & int.from_bytes(b, "little"))

    @staticmethod
    def movemask16(v: bytes) -> int:
        # one binary digit per byte, byte 15 as the most significant
        return int(v[15::-1].translate(_MSB_DIGIT), 2)

    # -- memory -----------------------------------------------------------

    @staticmethod
    def load32(buf, offset: int = 0) -> bytes:
        if offset < 0 or offset + 32 > len(buf):
            raise IndexError("load32 out of bounds")
        return bytes(buf[offset : offset + 32])

    @staticmethod
    def load16(buf, offset: int = 0) -> bytes:
        if offset < 0 or offset + 16 > len(buf):
            raise IndexError("load16 out of bounds")
        return bytes(buf[offset : offset + 16])

    @staticmethod
    def load32_partial(buf, offset: int, available: int) -> bytes:
        count = max(0, min(available, 32, len(buf) - offset))
        scratch = bytearray(32)
        scratch[:count] = buf[offset : offset + count]
        return bytes(scratch)

    @staticmethod
    def store32(buf: bytearray, offset: int, v: bytes) -> None:
        buf[offset : offset + 32] = v[:32]

    @staticmethod
    def store24(buf: bytearray, offset: int, v: bytes) -> None:
        buf[offset : offset + 24] = v[:24]

    @staticmethod
    def store16(buf: bytearray, offset: int, v: bytes) -> None:
        buf[offset : offset + 16] = v[:16]


class NumpyEngine:
    name = "simd"
    batched = True

    @staticmethod
    def vec(data):
        return np.frombuffer(bytes(data), dtype=np.uint8).copy()

    @staticmethod
    def splat8(x: int, width: int = 32):
        return np.full(width, x & 0xFF, dtype=np.uint8)

    @staticmethod
    def splat32(x: int, width: int = 32):
        return np.full(width // 4, x & 0xFFFFFFFF, dtype="<u4").view(np.uint8)

    @staticmethod
    def to_bytes(v) -> bytes:
        return np.ascontiguousarray(v, dtype=np.uint8).tobytes()

    @staticmethod
    def _words(v, dtype):
        return np.ascontiguousarray(v).view(dtype)

    @staticmethod
    def shuffle_bytes_in_lanes(v, idx):
        v = np.asarray(v)
        idx = np.asarray(idx)
        if v.ndim == 1:
            # constant table: one gather from its 256-entry-per-lane expansion
            table, lane_offset = _expanded_table(v.tobytes())
            return table[idx.astype(np.intp) + lane_offset[: idx.shape[-1]]]
        if idx.ndim == 1:
            sel, zero = _constant_selector(idx.tobytes())
            out = v[..., sel]
            if zero is not None:
                out[..., zero] = 0
            return out
        sel = (idx & 15).astype(np.intp) + _lane_base(idx.shape[-1])
        out = np.take_along_axis(v, sel, axis=-1)
        zero = (idx & 0x80).astype(bool)
        if zero.any():
            out[zero] = 0
        return out

    @staticmethod
    def add_i8(a, b):
        return np.add(a, b, dtype=np.uint8)

    @staticmethod
    def saturating_sub_u8(a, b):
        return np.where(np.greater(a, b), np.subtract(a, b, dtype=np.uint8), np.uint8(0))

    @staticmethod
    def and_(a, b):
        return np.bitwise_and(a, b)

    @staticmethod
    def or_(a, b):
        return np.bitwise_or(a, b)

    @staticmethod
    def cmpeq_i8(a, b):
        return np.equal(a, b).view(np.uint8) * np.uint8(0xFF)

    @staticmethod
    def cmpgt_i8(a, b):
        gt = np.greater(np.asarray(a).view(np.int8), np.asarray(b).view(np.int8))
        return gt.view(np.uint8) * np.uint8(0xFF)

    @classmethod
    def mulhi_u16(cls, a, b):
        wa = cls._words(a, "<u2").astype(np.uint32)
        wb = cls._words(b, "<u2").astype(np.uint32)
        return ((wa * wb) >> 16).astype("<u2").view(np.uint8)

    @classmethod
    def mullo_i16(cls, a, b):
        wa = cls._words(a, "<u2")
        wb = cls._words(b, "<u2")
        return np.multiply(wa, wb, dtype="<u2").view(np.uint8)

    @staticmethod
    def maddubs(a, b):
        prod = np.asarray(a).astype(np.int32) * np.asarray(b).view(np.int8).astype(np.int32)
        pairs = prod[..., 0::2] + prod[..., 1::2]
        return np.minimum(np.maximum(pairs, -32768), 32767).astype("<i2").view(np.uint8)

    @classmethod
    def madd_i16(cls, a, b):
        wa = cls._words(a, "<i2").astype(np.int64)
        wb = cls._words(b, "<i2").astype(np.int64)
        prod = wa * wb
        pairs = (prod[..., 0::2] + prod[..., 1::2]) & 0xFFFFFFFF
        return pairs.astype("<u4").view(np.uint8)

    @classmethod
    def shr32(cls, v, k: int):
        return (cls._words(v, "<u4") >> np.uint32(k)).astype("<u4").view(np.uint8)

    @classmethod
    def permute32_across_lanes(cls, v, idx):
        words = cls._words(v, "<u4")
        sel = np.asarray(idx, dtype=np.int64) & 7
        return np.ascontiguousarray(words[..., sel]).view(np.uint8)

    @staticmethod
    def testz(a, b):
        return ~np.any(np.bitwise_and(a, b), axis=-1)

    @staticmethod
    def movemask16(v):
        bits = (np.asarray(v)[..., :16] >> 7).astype(np.uint32)
        return (bits << np.arange(16, dtype=np.uint32)).sum(axis=-1, dtype=np.uint32)

    @staticmethod
    def load32(buf, offset: int = 0):
        if offset < 0 or offset + 32 > len(buf):
            raise IndexError("load32 out of bounds")
        return np.frombuffer(bytes(buf[offset : offset + 32]), dtype=np.uint8).copy()

    @staticmethod
    def load16(buf, offset: int = 0):
        if offset < 0 or offset + 16 > len(buf):
            raise IndexError("load16 out of bounds")
        return np.frombuffer(bytes(buf[offset : offset + 16]), dtype=np.uint8).copy()

    @staticmethod
    def load32_partial(buf, offset: int, available: int):
        count = max(0, min(available, 32, len(buf) - offset))
        scratch = np.zeros(32, dtype=np.uint8)
        scratch[:count] = np.frombuffer(bytes(buf[offset : offset + count]), dtype=np.uint8)
        return scratch

    @staticmethod
    def store32(buf: bytearray, offset: int, v) -> None:
        buf[offset : offset + 32] = np.asarray(v, dtype=np.uint8)[:32].tobytes()

    @staticmethod
    def store24(buf: bytearray, offset: int, v) -> None:
        buf[offset : offset + 24] = np.asarray(v, dtype=np.uint8)[:24].tobytes()

    @staticmethod
    def store16(buf: bytearray, offset: int, v) -> None:
        buf[offset : offset + 16] = np.asarray(v, dtype=np.uint8)[:16].tobytes()


@lru_cache(maxsize=None)
def _lane_base(width: int):
    return np.repeat(np.arange(width // 16, dtype=np.intp) * 16, 16)


@lru_cache(maxsize=256)
def _expanded_table(raw: bytes):
    """Per lane, all 256 index byte values mapped to their shuffle result."""
    lanes = np.frombuffer(raw, dtype=np.uint8).reshape(-1, 16)
    j = np.arange(256)
    table = np.where(j & 0x80, 0, lanes[:, j & 15]).astype(np.uint8).ravel()
    table.flags.writeable = False
    return table, np.repeat(np.arange(len(lanes), dtype=np.intp) * 256, 16)


@lru_cache(maxsize=256)
def _constant_selector(raw: bytes):
    idx = np.frombuffer(raw, dtype=np.uint8)
    sel = (idx & 15).astype(np.intp) + _lane_base(len(idx))
    zero = np.flatnonzero(idx & 0x80)
    return sel, (zero if zero.size else None)


REFERENCE = ReferenceEngine()


@lru_cache(maxsize=None)
def _numpy_engine() -> NumpyEngine:
    return NumpyEngine()


def get_engine(name: str = "auto"):
    """Resolve a vector backend by name: ``auto``, ``simd`` or ``emulated``.

    ``simd`` raises ``RuntimeError`` when the accelerated backend is
    unavailable; ``auto`` falls back to the reference emulation.
    """
    if name == "emulated":
        return REFERENCE
    if name in ("simd", "auto"):
        if hardware_available():
            return _numpy_engine()
        if name == "simd":
            raise RuntimeError("accelerated vector backend not available")
        return REFERENCE
    raise ValueError(f"unknown vector engine {name!r}")


def resolve_engine(engine):
    if engine is None:
        return get_engine("auto")
    return get_engine(engine) if isinstance(engine, str) else engine
