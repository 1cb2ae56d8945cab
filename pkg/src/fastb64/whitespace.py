"""In-place removal of space, LF and CR ahead of decoding.

Only these three bytes are removed.  Tabs and other control bytes are
left alone so the decoder still rejects them.
"""

from __future__ import annotations

import os
import threading

import numpy as np

from .vector_engine import resolve_engine

WHITESPACE = b" \n\r"

KEEP_FLAG = bytes(0 if b in WHITESPACE else 1 for b in range(256))

# set to 1 to build the 1 MiB compaction table at import time instead of
# on first use, so the one-off cost stays out of timings
ENV_EAGER = "FASTB64_EAGER_TABLES"

_table = None
_table_rows = b""  # the same table as one bytes object, for the serial path
_table_lock = threading.Lock()


def _build_compaction_table() -> np.ndarray:
    masks = np.arange(1 << 16, dtype=np.uint32)
    drop = ((masks[:, None] >> np.arange(16, dtype=np.uint32)) & 1).astype(bool)
    # stable sort puts kept positions first, in order
    order = np.argsort(drop, axis=1, kind="stable").astype(np.uint8)
    kept = 16 - drop.sum(axis=1)
    order[np.arange(16) >= kept[:, None]] = 0x80
    return order


def compaction_table() -> np.ndarray:
    """65536 x 16 shuffle indices; row m packs the bytes at the zero bits
    of m to the front (unused slots are 0x80, which shuffles in zero)."""
    global _table, _table_rows
    if _table is None:
        with _table_lock:
            if _table is None:
                table = _build_compaction_table()
                _table_rows = table.tobytes()
                _table = table
    return _table


def despace_scalar(buffer: bytearray, start: int = 0, write: int | None = None) -> int:
    """Compact ``buffer[start:]`` in place; return the new length.

    ``write`` is the position the first kept byte goes to (defaults to
    ``start``); bytes past the returned length are left as they were.
    """
    p = start if write is None else write
    keep = KEEP_FLAG
    for i in range(start, len(buffer)):
        v = buffer[i]
        buffer[p] = v
        p += keep[v]
    return p


def _despace_blocks_serial(eng, buffer: bytearray, nblocks: int) -> int:
    compaction_table()
    rows = _table_rows
    spaces = eng.splat8(0x20, 16)
    newline = eng.splat8(0x0A, 16)
    carriage = eng.splat8(0x0D, 16)
    p = 0
    for i in range(nblocks):
        v = eng.load16(buffer, 16 * i)
        anywhite = eng.or_(
            eng.or_(eng.cmpeq_i8(v, spaces), eng.cmpeq_i8(v, newline)),
            eng.cmpeq_i8(v, carriage),
        )
        mask16 = eng.movemask16(anywhite)
        v = eng.shuffle_bytes_in_lanes(v, eng.vec(rows[16 * mask16 : 16 * mask16 + 16]))
        eng.store16(buffer, p, v)
        p += 16 - bin(mask16).count("1")
    return p


def _despace_blocks_batched(eng, buffer: bytearray, nblocks: int) -> int:
    table = compaction_table()
    v = np.frombuffer(buffer, dtype=np.uint8, count=16 * nblocks).reshape(nblocks, 16).copy()
    anywhite = eng.or_(
        eng.or_(eng.cmpeq_i8(v, eng.splat8(0x20, 16)), eng.cmpeq_i8(v, eng.splat8(0x0A, 16))),
        eng.cmpeq_i8(v, eng.splat8(0x0D, 16)),
    )
    masks = eng.movemask16(anywhite)
    packed = eng.shuffle_bytes_in_lanes(v, table[masks])
    kept = 16 - np.bitwise_count(masks).astype(np.intp)
    out = packed[np.arange(16) < kept[:, None]]
    buffer[: out.size] = out.tobytes()
    return int(out.size)


def despace_simd(buffer: bytearray, engine=None) -> int:
    """Vectorized equivalent of ``despace_scalar(buffer)``."""
    eng = resolve_engine(engine)
    nblocks = len(buffer) // 16
    p = 0
    if nblocks:
        p = (_despace_blocks_batched if eng.batched else _despace_blocks_serial)(
            eng, buffer, nblocks
        )
    return despace_scalar(buffer, 16 * nblocks, p)


def remove_whitespace(data: bytes, engine=None) -> bytes:
    buf = bytearray(data)
    n = despace_simd(buf, engine)
    del buf[n:]
    return bytes(buf)


def kept_positions(data: bytes) -> np.ndarray:
    """Indices in ``data`` of the bytes that survive despacing."""
    arr = np.frombuffer(bytes(data), dtype=np.uint8)
    keep = np.frombuffer(KEEP_FLAG, dtype=np.uint8)[arr].astype(bool)
    return np.flatnonzero(keep)


if os.environ.get(ENV_EAGER, "") == "1":
    compaction_table()
