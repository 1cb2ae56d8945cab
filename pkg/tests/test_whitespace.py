import os
import random
import subprocess
import sys
import threading

import numpy as np
import pytest

from fastb64 import whitespace
from fastb64.whitespace import (
    compaction_table,
    despace_scalar,
    despace_simd,
    kept_positions,
    remove_whitespace,
)

FILTER = bytes.maketrans(b"", b"")


def oracle(data: bytes) -> bytes:
    return data.translate(FILTER, b" \n\r")


def run(fn, data, *args):
    buf = bytearray(data)
    n = fn(buf, *args)
    return bytes(buf[:n]), n


def test_scalar_examples():
    assert run(despace_scalar, b"R0l G\nOD\r") == (b"R0lGOD", 6)
    assert run(despace_scalar, b"") == (b"", 0)


def test_simd_blocks(engine):
    assert run(despace_simd, b" \n\r " * 4, engine) == (b"", 0)
    block = bytes(range(65, 81))
    assert run(despace_simd, block + block, engine) == (block + block, 32)
    assert run(despace_simd, b"R0l G\nOD\r" * 5, engine) == (b"R0lGOD" * 5, 30)


def test_only_three_bytes_removed(engine):
    for b in range(256):
        keep = b not in (0x20, 0x0A, 0x0D)
        for data in (bytes([b]), bytes([b]) * 16, b"AB" + bytes([b]) * 20):
            expected = oracle(data)
            assert (len(expected) == len(data)) == keep
            assert run(despace_scalar, data) == (expected, len(expected))
            assert run(despace_simd, data, engine) == (expected, len(expected))


@pytest.mark.parametrize("density", [0.0, 0.03, 0.5, 1.0])
def test_random_buffers(engine, density):
    rng = random.Random(int(density * 100))
    alphabet = b"ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/="
    for _ in range(100):
        n = rng.randrange(0, 1100)
        data = bytes(
            rng.choice(b" \n\r") if rng.random() < density else rng.choice(alphabet) for _ in range(n)
        )
        expected = oracle(data)
        assert run(despace_scalar, data) == (expected, len(expected))
        assert run(despace_simd, data, engine) == (expected, len(expected))


def test_compaction_table_invariant():
    table = compaction_table()
    assert table.shape == (65536, 16)
    for m in range(65536):
        kept = [i for i in range(16) if not (m >> i) & 1]
        row = table[m]
        assert row[: len(kept)].tolist() == kept
        assert all(x & 0x80 for x in row[len(kept) :].tolist())


def test_compaction_applied_to_vector(engine):
    rng = random.Random(29)
    table = compaction_table()
    for _ in range(300):
        v = rng.randbytes(16)
        m = rng.randrange(65536)
        out = engine.to_bytes(engine.shuffle_bytes_in_lanes(engine.vec(v), engine.vec(table[m].tobytes())))
        kept = bytes(v[i] for i in range(16) if not (m >> i) & 1)
        assert out[: len(kept)] == kept


def test_table_built_once_under_contention(monkeypatch):
    monkeypatch.setattr(whitespace, "_table", None)
    calls = []
    real = whitespace._build_compaction_table

    def counting():
        calls.append(1)
        return real()

    monkeypatch.setattr(whitespace, "_build_compaction_table", counting)
    results = []
    threads = [threading.Thread(target=lambda: results.append(compaction_table())) for _ in range(8)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert len(calls) == 1
    assert all(r is results[0] for r in results)


def test_remove_whitespace_and_positions():
    data = b" A\nB\r\nC  D"
    assert remove_whitespace(data) == b"ABCD"
    assert kept_positions(data).tolist() == [1, 3, 6, 9]
    assert isinstance(kept_positions(b""), np.ndarray)


def test_tab_is_kept():
    assert remove_whitespace(b"A\tB") == b"A\tB"


def test_eager_table_flag():
    code = "import fastb64.whitespace as w; print(w._table is not None)"
    for flag, expected in (("1", "True"), ("", "False")):
        proc = subprocess.run(
            [sys.executable, "-c", code], capture_output=True, text=True,
            env={**os.environ, "FASTB64_EAGER_TABLES": flag},
        )
        assert proc.stdout.strip() == expected
