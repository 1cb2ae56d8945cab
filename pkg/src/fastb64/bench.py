"""Per-byte cost of each codec across input sizes.

Methodology: every (codec, direction, size) is timed ``reps`` times on
seeded random data, the minimum is the headline figure and the mean is
reported next to it; rows whose mean exceeds the minimum by more than 5%
are flagged as unstable.  A plain buffer copy of the same input is timed
as a baseline.  Measurements are single threaded and wall-clock
(``time.perf_counter_ns``); CPU frequency scaling will move the numbers.
"""

from __future__ import annotations

import csv
import hashlib
import io
import logging
import random
import time
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

from . import codec
from .config import DEFAULT_CONFIG, CodecConfig
from .vector_engine import hardware_available

log = logging.getLogger(__name__)

MIN_REPS = 500
UNSTABLE_RATIO = 0.05
CODECS = ("scalar", "scalar-fast", "simd", "emulated")
DIRECTIONS = ("encode", "decode")
CSV_COLUMNS = (
    "codec",
    "direction",
    "size",
    "reps",
    "min_ns",
    "mean_ns",
    "ns_per_byte",
    "cycles_per_byte",
    "baseline_ns_per_byte",
)
SKIPPED_NO_HW = "skipped: no hardware backend"


class PrecheckError(AssertionError):
    pass


@dataclass
class BenchRow:
    codec: str
    direction: str
    size: int
    reps: int
    min_ns: int | None = None
    mean_ns: float | None = None
    ns_per_byte: float | None = None
    cycles_per_byte: float | None = None
    baseline_ns_per_byte: float | None = None
    status: str = "ok"
    input_digest: str = ""  # identifies the timed input; not part of the CSV

    @property
    def stable(self) -> bool:
        if self.min_ns is None or self.mean_ns is None or self.min_ns == 0:
            return True
        return (self.mean_ns - self.min_ns) / self.min_ns <= UNSTABLE_RATIO


@dataclass
class BenchReport:
    seed: int
    rows: list[BenchRow] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)

    def row(self, codec_name: str, direction: str, size: int) -> BenchRow:
        for r in self.rows:
            if (r.codec, r.direction, r.size) == (codec_name, direction, size):
                return r
        raise KeyError((codec_name, direction, size))

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for r in self.rows:
            writer.writerow([
                r.codec,
                r.direction,
                r.size,
                r.reps,
                "" if r.min_ns is None else r.min_ns,
                "" if r.mean_ns is None else f"{r.mean_ns:.1f}",
                "" if r.ns_per_byte is None else f"{r.ns_per_byte:.4f}",
                "" if r.cycles_per_byte is None else f"{r.cycles_per_byte:.4f}",
                "" if r.baseline_ns_per_byte is None else f"{r.baseline_ns_per_byte:.4f}",
            ])
        return buf.getvalue()

    def to_table(self) -> str:
        header = f"{'codec':<12} {'dir':<7} {'size':>9} {'reps':>5} {'min ns':>12} " \
                 f"{'mean ns':>12} {'ns/byte':>9} {'copy ns/B':>9}"
        lines = [header, "-" * len(header)]
        for r in self.rows:
            if r.status != "ok":
                lines.append(f"{r.codec:<12} {r.direction:<7} {r.size:>9} {r.status}")
                continue
            flag = "" if r.stable else "  (unstable)"
            lines.append(
                f"{r.codec:<12} {r.direction:<7} {r.size:>9} {r.reps:>5} {r.min_ns:>12} "
                f"{r.mean_ns:>12.0f} {r.ns_per_byte:>9.3f} {r.baseline_ns_per_byte:>9.3f}{flag}"
            )
        lines.extend(f"warning: {w}" for w in self.warnings)
        return "\n".join(lines)


def _time(fn: Callable[[], object], reps: int) -> tuple[int, float]:
    samples = []
    clock = time.perf_counter_ns
    for _ in range(reps):
        t0 = clock()
        fn()
        samples.append(clock() - t0)
    return min(samples), sum(samples) / len(samples)


def _copy_baseline(data: bytes, reps: int) -> float:
    dst = bytearray(len(data))

    def copy() -> None:
        dst[:] = data

    best, _ = _time(copy, reps)
    return best / max(len(data), 1)


def _available(name: str) -> bool:
    return name != "simd" or hardware_available()


def precheck(data: bytes, codecs: Sequence[str], config: CodecConfig = DEFAULT_CONFIG) -> bytes:
    """Check every codec agrees on ``data``; returns the encoded text."""
    reference = codec.encode(data, config, "scalar")
    for name in codecs:
        if not _available(name):
            continue
        if codec.encode(data, config, name) != reference:
            raise PrecheckError(f"{name} encode disagrees with scalar on {len(data)} bytes")
        if codec.decode(reference, config, name) != data:
            raise PrecheckError(f"{name} decode does not round-trip {len(data)} bytes")
    return reference


def bench_data(
    data: bytes,
    direction: str,
    codecs: Sequence[str] = CODECS,
    reps: int = MIN_REPS,
    config: CodecConfig = DEFAULT_CONFIG,
    report: BenchReport | None = None,
) -> BenchReport:
    """Time ``direction`` over the given input (binary for encode, base64
    text for decode) for every codec."""
    if report is None:
        report = BenchReport(seed=-1)
    if reps < MIN_REPS:
        msg = f"reps={reps} is below the {MIN_REPS}-repetition methodology"
        if msg not in report.warnings:
            log.warning(msg)
            report.warnings.append(msg)
    baseline = _copy_baseline(data, reps)
    digest = hashlib.blake2b(data, digest_size=8).hexdigest()
    for name in codecs:
        row = BenchRow(name, direction, len(data), reps, baseline_ns_per_byte=baseline,
                       input_digest=digest)
        if not _available(name):
            row.status = SKIPPED_NO_HW
            report.rows.append(row)
            continue
        if direction == "encode":
            fn = lambda: codec.encode(data, config, name)  # noqa: E731
        else:
            fn = lambda: codec.decode(data, config, name)  # noqa: E731
        row.min_ns, row.mean_ns = _time(fn, reps)
        row.ns_per_byte = row.min_ns / max(len(data), 1)
        if not row.stable:
            report.warnings.append(
                f"{name} {direction} size={len(data)}: mean {row.mean_ns:.0f} ns is more than "
                f"{UNSTABLE_RATIO:.0%} above min {row.min_ns} ns"
            )
        report.rows.append(row)
    return report


def run_bench(
    sizes: Iterable[int],
    codecs: Sequence[str] = CODECS,
    seed: int = 0,
    reps: int = MIN_REPS,
    directions: Sequence[str] = DIRECTIONS,
    config: CodecConfig = DEFAULT_CONFIG,
) -> BenchReport:
    sizes = list(sizes)
    if not sizes:
        raise ValueError("sizes must be non-empty")
    for d in directions:
        if d not in DIRECTIONS:
            raise ValueError(f"unknown direction {d!r}")
    rng = random.Random(seed)
    report = BenchReport(seed=seed)
    inputs = []
    for size in sizes:
        data = rng.randbytes(size)
        # every codec must agree before any timing is recorded
        inputs.append((data, precheck(data, codecs, config)))
    for data, text in inputs:
        for direction in directions:
            bench_data(data if direction == "encode" else text, direction, codecs, reps, config, report)
    return report
