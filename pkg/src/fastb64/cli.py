"""``fastb64`` command line tool.

Exit status: 0 on success, 1 on a decode error, 2 on usage or I/O errors.
"""

from __future__ import annotations

import argparse
import dataclasses
import os
import sys
from typing import BinaryIO, Iterator

import numpy as np

from . import bench, codec
from .alphabet import Variant
from .config import CodecConfig, Padding
from .errors import DecodeError
from .whitespace import kept_positions, remove_whitespace

# chunk sizes keep 3-byte groups / 4-character quads whole
ENCODE_CHUNK = 3 * (1 << 16)
DECODE_CHUNK = 4 * (1 << 16)

DEFAULT_BENCH_SIZES = [1 << k for k in range(3, 17)]
DEFAULT_BENCH_CODECS = ["scalar", "scalar-fast", "simd"]


class UsageError(Exception):
    pass


def _read_chunks(stream: BinaryIO, size: int) -> Iterator[bytes]:
    """Yield chunks of exactly ``size`` bytes except possibly the last."""
    while True:
        parts = []
        want = size
        while want:
            piece = stream.read(want)
            if not piece:
                break
            parts.append(piece)
            want -= len(piece)
        chunk = b"".join(parts)
        if not chunk:
            return
        yield chunk
        if want:
            return


def _config(args: argparse.Namespace) -> CodecConfig:
    return CodecConfig(
        variant=Variant.URL_SAFE if args.url_safe else Variant.STANDARD,
        padding=Padding.ALLOW_UNPADDED if args.no_pad else Padding.REQUIRED,
        ignore_whitespace=getattr(args, "ignore_whitespace", False),
        strict=getattr(args, "strict", False),
    )


def _check_engine(name: str) -> str:
    try:
        resolved = codec.resolve_engine_name(name)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if resolved == "simd" and not codec.hardware_available():
        raise UsageError("engine 'simd' is not available on this host")
    return resolved


def run_encode(src: BinaryIO, dst: BinaryIO, config: CodecConfig, engine: str) -> None:
    for chunk in _read_chunks(src, ENCODE_CHUNK):
        dst.write(codec.encode(chunk, config, engine))


def run_decode(src: BinaryIO, dst: BinaryIO, config: CodecConfig, engine: str) -> None:
    """Stream-decode ``src``; a ``DecodeError`` carries the offset in ``src``."""
    seg_config = dataclasses.replace(config, ignore_whitespace=False)
    pending = bytearray()
    positions = np.empty(0, dtype=np.int64)  # raw offset of each pending char
    raw_offset = 0
    consumed = 0  # characters already decoded (no whitespace mapping)

    def flush(segment: bytes, final: bool) -> None:
        try:
            dst.write(codec.decode(segment, seg_config, engine, final=final))
        except DecodeError as exc:
            if config.ignore_whitespace:
                raise DecodeError(exc.kind, int(positions[exc.offset])) from None
            raise exc.shifted(consumed) from None

    for raw in _read_chunks(src, DECODE_CHUNK):
        if config.ignore_whitespace:
            pending += remove_whitespace(raw)
            positions = np.concatenate([positions, kept_positions(raw) + raw_offset])
        else:
            pending += raw
        raw_offset += len(raw)
        # only a segment with more data after it is known to be non-final
        while len(pending) > DECODE_CHUNK:
            flush(bytes(pending[:DECODE_CHUNK]), final=False)
            del pending[:DECODE_CHUNK]
            positions = positions[DECODE_CHUNK:]
            consumed += DECODE_CHUNK
    flush(bytes(pending), final=True)


def _open_input(path: str | None) -> BinaryIO:
    if path is None or path == "-":
        return sys.stdin.buffer
    try:
        return open(path, "rb")
    except OSError as exc:
        raise UsageError(f"cannot open {path}: {exc.strerror}") from None


def _open_output(path: str | None) -> BinaryIO:
    if path is None or path == "-":
        return sys.stdout.buffer
    try:
        return open(path, "wb")
    except OSError as exc:
        raise UsageError(f"cannot open {path}: {exc.strerror}") from None


def _codec_list(text: str) -> list[str]:
    names = [c.strip() for c in text.split(",") if c.strip()]
    for name in names:
        if name not in bench.CODECS:
            raise argparse.ArgumentTypeError(f"unknown codec {name!r}")
    return names


def _size_list(text: str) -> list[int]:
    try:
        sizes = [int(s) for s in text.split(",") if s.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad size list {text!r}") from None
    if not sizes or any(s < 0 for s in sizes):
        raise argparse.ArgumentTypeError("sizes must be non-negative integers")
    return sizes


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fastb64", description="Fast base64 encoder/decoder.")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("input", nargs="?", help="input file (default: standard input)")
    common.add_argument("-o", "--output", help="output file (default: standard output)")
    common.add_argument("--url-safe", action="store_true", help="use the base64url alphabet")
    common.add_argument(
        "--engine",
        choices=codec.ENGINES,
        default=os.environ.get(codec.ENV_ENGINE, "auto"),
        help="codec implementation (default: $FASTB64_ENGINE or auto)",
    )
    common.add_argument("--bench", action="store_true", help="benchmark the input instead of converting it")
    common.add_argument("--reps", type=int, default=bench.MIN_REPS, help="repetitions for --bench")
    common.add_argument(
        "--codecs", type=_codec_list, default=DEFAULT_BENCH_CODECS,
        help="comma-separated codecs for --bench (default: scalar,scalar-fast,simd)",
    )

    enc = sub.add_parser("encode", parents=[common], help="encode binary data to base64")
    enc.add_argument("--no-pad", action="store_true", help="omit '=' padding")

    dec = sub.add_parser("decode", parents=[common], help="decode base64 to binary data")
    dec.add_argument("--no-pad", action="store_true", help="accept input without '=' padding")
    dec.add_argument("--ignore-whitespace", action="store_true", help="drop spaces, LF and CR before decoding")
    dec.add_argument("--strict", action="store_true", help="reject non-canonical trailing bits")

    b = sub.add_parser("bench", help="measure per-byte cost of every codec")
    b.add_argument("--sizes", type=_size_list, default=DEFAULT_BENCH_SIZES, help="comma-separated input sizes in bytes")
    b.add_argument("--codecs", type=_codec_list, default=DEFAULT_BENCH_CODECS)
    b.add_argument("--directions", default="encode,decode")
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--reps", type=int, default=bench.MIN_REPS)
    b.add_argument("--format", choices=("table", "csv"), default="table")
    b.add_argument("--url-safe", action="store_true")
    return parser


def _bench_command(args: argparse.Namespace) -> int:
    directions = [d.strip() for d in args.directions.split(",") if d.strip()]
    config = CodecConfig(variant=Variant.URL_SAFE if args.url_safe else Variant.STANDARD)
    try:
        report = bench.run_bench(args.sizes, args.codecs, args.seed, args.reps, directions, config)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    print(report.to_csv() if args.format == "csv" else report.to_table(), end="\n" if args.format == "table" else "")
    return 0


def _convert_command(args: argparse.Namespace) -> int:
    config = _config(args)
    engine = _check_engine(args.engine)
    src = _open_input(args.input)
    try:
        if args.bench:
            data = src.read()
            if args.command == "decode" and config.ignore_whitespace:
                data = remove_whitespace(data)
            report = bench.bench_data(data, args.command, args.codecs, args.reps, config)
            print(report.to_table())
            return 0
        dst = _open_output(args.output)
        try:
            if args.command == "encode":
                run_encode(src, dst, config, engine)
            else:
                run_decode(src, dst, config, engine)
        finally:
            if dst is not sys.stdout.buffer:
                dst.close()
            else:
                dst.flush()
    finally:
        if src is not sys.stdin.buffer:
            src.close()
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "bench":
            return _bench_command(args)
        return _convert_command(args)
    except DecodeError as exc:
        print(f"error: {exc.kind.value} at byte {exc.offset}", file=sys.stderr)
        return 1
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
