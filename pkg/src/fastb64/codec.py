"""High-level encode/decode entry points with engine selection."""

from __future__ import annotations

import os

from . import scalar
from .config import DEFAULT_CONFIG, CodecConfig
from .errors import DecodeError
from .simd_decoder import decode_simd
from .simd_encoder import encode_simd
from .vector_engine import REFERENCE, get_engine, hardware_available
from .whitespace import kept_positions, remove_whitespace

ENV_ENGINE = "FASTB64_ENGINE"

#: ``scalar`` runs the textbook group-at-a-time algorithms, ``scalar-fast``
#: the table-driven variants, ``simd`` the vector kernels on the accelerated
#: backend and ``emulated`` the same kernels on the reference emulation.
ENGINES = ("auto", "scalar", "scalar-fast", "simd", "emulated")


def resolve_engine_name(name: str | None = None) -> str:
    if name is None:
        name = os.environ.get(ENV_ENGINE, "auto") or "auto"
    if name not in ENGINES:
        raise ValueError(f"unknown engine {name!r}; expected one of {', '.join(ENGINES)}")
    if name == "auto":
        return "simd" if hardware_available() else "scalar-fast"
    return name


def encode(data: bytes, config: CodecConfig = DEFAULT_CONFIG, engine: str | None = None) -> bytes:
    name = resolve_engine_name(engine)
    data = bytes(data)
    if name == "scalar":
        return scalar.encode_scalar(data, config)
    if name == "scalar-fast":
        return scalar.encode_scalar_fast(data, config)
    return encode_simd(data, config, REFERENCE if name == "emulated" else get_engine("simd"))


def _decode_clean(data: bytes, config: CodecConfig, name: str, final: bool) -> bytes:
    if name == "scalar":
        return scalar.decode_scalar(data, config, final=final)
    if name == "scalar-fast":
        return scalar.decode_scalar_fast(data, config, final=final)
    eng = REFERENCE if name == "emulated" else get_engine("simd")
    return decode_simd(data, config, eng, final=final)


def decode(
    data: bytes,
    config: CodecConfig = DEFAULT_CONFIG,
    engine: str | None = None,
    *,
    final: bool = True,
) -> bytes:
    """Decode base64 ``data``.

    With ``config.ignore_whitespace`` the input is despaced first; error
    offsets still refer to positions in the original ``data``.  Pass
    ``final=False`` for a non-final, quad-aligned segment of a longer
    stream (padding is then rejected and no canonicality check runs).
    """
    name = resolve_engine_name(engine)
    data = bytes(data)
    if not config.ignore_whitespace:
        return _decode_clean(data, config, name, final)
    vec = REFERENCE if name == "emulated" else "auto"
    clean = remove_whitespace(data, vec)
    try:
        return _decode_clean(clean, config, name, final)
    except DecodeError as exc:
        if len(clean) == len(data):
            raise
        raise DecodeError(exc.kind, int(kept_positions(data)[exc.offset])) from None
