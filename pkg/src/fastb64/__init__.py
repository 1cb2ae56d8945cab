"""Base64 and base64url codec with vectorized kernels.

>>> from fastb64 import encode, decode
>>> encode(bytes([71, 73, 70]))
b'R0lG'
>>> decode(b"Zm9vYmFy")
b'foobar'
"""

from .alphabet import INVALID, PAD, STANDARD, URL_SAFE, Alphabet, Variant, get_alphabet
from .codec import ENGINES, decode, encode
from .config import DEFAULT_CONFIG, CodecConfig, Padding
from .errors import DecodeError, ErrorKind
from .scalar import decode_scalar, decode_scalar_fast, encode_scalar, encode_scalar_fast
from .simd_decoder import decode_simd
from .simd_encoder import encode_simd
from .strict import validate_final_quad
from .whitespace import despace_scalar, despace_simd, remove_whitespace

__all__ = [
    "INVALID",
    "PAD",
    "STANDARD",
    "URL_SAFE",
    "Alphabet",
    "Variant",
    "get_alphabet",
    "ENGINES",
    "encode",
    "decode",
    "DEFAULT_CONFIG",
    "CodecConfig",
    "Padding",
    "DecodeError",
    "ErrorKind",
    "encode_scalar",
    "encode_scalar_fast",
    "decode_scalar",
    "decode_scalar_fast",
    "encode_simd",
    "decode_simd",
    "validate_final_quad",
    "despace_scalar",
    "despace_simd",
    "remove_whitespace",
]

__version__ = "0.1.0"
