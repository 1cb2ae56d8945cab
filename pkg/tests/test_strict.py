import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fastb64.alphabet import STANDARD, URL_SAFE, Variant
from fastb64.config import CodecConfig, Padding
from fastb64.errors import DecodeError, ErrorKind
from fastb64.scalar import decode_scalar, decode_scalar_fast, encode_scalar
from fastb64.strict import check_canonical_tail, validate_final_quad, validate_unpadded_tail

STRICT = CodecConfig(strict=True)


def error_of(fn, *args):
    with pytest.raises(DecodeError) as info:
        fn(*args)
    return info.value.kind, info.value.offset


def test_examples():
    validate_final_quad(b"Zg==")
    validate_final_quad(b"AAAA")
    assert error_of(validate_final_quad, b"Zh==") == (ErrorKind.NON_CANONICAL_TRAILING_BITS, 1)
    assert error_of(validate_final_quad, b"A===")[0] is ErrorKind.INVALID_PADDING


def test_a_values_behind_examples():
    assert STANDARD.lookup_inverse(ord("g")) == 32 and (32 * 16) % 256 == 0
    assert STANDARD.lookup_inverse(ord("h")) == 33 and (33 * 16) % 256 == 16


@pytest.mark.parametrize(
    "quad, kind, offset",
    [
        (b"Zm9=", ErrorKind.NON_CANONICAL_TRAILING_BITS, 2),
        (b"====", ErrorKind.INVALID_PADDING, 0),
        (b"=AAA", ErrorKind.INVALID_PADDING, 0),
        (b"A=AA", ErrorKind.INVALID_PADDING, 1),
        (b"AA=A", ErrorKind.INVALID_PADDING, 2),
        (b"A*==", ErrorKind.INVALID_CHARACTER, 1),
    ],
)
def test_rejections(quad, kind, offset):
    assert error_of(validate_final_quad, quad) == (kind, offset)


def test_unpadded_tail():
    validate_unpadded_tail(b"Zg")
    validate_unpadded_tail(b"Zm8")
    assert error_of(validate_unpadded_tail, b"Zh") == (ErrorKind.NON_CANONICAL_TRAILING_BITS, 1)
    assert error_of(validate_unpadded_tail, b"Zm9") == (ErrorKind.NON_CANONICAL_TRAILING_BITS, 2)


def test_absolute_offsets():
    assert error_of(check_canonical_tail, b"AAAAZh==", 0, STANDARD) == (ErrorKind.NON_CANONICAL_TRAILING_BITS, 5)
    check_canonical_tail(b"", 0, STANDARD)


def test_strict_decode_integration():
    for dec in (decode_scalar, decode_scalar_fast):
        assert dec(b"Zg==", STRICT) == b"f"
        assert error_of(dec, b"AAAAZh==", STRICT) == (ErrorKind.NON_CANONICAL_TRAILING_BITS, 5)
        unpadded = CodecConfig(strict=True, padding=Padding.ALLOW_UNPADDED)
        assert error_of(dec, b"Zh", unpadded) == (ErrorKind.NON_CANONICAL_TRAILING_BITS, 1)
        assert dec(b"Zh==") == b"f"


@given(st.binary(max_size=300), st.sampled_from(list(Variant)), st.sampled_from(list(Padding)))
@settings(max_examples=300, deadline=None)
def test_encoder_output_is_canonical(data, variant, padding):
    config = CodecConfig(variant=variant, padding=padding, strict=True)
    text = encode_scalar(data, config)
    assert decode_scalar(text, config) == data
    assert decode_scalar_fast(text, config) == data


@pytest.mark.parametrize("alphabet", [STANDARD, URL_SAFE], ids=["standard", "url"])
def test_accepted_tails_round_trip(alphabet):
    config = CodecConfig(variant=alphabet.variant, strict=True)
    plain = CodecConfig(variant=alphabet.variant)
    rng = random.Random(31)
    for _ in range(3000):
        text = bytearray(encode_scalar(rng.randbytes(rng.randrange(1, 12)), plain))
        # mutate within the final quad, mostly into other data characters
        pos = len(text) - 1 - rng.randrange(4)
        text[pos] = rng.choice(alphabet.forward + b"=")
        try:
            out = decode_scalar(bytes(text), config)
        except DecodeError:
            continue
        assert encode_scalar(out, plain) == bytes(text)
