import base64
import io
import random
import subprocess
import sys

import pytest

from fastb64 import cli
from fastb64.vector_engine import hardware_available

GIF = bytes([71, 73, 70, 56, 57, 97, 1, 0, 1, 0, 128, 0, 0, 255, 255, 255, 0, 0, 0, 44,
             0, 0, 0, 0, 1, 0, 1, 0, 0, 2, 2, 68, 1, 0, 59])
GIF_TEXT = b"R0lGODlhAQABAIAAAP///wAAACwAAAAAAQABAAACAkQBADs="

ENGINES = ["scalar", "scalar-fast", "emulated"] + (["simd"] if hardware_available() else [])


class FakeStream:
    def __init__(self, data=b""):
        self.buffer = io.BytesIO(data)


@pytest.fixture
def stdio(monkeypatch):
    def setup(data=b""):
        stdin, stdout = FakeStream(data), FakeStream()
        monkeypatch.setattr(sys, "stdin", stdin)
        monkeypatch.setattr(sys, "stdout", stdout)
        return stdout.buffer

    return setup


def run_file(tmp_path, args, data):
    src = tmp_path / "in.bin"
    dst = tmp_path / "out.bin"
    src.write_bytes(data)
    code = cli.main(args + [str(src), "-o", str(dst)])
    return code, dst.read_bytes() if dst.exists() else None


def test_encode_gif_prefix(tmp_path):
    assert run_file(tmp_path, ["encode"], bytes([71, 73, 70])) == (0, b"R0lG")


def test_decode_gif(tmp_path):
    assert run_file(tmp_path, ["decode"], GIF_TEXT) == (0, GIF)


def test_stdin_stdout(stdio):
    out = stdio(GIF)
    assert cli.main(["encode"]) == 0
    assert out.getvalue() == GIF_TEXT


def test_strict_error_message(tmp_path, capsys):
    code, _ = run_file(tmp_path, ["decode", "--strict"], b"Zh==")
    assert code == 1
    assert capsys.readouterr().err.strip() == "error: NonCanonicalTrailingBits at byte 1"


def test_invalid_character_message(tmp_path, capsys):
    code, _ = run_file(tmp_path, ["decode"], b"R0l\x07")
    assert code == 1
    assert "error: InvalidCharacter at byte 3" in capsys.readouterr().err


def test_usage_errors(tmp_path, capsys):
    with pytest.raises(SystemExit) as info:
        cli.main(["encode", "--engine", "gpu"])
    assert info.value.code == 2
    with pytest.raises(SystemExit) as info:
        cli.main([])
    assert info.value.code == 2
    assert cli.main(["decode", str(tmp_path / "missing")]) == 2
    assert "cannot open" in capsys.readouterr().err


def test_simd_engine_unavailable(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv("FASTB64_NO_ACCEL", "1")
    code, _ = run_file(tmp_path, ["encode", "--engine", "simd"], b"abc")
    assert code == 2
    assert run_file(tmp_path, ["encode", "--engine", "auto"], b"abc") == (0, b"YWJj")


@pytest.mark.parametrize("args", [[], ["--url-safe"], ["--no-pad"], ["--url-safe", "--no-pad"]])
def test_round_trip_across_engines(tmp_path, args):
    rng = random.Random(37)
    for n in (0, 1, 2, 3, 100, 5000):
        data = rng.randbytes(n)
        encoded = {e: run_file(tmp_path, ["encode", "--engine", e] + args, data) for e in ENGINES}
        assert len(set(encoded.values())) == 1
        code, text = encoded["scalar"]
        assert code == 0
        for e in ENGINES:
            assert run_file(tmp_path, ["decode", "--engine", e] + args, text) == (0, data)


def test_env_engine(monkeypatch, stdio):
    monkeypatch.setenv("FASTB64_ENGINE", "emulated")
    out = stdio(b"foobar")
    assert cli.main(["encode"]) == 0
    assert out.getvalue() == b"Zm9vYmFy"


def test_ignore_whitespace_offsets(tmp_path, capsys):
    wrapped = b"\n".join(GIF_TEXT[i : i + 10] for i in range(0, len(GIF_TEXT), 10)) + b"\n"
    assert run_file(tmp_path, ["decode", "--ignore-whitespace"], wrapped) == (0, GIF)
    code, _ = run_file(tmp_path, ["decode"], wrapped)
    assert code == 1
    assert "InvalidCharacter at byte 10" in capsys.readouterr().err
    bad = wrapped.replace(b"ODlh", b"OD*h")
    code, _ = run_file(tmp_path, ["decode", "--ignore-whitespace"], bad)
    assert code == 1
    assert f"InvalidCharacter at byte {bad.index(b'*')}" in capsys.readouterr().err


def test_streaming_chunks(tmp_path, monkeypatch, capsys):
    monkeypatch.setattr(cli, "ENCODE_CHUNK", 3 * 7)
    monkeypatch.setattr(cli, "DECODE_CHUNK", 4 * 5)
    rng = random.Random(41)
    for n in range(0, 120):
        data = rng.randbytes(n)
        text = base64.b64encode(data)
        assert run_file(tmp_path, ["encode"], data) == (0, text)
        assert run_file(tmp_path, ["decode"], text) == (0, data)
        spaced = b" ".join(text[i : i + 3] for i in range(0, len(text), 3))
        assert run_file(tmp_path, ["decode", "--ignore-whitespace"], spaced) == (0, data)
    # errors far into the stream keep absolute offsets
    text = bytearray(base64.b64encode(bytes(90)))
    text[57] = ord("=")
    code, _ = run_file(tmp_path, ["decode"], bytes(text))
    assert code == 1
    assert "InvalidPadding at byte 57" in capsys.readouterr().err
    code, _ = run_file(tmp_path, ["decode"], base64.b64encode(bytes(90))[:-1])
    assert code == 1
    assert "TruncatedInput at byte 116" in capsys.readouterr().err


def test_bench_subcommand_csv(capsys):
    assert cli.main(["bench", "--sizes", "8,64", "--codecs", "scalar,emulated", "--reps", "3",
                     "--format", "csv"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0] == "codec,direction,size,reps,min_ns,mean_ns,ns_per_byte,cycles_per_byte,baseline_ns_per_byte"
    assert len(lines) == 1 + 2 * 2 * 2


def test_bench_flag_on_convert(tmp_path, capsys):
    code, _ = run_file(tmp_path, ["encode", "--bench", "--reps", "2", "--codecs", "scalar"], b"x" * 100)
    assert code == 0
    assert "scalar" in capsys.readouterr().out


def test_module_entry_point(tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "fastb64", "decode", "--strict"],
        input=b"Zh==", capture_output=True,
    )
    assert proc.returncode == 1
    assert proc.stderr.decode().strip() == "error: NonCanonicalTrailingBits at byte 1"
    proc = subprocess.run([sys.executable, "-m", "fastb64", "encode"], input=b"foobar", capture_output=True)
    assert (proc.returncode, proc.stdout) == (0, b"Zm9vYmFy")
