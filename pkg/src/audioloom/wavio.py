"""Self-contained RIFF/WAVE file reader and writer.

Handles the three encodings this project needs: 16-bit PCM, 24-bit PCM, and
32-bit IEEE float, little-endian, mono or stereo. The stdlib ``wave`` module
cannot read 24-bit or float files, hence this module.

Samples are exchanged as :class:`~audioloom.audio.AudioBuffer` (float64,
nominal range [-1, 1]); sample rates are preserved verbatim.
"""

from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

from .audio import AudioBuffer

_FORMAT_PCM = 1
_FORMAT_IEEE_FLOAT = 3
_FORMAT_EXTENSIBLE = 0xFFFE

SAMPLE_FORMATS = ("pcm16", "pcm24", "float32")


def read_wav(path: str | Path) -> AudioBuffer:
    """Read a WAV file into an AudioBuffer.

    Raises ValueError for non-RIFF input or unsupported encodings.
    """
    raw = Path(path).read_bytes()
    if len(raw) < 12 or raw[:4] != b"RIFF" or raw[8:12] != b"WAVE":
        raise ValueError(f"{path}: not a RIFF/WAVE file")

    fmt = None
    data = None
    pos = 12
    while pos + 8 <= len(raw):
        chunk_id = raw[pos : pos + 4]
        (chunk_size,) = struct.unpack_from("<I", raw, pos + 4)
        body = raw[pos + 8 : pos + 8 + chunk_size]
        if chunk_id == b"fmt ":
            fmt = body
        elif chunk_id == b"data":
            data = body
        pos += 8 + chunk_size + (chunk_size & 1)  # chunks are word-aligned

    if fmt is None or data is None:
        raise ValueError(f"{path}: missing fmt or data chunk")
    if len(fmt) < 16:
        raise ValueError(f"{path}: truncated fmt chunk")

    audio_format, channels, sample_rate, _, _, bits = struct.unpack_from("<HHIIHH", fmt, 0)
    if audio_format == _FORMAT_EXTENSIBLE:
        if len(fmt) < 26:
            raise ValueError(f"{path}: truncated extensible fmt chunk")
        (audio_format,) = struct.unpack_from("<H", fmt, 24)  # subformat GUID leads with the tag
    if channels not in (1, 2):
        raise ValueError(f"{path}: unsupported channel count {channels}")

    if audio_format == _FORMAT_PCM and bits == 16:
        flat = np.frombuffer(data, dtype="<i2").astype(np.float64) / 32768.0
    elif audio_format == _FORMAT_PCM and bits == 24:
        trimmed = data[: len(data) - len(data) % 3]
        as_bytes = np.frombuffer(trimmed, dtype=np.uint8).reshape(-1, 3)
        ints = (
            as_bytes[:, 0].astype(np.int32)
            | (as_bytes[:, 1].astype(np.int32) << 8)
            | (as_bytes[:, 2].astype(np.int32) << 16)
        )
        ints = np.where(ints >= 1 << 23, ints - (1 << 24), ints)
        flat = ints.astype(np.float64) / float(1 << 23)
    elif audio_format == _FORMAT_IEEE_FLOAT and bits == 32:
        flat = np.frombuffer(data, dtype="<f4").astype(np.float64)
    else:
        raise ValueError(f"{path}: unsupported encoding (format {audio_format}, {bits}-bit)")

    flat = flat[: len(flat) - len(flat) % channels]
    return AudioBuffer(flat.reshape(-1, channels).T, sample_rate)


def write_wav(path: str | Path, audio: AudioBuffer, sample_format: str = "float32") -> None:
    """Write an AudioBuffer as a WAV file.

    sample_format is one of "pcm16", "pcm24", "float32". Integer formats
    clip to [-1, 1] before quantizing.
    """
    if sample_format not in SAMPLE_FORMATS:
        raise ValueError(f"sample_format must be one of {SAMPLE_FORMATS}, got {sample_format!r}")

    interleaved = audio.data.T.reshape(-1)
    if sample_format == "pcm16":
        ints = np.round(np.clip(interleaved, -1.0, 1.0) * 32767.0).astype("<i2")
        payload = ints.tobytes()
        audio_format, bits = _FORMAT_PCM, 16
    elif sample_format == "pcm24":
        ints = np.round(np.clip(interleaved, -1.0, 1.0) * float((1 << 23) - 1)).astype("<i4")
        payload = ints.view(np.uint8).reshape(-1, 4)[:, :3].tobytes()  # two's complement LE, drop MSB
        audio_format, bits = _FORMAT_PCM, 24
    else:
        payload = interleaved.astype("<f4").tobytes()
        audio_format, bits = _FORMAT_IEEE_FLOAT, 32

    channels = audio.channels
    block_align = channels * bits // 8
    byte_rate = audio.sample_rate * block_align
    fmt = struct.pack("<HHIIHH", audio_format, channels, audio.sample_rate, byte_rate, block_align, bits)
    chunks = b"".join(
        [
            b"fmt ",
            struct.pack("<I", len(fmt)),
            fmt,
            b"data",
            struct.pack("<I", len(payload)),
            payload,
            b"\x00" * (len(payload) & 1),
        ]
    )
    header = b"RIFF" + struct.pack("<I", 4 + len(chunks)) + b"WAVE"
    Path(path).write_bytes(header + chunks)
