"""Multichannel audio container and stereo mid/side utilities.

Samples live in float64 arrays shaped (channels, n_samples) with a nominal
range of [-1, 1]. Mono and stereo only.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class AudioBuffer:
    """PCM samples plus their sample rate.

    data is always (channels, n_samples) float64; a 1-D array passed in is
    promoted to a single channel.
    """

    data: np.ndarray
    sample_rate: int

    def __post_init__(self) -> None:
        arr = np.asarray(self.data, dtype=np.float64)
        if arr.ndim == 1:
            arr = arr[np.newaxis, :]
        if arr.ndim != 2:
            raise ValueError(f"audio data must be 1-D or 2-D, got {arr.ndim}-D")
        if arr.shape[0] not in (1, 2):
            raise ValueError(f"channels must be 1 or 2, got {arr.shape[0]}")
        if not (isinstance(self.sample_rate, (int, np.integer)) and self.sample_rate > 0):
            raise ValueError(f"sample_rate must be a positive integer, got {self.sample_rate!r}")
        object.__setattr__(self, "data", arr)
        object.__setattr__(self, "sample_rate", int(self.sample_rate))

    @property
    def channels(self) -> int:
        return self.data.shape[0]

    @property
    def n_samples(self) -> int:
        return self.data.shape[1]

    @property
    def duration_s(self) -> float:
        return self.n_samples / self.sample_rate

    def rms(self) -> float:
        """Root-mean-square over all channels and samples."""
        if self.n_samples == 0:
            return 0.0
        return float(np.sqrt(np.mean(self.data**2)))


def silence(channels: int, n_samples: int, sample_rate: int) -> AudioBuffer:
    return AudioBuffer(np.zeros((channels, n_samples)), sample_rate)


def to_mid_side(audio: AudioBuffer) -> AudioBuffer:
    """Convert a stereo buffer to (mid, side) = (L + R, L - R).

    The round trip through :func:`from_mid_side` is bit-exact whenever
    L + R and L - R are representable, which holds for every buffer read
    from WAV (16/24-bit PCM and float32 all carry <= 24-bit significands).
    """
    if audio.channels != 2:
        raise ValueError(f"mid/side conversion needs 2 channels, got {audio.channels}")
    left, right = audio.data
    return AudioBuffer(np.stack([left + right, left - right]), audio.sample_rate)


def from_mid_side(audio: AudioBuffer) -> AudioBuffer:
    """Invert :func:`to_mid_side`: L = (m + s) / 2, R = (m - s) / 2."""
    if audio.channels != 2:
        raise ValueError(f"mid/side conversion needs 2 channels, got {audio.channels}")
    mid, side = audio.data
    return AudioBuffer(np.stack([(mid + side) / 2.0, (mid - side) / 2.0]), audio.sample_rate)
