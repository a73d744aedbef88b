"""Latent frame representation, the block-transform codec, and latent masking.

The codec is a deterministic, exactly invertible stand-in for a learned
autoencoder: audio is cut into fixed-size frames, stereo frames are rotated
into orthonormal mid/side, each frame passes through an orthonormal block
transform (DCT-II), and the first ``latent_channels`` coefficients are kept.
With ``latent_channels == frame_size * channels`` the round trip is exact up
to float rounding; with fewer channels the reconstruction error is exactly
the energy of the discarded coefficients.

Masking pins regions of a latent to prompt content. The same replacement
function serves both input masking (before sampling) and output
postprocessing (after sampling).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np
from scipy.fft import dct, idct

from .audio import AudioBuffer

_TRANSFORMS = ("dct", "identity")
_SQRT2 = np.sqrt(2.0)


@dataclass(frozen=True)
class Latent:
    """A latent matrix of shape (n_channels, n_frames) at a frame rate.

    audio_channels and pad_samples record how the latent was produced so the
    codec can invert exactly: pad_samples trailing zeros were appended to
    reach a whole number of frames.
    """

    data: np.ndarray
    frame_rate: float
    audio_channels: int = 1
    pad_samples: int = 0

    def __post_init__(self) -> None:
        arr = np.asarray(self.data, dtype=np.float64)
        if arr.ndim != 2:
            raise ValueError(f"latent data must be 2-D (channels, frames), got {arr.ndim}-D")
        if not np.all(np.isfinite(arr)):
            raise ValueError("latent data must be finite")
        if self.frame_rate <= 0:
            raise ValueError(f"frame_rate must be positive, got {self.frame_rate}")
        if self.audio_channels not in (1, 2):
            raise ValueError(f"audio_channels must be 1 or 2, got {self.audio_channels}")
        if self.pad_samples < 0:
            raise ValueError(f"pad_samples must be >= 0, got {self.pad_samples}")
        object.__setattr__(self, "data", arr)

    @property
    def n_channels(self) -> int:
        return self.data.shape[0]

    @property
    def n_frames(self) -> int:
        return self.data.shape[1]


@dataclass(frozen=True)
class CodecConfig:
    """Block codec settings.

    frame_size samples collapse into one latent frame, so the latent frame
    rate is sample_rate / frame_size (the division must be exact).
    """

    frame_size: int
    latent_channels: int
    transform: str = "dct"

    def __post_init__(self) -> None:
        if self.frame_size < 1:
            raise ValueError(f"frame_size must be >= 1, got {self.frame_size}")
        if self.latent_channels < 1:
            raise ValueError(f"latent_channels must be >= 1, got {self.latent_channels}")
        if self.transform not in _TRANSFORMS:
            raise ValueError(f"transform must be one of {_TRANSFORMS}, got {self.transform!r}")


def _block_transform(frames: np.ndarray, transform: str) -> np.ndarray:
    # frames: (n_frames, frame_size), transform along the last axis
    if transform == "dct":
        return dct(frames, type=2, axis=-1, norm="ortho")
    return frames.copy()


def _block_inverse(coeffs: np.ndarray, transform: str) -> np.ndarray:
    if transform == "dct":
        return idct(coeffs, type=2, axis=-1, norm="ortho")
    return coeffs.copy()


def encode(audio: AudioBuffer, cfg: CodecConfig) -> Latent:
    """Encode audio into a latent of shape (latent_channels, n_frames).

    Audio that is not a whole number of frames is zero-padded at the end;
    the pad length is recorded on the returned latent so decode can trim.
    """
    if audio.sample_rate % cfg.frame_size != 0:
        raise ValueError(
            f"sample_rate {audio.sample_rate} is not divisible by frame_size "
            f"{cfg.frame_size}; frame_size * frame_rate must equal sample_rate"
        )
    full_dim = cfg.frame_size * audio.channels
    if cfg.latent_channels > full_dim:
        raise ValueError(
            f"latent_channels {cfg.latent_channels} exceeds frame_size * channels = {full_dim}"
        )

    frame_rate = audio.sample_rate // cfg.frame_size
    pad = (-audio.n_samples) % cfg.frame_size
    data = np.pad(audio.data, ((0, 0), (0, pad))) if pad else audio.data
    n_frames = data.shape[1] // cfg.frame_size

    if audio.channels == 2:
        left, right = data
        work = np.stack([(left + right) / _SQRT2, (left - right) / _SQRT2])
    else:
        work = data

    # (audio_channels, n_frames, frame_size) -> coefficients, interleaved per
    # frame so truncation keeps the lowest-order coefficients of every channel
    coeffs = _block_transform(work.reshape(audio.channels, n_frames, cfg.frame_size), cfg.transform)
    full = coeffs.transpose(1, 2, 0).reshape(n_frames, full_dim)
    return Latent(
        full[:, : cfg.latent_channels].T,
        frame_rate=frame_rate,
        audio_channels=audio.channels,
        pad_samples=pad,
    )


def decode(latent: Latent, cfg: CodecConfig) -> AudioBuffer:
    """Invert :func:`encode`; discarded coefficients decode as zeros."""
    if latent.n_channels != cfg.latent_channels:
        raise ValueError(
            f"latent has {latent.n_channels} channels but codec expects {cfg.latent_channels}"
        )
    channels = latent.audio_channels
    full_dim = cfg.frame_size * channels
    if cfg.latent_channels > full_dim:
        raise ValueError(
            f"latent_channels {cfg.latent_channels} exceeds frame_size * channels = {full_dim}"
        )

    full = np.zeros((latent.n_frames, full_dim))
    full[:, : cfg.latent_channels] = latent.data.T
    coeffs = full.reshape(latent.n_frames, cfg.frame_size, channels).transpose(2, 0, 1)
    work = _block_inverse(coeffs, cfg.transform).reshape(channels, -1)

    if channels == 2:
        mid, side = work
        data = np.stack([(mid + side) / _SQRT2, (mid - side) / _SQRT2])
    else:
        data = work
    if latent.pad_samples:
        data = data[:, : data.shape[1] - latent.pad_samples]
    sample_rate = int(round(latent.frame_rate * cfg.frame_size))
    return AudioBuffer(data, sample_rate)


class MaskMode(enum.Enum):
    EXTEND_FORWARD = "forward"
    EXTEND_BACKWARD = "backward"
    MORPH = "morph"


@dataclass(frozen=True)
class MaskSpec:
    """Which latent frames are pinned to prompt content.

    prefix_frames are pinned starting at head_offset from the front;
    suffix_frames are pinned ending tail_offset from the back. Offsets
    default to 0, i.e. the extreme ends; frames left open by nonzero
    offsets count as generated content.
    """

    mode: MaskMode
    prefix_frames: int
    suffix_frames: int
    total_frames: int
    head_offset: int = 0
    tail_offset: int = 0

    def __post_init__(self) -> None:
        m, p, s, d = self.mode, self.prefix_frames, self.suffix_frames, self.total_frames
        if d < 1:
            raise ValueError(f"total_frames must be >= 1, got {d}")
        if p < 0 or s < 0 or self.head_offset < 0 or self.tail_offset < 0:
            raise ValueError("frame counts and offsets must be >= 0")
        if m is MaskMode.EXTEND_FORWARD:
            if s != 0:
                raise ValueError("forward extension takes no suffix prompt")
            if not 0 < p < d:
                raise ValueError(
                    f"forward extension needs 0 < prefix_frames < total_frames; the prompt "
                    f"must be shorter than the generation ({p} vs {d} frames)"
                )
        elif m is MaskMode.EXTEND_BACKWARD:
            if p != 0:
                raise ValueError("backward extension takes no prefix prompt")
            if not 0 < s < d:
                raise ValueError(
                    f"backward extension needs 0 < suffix_frames < total_frames; the prompt "
                    f"must be shorter than the generation ({s} vs {d} frames)"
                )
        else:
            if p < 1 or s < 1:
                raise ValueError("morphing needs both a prefix and a suffix prompt")
            if p + s >= d:
                raise ValueError(
                    f"combined morph prompts must be shorter than the generation "
                    f"({p} + {s} vs {d} frames)"
                )
        if self.head_offset + p + s + self.tail_offset > d:
            raise ValueError("offset prompts do not fit inside total_frames")

    @property
    def head_slice(self) -> slice | None:
        if self.prefix_frames == 0:
            return None
        return slice(self.head_offset, self.head_offset + self.prefix_frames)

    @property
    def tail_slice(self) -> slice | None:
        if self.suffix_frames == 0:
            return None
        end = self.total_frames - self.tail_offset
        return slice(end - self.suffix_frames, end)

    @property
    def generated_frames(self) -> int:
        return self.total_frames - self.prefix_frames - self.suffix_frames

    def frame_mask(self) -> np.ndarray:
        """Boolean array over frames; True where prompt content is pinned."""
        mask = np.zeros(self.total_frames, dtype=bool)
        if self.head_slice is not None:
            mask[self.head_slice] = True
        if self.tail_slice is not None:
            mask[self.tail_slice] = True
        return mask


def extend_forward_spec(prompt_frames: int, total_frames: int) -> MaskSpec:
    return MaskSpec(MaskMode.EXTEND_FORWARD, prompt_frames, 0, total_frames)


def extend_backward_spec(prompt_frames: int, total_frames: int) -> MaskSpec:
    return MaskSpec(MaskMode.EXTEND_BACKWARD, 0, prompt_frames, total_frames)


def morph_spec(
    head_frames: int,
    tail_frames: int,
    total_frames: int,
    head_offset: int = 0,
    tail_offset: int = 0,
) -> MaskSpec:
    return MaskSpec(MaskMode.MORPH, head_frames, tail_frames, total_frames, head_offset, tail_offset)


def _check_prompt(name: str, prompt: Latent | None, expected_frames: int, target: Latent) -> None:
    if expected_frames == 0:
        if prompt is not None:
            raise ValueError(f"{name} prompt given but the mask spec pins no {name} frames")
        return
    if prompt is None:
        raise ValueError(f"mask spec pins {expected_frames} {name} frames but no {name} prompt given")
    if prompt.n_frames != expected_frames:
        raise ValueError(
            f"{name} prompt has {prompt.n_frames} frames, mask spec expects {expected_frames}"
        )
    if prompt.n_channels != target.n_channels:
        raise ValueError(
            f"{name} prompt has {prompt.n_channels} latent channels, target has {target.n_channels}"
        )


def apply_mask(
    target: Latent,
    prompt_head: Latent | None,
    prompt_tail: Latent | None,
    spec: MaskSpec,
) -> Latent:
    """Return a copy of target with the pinned regions replaced by the prompts.

    Frames outside the pinned regions are carried over bit-exactly.
    """
    if target.n_frames != spec.total_frames:
        raise ValueError(f"target has {target.n_frames} frames, mask spec covers {spec.total_frames}")
    _check_prompt("head", prompt_head, spec.prefix_frames, target)
    _check_prompt("tail", prompt_tail, spec.suffix_frames, target)

    out = target.data.copy()
    if prompt_head is not None and spec.head_slice is not None:
        out[:, spec.head_slice] = prompt_head.data
    if prompt_tail is not None and spec.tail_slice is not None:
        out[:, spec.tail_slice] = prompt_tail.data
    return Latent(out, target.frame_rate, target.audio_channels, target.pad_samples)


def postprocess(
    raw_output: Latent,
    prompt_head: Latent | None,
    prompt_tail: Latent | None,
    spec: MaskSpec,
) -> Latent:
    """Re-impose the prompt latents onto a sampler output.

    Same replacement as :func:`apply_mask`; after this the generated content
    spans total - prefix - suffix frames.
    """
    return apply_mask(raw_output, prompt_head, prompt_tail, spec)
