"""Stationary noise-floor synthesis.

A room-tone segment convolved with fresh white noise keeps the segment's
frequency response while producing new, unique material; repeating the
convolution with independent noise per channel yields decorrelated stereo.
Room tones themselves are synthesized here as randomly shaped colored noise
(one corpus per seed) so the whole pipeline runs without external data.

Manifest format: one JSON object per line with keys
path, source, offset, length, seed, channels.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.signal import lfilter

from .audio import AudioBuffer
from .wavio import read_wav, write_wav

__all__ = [
    "RoomToneEntry",
    "RoomToneCorpus",
    "NoiseFloorRecord",
    "NoiseFloorManifest",
    "make_synthetic_room_tones",
    "synthesize_noise_floor",
    "build_dataset",
]

_ROOM_TONE_RMS = 0.1


@dataclass(frozen=True)
class RoomToneEntry:
    path: Path
    duration_s: float
    sample_rate: int

    @property
    def n_samples(self) -> int:
        return int(round(self.duration_s * self.sample_rate))


@dataclass(frozen=True)
class RoomToneCorpus:
    entries: tuple[RoomToneEntry, ...]
    seed: int | None = None

    def __post_init__(self) -> None:
        if not self.entries:
            raise ValueError("room tone corpus is empty")
        rates = {entry.sample_rate for entry in self.entries}
        if len(rates) != 1:
            raise ValueError(f"corpus mixes sample rates: {sorted(rates)}")
        for entry in self.entries:
            if entry.duration_s <= 0:
                raise ValueError(f"{entry.path}: non-positive duration")

    @property
    def sample_rate(self) -> int:
        return self.entries[0].sample_rate


def _room_tone_signal(rng: np.random.Generator, n_samples: int, sample_rate: int) -> np.ndarray:
    # colored noise: white noise through a random one-pole tilt plus a
    # low-frequency-biased resonator; a leading warmup second is trimmed so
    # the output is stationary from sample zero
    warmup = sample_rate
    white = rng.standard_normal(n_samples + warmup)
    tilt = rng.uniform(0.6, 0.97)
    shaped = lfilter([1.0 - tilt], [1.0, -tilt], white)
    pole_angle = rng.uniform(0.02 * np.pi, 0.3 * np.pi)
    pole_radius = rng.uniform(0.85, 0.985)
    shaped = lfilter([1.0], [1.0, -2.0 * pole_radius * np.cos(pole_angle), pole_radius**2], shaped)
    shaped = shaped[warmup:]
    return shaped * (_ROOM_TONE_RMS / np.sqrt(np.mean(shaped**2)))


def make_synthetic_room_tones(
    n_files: int,
    duration_s: float,
    out_dir: str | Path,
    seed: int,
    sample_rate: int = 8000,
) -> RoomToneCorpus:
    """Write n_files mono room-tone WAVs and return the corpus description.

    Every file gets its own spectral shape; the whole corpus is a pure
    function of the seed.
    """
    if n_files < 1:
        raise ValueError(f"n_files must be >= 1, got {n_files}")
    if duration_s <= 0:
        raise ValueError(f"duration_s must be > 0, got {duration_s}")
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    n_samples = int(round(duration_s * sample_rate))

    entries = []
    for index in range(n_files):
        rng = np.random.default_rng(np.random.SeedSequence((seed, index)))
        signal = _room_tone_signal(rng, n_samples, sample_rate)
        path = out_dir / f"room_tone_{index:04d}.wav"
        write_wav(path, AudioBuffer(signal, sample_rate), sample_format="float32")
        entries.append(RoomToneEntry(path=path, duration_s=n_samples / sample_rate, sample_rate=sample_rate))
    return RoomToneCorpus(entries=tuple(entries), seed=seed)


def _synthesize_with_rng(
    corpus: RoomToneCorpus, length_samples: int, channels: int, rng: np.random.Generator
) -> tuple[AudioBuffer, RoomToneEntry, int]:
    if channels not in (1, 2):
        raise ValueError(f"channels must be 1 or 2, got {channels}")
    if length_samples < 1:
        raise ValueError(f"length_samples must be >= 1, got {length_samples}")
    eligible = [entry for entry in corpus.entries if entry.n_samples >= length_samples]
    if not eligible:
        raise ValueError(
            f"no corpus entry is at least {length_samples} samples long "
            f"(longest is {max(e.n_samples for e in corpus.entries)})"
        )
    entry = eligible[rng.integers(len(eligible))]
    offset = int(rng.integers(0, entry.n_samples - length_samples + 1))
    segment = read_wav(entry.path).data[0, offset : offset + length_samples]
    segment_rms = np.sqrt(np.mean(segment**2))
    spectrum = np.fft.rfft(segment)

    outputs = []
    for _ in range(channels):
        white = rng.standard_normal(length_samples)
        mixed = np.fft.irfft(spectrum * np.fft.rfft(white), n=length_samples)
        outputs.append(mixed * (segment_rms / np.sqrt(np.mean(mixed**2))))
    return AudioBuffer(np.stack(outputs), entry.sample_rate), entry, offset


def synthesize_noise_floor(
    corpus: RoomToneCorpus, length_samples: int, channels: int, seed: int
) -> AudioBuffer:
    """One noise-floor clip: a random room-tone segment circularly convolved
    with white noise (independent noise per channel, shared segment), RMS
    matched to the segment."""
    rng = np.random.default_rng(seed)
    audio, _, _ = _synthesize_with_rng(corpus, length_samples, channels, rng)
    return audio


@dataclass(frozen=True)
class NoiseFloorRecord:
    path: str
    source: str
    offset: int
    length: int
    seed: int
    channels: int


@dataclass(frozen=True)
class NoiseFloorManifest:
    records: tuple[NoiseFloorRecord, ...]
    path: Path

    def save(self) -> None:
        lines = [json.dumps(vars(record), sort_keys=True) for record in self.records]
        tmp = self.path.with_suffix(".tmp")
        tmp.write_text("\n".join(lines) + ("\n" if lines else ""), encoding="utf-8")
        tmp.replace(self.path)

    @classmethod
    def load(cls, path: str | Path) -> "NoiseFloorManifest":
        path = Path(path)
        records = []
        for line in path.read_text(encoding="utf-8").splitlines():
            if line.strip():
                records.append(NoiseFloorRecord(**json.loads(line)))
        return cls(records=tuple(records), path=path)


def _record_seed(master_seed: int, index: int) -> int:
    return int(np.random.SeedSequence((master_seed, index)).generate_state(1, np.uint64)[0])


def build_dataset(
    corpus: RoomToneCorpus,
    n_files: int,
    length_samples: int,
    channels: int,
    out_dir: str | Path,
    seed: int,
) -> NoiseFloorManifest:
    """Synthesize n_files noise-floor WAVs plus a manifest.

    Idempotent: records whose output file already exists are kept as-is, so
    re-running on a complete manifest performs no synthesis. Each record's
    seed derives from (seed, index), so outputs do not depend on build order.
    """
    if n_files < 1:
        raise ValueError(f"n_files must be >= 1, got {n_files}")
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    manifest_path = out_dir / "manifest.jsonl"

    existing: dict[str, NoiseFloorRecord] = {}
    if manifest_path.exists():
        existing = {record.path: record for record in NoiseFloorManifest.load(manifest_path).records}

    records = []
    for index in range(n_files):
        out_path = out_dir / f"noise_floor_{index:06d}.wav"
        key = str(out_path)
        if key in existing and out_path.exists():
            records.append(existing[key])
            continue
        record_seed = _record_seed(seed, index)
        rng = np.random.default_rng(record_seed)
        audio, entry, offset = _synthesize_with_rng(corpus, length_samples, channels, rng)
        write_wav(out_path, audio, sample_format="float32")
        records.append(
            NoiseFloorRecord(
                path=key,
                source=str(entry.path),
                offset=offset,
                length=length_samples,
                seed=record_seed,
                channels=channels,
            )
        )

    seeds = [record.seed for record in records]
    if len(set(seeds)) != len(seeds):
        raise RuntimeError("derived record seeds collide; change the master seed")

    manifest = NoiseFloorManifest(records=tuple(records), path=manifest_path)
    manifest.save()
    return manifest
