"""Frechet audio distance with a pluggable embedder, plus the convolutional
noise-matching baseline and the batch evaluation harness.

The bundled embedder is a hand-crafted spectral one: per analysis window it
emits log energies on log-spaced frequency bands plus spectral flatness and
crest. Any object with ``embed(audio) -> (n_windows, dim)`` and a ``dim``
attribute can stand in for it.

Window-level vectors from all files of a set are pooled before the Gaussian
fit; the report records that choice.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Protocol

import numpy as np
from scipy.signal import butter, fftconvolve, filtfilt, get_window

from .audio import AudioBuffer
from .wavio import read_wav

__all__ = [
    "EmbeddingStats",
    "Embedder",
    "SpectralEmbedder",
    "spectral_embedder",
    "fit_stats",
    "frechet_distance",
    "cnm_baseline",
    "evaluate_run",
]

_LOG_ENERGY_FLOOR = 1e-8  # -80 dB


@dataclass(frozen=True)
class EmbeddingStats:
    """Gaussian fit (mean, covariance) of an embedded audio set."""

    mean: np.ndarray
    cov: np.ndarray
    n_samples: int

    def __post_init__(self) -> None:
        mean = np.asarray(self.mean, dtype=np.float64).reshape(-1)
        cov = np.asarray(self.cov, dtype=np.float64)
        if cov.shape != (mean.size, mean.size):
            raise ValueError(f"cov shape {cov.shape} does not match mean dim {mean.size}")
        if not np.allclose(cov, cov.T, atol=1e-8):
            raise ValueError("cov must be symmetric")
        if self.n_samples < 2:
            raise ValueError(f"need at least 2 samples, got {self.n_samples}")
        if np.linalg.eigvalsh((cov + cov.T) / 2.0).min() < -1e-8:
            raise ValueError("cov must be positive semi-definite (within tolerance)")
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "cov", cov)

    @property
    def dim(self) -> int:
        return int(self.mean.size)


class Embedder(Protocol):
    dim: int

    def embed(self, audio: AudioBuffer) -> np.ndarray: ...


class SpectralEmbedder:
    """Per-window log band energies + spectral flatness + spectral crest."""

    def __init__(self, n_bands: int = 16, window_s: float = 0.25):
        if n_bands < 2:
            raise ValueError(f"n_bands must be >= 2, got {n_bands}")
        if window_s <= 0:
            raise ValueError(f"window_s must be > 0, got {window_s}")
        self.n_bands = n_bands
        self.window_s = window_s
        self.dim = n_bands + 2

    def embed(self, audio: AudioBuffer) -> np.ndarray:
        window_n = int(round(self.window_s * audio.sample_rate))
        if audio.n_samples < window_n:
            raise ValueError(
                f"audio of {audio.n_samples} samples is shorter than one "
                f"{window_n}-sample analysis window"
            )
        mono = audio.data.mean(axis=0)
        n_windows = audio.n_samples // window_n
        frames = mono[: n_windows * window_n].reshape(n_windows, window_n)
        taper = get_window("hann", window_n, fftbins=True)
        power = np.abs(np.fft.rfft(frames * taper, axis=1)) ** 2

        freqs = np.fft.rfftfreq(window_n, 1.0 / audio.sample_rate)
        edges = np.geomspace(30.0, audio.sample_rate / 2.0, self.n_bands + 1)
        edges[-1] = np.inf
        band_index = np.searchsorted(edges, freqs, side="right") - 1
        valid = (band_index >= 0) & (band_index < self.n_bands)
        band_energy = np.zeros((n_windows, self.n_bands))
        for band in range(self.n_bands):
            bins = valid & (band_index == band)
            if bins.any():
                band_energy[:, band] = power[:, bins].sum(axis=1)
        log_energy = np.log10(np.maximum(band_energy, _LOG_ENERGY_FLOOR))

        tiny = 1e-30
        flatness = np.exp(np.mean(np.log(power + tiny), axis=1)) / (np.mean(power, axis=1) + tiny)
        crest = power.max(axis=1) / (np.mean(power, axis=1) + tiny)
        return np.column_stack([log_energy, flatness, np.log10(crest + tiny)])


def spectral_embedder(n_bands: int = 16, window_s: float = 0.25) -> SpectralEmbedder:
    return SpectralEmbedder(n_bands=n_bands, window_s=window_s)


def fit_stats(vectors: np.ndarray) -> EmbeddingStats:
    """Sample mean and unbiased covariance of row vectors."""
    arr = np.asarray(vectors, dtype=np.float64)
    if arr.ndim != 2:
        raise ValueError(f"vectors must be 2-D (n, dim), got {arr.ndim}-D")
    if arr.shape[0] < 2:
        raise ValueError(f"need at least 2 vectors to fit statistics, got {arr.shape[0]}")
    mean = arr.mean(axis=0)
    cov = np.cov(arr, rowvar=False, ddof=1).reshape(arr.shape[1], arr.shape[1])
    return EmbeddingStats(mean=mean, cov=(cov + cov.T) / 2.0, n_samples=arr.shape[0])


def frechet_distance(a: EmbeddingStats, b: EmbeddingStats) -> float:
    """2-Wasserstein distance between the Gaussian fits.

    ||mu_a - mu_b||^2 + Tr(S_a + S_b - 2 (S_a S_b)^(1/2)); the matrix square
    root goes through the symmetric product S_a^(1/2) S_b S_a^(1/2) with
    negative eigenvalues clamped to zero, and the result itself is clamped
    at zero.
    """
    if a.dim != b.dim:
        raise ValueError(f"stats dims differ: {a.dim} vs {b.dim}")
    vals_a, vecs_a = np.linalg.eigh(a.cov)
    root_a = vecs_a @ (np.sqrt(np.maximum(vals_a, 0.0))[:, None] * vecs_a.T)
    product = root_a @ b.cov @ root_a
    cross_vals = np.linalg.eigvalsh((product + product.T) / 2.0)
    trace_sqrt = np.sum(np.sqrt(np.maximum(cross_vals, 0.0)))

    diff = a.mean - b.mean
    distance = float(diff @ diff + np.trace(a.cov) + np.trace(b.cov) - 2.0 * trace_sqrt)
    return max(distance, 0.0)


# ---------------------------------------------------------------------------
# Convolutional noise matching baseline
# ---------------------------------------------------------------------------


def _octave_smooth(magnitude: np.ndarray, freqs: np.ndarray) -> np.ndarray:
    # average each bin over its +-half-octave neighbourhood
    smoothed = np.empty_like(magnitude)
    lo_edges = freqs / np.sqrt(2.0)
    hi_edges = freqs * np.sqrt(2.0)
    lo = np.searchsorted(freqs, lo_edges, side="left")
    hi = np.searchsorted(freqs, hi_edges, side="right")
    cumulative = np.concatenate([[0.0], np.cumsum(magnitude)])
    for k in range(magnitude.size):
        a, b = lo[k], max(hi[k], lo[k] + 1)
        smoothed[k] = (cumulative[b] - cumulative[a]) / (b - a)
    return smoothed


def average_magnitude_spectrum(x: np.ndarray, nfft: int) -> np.ndarray:
    """Hann-windowed average magnitude spectrum over 50%-overlapped frames."""
    if x.size < nfft:
        x = np.pad(x, (0, nfft - x.size))
    hop = nfft // 2
    n_frames = 1 + (x.size - nfft) // hop
    taper = get_window("hann", nfft, fftbins=True)
    acc = np.zeros(nfft // 2 + 1)
    for frame in range(n_frames):
        chunk = x[frame * hop : frame * hop + nfft]
        acc += np.abs(np.fft.rfft(chunk * taper))
    return acc / n_frames


def cnm_baseline(
    prompt: AudioBuffer,
    out_samples: int,
    seed: int,
    envelope_cutoff_hz: float = 20.0,
    nfft: int = 1024,
) -> AudioBuffer:
    """Extend a stationary prompt by spectrally shaping white noise.

    Per channel: white noise is filtered with a linear-phase FIR built from
    the prompt's octave-smoothed average magnitude spectrum, modulated by the
    prompt's rectified + low-passed amplitude envelope looped out to
    out_samples, and RMS-matched to the prompt channel.
    """
    if out_samples < 1:
        raise ValueError(f"out_samples must be >= 1, got {out_samples}")
    if prompt.rms() < 1e-9:
        raise ValueError("prompt is silent; the baseline needs signal to match")

    nyquist = prompt.sample_rate / 2.0
    if envelope_cutoff_hz >= nyquist:
        raise ValueError(f"envelope cutoff {envelope_cutoff_hz} Hz must be below {nyquist} Hz")
    b, a = butter(2, envelope_cutoff_hz / nyquist)
    rng = np.random.default_rng(seed)
    freqs = np.fft.rfftfreq(nfft, 1.0 / prompt.sample_rate)

    channels = []
    for x in prompt.data:
        envelope = np.maximum(filtfilt(b, a, np.abs(x)), 0.0)
        reps = int(np.ceil(out_samples / envelope.size))
        envelope_long = np.tile(envelope, reps)[:out_samples]

        magnitude = _octave_smooth(average_magnitude_spectrum(x, nfft), freqs)
        impulse = np.fft.irfft(magnitude, n=nfft)
        impulse = np.roll(impulse, nfft // 2) * get_window("hann", nfft, fftbins=True)

        noise = rng.standard_normal(out_samples)
        shaped = fftconvolve(noise, impulse, mode="same") * envelope_long

        shaped_rms = np.sqrt(np.mean(shaped**2))
        target_rms = np.sqrt(np.mean(x**2))
        channels.append(shaped * (target_rms / shaped_rms) if shaped_rms > 0 else shaped)
    return AudioBuffer(np.stack(channels), prompt.sample_rate)


# ---------------------------------------------------------------------------
# Batch evaluation
# ---------------------------------------------------------------------------


def _crop_regions(audio: AudioBuffer, regions: list[tuple[float, float]]) -> AudioBuffer:
    keep = np.ones(audio.n_samples, dtype=bool)
    for start_s, end_s in regions:
        start = max(0, int(round(start_s * audio.sample_rate)))
        end = min(audio.n_samples, int(round(end_s * audio.sample_rate)))
        keep[start:end] = False
    return AudioBuffer(audio.data[:, keep], audio.sample_rate)


def _embed_directory(
    directory: Path,
    embedder: Embedder,
    crop_specs: dict[str, list[tuple[float, float]]] | None,
) -> tuple[np.ndarray, list[dict]]:
    vectors = []
    diagnostics = []
    for path in sorted(directory.glob("*.wav")):
        entry: dict = {"file": path.name}
        try:
            audio = read_wav(path)
            if crop_specs and path.name in crop_specs:
                audio = _crop_regions(audio, crop_specs[path.name])
                entry["cropped_to_s"] = audio.duration_s
            emb = embedder.embed(audio)
            vectors.append(emb)
            entry["windows"] = int(emb.shape[0])
        except (ValueError, OSError) as error:
            entry["error"] = str(error)
        diagnostics.append(entry)
    pooled = np.concatenate(vectors, axis=0) if vectors else np.empty((0, embedder.dim))
    return pooled, diagnostics


def evaluate_run(
    candidate_dir: str | Path,
    reference_dir: str | Path,
    embedder: Embedder,
    crop_specs: dict[str, list[tuple[float, float]]] | None = None,
    report_path: str | Path | None = None,
) -> dict:
    """Embed both directories, fit Gaussians, return the FAD report.

    crop_specs maps candidate file names to lists of (start_s, end_s) prompt
    regions removed before embedding, so only generated content is scored.
    Unreadable or fully cropped files are skipped and reported. The report is
    also written as JSON (next to the candidate directory by default).
    """
    candidate_dir = Path(candidate_dir)
    reference_dir = Path(reference_dir)
    cand_vectors, cand_diag = _embed_directory(candidate_dir, embedder, crop_specs)
    ref_vectors, ref_diag = _embed_directory(reference_dir, embedder, None)
    if cand_vectors.shape[0] < 2 or ref_vectors.shape[0] < 2:
        raise ValueError(
            f"need at least 2 embedded windows per set, got {cand_vectors.shape[0]} candidate "
            f"and {ref_vectors.shape[0]} reference"
        )

    cand_stats = fit_stats(cand_vectors)
    ref_stats = fit_stats(ref_vectors)
    report = {
        "fad": frechet_distance(cand_stats, ref_stats),
        "pooling": "window-level vectors pooled across files before the Gaussian fit",
        "candidate": {
            "dir": str(candidate_dir),
            "windows": int(cand_vectors.shape[0]),
            "dim": cand_stats.dim,
            "cov_condition": float(np.linalg.cond(cand_stats.cov)),
            "files": cand_diag,
        },
        "reference": {
            "dir": str(reference_dir),
            "windows": int(ref_vectors.shape[0]),
            "dim": ref_stats.dim,
            "cov_condition": float(np.linalg.cond(ref_stats.cov)),
            "files": ref_diag,
        },
        "embedder": {"n_bands": getattr(embedder, "n_bands", None), "window_s": getattr(embedder, "window_s", None)},
    }
    if report_path is None:
        report_path = candidate_dir.parent / f"{candidate_dir.name}_fad_report.json"
    Path(report_path).write_text(json.dumps(report, indent=2), encoding="utf-8")
    report["report_path"] = str(report_path)
    return report
