"""Command-line front end.

Subcommands: extend, morph, synth-noisefloor, train, finetune, eval, ablate.
Every flag can also come from a JSON config file (--config); explicit flags
win over the file, the file wins over built-in defaults. Each produced
artifact gets a sidecar ``<name>.stamp.json`` with the seed, a hash of the
resolved configuration, and the package version, and runs with a fixed seed
are bit-reproducible.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import __version__
from .audio import AudioBuffer
from .denoisers import (
    AnalyticGaussianDenoiser,
    Denoiser,
    ToyDenoiser,
    TrainConfig,
    default_finetune_config,
    finetune,
    load_checkpoint,
    save_checkpoint,
    synthetic_class_dataset,
    toy_denoiser,
    train,
)
from .diffusion import GenerationRequest, GuidanceConfig, make_schedule, sample
from .latents import (
    CodecConfig,
    Latent,
    MaskMode,
    decode,
    encode,
    extend_backward_spec,
    extend_forward_spec,
    morph_spec,
    postprocess,
)
from .noisefloor import (
    RoomToneCorpus,
    RoomToneEntry,
    build_dataset,
    make_synthetic_room_tones,
)
from .evaluation import evaluate_run, spectral_embedder
from .wavio import SAMPLE_FORMATS, read_wav, write_wav

_MODE_NAMES = {
    "forward": MaskMode.EXTEND_FORWARD,
    "backward": MaskMode.EXTEND_BACKWARD,
    "morph": MaskMode.MORPH,
}


@dataclass(frozen=True)
class RunConfig:
    """Generation settings shared by extend / morph / ablate."""

    sample_rate: int = 8000
    frame_rate: int = 40
    latent_channels: int = 16
    transform: str = "dct"
    steps: int = 24
    gamma: float = 5.0
    duration_s: float = 13.0
    seed: int = 0
    checkpoint: str | None = None
    condition: int | None = None
    wav_format: str = "float32"

    def __post_init__(self) -> None:
        if self.sample_rate % self.frame_rate != 0:
            raise ValueError(
                f"sample_rate {self.sample_rate} must be divisible by frame_rate {self.frame_rate}"
            )
        if self.steps < 1:
            raise ValueError(f"steps must be >= 1, got {self.steps}")
        if self.gamma < 0 or not np.isfinite(self.gamma):
            raise ValueError(f"gamma must be finite and >= 0, got {self.gamma}")
        frames = self.duration_s * self.frame_rate
        if abs(frames - round(frames)) > 1e-9 or round(frames) < 1:
            raise ValueError(
                f"duration_s * frame_rate must be a positive whole number of frames, "
                f"got {self.duration_s} * {self.frame_rate} = {frames}"
            )
        if self.wav_format not in SAMPLE_FORMATS:
            raise ValueError(f"wav_format must be one of {SAMPLE_FORMATS}")

    @property
    def frame_size(self) -> int:
        return self.sample_rate // self.frame_rate

    @property
    def total_frames(self) -> int:
        return int(round(self.duration_s * self.frame_rate))

    @property
    def codec(self) -> CodecConfig:
        return CodecConfig(
            frame_size=self.frame_size,
            latent_channels=self.latent_channels,
            transform=self.transform,
        )


def write_stamp(artifact_path: str | Path, config: dict, seed: int) -> Path:
    """Drop a reproducibility sidecar next to an artifact."""
    canonical = json.dumps(config, sort_keys=True, default=str)
    stamp = {
        "seed": seed,
        "config_hash": hashlib.sha256(canonical.encode()).hexdigest(),
        "version": __version__,
        "config": json.loads(canonical),
    }
    stamp_path = Path(str(artifact_path) + ".stamp.json")
    stamp_path.write_text(json.dumps(stamp, indent=2, sort_keys=True), encoding="utf-8")
    return stamp_path


def prior_from_latent_frames(frames: np.ndarray) -> AnalyticGaussianDenoiser:
    """Fit a Gaussian prior over latent channels from prompt frames.

    The fallback denoiser when no trained checkpoint is supplied: generation
    then extends the prompt's own channel statistics. A small ridge keeps the
    covariance positive definite even for constant prompts.
    """
    mu = frames.mean(axis=1)
    if frames.shape[1] >= 2:
        cov = np.cov(frames, ddof=1).reshape(frames.shape[0], frames.shape[0])
    else:
        cov = np.zeros((frames.shape[0], frames.shape[0]))
    ridge = 1e-3 * float(np.trace(cov)) / frames.shape[0] + 1e-6
    return AnalyticGaussianDenoiser(mu, cov + ridge * np.eye(frames.shape[0]))


def _load_denoiser(cfg: RunConfig, prompt_frames: np.ndarray) -> Denoiser:
    if cfg.checkpoint:
        bundle = load_checkpoint(cfg.checkpoint)
        model = bundle.ema if bundle.ema is not None else bundle.model
        if model.config.latent_channels != cfg.latent_channels:
            raise ValueError(
                f"checkpoint expects {model.config.latent_channels} latent channels, "
                f"run config has {cfg.latent_channels}"
            )
        return model
    return prior_from_latent_frames(prompt_frames)


def _read_prompt(path: str, cfg: RunConfig) -> tuple[AudioBuffer, Latent]:
    audio = read_wav(path)
    if audio.sample_rate != cfg.sample_rate:
        raise ValueError(
            f"{path}: sample rate {audio.sample_rate} does not match run config "
            f"{cfg.sample_rate}; pass --sample-rate"
        )
    return audio, encode(audio, cfg.codec)


def _run_generation(model: Denoiser, cfg: RunConfig, spec, head, tail, audio_channels: int, seed: int) -> Latent:
    request = GenerationRequest(
        total_frames=cfg.total_frames,
        n_channels=cfg.latent_channels,
        frame_rate=cfg.frame_rate,
        spec=spec,
        prompt_head=head,
        prompt_tail=tail,
        guidance=GuidanceConfig(cfg.gamma),
        condition=cfg.condition,
        seed=seed,
        audio_channels=audio_channels,
    )
    raw = sample(model, request, make_schedule(cfg.steps))
    return postprocess(raw, head, tail, spec)


def cmd_extend(args: argparse.Namespace) -> int:
    cfg = _run_config(args)
    audio, prompt = _read_prompt(args.input, cfg)
    if prompt.n_frames >= cfg.total_frames:
        raise ValueError(
            f"audio prompt of {prompt.n_frames} frames does not fit a {cfg.total_frames}-frame "
            f"generation: the prompt latent must be shorter than the noise fed to the model"
        )
    if args.direction == "forward":
        spec = extend_forward_spec(prompt.n_frames, cfg.total_frames)
        head, tail = prompt, None
    else:
        spec = extend_backward_spec(prompt.n_frames, cfg.total_frames)
        head, tail = None, prompt

    model = _load_denoiser(cfg, prompt.data)
    out_latent = _run_generation(model, cfg, spec, head, tail, audio.channels, cfg.seed)
    write_wav(args.output, decode(out_latent, cfg.codec), sample_format=cfg.wav_format)
    write_stamp(args.output, {"command": "extend", "direction": args.direction, **vars(cfg)}, cfg.seed)
    print(f"wrote {args.output} ({cfg.duration_s:g} s, prompt {prompt.n_frames} of {cfg.total_frames} frames)")
    return 0


def cmd_morph(args: argparse.Namespace) -> int:
    cfg = _run_config(args)
    audio_a, head = _read_prompt(args.input_a, cfg)
    audio_b, tail = _read_prompt(args.input_b, cfg)
    if head.n_frames + tail.n_frames >= cfg.total_frames:
        raise ValueError(
            f"combined prompts of {head.n_frames} + {tail.n_frames} frames do not fit a "
            f"{cfg.total_frames}-frame generation: their total sum must be less than the "
            f"fixed generation length"
        )
    if audio_a.channels != audio_b.channels:
        raise ValueError("both prompts must have the same channel count")
    spec = morph_spec(
        head.n_frames,
        tail.n_frames,
        cfg.total_frames,
        head_offset=args.head_offset,
        tail_offset=args.tail_offset,
    )
    model = _load_denoiser(cfg, np.concatenate([head.data, tail.data], axis=1))
    out_latent = _run_generation(model, cfg, spec, head, tail, audio_a.channels, cfg.seed)
    write_wav(args.output, decode(out_latent, cfg.codec), sample_format=cfg.wav_format)
    write_stamp(args.output, {"command": "morph", **vars(cfg)}, cfg.seed)
    print(
        f"wrote {args.output} (morph over {spec.generated_frames} generated frames "
        f"of {cfg.total_frames})"
    )
    return 0


def cmd_synth_noisefloor(args: argparse.Namespace) -> int:
    out_dir = Path(args.out_dir)
    if args.corpus_dir:
        entries = []
        for path in sorted(Path(args.corpus_dir).glob("*.wav")):
            tone = read_wav(path)
            entries.append(RoomToneEntry(path=path, duration_s=tone.duration_s, sample_rate=tone.sample_rate))
        corpus = RoomToneCorpus(entries=tuple(entries))
    else:
        corpus = make_synthetic_room_tones(
            n_files=args.room_tones,
            duration_s=args.room_tone_s,
            out_dir=out_dir / "room_tones",
            seed=args.seed,
            sample_rate=args.sample_rate,
        )
    manifest = build_dataset(
        corpus,
        n_files=args.n_files,
        length_samples=int(round(args.length_s * corpus.sample_rate)),
        channels=args.channels,
        out_dir=out_dir,
        seed=args.seed,
    )
    write_stamp(manifest.path, {"command": "synth-noisefloor", **_public_args(args)}, args.seed)
    print(f"wrote {len(manifest.records)} files, manifest at {manifest.path}")
    return 0


def _chunk_latent(latent: Latent, frames_per_item: int) -> list[Latent]:
    chunks = []
    for start in range(0, latent.n_frames - frames_per_item + 1, frames_per_item):
        chunks.append(
            Latent(
                latent.data[:, start : start + frames_per_item],
                latent.frame_rate,
                latent.audio_channels,
            )
        )
    return chunks


def _dataset_from_wav_dir(data_dir: Path, cfg: RunConfig, frames_per_item: int) -> tuple[list, int]:
    class_dirs = sorted(d for d in data_dir.iterdir() if d.is_dir())
    sources: list[tuple[Path, int]]
    if class_dirs:
        sources = [(p, k) for k, d in enumerate(class_dirs) for p in sorted(d.glob("*.wav"))]
        n_classes = len(class_dirs)
    else:
        sources = [(p, 0) for p in sorted(data_dir.glob("*.wav"))]
        n_classes = 1
    items = []
    for path, label in sources:
        latent = encode(read_wav(str(path)), cfg.codec)
        items.extend((chunk, label) for chunk in _chunk_latent(latent, frames_per_item))
    if not items:
        raise ValueError(f"{data_dir}: no usable training items of {frames_per_item} frames")
    return items, n_classes


def _train_config(args: argparse.Namespace, iterations_default: int | None = None) -> TrainConfig:
    base = default_finetune_config() if args.command == "finetune" else TrainConfig()
    overrides: dict = {}
    for name in (
        "iterations",
        "batch_size",
        "learning_rate",
        "weight_decay",
        "warmup_steps",
        "ema_decay",
        "ema_every",
        "mask_len_max_seconds",
    ):
        value = getattr(args, name)
        if value is not None:
            overrides[name] = value
    if args.mask_dropout is not None:
        overrides["mask_dropout_prob"] = args.mask_dropout
    if args.condition_dropout is not None:
        overrides["condition_dropout_prob"] = args.condition_dropout
    if args.modes is not None:
        overrides["mode_set"] = tuple(_MODE_NAMES[m.strip()] for m in args.modes.split(","))
    if "iterations" not in overrides and iterations_default is not None:
        overrides["iterations"] = iterations_default
    overrides["seed"] = args.seed
    return TrainConfig(**{**vars(base), **overrides})


def cmd_train(args: argparse.Namespace) -> int:
    cfg = _run_config(args)
    train_cfg = _train_config(args, iterations_default=2000)
    frames_per_item = args.item_frames or cfg.total_frames
    if args.data_dir:
        dataset, n_classes = _dataset_from_wav_dir(Path(args.data_dir), cfg, frames_per_item)
    else:
        n_classes = args.toy_classes
        dataset = synthetic_class_dataset(
            n_items=args.toy_items,
            n_channels=cfg.latent_channels,
            n_frames=frames_per_item,
            n_classes=n_classes,
            frame_rate=cfg.frame_rate,
            seed=args.seed,
        )
    model = toy_denoiser(
        layers=args.layers,
        width=args.width,
        latent_channels=cfg.latent_channels,
        context_frames=args.context_frames,
        n_conditions=n_classes,
        seed=args.seed,
    )
    result = train(model, dataset, train_cfg, make_schedule(cfg.steps))
    save_checkpoint(args.out, result.model, result.ema, train_seed=train_cfg.seed)
    write_stamp(args.out, {"command": "train", **_public_args(args)}, args.seed)
    print(
        f"trained {train_cfg.iterations} iterations on {len(dataset)} items; "
        f"final loss {result.losses[-1]:.4f}; checkpoint at {args.out}"
    )
    return 0


def cmd_finetune(args: argparse.Namespace) -> int:
    cfg = _run_config(args)
    train_cfg = _train_config(args)
    bundle = load_checkpoint(args.checkpoint)
    model = bundle.model

    manifest_dir = Path(args.noisefloor_dir)
    wavs = sorted(manifest_dir.glob("noise_floor_*.wav"))
    if not wavs:
        raise ValueError(f"{manifest_dir}: no noise_floor_*.wav files found")
    latents = [encode(read_wav(str(p)), cfg.codec) for p in wavs]
    frame_counts = {latent.n_frames for latent in latents}
    if len(frame_counts) != 1:
        raise ValueError(f"noise floor files have mixed frame counts: {sorted(frame_counts)}")
    dataset = [(latent, 0) for latent in latents]

    result = finetune(model, dataset, train_cfg, make_schedule(cfg.steps))
    save_checkpoint(args.out, result.model, result.ema, train_seed=train_cfg.seed)
    write_stamp(args.out, {"command": "finetune", **_public_args(args)}, args.seed)
    print(
        f"fine-tuned {train_cfg.iterations} iterations on {len(dataset)} noise floor items; "
        f"final loss {result.losses[-1]:.4f}; checkpoint at {args.out}"
    )
    return 0


def cmd_eval(args: argparse.Namespace) -> int:
    crop_specs = None
    if args.crops:
        raw = json.loads(Path(args.crops).read_text(encoding="utf-8"))
        crop_specs = {name: [tuple(region) for region in regions] for name, regions in raw.items()}
    embedder = spectral_embedder(n_bands=args.bands, window_s=args.window_s)
    report = evaluate_run(
        args.candidates,
        args.reference,
        embedder,
        crop_specs=crop_specs,
        report_path=args.report,
    )
    write_stamp(report["report_path"], {"command": "eval", **_public_args(args)}, args.seed)
    print(f"FAD = {report['fad']:.6f} (report at {report['report_path']})")
    return 0


def cmd_ablate(args: argparse.Namespace) -> int:
    cfg = _run_config(args)
    gammas = [float(g) for g in args.gammas.split(",") if g.strip() != ""]
    if not gammas:
        raise ValueError("gamma sweep list is empty")
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    input_b = args.input_b or args.input
    embedder = spectral_embedder(n_bands=args.bands, window_s=args.window_s)

    audio_a, head = _read_prompt(args.input, cfg)
    audio_b, tail = _read_prompt(input_b, cfg)
    rows = []
    for gamma in gammas:
        for mode in ("extend", "morph"):
            row = {"gamma": gamma, "mode": mode, "fad": None, "error": None}
            try:
                run_cfg = RunConfig(**{**vars(cfg), "gamma": gamma})
                case_dir = out_dir / f"{mode}_gamma_{gamma:g}"
                case_dir.mkdir(exist_ok=True)
                crop_specs = {}
                for run in range(args.runs_per_gamma):
                    seed = cfg.seed + run
                    if mode == "extend":
                        spec = extend_forward_spec(head.n_frames, run_cfg.total_frames)
                        model = _load_denoiser(run_cfg, head.data)
                        latent = _run_generation(model, run_cfg, spec, head, None, audio_a.channels, seed)
                        crops = [[0.0, head.n_frames / run_cfg.frame_rate]]
                    else:
                        spec = morph_spec(head.n_frames, tail.n_frames, run_cfg.total_frames)
                        model = _load_denoiser(
                            run_cfg, np.concatenate([head.data, tail.data], axis=1)
                        )
                        latent = _run_generation(model, run_cfg, spec, head, tail, audio_a.channels, seed)
                        duration = run_cfg.total_frames / run_cfg.frame_rate
                        crops = [
                            [0.0, head.n_frames / run_cfg.frame_rate],
                            [duration - tail.n_frames / run_cfg.frame_rate, duration],
                        ]
                    name = f"run_{run:02d}.wav"
                    write_wav(case_dir / name, decode(latent, run_cfg.codec), sample_format=cfg.wav_format)
                    crop_specs[name] = [tuple(c) for c in crops]
                report = evaluate_run(case_dir, args.reference, embedder, crop_specs=crop_specs)
                row["fad"] = report["fad"]
            except (ValueError, OSError) as error:
                row["error"] = str(error)
            rows.append(row)

    table_path = out_dir / "gamma_sweep.csv"
    with open(table_path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.DictWriter(handle, fieldnames=["gamma", "mode", "fad", "error"])
        writer.writeheader()
        writer.writerows(rows)
    series = {
        mode: {
            "gamma": [row["gamma"] for row in rows if row["mode"] == mode and row["error"] is None],
            "fad": [row["fad"] for row in rows if row["mode"] == mode and row["error"] is None],
        }
        for mode in ("extend", "morph")
    }
    series_path = out_dir / "gamma_sweep.json"
    series_path.write_text(json.dumps(series, indent=2), encoding="utf-8")
    write_stamp(table_path, {"command": "ablate", **_public_args(args)}, cfg.seed)
    print(f"wrote {table_path} and {series_path} ({len(rows)} rows)")
    failed = [row for row in rows if row["error"] is not None]
    return 1 if failed else 0


# ---------------------------------------------------------------------------
# Argument plumbing
# ---------------------------------------------------------------------------


def _public_args(args: argparse.Namespace) -> dict:
    return {k: v for k, v in vars(args).items() if k not in ("func", "config")}


def _run_config(args: argparse.Namespace) -> RunConfig:
    fields = (
        "sample_rate",
        "frame_rate",
        "latent_channels",
        "transform",
        "steps",
        "gamma",
        "duration_s",
        "seed",
        "checkpoint",
        "condition",
        "wav_format",
    )
    values = {name: getattr(args, name) for name in fields if getattr(args, name, None) is not None}
    return RunConfig(**values)


def _apply_config_file(args: argparse.Namespace) -> argparse.Namespace:
    if not getattr(args, "config", None):
        return args
    overrides = json.loads(Path(args.config).read_text(encoding="utf-8"))
    for key, value in overrides.items():
        attr = key.replace("-", "_")
        if hasattr(args, attr) and getattr(args, attr) is None:
            setattr(args, attr, value)
    return args


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--seed", type=int, default=None, help="random seed (default 0)")
    parser.add_argument("--config", type=str, default=None, help="JSON config file with flag defaults")


def _add_run_flags(parser: argparse.ArgumentParser) -> None:
    _add_common(parser)
    parser.add_argument("--sample-rate", dest="sample_rate", type=int, default=None)
    parser.add_argument("--frame-rate", dest="frame_rate", type=int, default=None)
    parser.add_argument("--latent-channels", dest="latent_channels", type=int, default=None)
    parser.add_argument("--transform", type=str, default=None, choices=("dct", "identity"))
    parser.add_argument("--steps", type=int, default=None, help="denoising steps (default 24)")
    parser.add_argument("--gamma", type=float, default=None, help="audio prompt guidance scale (default 5)")
    parser.add_argument("--duration-s", dest="duration_s", type=float, default=None, help="total output duration (default 13)")
    parser.add_argument("--checkpoint", type=str, default=None, help="toy model checkpoint (EMA weights used)")
    parser.add_argument("--condition", type=int, default=None, help="integer condition label")
    parser.add_argument("--wav-format", dest="wav_format", type=str, default=None, choices=SAMPLE_FORMATS)


def _add_train_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--iterations", type=int, default=None)
    parser.add_argument("--batch-size", dest="batch_size", type=int, default=None)
    parser.add_argument("--learning-rate", dest="learning_rate", type=float, default=None)
    parser.add_argument("--weight-decay", dest="weight_decay", type=float, default=None)
    parser.add_argument("--warmup-steps", dest="warmup_steps", type=int, default=None)
    parser.add_argument("--ema-decay", dest="ema_decay", type=float, default=None)
    parser.add_argument("--ema-every", dest="ema_every", type=int, default=None)
    parser.add_argument("--mask-dropout", dest="mask_dropout", type=float, default=None)
    parser.add_argument("--condition-dropout", dest="condition_dropout", type=float, default=None)
    parser.add_argument("--mask-len-max-s", dest="mask_len_max_seconds", type=float, default=None)
    parser.add_argument("--modes", type=str, default=None, help="comma list of forward,backward,morph")
    parser.add_argument("--item-frames", dest="item_frames", type=int, default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="audioloom", description=__doc__)
    parser.add_argument("--version", action="version", version=f"audioloom {__version__}")
    commands = parser.add_subparsers(dest="command", required=True)

    p = commands.add_parser("extend", help="extend an audio prompt forward or backward")
    p.add_argument("input")
    p.add_argument("output")
    p.add_argument("--direction", choices=("forward", "backward"), default="forward")
    _add_run_flags(p)
    p.set_defaults(func=cmd_extend)

    p = commands.add_parser("morph", help="generate a transition from prompt A to prompt B")
    p.add_argument("input_a")
    p.add_argument("input_b")
    p.add_argument("output")
    p.add_argument("--head-offset", dest="head_offset", type=int, default=0)
    p.add_argument("--tail-offset", dest="tail_offset", type=int, default=0)
    _add_run_flags(p)
    p.set_defaults(func=cmd_morph)

    p = commands.add_parser("synth-noisefloor", help="build the stationary noise floor dataset")
    p.add_argument("--out-dir", dest="out_dir", required=True)
    p.add_argument("--n-files", dest="n_files", type=int, default=100)
    p.add_argument("--length-s", dest="length_s", type=float, default=2.0)
    p.add_argument("--channels", type=int, default=1, choices=(1, 2))
    p.add_argument("--room-tones", dest="room_tones", type=int, default=8)
    p.add_argument("--room-tone-s", dest="room_tone_s", type=float, default=10.0)
    p.add_argument("--corpus-dir", dest="corpus_dir", type=str, default=None)
    p.add_argument("--sample-rate", dest="sample_rate", type=int, default=8000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--config", type=str, default=None)
    p.set_defaults(func=cmd_synth_noisefloor)

    p = commands.add_parser("train", help="train the toy denoiser")
    p.add_argument("--out", required=True, help="checkpoint output path")
    p.add_argument("--data-dir", dest="data_dir", type=str, default=None, help="WAV training data (subdirs = classes)")
    p.add_argument("--toy-items", dest="toy_items", type=int, default=64)
    p.add_argument("--toy-classes", dest="toy_classes", type=int, default=4)
    p.add_argument("--layers", type=int, default=2)
    p.add_argument("--width", type=int, default=32)
    p.add_argument("--context-frames", dest="context_frames", type=int, default=5)
    _add_run_flags(p)
    _add_train_flags(p)
    p.set_defaults(func=cmd_train)

    p = commands.add_parser("finetune", help="fine-tune on the noise floor dataset (extension only)")
    p.add_argument("--checkpoint", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--noisefloor-dir", dest="noisefloor_dir", required=True)
    _add_run_flags(p)
    _add_train_flags(p)
    p.set_defaults(func=cmd_finetune)

    p = commands.add_parser("eval", help="Frechet audio distance of a candidate set")
    p.add_argument("--candidates", required=True)
    p.add_argument("--reference", required=True)
    p.add_argument("--crops", type=str, default=None, help="JSON file: name -> [[start_s, end_s], ...]")
    p.add_argument("--bands", type=int, default=16)
    p.add_argument("--window-s", dest="window_s", type=float, default=0.25)
    p.add_argument("--report", type=str, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--config", type=str, default=None)
    p.set_defaults(func=cmd_eval)

    p = commands.add_parser("ablate", help="sweep the guidance scale and tabulate FAD")
    p.add_argument("--input", required=True)
    p.add_argument("--input-b", dest="input_b", type=str, default=None)
    p.add_argument("--reference", required=True)
    p.add_argument("--out-dir", dest="out_dir", required=True)
    p.add_argument("--gammas", type=str, default="0,1,2,3,4,5,6")
    p.add_argument("--runs-per-gamma", dest="runs_per_gamma", type=int, default=3)
    p.add_argument("--bands", type=int, default=16)
    p.add_argument("--window-s", dest="window_s", type=float, default=0.25)
    _add_run_flags(p)
    p.set_defaults(func=cmd_ablate)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    args = _apply_config_file(args)
    if getattr(args, "seed", None) is None:
        args.seed = 0
    try:
        return args.func(args)
    except (ValueError, OSError, RuntimeError) as error:
        print(f"error: {error}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
