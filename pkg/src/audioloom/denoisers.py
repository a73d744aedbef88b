"""Denoisers behind one interface, plus the toy training loop.

Two implementations:

* :class:`AnalyticGaussianDenoiser` - closed-form posterior mean under a
  per-frame Gaussian prior. Exact, untrainable; the verification oracle for
  the sampler.
* :class:`ToyDenoiser` - a small residual MLP over per-frame windows with a
  sinusoidal timestep embedding and a learned condition embedding. Forward
  and backward passes are written out in numpy so training is bit-exactly
  reproducible from a seed.

Training follows the masked-denoising recipe: each iteration noises a batch,
optionally re-imposes the forward-diffused clean frames on a randomly drawn
mask region (the mask itself is dropped out half the time by default), drops
the condition label some of the time, and regresses the velocity target under
MSE with AdamW, warmup + half-scale cosine decay, and a parameter EMA.

Checkpoint layout (format 1, numpy .npz):
  format_version        int, currently 1
  config_json           JSON dump of ToyModelConfig
  train_seed            int, -1 when unknown
  param:<name>          one array per model parameter
  ema:<name>            one array per EMA parameter (absent if EMA not saved)
"""

from __future__ import annotations

import json
from abc import ABC, abstractmethod
from dataclasses import asdict, dataclass, replace
from pathlib import Path

import numpy as np
from scipy.special import expit

from .diffusion import DivergenceError, NoiseSchedule
from .latents import Latent, MaskMode, MaskSpec

__all__ = [
    "Denoiser",
    "AnalyticGaussianDenoiser",
    "analytic_gaussian_denoiser",
    "ToyModelConfig",
    "ToyDenoiser",
    "toy_denoiser",
    "TrainConfig",
    "TrainResult",
    "train",
    "finetune",
    "default_finetune_config",
    "save_checkpoint",
    "load_checkpoint",
    "synthetic_class_dataset",
]

CHECKPOINT_FORMAT = 1


class Denoiser(ABC):
    """v-prediction interface shared by all denoisers."""

    @abstractmethod
    def predict_v(
        self, z_t: np.ndarray, t: int, sched: NoiseSchedule, condition: int | None = None
    ) -> np.ndarray:
        """Predict the velocity for a (channels, frames) latent at step t."""

    def predict_x0(
        self, z_t: np.ndarray, t: int, sched: NoiseSchedule, condition: int | None = None
    ) -> np.ndarray:
        """Clean-signal prediction, derived from predict_v by construction."""
        alpha, sigma = sched.at(t)
        return alpha * np.asarray(z_t) - sigma * self.predict_v(z_t, t, sched, condition)


class AnalyticGaussianDenoiser(Denoiser):
    """Exact posterior-mean denoiser for a per-frame Gaussian prior.

    Frames are treated as independent draws from N(mu0, cov0) over the latent
    channels. cov0 may be a full SPD matrix or a plain float for an isotropic
    prior; the two code paths are kept separate so they can be checked
    against each other.
    """

    def __init__(self, mu0: np.ndarray, cov0: np.ndarray | float):
        self.mu0 = np.asarray(mu0, dtype=np.float64).reshape(-1)
        if np.isscalar(cov0) or np.ndim(cov0) == 0:
            variance = float(cov0)
            if variance <= 0:
                raise ValueError(f"isotropic variance must be > 0, got {variance}")
            self.isotropic_var: float | None = variance
            self._eigvecs = self._eigvals = None
        else:
            cov = np.asarray(cov0, dtype=np.float64)
            dim = self.mu0.size
            if cov.shape != (dim, dim):
                raise ValueError(f"cov0 shape {cov.shape} does not match mu0 dim {dim}")
            if not np.allclose(cov, cov.T, atol=1e-10):
                raise ValueError("cov0 must be symmetric")
            eigvals, eigvecs = np.linalg.eigh((cov + cov.T) / 2.0)
            if eigvals.min() <= 0:
                raise ValueError(f"cov0 must be positive definite (min eigenvalue {eigvals.min()})")
            self.isotropic_var = None
            self._eigvals, self._eigvecs = eigvals, eigvecs

    def posterior_mean(self, z_t: np.ndarray, t: int, sched: NoiseSchedule) -> np.ndarray:
        """E[z0 | z_t] per frame: mu + a*S (a^2 S + s^2 I)^-1 (z_t - a*mu)."""
        z = np.asarray(z_t, dtype=np.float64)
        if z.ndim != 2 or z.shape[0] != self.mu0.size:
            raise ValueError(f"latent shape {z.shape} does not match prior dim {self.mu0.size}")
        alpha, sigma = sched.at(t)
        centered = z - alpha * self.mu0[:, None]
        if self.isotropic_var is not None:
            gain = alpha * self.isotropic_var / (alpha**2 * self.isotropic_var + sigma**2)
            return self.mu0[:, None] + gain * centered
        gains = alpha * self._eigvals / (alpha**2 * self._eigvals + sigma**2)
        rotated = self._eigvecs.T @ centered
        return self.mu0[:, None] + self._eigvecs @ (gains[:, None] * rotated)

    def predict_v(
        self, z_t: np.ndarray, t: int, sched: NoiseSchedule, condition: int | None = None
    ) -> np.ndarray:
        alpha, sigma = sched.at(t)
        if sigma == 0.0:
            raise ValueError("schedule step has sigma == 0; velocity is undefined there")
        return (alpha * np.asarray(z_t) - self.posterior_mean(z_t, t, sched)) / sigma


def analytic_gaussian_denoiser(mu0: np.ndarray, cov0: np.ndarray | float) -> AnalyticGaussianDenoiser:
    return AnalyticGaussianDenoiser(mu0, cov0)


# ---------------------------------------------------------------------------
# Toy trainable denoiser
# ---------------------------------------------------------------------------


def _silu(x: np.ndarray) -> np.ndarray:
    return x * expit(x)


def _silu_grad(x: np.ndarray) -> np.ndarray:
    s = expit(x)
    return s * (1.0 + x * (1.0 - s))


@dataclass(frozen=True)
class ToyModelConfig:
    layers: int = 2
    width: int = 32
    latent_channels: int = 8
    context_frames: int = 5
    n_conditions: int = 4
    seed: int = 0

    def __post_init__(self) -> None:
        if min(self.layers, self.width, self.latent_channels, self.n_conditions) < 1:
            raise ValueError("layers, width, latent_channels, n_conditions must be >= 1")
        if self.context_frames < 1 or self.context_frames % 2 == 0:
            raise ValueError(f"context_frames must be odd and >= 1, got {self.context_frames}")
        if self.width % 2 != 0:
            raise ValueError(f"width must be even for the sinusoidal embedding, got {self.width}")


class ToyDenoiser(Denoiser):
    """Residual MLP over windows of neighbouring latent frames.

    Each frame's prediction sees its context_frames-wide neighbourhood
    (zero-padded at the edges), the timestep embedding, and the condition
    embedding; the condition index n_conditions is the learned null row used
    for unconditional prediction.
    """

    def __init__(self, config: ToyModelConfig):
        self.config = config
        rng = np.random.default_rng(config.seed)
        c, w, h = config.latent_channels, config.context_frames, config.width
        self.params: dict[str, np.ndarray] = {}

        def dense(name: str, fan_in: int, fan_out: int) -> None:
            self.params[f"{name}_w"] = rng.standard_normal((fan_in, fan_out)) / np.sqrt(fan_in)
            self.params[f"{name}_b"] = np.zeros(fan_out)

        dense("input", c * w, h)
        dense("time", h, h)
        self.params["cond_emb"] = 0.1 * rng.standard_normal((config.n_conditions + 1, h))
        for layer in range(config.layers):
            dense(f"block{layer}_expand", h, h)
            dense(f"block{layer}_project", h, h)
        dense("output", h, c)
        # log-spaced frequencies for the sinusoidal embedding of t / n_steps
        self._freqs = np.geomspace(1.0, 64.0, h // 2)

    def clone(self) -> "ToyDenoiser":
        twin = ToyDenoiser(self.config)
        twin.params = {name: value.copy() for name, value in self.params.items()}
        return twin

    def _time_features(self, t_frac: np.ndarray) -> np.ndarray:
        angles = 2.0 * np.pi * t_frac[:, None] * self._freqs[None, :]
        return np.concatenate([np.sin(angles), np.cos(angles)], axis=1)

    def _windows(self, z_batch: np.ndarray) -> np.ndarray:
        # (batch, channels, frames) -> (batch * frames, channels * context)
        batch, channels, frames = z_batch.shape
        half = self.config.context_frames // 2
        padded = np.pad(z_batch, ((0, 0), (0, 0), (half, half)))
        view = np.lib.stride_tricks.sliding_window_view(padded, self.config.context_frames, axis=2)
        return view.transpose(0, 2, 1, 3).reshape(batch * frames, channels * self.config.context_frames)

    def _forward(
        self,
        z_batch: np.ndarray,
        t_idx: np.ndarray,
        cond_idx: np.ndarray,
        sched: NoiseSchedule,
    ) -> tuple[np.ndarray, dict]:
        p = self.params
        batch, channels, frames = z_batch.shape
        if channels != self.config.latent_channels:
            raise ValueError(
                f"latent has {channels} channels, model expects {self.config.latent_channels}"
            )
        if np.any(t_idx < 0) or np.any(t_idx >= sched.n_steps):
            raise IndexError(f"step index outside schedule of {sched.n_steps} steps")

        rows = self._windows(z_batch)
        t_frac = (t_idx.astype(np.float64) + 0.5) / sched.n_steps
        sin_feats = self._time_features(t_frac)
        time_pre = sin_feats @ p["time_w"] + p["time_b"]
        time_emb = _silu(time_pre)
        cond_emb = p["cond_emb"][cond_idx]

        x = rows @ p["input_w"] + p["input_b"]
        x = x + np.repeat(time_emb, frames, axis=0) + np.repeat(cond_emb, frames, axis=0)

        cache: dict = {
            "rows": rows,
            "sin_feats": sin_feats,
            "time_pre": time_pre,
            "cond_idx": cond_idx,
            "shape": (batch, channels, frames),
            "blocks": [],
        }
        for layer in range(self.config.layers):
            pre = x @ p[f"block{layer}_expand_w"] + p[f"block{layer}_expand_b"]
            act = _silu(pre)
            cache["blocks"].append((x, pre, act))
            x = x + act @ p[f"block{layer}_project_w"] + p[f"block{layer}_project_b"]
        cache["trunk_out"] = x

        v_rows = x @ p["output_w"] + p["output_b"]
        v = v_rows.reshape(batch, frames, channels).transpose(0, 2, 1)
        return v, cache

    def predict_v(
        self, z_t: np.ndarray, t: int, sched: NoiseSchedule, condition: int | None = None
    ) -> np.ndarray:
        z = np.asarray(z_t, dtype=np.float64)
        if z.ndim != 2:
            raise ValueError(f"latent must be 2-D (channels, frames), got {z.ndim}-D")
        cond = self.config.n_conditions if condition is None else int(condition)
        if not 0 <= cond <= self.config.n_conditions:
            raise ValueError(f"condition {condition} outside 0..{self.config.n_conditions - 1}")
        v, _ = self._forward(z[None], np.array([t]), np.array([cond]), sched)
        return v[0]

    def loss_and_grads(
        self,
        z_batch: np.ndarray,
        t_idx: np.ndarray,
        cond_idx: np.ndarray,
        targets: np.ndarray,
        sched: NoiseSchedule,
    ) -> tuple[float, dict[str, np.ndarray]]:
        """MSE between predicted and target velocity, with exact gradients."""
        p = self.params
        v, cache = self._forward(z_batch, t_idx, cond_idx, sched)
        diff = v - targets
        loss = float(np.mean(diff**2))

        batch, channels, frames = cache["shape"]
        grads = {name: np.zeros_like(value) for name, value in p.items()}
        d_rows = (2.0 * diff / diff.size).transpose(0, 2, 1).reshape(batch * frames, channels)

        grads["output_w"] = cache["trunk_out"].T @ d_rows
        grads["output_b"] = d_rows.sum(axis=0)
        dx = d_rows @ p["output_w"].T

        for layer in range(self.config.layers - 1, -1, -1):
            x_in, pre, act = cache["blocks"][layer]
            grads[f"block{layer}_project_w"] = act.T @ dx
            grads[f"block{layer}_project_b"] = dx.sum(axis=0)
            d_act = dx @ p[f"block{layer}_project_w"].T
            d_pre = d_act * _silu_grad(pre)
            grads[f"block{layer}_expand_w"] = x_in.T @ d_pre
            grads[f"block{layer}_expand_b"] = d_pre.sum(axis=0)
            dx = dx + d_pre @ p[f"block{layer}_expand_w"].T

        grads["input_w"] = cache["rows"].T @ dx
        grads["input_b"] = dx.sum(axis=0)

        d_per_item = dx.reshape(batch, frames, -1).sum(axis=1)
        d_time_pre = d_per_item * _silu_grad(cache["time_pre"])
        grads["time_w"] = cache["sin_feats"].T @ d_time_pre
        grads["time_b"] = d_time_pre.sum(axis=0)
        np.add.at(grads["cond_emb"], cache["cond_idx"], d_per_item)

        return loss, grads


def toy_denoiser(
    layers: int,
    width: int,
    latent_channels: int,
    context_frames: int,
    n_conditions: int,
    seed: int = 0,
) -> ToyDenoiser:
    return ToyDenoiser(
        ToyModelConfig(
            layers=layers,
            width=width,
            latent_channels=latent_channels,
            context_frames=context_frames,
            n_conditions=n_conditions,
            seed=seed,
        )
    )


# ---------------------------------------------------------------------------
# Training
# ---------------------------------------------------------------------------


class AdamW:
    """Decoupled-weight-decay Adam over a named parameter dict."""

    def __init__(
        self,
        params: dict[str, np.ndarray],
        learning_rate: float,
        weight_decay: float,
        betas: tuple[float, float] = (0.9, 0.999),
        eps: float = 1e-8,
    ):
        self.learning_rate = learning_rate
        self.weight_decay = weight_decay
        self.betas = betas
        self.eps = eps
        self.step_count = 0
        self._m = {name: np.zeros_like(value) for name, value in params.items()}
        self._v = {name: np.zeros_like(value) for name, value in params.items()}

    def step(self, params: dict[str, np.ndarray], grads: dict[str, np.ndarray], lr: float | None = None) -> None:
        lr = self.learning_rate if lr is None else lr
        b1, b2 = self.betas
        self.step_count += 1
        correct1 = 1.0 - b1**self.step_count
        correct2 = 1.0 - b2**self.step_count
        for name, value in params.items():
            g = grads[name]
            self._m[name] = b1 * self._m[name] + (1.0 - b1) * g
            self._v[name] = b2 * self._v[name] + (1.0 - b2) * g**2
            m_hat = self._m[name] / correct1
            v_hat = self._v[name] / correct2
            value -= lr * (m_hat / (np.sqrt(v_hat) + self.eps) + self.weight_decay * value)


@dataclass(frozen=True)
class TrainConfig:
    """Hyperparameters for the masked-denoising training loop.

    Dropout, optimizer, and EMA defaults follow the reference recipe: mask
    the batch half the time, drop the condition label a fifth of the time,
    mask lengths uniform on [0, 3.25] s, AdamW at 1e-4 with weight decay
    1e-2, EMA every 100 steps at 0.99 decay.
    """

    iterations: int = 2000
    batch_size: int = 8
    learning_rate: float = 1e-4
    weight_decay: float = 1e-2
    warmup_steps: int = 4000
    ema_decay: float = 0.99
    ema_every: int = 100
    mask_dropout_prob: float = 0.5
    condition_dropout_prob: float = 0.2
    mask_len_max_seconds: float = 3.25
    mode_set: tuple[MaskMode, ...] = (MaskMode.EXTEND_FORWARD, MaskMode.EXTEND_BACKWARD, MaskMode.MORPH)
    seed: int = 0

    def __post_init__(self) -> None:
        if self.iterations < 1 or self.batch_size < 1:
            raise ValueError("iterations and batch_size must be >= 1")
        for name in ("mask_dropout_prob", "condition_dropout_prob"):
            prob = getattr(self, name)
            if not 0.0 <= prob <= 1.0:
                raise ValueError(f"{name} must be in [0, 1], got {prob}")
        if self.mask_len_max_seconds <= 0:
            raise ValueError(f"mask_len_max_seconds must be > 0, got {self.mask_len_max_seconds}")
        if self.ema_every < 1 or not 0.0 <= self.ema_decay < 1.0:
            raise ValueError("ema_every must be >= 1 and ema_decay in [0, 1)")
        if self.mask_dropout_prob < 1.0 and not self.mode_set:
            raise ValueError("mode_set must be non-empty when masking can occur")


def _learning_rate_at(cfg: TrainConfig, iteration: int) -> float:
    # linear warmup, then cosine decay whose total drop is scaled by 0.5
    # (the factor decays from 1.0 to 0.5 of the peak rate)
    if iteration < cfg.warmup_steps:
        return cfg.learning_rate * (iteration + 1) / cfg.warmup_steps
    span = max(1, cfg.iterations - cfg.warmup_steps)
    progress = min(1.0, (iteration - cfg.warmup_steps) / span)
    return cfg.learning_rate * (0.75 + 0.25 * np.cos(np.pi * progress))


def _draw_mask_spec(
    rng: np.random.Generator, cfg: TrainConfig, n_frames: int, frame_rate: float
) -> MaskSpec:
    mode = cfg.mode_set[rng.integers(len(cfg.mode_set))]

    def draw_len(upper: int) -> int:
        frames = int(rng.uniform(0.0, cfg.mask_len_max_seconds) * frame_rate)
        return int(np.clip(frames, 1, upper))

    if mode is MaskMode.EXTEND_FORWARD:
        return MaskSpec(mode, draw_len(n_frames - 1), 0, n_frames)
    if mode is MaskMode.EXTEND_BACKWARD:
        return MaskSpec(mode, 0, draw_len(n_frames - 1), n_frames)
    prefix = draw_len(n_frames - 2)
    suffix = draw_len(n_frames - prefix - 1)
    return MaskSpec(mode, prefix, suffix, n_frames)


@dataclass
class TrainResult:
    model: ToyDenoiser
    ema: ToyDenoiser
    losses: np.ndarray
    mask_apply_rate: float
    condition_drop_rate: float


def train(
    model: ToyDenoiser,
    dataset: list[tuple[Latent, int]],
    cfg: TrainConfig,
    sched: NoiseSchedule,
) -> TrainResult:
    """Train the toy denoiser in place and return it with its EMA twin.

    Each iteration: sample a batch and per-item steps, noise the batch, with
    probability 1 - mask_dropout_prob draw one mask spec (mode uniform over
    cfg.mode_set, each masked end's length uniform on
    [0, mask_len_max_seconds]) and re-impose the clean frames forward-diffused
    with an independent noise draw, drop each item's condition label with
    probability condition_dropout_prob, then take an AdamW step on the
    velocity MSE.
    """
    if not dataset:
        raise ValueError("training dataset is empty")
    frame_rate = dataset[0][0].frame_rate
    z_all = np.stack([item.data for item, _ in dataset])
    labels_all = np.array([label for _, label in dataset], dtype=np.int64)
    n_items, channels, frames = z_all.shape
    if channels != model.config.latent_channels:
        raise ValueError(
            f"dataset latents have {channels} channels, model expects {model.config.latent_channels}"
        )
    if np.any(labels_all < 0) or np.any(labels_all >= model.config.n_conditions):
        raise ValueError(f"labels must lie in 0..{model.config.n_conditions - 1}")
    if cfg.mask_dropout_prob < 1.0 and cfg.mask_len_max_seconds * frame_rate >= frames:
        raise ValueError(
            f"mask_len_max_seconds {cfg.mask_len_max_seconds} must stay below the item "
            f"duration {frames / frame_rate} s"
        )

    rng = np.random.default_rng(cfg.seed)
    optimizer = AdamW(model.params, cfg.learning_rate, cfg.weight_decay)
    ema = model.clone()
    null_idx = model.config.n_conditions

    losses = np.empty(cfg.iterations)
    masked_iterations = 0
    dropped_conditions = 0

    for iteration in range(cfg.iterations):
        idx = rng.integers(0, n_items, cfg.batch_size)
        z0 = z_all[idx]
        t_idx = rng.integers(0, sched.n_steps, cfg.batch_size)
        eps = rng.standard_normal(z0.shape)
        a = sched.alpha[t_idx][:, None, None]
        s = sched.sigma[t_idx][:, None, None]
        z_t = a * z0 + s * eps
        target = a * eps - s * z0

        if rng.random() < 1.0 - cfg.mask_dropout_prob:
            masked_iterations += 1
            spec = _draw_mask_spec(rng, cfg, frames, frame_rate)
            pin = spec.frame_mask()
            # an independent draw on the pinned frames mirrors inference,
            # where the prompt's noise is not the state's noise
            eps_pin = rng.standard_normal(z0.shape)
            z_t[:, :, pin] = (a * z0 + s * eps_pin)[:, :, pin]
            target[:, :, pin] = (a * eps_pin - s * z0)[:, :, pin]

        cond_idx = labels_all[idx].copy()
        dropped = rng.random(cfg.batch_size) < cfg.condition_dropout_prob
        cond_idx[dropped] = null_idx
        dropped_conditions += int(dropped.sum())

        loss, grads = model.loss_and_grads(z_t, t_idx, cond_idx, target, sched)
        if not np.isfinite(loss):
            raise DivergenceError(f"training loss diverged at iteration {iteration}")
        losses[iteration] = loss
        optimizer.step(model.params, grads, lr=_learning_rate_at(cfg, iteration))

        if (iteration + 1) % cfg.ema_every == 0:
            for name, value in model.params.items():
                ema.params[name] = cfg.ema_decay * ema.params[name] + (1.0 - cfg.ema_decay) * value

    return TrainResult(
        model=model,
        ema=ema,
        losses=losses,
        mask_apply_rate=masked_iterations / cfg.iterations,
        condition_drop_rate=dropped_conditions / (cfg.iterations * cfg.batch_size),
    )


def default_finetune_config(**overrides) -> TrainConfig:
    """Fine-tuning defaults: extension modes only, 15k iterations."""
    base = TrainConfig(
        iterations=15000,
        mode_set=(MaskMode.EXTEND_FORWARD, MaskMode.EXTEND_BACKWARD),
    )
    return replace(base, **overrides) if overrides else base


def finetune(
    model: ToyDenoiser,
    noise_floor_dataset: list[tuple[Latent, int]],
    cfg: TrainConfig | None,
    sched: NoiseSchedule,
) -> TrainResult:
    """Continue training on stationary data, extension modes only."""
    cfg = default_finetune_config() if cfg is None else cfg
    if MaskMode.MORPH in cfg.mode_set:
        raise ValueError("fine-tuning is extension-only; morph mode is not allowed")
    return train(model, noise_floor_dataset, cfg, sched)


# ---------------------------------------------------------------------------
# Checkpoints
# ---------------------------------------------------------------------------


def save_checkpoint(
    path: str | Path,
    model: ToyDenoiser,
    ema: ToyDenoiser | None = None,
    train_seed: int | None = None,
) -> None:
    arrays: dict[str, np.ndarray] = {
        "format_version": np.array(CHECKPOINT_FORMAT),
        "config_json": np.array(json.dumps(asdict(model.config))),
        "train_seed": np.array(-1 if train_seed is None else int(train_seed)),
    }
    for name, value in model.params.items():
        arrays[f"param:{name}"] = value
    if ema is not None:
        for name, value in ema.params.items():
            arrays[f"ema:{name}"] = value
    with open(path, "wb") as handle:
        np.savez(handle, **arrays)


@dataclass
class CheckpointBundle:
    model: ToyDenoiser
    ema: ToyDenoiser | None
    train_seed: int | None


def load_checkpoint(path: str | Path) -> CheckpointBundle:
    with np.load(path) as archive:
        version = int(archive["format_version"])
        if version != CHECKPOINT_FORMAT:
            raise ValueError(f"unsupported checkpoint format {version}")
        config = ToyModelConfig(**json.loads(str(archive["config_json"])))
        model = ToyDenoiser(config)
        for name in model.params:
            model.params[name] = archive[f"param:{name}"].astype(np.float64)
        ema = None
        if any(key.startswith("ema:") for key in archive.files):
            ema = ToyDenoiser(config)
            for name in ema.params:
                ema.params[name] = archive[f"ema:{name}"].astype(np.float64)
        seed = int(archive["train_seed"])
    return CheckpointBundle(model=model, ema=ema, train_seed=None if seed < 0 else seed)


# ---------------------------------------------------------------------------
# Bundled synthetic dataset
# ---------------------------------------------------------------------------


def synthetic_class_dataset(
    n_items: int = 64,
    n_channels: int = 8,
    n_frames: int = 32,
    n_classes: int = 4,
    frame_rate: float = 40.0,
    seed: int = 0,
) -> list[tuple[Latent, int]]:
    """Labelled latents drawn from band-limited noise classes.

    Class k concentrates its mean and variance on its own slice of latent
    channels, so both the condition embedding and the denoising path have
    structure to learn.
    """
    if n_classes > n_channels:
        raise ValueError("need at least one channel per class")
    rng = np.random.default_rng(seed)
    means = np.zeros((n_classes, n_channels))
    scales = np.full((n_classes, n_channels), 0.15)
    band_width = n_channels // n_classes
    for k in range(n_classes):
        band = slice(k * band_width, (k + 1) * band_width)
        means[k, band] = rng.normal(0.0, 1.5, band_width)
        scales[k, band] = 1.0

    dataset = []
    for i in range(n_items):
        label = i % n_classes
        data = means[label][:, None] + scales[label][:, None] * rng.standard_normal(
            (n_channels, n_frames)
        )
        dataset.append((Latent(data, frame_rate), label))
    return dataset
