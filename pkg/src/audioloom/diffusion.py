"""Variance-preserving v-prediction diffusion: schedule, sampler, guidance.

The sampler runs a deterministic DDIM-style loop from high noise to low.
When a mask spec is present it builds, at every step, a masked variant of the
current state by re-imposing the forward-diffused prompt onto the pinned
frames, queries the denoiser on both variants, and blends the two
v-predictions with the audio-prompt-guidance scale: the blend moves the
prediction toward the masked branch and away from the unmasked one.

One run uses exactly two noise draws: the initial state and the prompt noise,
both taken from a generator seeded by the request, which makes sampling a
pure function of (model, request, schedule).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .latents import Latent, MaskSpec

__all__ = [
    "NoiseSchedule",
    "GuidanceConfig",
    "GenerationRequest",
    "DivergenceError",
    "make_schedule",
    "forward_diffuse",
    "v_target",
    "recover_x0",
    "recover_noise",
    "apg_combine",
    "sample",
]


class DivergenceError(RuntimeError):
    """Raised when a model emits non-finite values during sampling."""


@dataclass(frozen=True)
class NoiseSchedule:
    """Per-step signal (alpha) and noise (sigma) coefficients.

    alpha[t]^2 + sigma[t]^2 = 1 at every step; alpha decreases strictly with
    t, so t = n_steps - 1 is the high-noise end.
    """

    alpha: np.ndarray
    sigma: np.ndarray

    def __post_init__(self) -> None:
        a = np.asarray(self.alpha, dtype=np.float64)
        s = np.asarray(self.sigma, dtype=np.float64)
        if a.shape != s.shape or a.ndim != 1 or a.size < 1:
            raise ValueError("alpha and sigma must be equal-length 1-D arrays")
        if np.max(np.abs(a**2 + s**2 - 1.0)) > 1e-12:
            raise ValueError("schedule is not variance preserving: alpha^2 + sigma^2 != 1")
        if np.any(np.diff(a) >= 0) or np.any(np.diff(s) <= 0):
            raise ValueError("alpha must strictly decrease and sigma strictly increase")
        object.__setattr__(self, "alpha", a)
        object.__setattr__(self, "sigma", s)

    @property
    def n_steps(self) -> int:
        return int(self.alpha.size)

    def at(self, t: int) -> tuple[float, float]:
        if not 0 <= t < self.n_steps:
            raise IndexError(f"step {t} outside schedule of {self.n_steps} steps")
        return float(self.alpha[t]), float(self.sigma[t])


def make_schedule(n_steps: int) -> NoiseSchedule:
    """Half-offset cosine schedule: alpha[t] = cos(pi/2 * (t + 0.5) / n_steps).

    The half offset keeps alpha and sigma strictly inside (0, 1) at both ends.
    """
    if n_steps < 1:
        raise ValueError(f"n_steps must be >= 1, got {n_steps}")
    phase = np.pi / 2.0 * (np.arange(n_steps) + 0.5) / n_steps
    return NoiseSchedule(alpha=np.cos(phase), sigma=np.sin(phase))


def forward_diffuse(z0: np.ndarray, t: int, noise: np.ndarray, sched: NoiseSchedule) -> np.ndarray:
    """q(z_t | z_0): alpha_t * z0 + sigma_t * noise."""
    if np.shape(z0) != np.shape(noise):
        raise ValueError(f"z0 shape {np.shape(z0)} != noise shape {np.shape(noise)}")
    alpha, sigma = sched.at(t)
    return alpha * np.asarray(z0) + sigma * np.asarray(noise)


def v_target(z0: np.ndarray, noise: np.ndarray, t: int, sched: NoiseSchedule) -> np.ndarray:
    """Velocity regression target: alpha_t * noise - sigma_t * z0."""
    if np.shape(z0) != np.shape(noise):
        raise ValueError(f"z0 shape {np.shape(z0)} != noise shape {np.shape(noise)}")
    alpha, sigma = sched.at(t)
    return alpha * np.asarray(noise) - sigma * np.asarray(z0)


def recover_x0(z_t: np.ndarray, v: np.ndarray, t: int, sched: NoiseSchedule) -> np.ndarray:
    """Invert the v-parameterization for the clean signal: alpha_t * z_t - sigma_t * v."""
    alpha, sigma = sched.at(t)
    return alpha * np.asarray(z_t) - sigma * np.asarray(v)


def recover_noise(z_t: np.ndarray, v: np.ndarray, t: int, sched: NoiseSchedule) -> np.ndarray:
    """Invert the v-parameterization for the noise: sigma_t * z_t + alpha_t * v."""
    alpha, sigma = sched.at(t)
    return sigma * np.asarray(z_t) + alpha * np.asarray(v)


@dataclass(frozen=True)
class GuidanceConfig:
    """Audio prompt guidance scale; 0 ignores the prompt branch, 1 uses only it."""

    gamma: float = 5.0

    def __post_init__(self) -> None:
        if not np.isfinite(self.gamma) or self.gamma < 0:
            raise ValueError(f"gamma must be finite and >= 0, got {self.gamma}")


def apg_combine(v_uncond: np.ndarray, v_masked: np.ndarray, gamma: float) -> np.ndarray:
    """Blend the unmasked- and masked-branch predictions.

    Returns v_uncond + gamma * (v_masked - v_uncond). The endpoints are
    returned bit-exactly so gamma = 0 and gamma = 1 reproduce the branches.
    """
    u = np.asarray(v_uncond)
    m = np.asarray(v_masked)
    if u.shape != m.shape:
        raise ValueError(f"branch shapes differ: {u.shape} vs {m.shape}")
    if gamma == 0.0:
        return u.copy()
    if gamma == 1.0:
        return m.copy()
    return u + gamma * (m - u)


@dataclass(frozen=True)
class GenerationRequest:
    """Everything one sampling run depends on.

    With spec=None the run is a plain unconditional draw of total_frames.
    With a mask spec, prompt_head/prompt_tail supply the pinned content.
    A fixed seed makes the run fully deterministic.
    """

    total_frames: int
    n_channels: int
    frame_rate: float
    spec: MaskSpec | None = None
    prompt_head: Latent | None = None
    prompt_tail: Latent | None = None
    guidance: GuidanceConfig = field(default_factory=GuidanceConfig)
    condition: int | None = None
    seed: int = 0
    audio_channels: int = 1

    def __post_init__(self) -> None:
        if self.total_frames < 1 or self.n_channels < 1:
            raise ValueError("total_frames and n_channels must be >= 1")
        if self.spec is not None:
            if self.spec.total_frames != self.total_frames:
                raise ValueError(
                    f"mask spec covers {self.spec.total_frames} frames, request asks for "
                    f"{self.total_frames}"
                )
            for name, prompt, expected in (
                ("head", self.prompt_head, self.spec.prefix_frames),
                ("tail", self.prompt_tail, self.spec.suffix_frames),
            ):
                if expected and prompt is None:
                    raise ValueError(f"mask spec pins {name} frames but no {name} prompt given")
                if prompt is not None and prompt.n_frames != expected:
                    raise ValueError(
                        f"{name} prompt has {prompt.n_frames} frames, mask spec expects {expected}"
                    )
                if prompt is not None and prompt.n_channels != self.n_channels:
                    raise ValueError(
                        f"{name} prompt has {prompt.n_channels} channels, request has "
                        f"{self.n_channels}"
                    )


def _prompt_canvas(request: GenerationRequest) -> tuple[np.ndarray, np.ndarray]:
    # full-size array holding prompt content on the pinned frames, plus the
    # boolean pin mask
    spec = request.spec
    assert spec is not None
    canvas = np.zeros((request.n_channels, request.total_frames))
    if request.prompt_head is not None and spec.head_slice is not None:
        canvas[:, spec.head_slice] = request.prompt_head.data
    if request.prompt_tail is not None and spec.tail_slice is not None:
        canvas[:, spec.tail_slice] = request.prompt_tail.data
    return canvas, spec.frame_mask()


def sample(model, request: GenerationRequest, sched: NoiseSchedule) -> Latent:
    """Run the deterministic sampling loop and return the raw output latent.

    The caller is responsible for postprocessing (re-imposing the prompt) and
    decoding. Masked frames of the *input* are refreshed at every step with
    the prompt forward-diffused to the step's noise level, using one prompt
    noise draw fixed for the whole run.
    """
    rng = np.random.default_rng(request.seed)
    shape = (request.n_channels, request.total_frames)
    state = rng.standard_normal(shape)

    masked_run = request.spec is not None
    if masked_run:
        eps_prompt = rng.standard_normal(shape)
        canvas, pin = _prompt_canvas(request)

    gamma = request.guidance.gamma
    for t in range(sched.n_steps - 1, -1, -1):
        alpha, sigma = sched.at(t)

        need_uncond = not masked_run or gamma != 1.0
        need_masked = masked_run and gamma != 0.0
        v_uncond = v_masked = None
        if need_uncond:
            v_uncond = _predict(model, state, t, sched, request.condition, shape)
        if need_masked:
            masked_state = np.where(pin, alpha * canvas + sigma * eps_prompt, state)
            v_masked = _predict(model, masked_state, t, sched, request.condition, shape)

        if not masked_run:
            v = v_uncond
        elif gamma == 0.0:
            v = v_uncond
        elif gamma == 1.0:
            v = v_masked
        else:
            v = apg_combine(v_uncond, v_masked, gamma)

        if not np.all(np.isfinite(v)):
            raise DivergenceError(f"non-finite model output at step {t}")

        x0_hat = alpha * state - sigma * v
        eps_hat = sigma * state + alpha * v
        alpha_next, sigma_next = sched.at(t - 1) if t > 0 else (1.0, 0.0)
        state = alpha_next * x0_hat + sigma_next * eps_hat

    return Latent(state, request.frame_rate, request.audio_channels, 0)


def _predict(model, z, t, sched, condition, expected_shape) -> np.ndarray:
    v = np.asarray(model.predict_v(z, t, sched, condition))
    if v.shape != expected_shape:
        raise ValueError(f"model returned shape {v.shape}, expected {expected_shape}")
    return v
