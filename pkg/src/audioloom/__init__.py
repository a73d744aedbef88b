"""audioloom: latent-diffusion audio extension and morphing at desk scale.

Pipeline: encode an audio prompt into latent frames, pin those frames onto
Gaussian noise with a mask, run a deterministic v-prediction sampler whose
two branches (masked and unmasked input) are blended by the audio prompt
guidance scale, re-impose the prompt on the output, and decode. Companion
tooling synthesizes the stationary noise-floor dataset used to fine-tune
against hallucinations and evaluates outputs with the Frechet audio distance.
"""

__version__ = "0.1.0"

from .audio import AudioBuffer, from_mid_side, silence, to_mid_side
from .latents import (
    CodecConfig,
    Latent,
    MaskMode,
    MaskSpec,
    apply_mask,
    decode,
    encode,
    extend_backward_spec,
    extend_forward_spec,
    morph_spec,
    postprocess,
)
from .diffusion import (
    DivergenceError,
    GenerationRequest,
    GuidanceConfig,
    NoiseSchedule,
    apg_combine,
    forward_diffuse,
    make_schedule,
    recover_noise,
    recover_x0,
    sample,
    v_target,
)
from .denoisers import (
    AnalyticGaussianDenoiser,
    Denoiser,
    ToyDenoiser,
    TrainConfig,
    analytic_gaussian_denoiser,
    default_finetune_config,
    finetune,
    load_checkpoint,
    save_checkpoint,
    synthetic_class_dataset,
    toy_denoiser,
    train,
)
from .noisefloor import (
    NoiseFloorManifest,
    RoomToneCorpus,
    RoomToneEntry,
    build_dataset,
    make_synthetic_room_tones,
    synthesize_noise_floor,
)
from .evaluation import (
    EmbeddingStats,
    SpectralEmbedder,
    cnm_baseline,
    evaluate_run,
    fit_stats,
    frechet_distance,
    spectral_embedder,
)
from .wavio import read_wav, write_wav

__all__ = [name for name in dir() if not name.startswith("_")]
