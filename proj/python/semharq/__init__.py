"""Semantic HARQ test bench over a stochastic latent text codec."""

from semharq._core import (
    Codec,
    DimensionMismatch,
    FormatError,
    InvalidArgument,
    TrainingDiverged,
    agreement_score,
    apply_awgn,
    bleu,
    cli,
    combine,
    estimate_quality,
    jaccard,
    latent_distance_score,
    noise_variance,
    run_session,
    self_consistency_score,
    sentence_bleu4,
    uncertainty_score,
)

__all__ = [
    "Codec",
    "DimensionMismatch",
    "FormatError",
    "InvalidArgument",
    "TrainingDiverged",
    "agreement_score",
    "apply_awgn",
    "bleu",
    "cli",
    "combine",
    "estimate_quality",
    "jaccard",
    "latent_distance_score",
    "noise_variance",
    "run_session",
    "self_consistency_score",
    "sentence_bleu4",
    "uncertainty_score",
]
