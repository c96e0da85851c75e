"""Experiment runners and file IO."""
from src.harness.cs_experiments import (
    a0_recovery_correspondence,
    draw_instance,
    run_a0_tracking,
    run_cs_phase_map,
)
from src.harness.mc_experiments import (
    complete_both,
    max_recovered_rank,
    rank_truncate,
    run_collab_filter,
    run_inpainting,
    run_mc_phase,
    split_ratings,
    synthetic_image,
)
from src.harness.models import CollabResult, InpaintingResult, RatingsDataset, RecoveryMap

__all__ = [
    "CollabResult",
    "InpaintingResult",
    "RatingsDataset",
    "RecoveryMap",
    "a0_recovery_correspondence",
    "complete_both",
    "draw_instance",
    "max_recovered_rank",
    "rank_truncate",
    "run_a0_tracking",
    "run_collab_filter",
    "run_cs_phase_map",
    "run_inpainting",
    "run_mc_phase",
    "split_ratings",
    "synthetic_image",
]
