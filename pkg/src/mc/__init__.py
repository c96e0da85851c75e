"""Matrix completion: weighted spectral soft-thresholding and the NNM baseline."""
from src.mc.factored import FactoredMatrix, LowRankPlusSparse
from src.mc.fixed_point import fixed_point_solve
from src.mc.models import (
    CompletionResult,
    FixedPointResult,
    MaskedMatrix,
    MaskSet,
    WsstConfig,
)
from src.mc.nnm import nnm_solve
from src.mc.operators import (
    apply_mask,
    prox_objective,
    shrink_spectrum,
    soft_threshold,
    soft_threshold_weighted,
    weighted_nuclear_norm,
    weights_from_spectrum,
)
from src.mc.wsst import wsst

__all__ = [
    "CompletionResult",
    "FactoredMatrix",
    "FixedPointResult",
    "LowRankPlusSparse",
    "MaskSet",
    "MaskedMatrix",
    "WsstConfig",
    "apply_mask",
    "fixed_point_solve",
    "nnm_solve",
    "prox_objective",
    "shrink_spectrum",
    "soft_threshold",
    "soft_threshold_weighted",
    "weighted_nuclear_norm",
    "weights_from_spectrum",
    "wsst",
]
