"""Wavelet-tree MAP denoising with branching-process sparsity priors.

The package covers the full pipeline: orthonormal wavelet transforms on
dyadic grids, proper-subtree masks, prior sampling, the pruning
estimators (fixed inclusion rate or automatic levelwise selection),
and restoration front ends for denoising and deconvolution.
"""

from .backend import BACKEND
from .errors import (CapacityError, DimensionError, DivergenceError,
                     ParameterError, TreeBesovError)
from .metrics import MetricsReport, evaluate, rel_error, snr_db, ssim
from .prior import (PriorConfig, besov_norm, sample_besov_function,
                    sample_besov_pyramid, sample_coefficient, sample_subtree)
from .prune import (Hyperprior, PruneResult, auto_prune_gaussian,
                    auto_prune_laplace, equivalent_beta_for_scale,
                    gaussian_density, laplace_density, prune_fixed_beta,
                    prune_fixed_beta_noisy, reduce_to_unit)
from .restore import (ConvOp, DenoiseConfig, PnPConfig, denoise,
                      estimate_noise_sd, pnp_deconvolve,
                      threshold_baselines, threshold_reconstruct)
from .tree import NodeId, TreeMask, validate_proper
from .wavelet import (Pyramid, forward_dwt, get_basis, inverse_dwt,
                      signal_depth, image_depth)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "CapacityError", "DimensionError", "DivergenceError", "ParameterError",
    "TreeBesovError",
    "MetricsReport", "evaluate", "rel_error", "snr_db", "ssim",
    "PriorConfig", "besov_norm", "sample_besov_function",
    "sample_besov_pyramid", "sample_coefficient", "sample_subtree",
    "Hyperprior", "PruneResult", "auto_prune_gaussian",
    "auto_prune_laplace", "equivalent_beta_for_scale", "gaussian_density",
    "laplace_density", "prune_fixed_beta", "prune_fixed_beta_noisy",
    "reduce_to_unit",
    "ConvOp", "DenoiseConfig", "PnPConfig", "denoise", "estimate_noise_sd",
    "pnp_deconvolve", "threshold_baselines", "threshold_reconstruct",
    "NodeId", "TreeMask", "validate_proper",
    "Pyramid", "forward_dwt", "get_basis", "inverse_dwt",
    "signal_depth", "image_depth",
]
