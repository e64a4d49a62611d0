"""Restoration pipelines built on the pruning engine.

denoise runs scale, transform, prune, inverse transform, unscale.
pnp_deconvolve alternates a gradient step on the convolution data term
with the denoiser.  Threshold baselines provide the classical
comparison points.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from . import metrics
from .backend import kernels
from .errors import DimensionError, DivergenceError, ParameterError
from .prune import (BaseDensity, Hyperprior, auto_prune_gaussian,
                    auto_prune_laplace, gaussian_density, prune_fixed_beta)
from .wavelet import WaveletBasis, forward_dwt, inverse_dwt

MAD_TO_SD = 0.6745  # normal-consistency constant for median absolute deviation


def estimate_noise_sd(pyramid):
    """Robust noise level from the finest detail coefficients.

    Median absolute deviation over all bands of the finest level,
    rescaled to be consistent for Gaussian noise.  Returns 0.0 when the
    finest level is identically zero.
    """
    finest = np.abs(pyramid.details[pyramid.depth])
    return float(np.median(finest) / MAD_TO_SD)


@dataclass(frozen=True)
class DenoiseConfig:
    """Denoising recipe: basis, coefficient model, density mode, scaling.

    Exactly one of beta (fixed densities) and hyper (automatic
    selection) must be set.  noise: "assume-unit" treats the scaled
    input as unit-noise data; "estimate" rescales by the estimated
    noise level first.
    """

    basis: WaveletBasis
    density: BaseDensity = field(default_factory=gaussian_density)
    beta: object = None
    hyper: Hyperprior = None
    scale: float = 1.0
    noise: str = "assume-unit"

    def __post_init__(self):
        if (self.beta is None) == (self.hyper is None):
            raise ParameterError("set exactly one of beta and hyper")
        if self.scale <= 0:
            raise ParameterError("scale must be positive")
        if self.noise not in ("assume-unit", "estimate"):
            raise ParameterError("noise must be 'assume-unit' or 'estimate'")


def denoise(values, config):
    """Denoise a dyadic signal or image; returns (reconstruction, PruneResult).

    The PruneResult is expressed in the working normalization (after
    scaling and any noise rescaling)."""
    values = np.asarray(values, dtype=np.float64)
    pyramid = forward_dwt(values * config.scale, config.basis)
    sd = 1.0
    if config.noise == "estimate":
        sd = estimate_noise_sd(pyramid)
        if sd == 0.0:
            # nothing that looks like noise; keep the data as is
            sd = 1.0
        pyramid = pyramid.copy()
        pyramid.scaling /= sd
        for level in pyramid.details:
            level /= sd
    if config.beta is not None:
        result = prune_fixed_beta(pyramid, config.density, config.beta)
    elif config.density.kind == "gaussian":
        result = auto_prune_gaussian(pyramid, config.hyper)
    else:
        result = auto_prune_laplace(pyramid, config.hyper, config.density.kappa)
    restored = result.coefficients.copy()
    restored.scaling *= sd
    for level in restored.details:
        level *= sd
    return inverse_dwt(restored) / config.scale, result


@dataclass(frozen=True)
class ConvOp:
    """Circular convolution with an odd-length 1-D kernel."""

    kernel: np.ndarray

    def __post_init__(self):
        k = np.asarray(self.kernel, dtype=np.float64)
        if k.ndim != 1 or k.size % 2 == 0:
            raise ParameterError("kernel must be 1-d with odd length")
        if not np.all(np.isfinite(k)) or not np.any(k):
            raise ParameterError("kernel must be finite and nonzero")
        object.__setattr__(self, "kernel", k)

    @property
    def center(self):
        return self.kernel.size // 2


def convolve(x, op):
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 1 or x.size < op.kernel.size:
        raise DimensionError("signal must be 1-d and no shorter than the kernel")
    return kernels.circular_filter(x, op.kernel, op.center)


def adjoint(y, op):
    y = np.asarray(y, dtype=np.float64)
    if y.ndim != 1 or y.size < op.kernel.size:
        raise DimensionError("signal must be 1-d and no shorter than the kernel")
    return kernels.circular_filter_adjoint(y, op.kernel, op.center)


def operator_norm(op, n, iterations=100, tol=1e-12):
    """Spectral norm of the convolution on length-n signals, by power
    iteration on the normal operator from a fixed full-spectrum start."""
    v = np.cos(0.7 * np.arange(n) + 0.3)
    v /= np.linalg.norm(v)
    prev = 0.0
    for _ in range(iterations):
        w = adjoint(convolve(v, op), op)
        norm = np.linalg.norm(w)
        if norm == 0.0:
            return 0.0
        v = w / norm
        if abs(norm - prev) <= tol * norm:
            break
        prev = norm
    return float(math.sqrt(norm))


@dataclass(frozen=True)
class PnPConfig:
    """Plug-and-play deconvolution settings.

    tau None means 1 over the squared operator norm.  The iteration
    stops early once the relative update falls below tolerance."""

    denoiser: DenoiseConfig
    tau: float = None
    iterations: int = 50
    tolerance: float = 1e-4

    def __post_init__(self):
        if self.tau is not None and self.tau <= 0:
            raise ParameterError("tau must be positive")
        if self.iterations < 1:
            raise ParameterError("iterations must be at least 1")
        if self.tolerance < 0:
            raise ParameterError("tolerance must be nonnegative")


def pnp_deconvolve(measured, op, config):
    """Deconvolve by alternating data-fidelity gradient steps with the
    tree denoiser, from a zero initial iterate."""
    m = np.asarray(measured, dtype=np.float64)
    norm_sq = operator_norm(op, m.size) ** 2
    tau = config.tau if config.tau is not None else (
        1.0 / norm_sq if norm_sq > 0 else 1.0)
    if tau * norm_sq >= 2.0:
        raise ParameterError("tau too large for a stable gradient step")
    limit = 1e3 * max(np.linalg.norm(m), 1.0)
    f = np.zeros_like(m)
    for _ in range(config.iterations):
        grad = adjoint(convolve(f, op) - m, op)
        step, _ = denoise(f - tau * grad, config.denoiser)
        if np.linalg.norm(step) > limit:
            raise DivergenceError("deconvolution iterates are diverging")
        delta = np.linalg.norm(step - f)
        f = step
        if delta <= config.tolerance * max(np.linalg.norm(f), 1e-30):
            break
    return f


def threshold_reconstruct(pyramid, mode, threshold):
    """Coefficient thresholding baseline; scaling part is untouched."""
    if mode not in ("soft", "hard"):
        raise ParameterError("mode must be 'soft' or 'hard'")
    if threshold < 0:
        raise ParameterError("threshold must be nonnegative")
    out = pyramid.copy()
    for level in out.details:
        if mode == "soft":
            level[...] = np.sign(level) * np.maximum(np.abs(level) - threshold, 0.0)
        else:
            level[...] = np.where(np.abs(level) > threshold, level, 0.0)
    return inverse_dwt(out)


def threshold_baselines(pyramid, mode, thresholds, reference, metric="ssim"):
    """Best thresholding reconstruction over a sweep.

    metric "ssim" (images) is maximized, "rel_error" minimized.
    Returns (reconstruction, threshold, metric value)."""
    if metric not in ("ssim", "rel_error"):
        raise ParameterError("metric must be 'ssim' or 'rel_error'")
    best = None
    for t in thresholds:
        recon = threshold_reconstruct(pyramid, mode, float(t))
        if metric == "ssim":
            score = metrics.ssim(recon, reference)
            better = best is None or score > best[2]
        else:
            score = metrics.rel_error(recon, reference)
            better = best is None or score < best[2]
        if better:
            best = (recon, float(t), score)
    if best is None:
        raise ParameterError("threshold sweep is empty")
    return best
