"""Reconstruction quality metrics: relative error, SNR, SSIM."""

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionError, ParameterError


def rel_error(estimate, reference):
    """l2 distance between the arrays relative to the reference norm."""
    est = np.asarray(estimate, dtype=np.float64)
    ref = np.asarray(reference, dtype=np.float64)
    if est.shape != ref.shape:
        raise DimensionError("estimate and reference shapes differ")
    denom = np.linalg.norm(ref)
    if denom == 0.0:
        raise ParameterError("reference signal is identically zero")
    return float(np.linalg.norm(est - ref) / denom)


def snr_db(estimate, reference):
    """Energy signal-to-error ratio in decibels, +inf for a perfect match."""
    err = rel_error(estimate, reference)
    if err == 0.0:
        return math.inf
    return -20.0 * math.log10(err)


def _gaussian_window(size=11, sd=1.5):
    t = np.arange(size, dtype=np.float64) - (size - 1) / 2.0
    w = np.exp(-t * t / (2.0 * sd * sd))
    return w / w.sum()


def _windowed_mean(img, w):
    # separable weighted local mean, valid region only
    rows = np.lib.stride_tricks.sliding_window_view(img, w.size, axis=0)
    rows = rows @ w
    cols = np.lib.stride_tricks.sliding_window_view(rows, w.size, axis=1)
    return cols @ w


def ssim(estimate, reference, window=11, sd=1.5, k1=0.01, k2=0.03,
         dynamic_range=1.0):
    """Mean structural similarity over all fully interior windows.

    Weighted local statistics use a Gaussian window; constants follow
    the common reference parameterisation with images scaled to
    [0, dynamic_range].
    """
    est = np.asarray(estimate, dtype=np.float64)
    ref = np.asarray(reference, dtype=np.float64)
    if est.ndim != 2 or est.shape != ref.shape:
        raise DimensionError("ssim expects two equal-shape 2d arrays")
    if min(est.shape) < window:
        raise DimensionError("image smaller than the ssim window")
    w = _gaussian_window(window, sd)
    c1 = (k1 * dynamic_range) ** 2
    c2 = (k2 * dynamic_range) ** 2
    mu_x = _windowed_mean(est, w)
    mu_y = _windowed_mean(ref, w)
    xx = _windowed_mean(est * est, w) - mu_x * mu_x
    yy = _windowed_mean(ref * ref, w) - mu_y * mu_y
    xy = _windowed_mean(est * ref, w) - mu_x * mu_y
    num = (2.0 * mu_x * mu_y + c1) * (2.0 * xy + c2)
    den = (mu_x * mu_x + mu_y * mu_y + c1) * (xx + yy + c2)
    return float(np.mean(num / den))


@dataclass
class MetricsReport:
    """Evaluation summary of one reconstruction."""

    rel_error: float
    snr_db: float
    ssim: float = None  # 2d only
    metadata: dict = field(default_factory=dict)

    def to_dict(self):
        return {"rel_error": self.rel_error,
                "snr_db": self.snr_db,
                "ssim": self.ssim,
                "metadata": self.metadata}


def evaluate(estimate, reference, metadata=None):
    """MetricsReport against a reference; SSIM included for images."""
    est = np.asarray(estimate, dtype=np.float64)
    report = MetricsReport(rel_error=rel_error(est, reference),
                           snr_db=snr_db(est, reference),
                           metadata=dict(metadata or {}))
    if est.ndim == 2 and min(est.shape) >= 11:
        report.ssim = ssim(est, reference)
    return report
