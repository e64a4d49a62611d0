"""Deterministic test signals and images for experiments and benchmarks."""

import numpy as np

from .errors import ParameterError

# jump locations and heights of the standard piecewise-constant
# benchmark signal
_BLOCK_POSITIONS = np.array([0.10, 0.13, 0.15, 0.23, 0.25, 0.40,
                             0.44, 0.65, 0.76, 0.78, 0.81])
_BLOCK_HEIGHTS = np.array([4.0, -5.0, 3.0, -4.0, 5.0, -4.2,
                           2.1, 4.3, -3.1, 2.1, -4.2])


def blocks(n):
    """Piecewise-constant jump signal on n equispaced points of [0, 1)."""
    if n < 1:
        raise ParameterError("n must be positive")
    x = np.arange(n, dtype=np.float64) / n
    out = np.zeros(n)
    for pos, h in zip(_BLOCK_POSITIONS, _BLOCK_HEIGHTS):
        out += h * (1.0 + np.sign(x - pos)) / 2.0
    return out


def piecewise_image(n=256):
    """Synthetic grayscale image in [0, 1]: a gentle ramp background with
    high-contrast discs, rectangles, thin bars, and one soft bump, so that
    edge structure dominates over smooth regions."""
    if n < 16:
        raise ParameterError("image side must be at least 16")
    t = (np.arange(n, dtype=np.float64) + 0.5) / n
    xx, yy = np.meshgrid(t, t, indexing="ij")
    img = 0.40 + 0.18 * xx

    img += 0.45 * ((xx - 0.30) ** 2 + (yy - 0.35) ** 2 < 0.20 ** 2)
    img -= 0.38 * ((xx - 0.70) ** 2 + (yy - 0.28) ** 2 < 0.13 ** 2)
    img += 0.40 * ((xx > 0.58) & (xx < 0.92) & (yy > 0.55) & (yy < 0.93))
    img -= 0.35 * ((xx > 0.08) & (xx < 0.30) & (yy > 0.60) & (yy < 0.72))
    # thin bars exercise the finest levels
    for c in (0.15, 0.20, 0.25):
        img -= 0.50 * ((yy > c) & (yy < c + 0.012) & (xx > 0.52) & (xx < 0.95))
    img += 0.30 * np.exp(-((xx - 0.18) ** 2 + (yy - 0.85) ** 2) / (2 * 0.05 ** 2))
    return np.clip(img, 0.0, 1.0)
