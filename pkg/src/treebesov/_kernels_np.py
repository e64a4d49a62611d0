"""Pure numpy implementations of the hot numeric kernels.

Every function here has a numba twin in ``_kernels_nb`` with the same
signature and the same floating point accumulation order, so the two
backends produce bit-identical output.  Keep the tap loops ascending;
changing the order changes the rounding.
"""

import numpy as np


def analysis_step(x, lo, hi):
    """One periodic filter-bank split along the last axis.

    x has shape (batch, n) with n even.  Returns (approx, detail), each of
    shape (batch, n // 2), where approx[b, k] = sum_t lo[t] * x[b, (2k+t) % n]
    and detail uses hi.
    """
    batch, n = x.shape
    half = n // 2
    a = np.zeros((batch, half))
    d = np.zeros((batch, half))
    for t in range(lo.shape[0]):
        xt = np.roll(x, -t, axis=1)[:, ::2]
        a += lo[t] * xt
        d += hi[t] * xt
    return a, d


def synthesis_step(a, d, lo, hi):
    """Inverse of analysis_step for an orthonormal filter pair."""
    batch, half = a.shape
    n = 2 * half
    x = np.zeros((batch, n))
    for t in range(lo.shape[0]):
        contrib = lo[t] * a + hi[t] * d
        x[:, t % 2::2] += np.roll(contrib, t // 2, axis=1)
    return x


def child_sum_1d(values):
    """Sum adjacent pairs: out[k] = values[2k] + values[2k+1]."""
    v = values.reshape(-1, 2)
    return v[:, 0] + v[:, 1]


def child_sum_2d(values):
    """Sum 2x2 blocks in fixed order (row-major within the block)."""
    h, w = values.shape
    v = values.reshape(h // 2, 2, w // 2, 2)
    return ((v[:, 0, :, 0] + v[:, 0, :, 1]) + v[:, 1, :, 0]) + v[:, 1, :, 1]


def circular_filter(x, taps, center):
    """y[i] = sum_t taps[t] * x[(i + t - center) % n] for a 1-D array x."""
    y = np.zeros_like(x)
    for t in range(taps.shape[0]):
        y += taps[t] * np.roll(x, center - t)
    return y


def circular_filter_adjoint(y, taps, center):
    """Adjoint of circular_filter under the standard inner product."""
    x = np.zeros_like(y)
    for t in range(taps.shape[0]):
        x += taps[t] * np.roll(y, t - center)
    return x
