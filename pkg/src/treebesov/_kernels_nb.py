"""Numba-jitted twins of the kernels in ``_kernels_np``.

The loop nests mirror the numpy versions tap by tap so both backends
accumulate in the same order and agree bit for bit.
"""

import numpy as np
from numba import njit


@njit(cache=True)
def analysis_step(x, lo, hi):
    batch, n = x.shape
    half = n // 2
    a = np.zeros((batch, half))
    d = np.zeros((batch, half))
    for t in range(lo.shape[0]):
        for b in range(batch):
            for k in range(half):
                v = x[b, (2 * k + t) % n]
                a[b, k] += lo[t] * v
                d[b, k] += hi[t] * v
    return a, d


@njit(cache=True)
def synthesis_step(a, d, lo, hi):
    batch, half = a.shape
    n = 2 * half
    x = np.zeros((batch, n))
    for t in range(lo.shape[0]):
        q = t % 2
        o = t // 2
        for b in range(batch):
            for k in range(half):
                x[b, 2 * k + q] += lo[t] * a[b, (k - o) % half] + hi[t] * d[b, (k - o) % half]
    return x


@njit(cache=True)
def child_sum_1d(values):
    half = values.shape[0] // 2
    out = np.empty(half)
    for k in range(half):
        out[k] = values[2 * k] + values[2 * k + 1]
    return out


@njit(cache=True)
def child_sum_2d(values):
    h = values.shape[0] // 2
    w = values.shape[1] // 2
    out = np.empty((h, w))
    for r in range(h):
        for c in range(w):
            out[r, c] = ((values[2 * r, 2 * c] + values[2 * r, 2 * c + 1])
                         + values[2 * r + 1, 2 * c]) + values[2 * r + 1, 2 * c + 1]
    return out


@njit(cache=True)
def circular_filter(x, taps, center):
    n = x.shape[0]
    y = np.zeros(n)
    for t in range(taps.shape[0]):
        for i in range(n):
            y[i] += taps[t] * x[(i + t - center) % n]
    return y


@njit(cache=True)
def circular_filter_adjoint(y, taps, center):
    n = y.shape[0]
    x = np.zeros(n)
    for t in range(taps.shape[0]):
        for i in range(n):
            x[i] += taps[t] * y[(i - t + center) % n]
    return x
