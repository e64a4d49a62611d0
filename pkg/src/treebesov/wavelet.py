"""Orthonormal wavelet transforms on dyadic grids.

Signals are 1-D arrays of length 2**(J+1), images are 2**(J+1) square
arrays.  The transform always runs to full depth, producing detail levels
j = J (finest) down to j = 0 plus a single coarse scaling coefficient.
Filtering is periodic, so analysis followed by synthesis is exact up to
rounding for both filter pairs shipped here.
"""

import math

import numpy as np

from .backend import kernels
from .errors import DimensionError, ParameterError

_SQRT2 = math.sqrt(2.0)


class WaveletBasis:
    """Conjugate mirror filter pair for an orthonormal wavelet.

    lowpass is the analysis low-pass filter with unit l2 norm; the
    high-pass is derived by the usual alternating-flip rule.  regularity
    is the nominal smoothness order used to validate prior parameters.
    """

    def __init__(self, name, lowpass, regularity):
        self.name = name
        self.lowpass = np.asarray(lowpass, dtype=np.float64)
        if self.lowpass.ndim != 1 or self.lowpass.size % 2 != 0:
            raise ParameterError("filter length must be even")
        signs = np.where(np.arange(self.lowpass.size) % 2 == 0, 1.0, -1.0)
        self.highpass = signs * self.lowpass[::-1]
        self.regularity = regularity

    def __repr__(self):
        return "WaveletBasis(%r)" % self.name

    def __eq__(self, other):
        return isinstance(other, WaveletBasis) and self.name == other.name

    def __hash__(self):
        return hash(self.name)


def haar():
    return WaveletBasis("haar", (1.0 / _SQRT2, 1.0 / _SQRT2), regularity=1)


def daubechies2():
    s3 = math.sqrt(3.0)
    q = 4.0 * _SQRT2
    return WaveletBasis("db2", ((1.0 + s3) / q, (3.0 + s3) / q, (3.0 - s3) / q, (1.0 - s3) / q),
                        regularity=2)


_FACTORIES = {"haar": haar, "db2": daubechies2}


def get_basis(name):
    """Look up a basis by name ("haar" or "db2")."""
    if isinstance(name, WaveletBasis):
        return name
    try:
        return _FACTORIES[name]()
    except KeyError:
        raise ParameterError("unknown wavelet %r (choose from %s)"
                             % (name, sorted(_FACTORIES))) from None


def signal_depth(values):
    """Tree depth J for a 1-D signal of length 2**(J+1)."""
    n = values.shape[0]
    if values.ndim != 1 or n < 2 or n & (n - 1):
        raise DimensionError("signal length must be a power of two >= 2, got shape %s"
                             % (values.shape,))
    return n.bit_length() - 2


def image_depth(values):
    """Tree depth J for a square image with side 2**(J+1)."""
    if values.ndim != 2 or values.shape[0] != values.shape[1]:
        raise DimensionError("image must be square, got shape %s" % (values.shape,))
    n = values.shape[0]
    if n < 2 or n & (n - 1):
        raise DimensionError("image side must be a power of two >= 2, got %d" % n)
    return n.bit_length() - 2


def grid_depth(values):
    """Depth J for either a signal or an image, plus the dimension."""
    values = np.asarray(values)
    if values.ndim == 1:
        return signal_depth(values), 1
    if values.ndim == 2:
        return image_depth(values), 2
    raise DimensionError("expected a 1-D signal or a 2-D image, got %d axes" % values.ndim)


class Pyramid:
    """Full-depth wavelet coefficients of a dyadic signal or image.

    details[j] holds the detail coefficients of level j with shape
    (1, 2**j) in 1-D and (3, 2**j, 2**j) in 2-D (bands: high rows, high
    columns, high both).  scaling is the single coarse scaling
    coefficient, shape (1,) or (1, 1).
    """

    def __init__(self, dim, depth, scaling, details, basis):
        if dim not in (1, 2):
            raise DimensionError("dim must be 1 or 2")
        if depth < 0 or len(details) != depth + 1:
            raise DimensionError("need detail levels 0..J")
        self.dim = dim
        self.depth = depth
        self.basis = basis
        self.scaling = np.asarray(scaling, dtype=np.float64)
        expected_scaling = (1,) if dim == 1 else (1, 1)
        if self.scaling.shape != expected_scaling:
            raise DimensionError("scaling block has shape %s, expected %s"
                                 % (self.scaling.shape, expected_scaling))
        self.details = []
        for j, level in enumerate(details):
            level = np.asarray(level, dtype=np.float64)
            side = 2 ** j
            expected = (1, side) if dim == 1 else (3, side, side)
            if level.shape != expected:
                raise DimensionError("level %d has shape %s, expected %s"
                                     % (j, level.shape, expected))
            self.details.append(level)

    @property
    def nbands(self):
        return 1 if self.dim == 1 else 3

    def positions(self, level):
        """Number of node positions at a level (bands share a position)."""
        return (2 ** self.dim) ** level

    def node_count(self):
        """Total node positions over all detail levels."""
        return sum(self.positions(j) for j in range(self.depth + 1))

    def copy(self):
        return Pyramid(self.dim, self.depth, self.scaling.copy(),
                       [lvl.copy() for lvl in self.details], self.basis)

    def band_square_sums(self, level):
        """Sum of squared coefficients across bands, one value per position."""
        lvl = self.details[level]
        out = lvl[0] * lvl[0]
        for b in range(1, lvl.shape[0]):
            out = out + lvl[b] * lvl[b]
        return out


def forward_dwt(values, basis):
    """Full-depth periodic wavelet analysis of a signal or image."""
    basis = get_basis(basis)
    values = np.asarray(values, dtype=np.float64)
    depth, dim = grid_depth(values)
    lo, hi = basis.lowpass, basis.highpass
    details = [None] * (depth + 1)
    if dim == 1:
        approx = values[np.newaxis, :]
        for j in range(depth, -1, -1):
            approx, detail = kernels.analysis_step(np.ascontiguousarray(approx), lo, hi)
            details[j] = detail
        scaling = approx[0]
    else:
        approx = values
        for j in range(depth, -1, -1):
            lo_w, hi_w = kernels.analysis_step(np.ascontiguousarray(approx), lo, hi)
            ll, hr = kernels.analysis_step(np.ascontiguousarray(lo_w.T), lo, hi)
            lr, hh = kernels.analysis_step(np.ascontiguousarray(hi_w.T), lo, hi)
            # bands: high rows (low width), high columns (low height), high both
            details[j] = np.stack((hr.T, lr.T, hh.T))
            approx = ll.T
        scaling = approx
    return Pyramid(dim, depth, scaling, details, basis)


def inverse_dwt(pyramid):
    """Exact inverse of forward_dwt."""
    lo, hi = pyramid.basis.lowpass, pyramid.basis.highpass
    if pyramid.dim == 1:
        approx = pyramid.scaling[np.newaxis, :]
        for j in range(pyramid.depth + 1):
            approx = kernels.synthesis_step(np.ascontiguousarray(approx),
                                            np.ascontiguousarray(pyramid.details[j]), lo, hi)
        return approx[0]
    approx = pyramid.scaling
    for j in range(pyramid.depth + 1):
        hr, lr, hh = pyramid.details[j]
        lo_w = kernels.synthesis_step(np.ascontiguousarray(approx.T),
                                      np.ascontiguousarray(hr.T), lo, hi).T
        hi_w = kernels.synthesis_step(np.ascontiguousarray(lr.T),
                                      np.ascontiguousarray(hh.T), lo, hi).T
        approx = kernels.synthesis_step(np.ascontiguousarray(lo_w),
                                        np.ascontiguousarray(hi_w), lo, hi)
    return approx
