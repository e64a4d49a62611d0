"""Random draws from the branching wavelet prior.

A draw picks a random subtree of the dyadic tree (root always in, each
node kept with a per-level probability conditional on its parent) and
fills the kept nodes with independent coefficients whose density is
proportional to exp(-|x|**p / (2 * kappa**p)).  Coefficients are damped
by 2**(-j*(s + d/2 - d/p)) so that the draw has the requested smoothness.
The scaling block is never randomized.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from . import tree
from .errors import ParameterError
from .wavelet import Pyramid, get_basis, inverse_dwt


@dataclass(frozen=True)
class RandomSeed:
    """Reproducible RNG handle: a 64-bit seed plus a stream index."""

    value: int
    stream: int = 0

    def generator(self):
        return np.random.default_rng(np.random.SeedSequence([self.value, self.stream]))


def as_seed(seed):
    if isinstance(seed, RandomSeed):
        return seed
    return RandomSeed(int(seed))


@dataclass
class PriorConfig:
    """Parameters of the branching wavelet prior.

    smoothness is the Besov regularity s, integrability the exponent
    p >= 1, kappa the coefficient scale, beta the per-level inclusion
    probability (scalar, or one value per level 1..J), dim the grid
    dimension and depth the tree depth J.
    """

    smoothness: float
    integrability: float
    kappa: float
    beta: object
    dim: int
    depth: int
    _beta_vec: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        if self.integrability < 1:
            raise ParameterError("integrability exponent must be >= 1")
        if self.kappa <= 0:
            raise ParameterError("kappa must be positive")
        if self.dim not in (1, 2):
            raise ParameterError("dim must be 1 or 2")
        if self.depth < 0:
            raise ParameterError("depth must be nonnegative")
        beta = np.atleast_1d(np.asarray(self.beta, dtype=np.float64))
        if beta.size == 1:
            beta = np.full(self.depth, beta[0])
        if beta.shape != (self.depth,):
            raise ParameterError("beta must be scalar or one value per level 1..J")
        if np.any(beta < 0) or np.any(beta > 1):
            raise ParameterError("inclusion probabilities must lie in [0, 1]")
        self._beta_vec = beta

    def beta_at(self, level):
        """Inclusion probability for nodes at a given level >= 1."""
        return float(self._beta_vec[level - 1])

    def level_weight(self, level):
        """Coefficient damping factor 2**(-j*(s + d/2 - d/p))."""
        d = self.dim
        exponent = self.smoothness + d / 2.0 - d / self.integrability
        return 2.0 ** (-level * exponent)


def sample_subtree(config, seed):
    """Draw a random proper subtree as a TreeMask.

    The root is always included; a node at level j is included with
    probability beta_j when its parent is included and never otherwise.
    Draws are made level by level so a fixed seed gives a fixed tree.
    """
    rng = as_seed(seed).generator()
    return _sample_subtree_with(config, rng)


def _sample_subtree_with(config, rng):
    shape = lambda j: (2 ** j,) if config.dim == 1 else (2 ** j, 2 ** j)
    levels = [np.ones(shape(0), dtype=bool)]
    for j in range(1, config.depth + 1):
        raw = rng.random(shape(j)) < config.beta_at(j)
        levels.append(raw & tree._upsample(levels[j - 1], config.dim))
    return tree.TreeMask(config.dim, config.depth, levels)


def sample_coefficient(p, kappa, seed, size=None):
    """Draw from the density proportional to exp(-|x|**p / (2*kappa**p)).

    Uses the exact construction |X| = kappa * (2*G)**(1/p) with
    G ~ Gamma(1/p), valid for every p >= 1.  Returns a float when size
    is None, else an array of the given shape.
    """
    if p < 1:
        raise ParameterError("p must be >= 1")
    if kappa <= 0:
        raise ParameterError("kappa must be positive")
    rng = as_seed(seed).generator()
    out = _coefficients_with(p, kappa, rng, (1,) if size is None else size)
    return float(out[0]) if size is None else out

def _coefficients_with(p, kappa, rng, size):
    g = rng.gamma(1.0 / p, 1.0, size=size)
    signs = rng.integers(0, 2, size=size) * 2 - 1
    return kappa * (2.0 * g) ** (1.0 / p) * signs


def sample_besov_pyramid(config, basis, seed):
    """Draw coefficients on a random subtree; returns (Pyramid, TreeMask).

    The subtree is drawn first, then one coefficient per node and band
    at every level, so the underlying variates line up across runs that
    share a seed but differ in beta.
    """
    basis = get_basis(basis)
    if config.smoothness >= basis.regularity:
        raise ParameterError("smoothness must stay below the basis regularity %d"
                             % basis.regularity)
    rng = as_seed(seed).generator()
    mask = _sample_subtree_with(config, rng)
    nbands = 1 if config.dim == 1 else 3
    details = []
    for j in range(config.depth + 1):
        side = 2 ** j
        shape = (nbands, side) if config.dim == 1 else (nbands, side, side)
        x = _coefficients_with(config.integrability, config.kappa, rng, shape)
        details.append(config.level_weight(j) * x * mask.levels[j])
    scaling = np.zeros((1,) if config.dim == 1 else (1, 1))
    return Pyramid(config.dim, config.depth, scaling, details, basis), mask


def sample_besov_function(config, basis, seed):
    """Draw a function realization; returns (values, Pyramid, TreeMask)."""
    pyramid, mask = sample_besov_pyramid(config, basis, seed)
    return inverse_dwt(pyramid), pyramid, mask


def besov_norm(pyramid, smoothness, integrability):
    """Sequence-space Besov norm of a coefficient pyramid.

    Detail level j enters with weight 2**(j*p*(s + d/2 - d/p)); the
    scaling block is treated as the level below the root, j = -1.
    """
    p = integrability
    if p < 1:
        raise ParameterError("integrability exponent must be >= 1")
    d = pyramid.dim
    exponent = smoothness + d / 2.0 - d / p
    total = 2.0 ** (-p * exponent) * np.sum(np.abs(pyramid.scaling) ** p)
    for j in range(pyramid.depth + 1):
        total += 2.0 ** (j * p * exponent) * np.sum(np.abs(pyramid.details[j]) ** p)
    return float(total ** (1.0 / p))
