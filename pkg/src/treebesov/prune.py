"""MAP pruning of wavelet coefficient trees under a branching sparsity prior.

The estimator keeps a proper subtree of the coefficient tree and zeroes
everything outside it.  For a fixed per-level inclusion density beta the
optimal subtree follows from a bottom-up weight recursion; in automatic
mode each level additionally picks its own density from a data-driven
candidate grid, steered by a density on [0, 0.5) proportional to
(0.5 - beta)**a (larger a prefers sparser trees).

All density comparisons run in the log-odds domain: a candidate
beta = 1 / (1 + exp(D)) is represented by its gap D, with
log(beta) = -softplus(D) and log(1 - beta) = D - softplus(D).  This keeps
level selection stable when gaps are very large or very small.
"""

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import tree
from .backend import kernels
from .errors import ParameterError
from .wavelet import Pyramid

LOG2 = math.log(2.0)

# fallback grid point 0.5 - _HALF_EPS, used when a = 0 and a level has
# non-positive gaps; expressed by its log-odds.  The offset must stay
# well above mask-tie tolerances so zero-gap nodes price strictly
# positive at the clamp
_HALF_EPS = 1.0e-9
_CLAMP_GAP = math.log1p(2.0 * _HALF_EPS / (0.5 - _HALF_EPS))


@dataclass(frozen=True)
class BaseDensity:
    """Coefficient model on included nodes: "gaussian" (unit working
    normalization) or "laplace" with scale parameter kappa."""

    kind: str
    kappa: float = 1.0

    def __post_init__(self):
        if self.kind not in ("gaussian", "laplace"):
            raise ParameterError("density kind must be 'gaussian' or 'laplace'")
        if self.kappa <= 0:
            raise ParameterError("kappa must be positive")


def gaussian_density():
    return BaseDensity("gaussian", 1.0)


def laplace_density(kappa):
    return BaseDensity("laplace", kappa)


@dataclass(frozen=True)
class Hyperprior:
    """Sparsity pressure on the per-level density, exponent a >= 0."""

    a: float

    def __post_init__(self):
        if self.a < 0 or not math.isfinite(self.a):
            raise ParameterError("hyperprior exponent must be finite and >= 0")


class LevelSelection(NamedTuple):
    """Outcome of the density search on one level."""

    beta_hat: float       # chosen density in [0, 0.5)
    included: np.ndarray  # bool per position, flat, original order
    gap: float            # log-odds of beta_hat; +inf when nothing is kept
    cost: float           # level cost at the chosen density
    grid_size: int        # number of candidates examined
    chosen_index: int     # position of the winner in the candidate list


@dataclass
class PruneResult:
    """Pruned estimate: effective mask, MAP coefficients, bookkeeping."""

    mask: tree.TreeMask
    coefficients: Pyramid
    total_cost: float
    beta_hat: np.ndarray = None     # per level 1..J in automatic mode
    level_info: list = None         # per-level selection summaries

    def to_dict(self):
        return {
            "mask": self.mask.to_dict(),
            "total_cost": self.total_cost,
            "beta_hat": None if self.beta_hat is None else [float(b) for b in self.beta_hat],
            "levels": self.level_info,
        }

    @classmethod
    def from_dict(cls, data):
        beta = data.get("beta_hat")
        return cls(mask=tree.TreeMask.from_dict(data["mask"]),
                   coefficients=None,
                   total_cost=float(data["total_cost"]),
                   beta_hat=None if beta is None else np.asarray(beta, dtype=np.float64),
                   level_info=data.get("levels"))


def _softplus(d):
    return np.logaddexp(0.0, d)


def _log_expm1(d):
    """log(exp(d) - 1) for d > 0, elementwise, overflow safe."""
    d = np.asarray(d, dtype=np.float64)
    out = np.empty_like(d)
    big = d > 33.0
    out[big] = d[big] + np.log1p(-np.exp(-d[big]))
    with np.errstate(divide="ignore"):
        out[~big] = np.log(np.expm1(d[~big]))
    return out


def _log_one_minus_beta(gap):
    """log(1 - beta) for beta given by its log-odds gap."""
    return gap - _softplus(gap)


def _log_half_minus_beta(gap):
    """log(0.5 - beta) for beta given by its log-odds gap (gap > 0)."""
    return _log_expm1(gap) - LOG2 - _softplus(gap)


def _beta_from_gap(gap):
    if math.isinf(gap):
        return 0.0
    return float(np.exp(-_softplus(np.float64(gap))))


def level_beta_select(gaps, n_level, hyper, kept_weights, pruned_weights,
                      band_multiplicity=1):
    """Minimize the one-level cost over the data-driven density grid.

    gaps holds the per-position log-odds (pruned - kept) / multiplicity;
    kept_weights and pruned_weights are the corresponding subtree weights.
    Candidates are beta = 0 (keep nothing), one grid point per strictly
    positive gap, and, when a = 0 and some gap is non-positive, a
    fallback point just below one half.  Ties resolve toward the smaller
    density.
    """
    d = np.asarray(gaps, dtype=np.float64).ravel()
    kept = np.asarray(kept_weights, dtype=np.float64).ravel()
    pruned = np.asarray(pruned_weights, dtype=np.float64).ravel()
    n = d.shape[0]
    if n != n_level or kept.shape[0] != n or pruned.shape[0] != n:
        raise ParameterError("gap and weight arrays must all have length n_level")
    a = hyper.a
    mu = band_multiplicity

    order = np.argsort(-d, kind="stable")
    ds = d[order]
    prefix_kept = np.cumsum(kept[order])
    prefix_pruned = np.cumsum(pruned[order])
    total_pruned = float(prefix_pruned[-1]) if n else 0.0

    # candidate grid: last index of each run of equal positive gaps
    run_last = np.empty(n, dtype=bool)
    if n:
        run_last[:-1] = ds[1:] != ds[:-1]
        run_last[-1] = True
    cand = np.nonzero((ds > 0.0) & run_last)[0]

    costs = [total_pruned + (mu * n_level * a * LOG2 if a else 0.0)]
    gaps_out = [math.inf]
    if cand.size:
        dc = ds[cand]
        counts = cand + 1.0
        penalty = -n_level * _log_one_minus_beta(dc)
        if a:
            penalty = penalty - n_level * a * _log_half_minus_beta(dc)
        b = (prefix_kept[cand] + (total_pruned - prefix_pruned[cand])
             + mu * (counts * dc + penalty))
        costs.extend(b.tolist())
        gaps_out.extend(dc.tolist())
    if a == 0.0 and n and ds[-1] <= 0.0:
        count = int(np.count_nonzero(ds >= _CLAMP_GAP))
        kept_sum = float(prefix_kept[count - 1]) if count else 0.0
        pruned_rest = total_pruned - (float(prefix_pruned[count - 1]) if count else 0.0)
        pen = -n_level * float(_log_one_minus_beta(_CLAMP_GAP))
        costs.append(kept_sum + pruned_rest + mu * (count * _CLAMP_GAP + pen))
        gaps_out.append(_CLAMP_GAP)

    best = 0
    for i in range(1, len(costs)):
        if costs[i] < costs[best]:
            best = i
    gap = gaps_out[best]
    included = d >= gap
    return LevelSelection(beta_hat=_beta_from_gap(gap), included=included,
                          gap=gap, cost=float(costs[best]),
                          grid_size=len(costs), chosen_index=best)


def _penalties_from_gap(gap, mu):
    """(include, exclude) penalty per position for a chosen density."""
    if math.isinf(gap):
        return math.inf, 0.0
    sp = float(_softplus(np.float64(gap)))
    return mu * sp, mu * (sp - gap)


def _penalties_from_beta(beta, mu):
    return -mu * math.log(beta), -mu * math.log1p(-beta)


class _UnitCosts:
    """Per-level include/exclude weights and coefficient outputs for the
    unit-noise working normalization."""

    exclude_scale = 0.5  # exclude weight per unit of subtree energy

    def __init__(self, pyramid, density):
        self.include = []
        self.coeff = []
        # Laplace keeps a finest-level node only if it clears the
        # soft threshold, even when the densities would tie the costs
        self.bottom_strict = density.kind == "laplace"
        inv_kappa = 1.0 / density.kappa
        for j in range(pyramid.depth + 1):
            level = pyramid.details[j]
            if not np.all(np.isfinite(level)):
                raise ParameterError("coefficients must be finite")
            if density.kind == "gaussian":
                self.include.append(pyramid.band_square_sums(j) / 4.0)
                self.coeff.append(level.copy())
            else:
                above = np.abs(level) > inv_kappa
                per_band = np.where(above,
                                    np.abs(level) * inv_kappa - 0.5 * inv_kappa ** 2,
                                    level * level / 2.0)
                self.include.append(per_band.sum(axis=0))
                self.coeff.append(np.where(above,
                                           level - np.sign(level) * inv_kappa, 0.0))

    def exclude(self, pyramid, j):
        return pyramid.band_square_sums(j) / 2.0


class _ScaledGaussianCosts:
    """Gaussian node weights for explicit noise and prior scales.

    Exists to exercise the reduction of a (noise_sd, kappa) problem to
    the unit one; coefficient outputs keep the pass-through convention.
    """

    bottom_strict = False

    def __init__(self, pyramid, noise_sd, kappa):
        s2, k2 = noise_sd ** 2, kappa ** 2
        self.exclude_scale = 1.0 / (2.0 * s2)
        self._include_scale = 1.0 / (2.0 * (k2 + s2))
        self.include = [pyramid.band_square_sums(j) * self._include_scale
                        for j in range(pyramid.depth + 1)]
        self.coeff = [pyramid.details[j].copy() for j in range(pyramid.depth + 1)]

    def exclude(self, pyramid, j):
        return pyramid.band_square_sums(j) * self.exclude_scale


def _run(pyramid, costs, betas=None, hyper=None):
    """Shared bottom-up pass; betas fixes the densities, hyper selects them."""
    depth, dim = pyramid.depth, pyramid.dim
    mu = pyramid.nbands
    arity = 2 ** dim
    child_sum = kernels.child_sum_1d if dim == 1 else kernels.child_sum_2d
    energies = tree.subtree_energies(pyramid).energies

    pen = [None] * (depth + 1)
    raw = [None] * (depth + 1)
    thresholds = [None] * (depth + 1)
    selections = {}
    g_below = 0.0      # exclusion penalty of a full subtree one level down
    f_child = None
    for j in range(depth, -1, -1):
        if j == depth:
            f = costs.include[j].copy()
        else:
            keep = f_child + pen[j + 1][0]
            drop = x_child + pen[j + 1][1]
            f = costs.include[j] + child_sum(np.ascontiguousarray(
                np.where(raw[j + 1], keep, drop)))
        x = energies[j] * costs.exclude_scale + arity * g_below
        if j >= 1:
            gaps = (x - f) / mu
            if betas is None:
                sel = level_beta_select(gaps.ravel(), gaps.size, hyper,
                                        f.ravel(), x.ravel(), mu)
                selections[j] = sel
                thresholds[j] = sel.gap
                pen[j] = _penalties_from_gap(sel.gap, mu)
            else:
                beta = betas[j - 1]
                thresholds[j] = math.log1p(-beta) - math.log(beta)
                pen[j] = _penalties_from_beta(beta, mu)
            raw[j] = gaps >= thresholds[j]
            if j == depth and costs.bottom_strict:
                raw[j] &= gaps > 0.0
            g_below = pen[j][1] + arity * g_below
        f_child, x_child = f, x
    raw[0] = np.ones_like(costs.include[0], dtype=bool)

    effective = [raw[0]]
    for j in range(1, depth + 1):
        effective.append(raw[j] & tree._upsample(effective[j - 1], dim))
    mask = tree.TreeMask(dim, depth, effective)

    details = [costs.coeff[j] * effective[j] for j in range(depth + 1)]
    coeff = Pyramid(dim, depth, pyramid.scaling.copy(), details, pyramid.basis)

    total = float(np.sum(costs.include[0]))
    for j in range(1, depth + 1):
        inc = effective[j]
        exclude = costs.exclude(pyramid, j)
        n_inc = int(inc.sum())
        total += float(costs.include[j][inc].sum() + exclude[~inc].sum())
        if n_inc:
            total += n_inc * pen[j][0]
        total += (inc.size - n_inc) * pen[j][1]
        if betas is None and hyper.a:
            gap = thresholds[j]
            neg_log_half = LOG2 if math.isinf(gap) else -float(_log_half_minus_beta(gap))
            total += inc.size * mu * hyper.a * neg_log_half

    if betas is None:
        beta_hat = np.array([selections[j].beta_hat for j in range(1, depth + 1)])
        info = [{"level": j,
                 "grid_size": selections[j].grid_size,
                 "chosen_index": selections[j].chosen_index,
                 "beta_hat": selections[j].beta_hat,
                 "gap": None if math.isinf(selections[j].gap) else selections[j].gap,
                 "kept": int(selections[j].included.sum())}
                for j in range(1, depth + 1)]
        return PruneResult(mask, coeff, total, beta_hat, info)
    return PruneResult(mask, coeff, total)


def _check_betas(beta, depth):
    arr = np.atleast_1d(np.asarray(beta, dtype=np.float64))
    if arr.size == 1:
        arr = np.full(max(depth, 1), arr[0])
    if arr.shape != (max(depth, 1),):
        raise ParameterError("beta must be scalar or one value per level 1..J")
    if np.any(arr <= 0) or np.any(arr > 0.5):
        raise ParameterError("fixed densities must lie in (0, 0.5]")
    return arr


def prune_fixed_beta(pyramid, density, beta):
    """Optimal subtree for fixed per-level densities in (0, 0.5]."""
    betas = _check_betas(beta, pyramid.depth)
    return _run(pyramid, _UnitCosts(pyramid, density), betas=betas)


def auto_prune_gaussian(pyramid, hyper):
    """Automatic per-level density selection with the Gaussian model."""
    return _run(pyramid, _UnitCosts(pyramid, gaussian_density()), hyper=hyper)


def auto_prune_laplace(pyramid, hyper, kappa):
    """Automatic per-level density selection with the Laplace model."""
    return _run(pyramid, _UnitCosts(pyramid, laplace_density(kappa)), hyper=hyper)


def prune_fixed_beta_noisy(pyramid, beta, noise_sd, kappa):
    """Fixed-density pruning with explicit Gaussian noise and prior scales."""
    if noise_sd <= 0 or kappa <= 0:
        raise ParameterError("noise_sd and kappa must be positive")
    betas = _check_betas(beta, pyramid.depth)
    return _run(pyramid, _ScaledGaussianCosts(pyramid, noise_sd, kappa), betas=betas)


def reduce_to_unit(beta, noise_sd, kappa):
    """Density for the unit problem matching a (noise_sd, kappa) problem.

    Pruning data observed at noise level noise_sd under prior scale kappa
    with density beta selects the same subtree as unit pruning of the
    same coefficients at the returned density.
    """
    if not 0.0 < beta < 1.0:
        raise ParameterError("beta must lie in (0, 1)")
    if noise_sd <= 0 or kappa <= 0:
        raise ParameterError("noise_sd and kappa must be positive")
    c = noise_sd ** 2 * (kappa ** 2 + noise_sd ** 2) / (2.0 * kappa ** 2)
    lam = math.log1p(-beta) - math.log(beta)
    return float(np.exp(-np.logaddexp(0.0, c * lam)))


def equivalent_beta_for_scale(beta, scale):
    """Density that makes pruning of scale*m match pruning of m at beta."""
    if not 0.0 < beta < 1.0:
        raise ParameterError("beta must lie in (0, 1)")
    if scale == 0:
        raise ParameterError("scale must be nonzero")
    lam = math.log1p(-beta) - math.log(beta)
    return float(np.exp(-np.logaddexp(0.0, scale ** 2 * lam)))
