"""Exhaustive reference implementation of the tree pruning estimators.

Enumerates every proper subtree of the coefficient tree as a row of a
boolean matrix and evaluates the objective for each row by direct
summation, with no reliance on the production recursion.  Automatic
density selection replays the levelwise search with arbitrary precision
logarithms.  Test-only code: cost grows combinatorially with depth.
"""

import math

import numpy as np

from . import tree
from .errors import CapacityError, ParameterError
from .prune import Hyperprior, PruneResult, gaussian_density
from .wavelet import Pyramid

_TIE_TOL = 1e-9        # candidate-density cost ties
_MASK_TIE_TOL = 1e-12  # subtree objective ties, below any real cost gap
_GAP_NOISE = 1e-12     # summation round-off floor for subtree gaps
# stands in for the infinite inclusion penalty of an emptied level
_FORBID = 1e30

_MASKS = {}


def _subtree_layout(dim, depth):
    """(masks, level_sizes) for all proper subtrees of a depth-deep tree.

    masks is (count, positions) boolean; columns run level by level from
    the subtree root, row-major inside a level.
    """
    key = (dim, depth)
    if key in _MASKS:
        return _MASKS[key]
    arity = 2 ** dim
    if depth == 0:
        out = np.ones((1, 1), dtype=bool), [1]
        _MASKS[key] = out
        return out
    sub, sub_sizes = _subtree_layout(dim, depth - 1)
    options = np.vstack([np.zeros((1, sub.shape[1]), dtype=bool), sub])
    combo = np.indices((options.shape[0],) * arity).reshape(arity, -1).T
    blocks = [options[combo[:, c]] for c in range(arity)]
    root = np.ones((combo.shape[0], 1), dtype=bool)

    # reorder child columns from per-child grouping to per-level grouping
    pieces = [root]
    if dim == 1:
        start = 0
        for size in sub_sizes:
            pieces.extend(b[:, start:start + size] for b in blocks)
            start += size
    else:
        start = 0
        for li, size in enumerate(sub_sizes):
            w = 2 ** li
            quads = [b[:, start:start + size].reshape(-1, w, w) for b in blocks]
            top = np.concatenate([quads[0], quads[1]], axis=2)
            bottom = np.concatenate([quads[2], quads[3]], axis=2)
            pieces.append(np.concatenate([top, bottom], axis=1).reshape(combo.shape[0], -1))
            start += size
    masks = np.hstack(pieces)
    sizes = [1] + [arity * s for s in sub_sizes]
    out = masks, sizes
    _MASKS[key] = out
    return out


def _level_block(values, level_offset, node_index, sub_level):
    """Values of one subtree level, flattened row-major."""
    full = values[level_offset + sub_level]
    if full.ndim == 1:
        k = node_index if isinstance(node_index, int) else node_index[0]
        w = 2 ** sub_level
        return full[k * w:(k + 1) * w]
    r, c = node_index
    w = 2 ** sub_level
    return full[r * w:(r + 1) * w, c * w:(c + 1) * w].ravel()


def _gather(values, root_level, node_index, n_sub_levels):
    parts = [_level_block(values, root_level, node_index, l)
             for l in range(n_sub_levels)]
    return np.concatenate(parts)


def _data_costs(pyramid, density):
    """Per-position include and exclude data terms, by level."""
    inc, exc = [], []
    for j in range(pyramid.depth + 1):
        m = pyramid.details[j]
        half_sq = (m * m).sum(axis=0) / 2.0
        if density.kind == "gaussian":
            inc.append(half_sq / 2.0)
        else:
            k = density.kappa
            absm = np.abs(m)
            per_band = np.where(absm > 1.0 / k,
                                absm / k - 1.0 / (2.0 * k * k),
                                m * m / 2.0)
            inc.append(per_band.sum(axis=0))
        exc.append(half_sq)
    return inc, exc


def _oracle_coefficients(pyramid, density, mask):
    details = []
    for j in range(pyramid.depth + 1):
        m = pyramid.details[j]
        if density.kind == "gaussian":
            out = m * mask.levels[j]
        else:
            k = density.kappa
            soft = np.where(np.abs(m) > 1.0 / k, m - np.sign(m) / k, 0.0)
            out = soft * mask.levels[j]
        details.append(out)
    return Pyramid(pyramid.dim, pyramid.depth, pyramid.scaling.copy(),
                   details, pyramid.basis)


def _best_row(masks, objective):
    """Index of the minimizing row.

    Exact mathematical ties (boundary nodes sitting exactly on the
    inclusion threshold) resolve toward the largest mask, matching the
    include-on-tie convention of the recursive implementation.
    """
    tie = np.nonzero(objective <= objective.min() + _MASK_TIE_TOL)[0]
    if tie.size == 1:
        return int(tie[0])
    counts = masks[tie].sum(axis=1)
    tie = tie[counts == counts.max()]
    keys = [masks[i].tobytes() for i in tie]
    return int(tie[keys.index(max(keys))])


def _mask_from_row(row, dim, depth, sizes):
    levels = []
    start = 0
    for j, size in enumerate(sizes):
        chunk = row[start:start + size]
        if dim == 1:
            levels.append(chunk.copy())
        else:
            w = 2 ** j
            levels.append(chunk.reshape(w, w).copy())
        start += size
    return tree.TreeMask(dim, depth, levels)


def _per_column(level_values, sizes):
    return np.concatenate([np.full(s, v) for v, s in zip(level_values, sizes)])


def _enumerate_best(pyramid, inc, exc, pen_in, pen_ex, extra=0.0):
    """Global search over proper subtrees at fixed per-level penalties."""
    masks, sizes = _subtree_layout(pyramid.dim, pyramid.depth)
    root_index = 0 if pyramid.dim == 1 else (0, 0)
    cin = _gather(inc, 0, root_index, pyramid.depth + 1) + _per_column(pen_in, sizes)
    cex = _gather(exc, 0, root_index, pyramid.depth + 1) + _per_column(pen_ex, sizes)
    mf = masks.astype(np.float64)
    objective = mf @ cin + (1.0 - mf) @ cex
    best = _best_row(masks, objective)
    mask = _mask_from_row(masks[best], pyramid.dim, pyramid.depth, sizes)
    return mask, float(objective[best]) + extra


def _fixed(pyramid, density, beta):
    if pyramid.node_count() > 22:
        raise CapacityError("exhaustive fixed-density search needs <= 22 nodes")
    betas = np.atleast_1d(np.asarray(beta, dtype=np.float64))
    if betas.size == 1:
        betas = np.full(max(pyramid.depth, 1), betas[0])
    mu = pyramid.nbands
    inc, exc = _data_costs(pyramid, density)
    pen_in = [0.0] + [-mu * math.log(b) for b in betas[:pyramid.depth]]
    pen_ex = [0.0] + [-mu * math.log1p(-b) for b in betas[:pyramid.depth]]
    mask, cost = _enumerate_best(pyramid, inc, exc, pen_in, pen_ex)
    return PruneResult(mask, _oracle_coefficients(pyramid, density, mask), cost)


def _mp():
    import mpmath
    mpmath.mp.dps = 50
    return mpmath


def _auto(pyramid, density, hyper):
    limit = 4 if pyramid.dim == 1 else 2
    if pyramid.depth > limit:
        raise CapacityError("exhaustive density search needs depth <= %d" % limit)
    mp = _mp()
    a = hyper.a
    mu = pyramid.nbands
    arity = 2 ** pyramid.dim
    inc, exc = _data_costs(pyramid, density)

    beta_hat = []
    pen_in = {0: 0.0}
    pen_ex = {0: 0.0}
    level_const = 0.0
    for j in range(pyramid.depth, 0, -1):
        sub_masks, sub_sizes = _subtree_layout(pyramid.dim, pyramid.depth - j)
        n_sub = pyramid.depth - j + 1
        deep_in = _per_column([0.0] + [pen_in[j + l] for l in range(1, n_sub)],
                              sub_sizes)
        deep_ex = _per_column([0.0] + [pen_ex[j + l] for l in range(1, n_sub)],
                              sub_sizes)
        nodes = ([k for k in range(2 ** j)] if pyramid.dim == 1
                 else [(r, c) for r in range(2 ** j) for c in range(2 ** j)])
        nj = len(nodes)
        f = np.empty(nj)
        x = np.empty(nj)
        mf = sub_masks.astype(np.float64)
        for i, node in enumerate(nodes):
            cin = _gather(inc, j, node, n_sub) + deep_in
            cex = _gather(exc, j, node, n_sub) + deep_ex
            f[i] = float((mf @ cin + (1.0 - mf) @ cex).min())
            x[i] = float(cex.sum())
        d = (x - f) / mu
        # x and f accumulate in different orders, so exact-zero gaps can
        # come back as one-ulp residue; that residue must not become a
        # candidate of its own
        d[np.abs(d) < _GAP_NOISE] = 0.0

        # candidate list in ascending density order
        cands = [None]
        for dv in sorted({float(v) for v in d if v > 0.0}, reverse=True):
            cands.append(dv)
        clamp = None
        if a == 0.0 and d.size and d.min() <= 0.0:
            half = 0.5 - 1.0e-9
            clamp = float(mp.log((1 - mp.mpf(half)) / mp.mpf(half)))
            cands.append(clamp)

        costs = []
        for cand in cands:
            if cand is None:
                costs.append(float(x.sum()) + mu * nj * a * math.log(2.0))
                continue
            gap = mp.mpf(cand)
            log_b = -mp.log1p(mp.exp(gap))
            log_1mb = gap + log_b
            keep = d >= cand
            kept = int(keep.sum())
            b = float(f[keep].sum() + x[~keep].sum())
            b += mu * (kept * float(-log_b) + (nj - kept) * float(-log_1mb))
            if a:
                log_half = mp.log(mp.expm1(gap)) - mp.log(2) - mp.log1p(mp.exp(gap))
                b += mu * nj * a * float(-log_half)
            costs.append(b)
        floor = min(costs)
        chosen = next(i for i, c in enumerate(costs) if c <= floor + _TIE_TOL)
        gap = cands[chosen]

        if gap is None:
            beta_hat.append(0.0)
            pen_in[j] = _FORBID
            pen_ex[j] = 0.0
            level_const += mu * nj * a * math.log(2.0)
        else:
            g = mp.mpf(gap)
            beta_hat.append(float(1 / (1 + mp.exp(g))))
            pen_in[j] = mu * float(mp.log1p(mp.exp(g)))
            pen_ex[j] = mu * float(mp.log1p(mp.exp(g)) - g)
            if a:
                log_half = mp.log(mp.expm1(g)) - mp.log(2) - mp.log1p(mp.exp(g))
                level_const += mu * nj * a * float(-log_half)

    beta_hat = np.asarray(beta_hat[::-1], dtype=np.float64)
    mask, cost = _enumerate_best(
        pyramid, inc, exc,
        [pen_in[j] for j in range(pyramid.depth + 1)],
        [pen_ex[j] for j in range(pyramid.depth + 1)],
        extra=level_const)
    return PruneResult(mask, _oracle_coefficients(pyramid, density, mask),
                       cost, beta_hat)


def brute_force_map(pyramid, density=None, beta=None, hyper=None):
    """Reference pruning by exhaustive search.

    Exactly one of beta (fixed densities) and hyper (automatic
    selection) must be given.  Raises CapacityError when the tree is too
    large to enumerate.
    """
    if (beta is None) == (hyper is None):
        raise ParameterError("give exactly one of beta and hyper")
    if density is None:
        density = gaussian_density()
    if beta is not None:
        return _fixed(pyramid, density, beta)
    return _auto(pyramid, density, hyper)
