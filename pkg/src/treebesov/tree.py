"""Dyadic tree indexing, inclusion masks, and subtree statistics.

Nodes live on levels j = 0..J.  In 1-D a node (j, k) has children
(j+1, 2k) and (j+1, 2k+1); in 2-D a node (j, (r, c)) has the four
children at (2r, 2c), (2r, 2c+1), (2r+1, 2c), (2r+1, 2c+1), in that
order.  The scaling block sits outside the tree and is always kept.
"""

from dataclasses import dataclass

import numpy as np

from .backend import kernels
from .errors import DimensionError


@dataclass(frozen=True)
class NodeId:
    """A tree node: level plus spatial index, (k,) in 1-D or (row, col) in 2-D."""

    level: int
    index: tuple

    def __post_init__(self):
        if self.level < 0:
            raise DimensionError("level must be nonnegative")
        dim = len(self.index)
        if dim not in (1, 2):
            raise DimensionError("index must have 1 or 2 components")
        side = 2 ** self.level
        for i in self.index:
            if not 0 <= i < side:
                raise DimensionError("index %s out of range for level %d"
                                     % (self.index, self.level))

    @property
    def dim(self):
        return len(self.index)


def parent(node):
    """Parent node, or None for the root."""
    if node.level == 0:
        return None
    return NodeId(node.level - 1, tuple(i // 2 for i in node.index))


def children(node, depth):
    """Child nodes in canonical order; empty at the bottom level."""
    if node.level >= depth:
        return []
    j = node.level + 1
    if node.dim == 1:
        k = node.index[0]
        return [NodeId(j, (2 * k,)), NodeId(j, (2 * k + 1,))]
    r, c = node.index
    return [NodeId(j, (2 * r, 2 * c)), NodeId(j, (2 * r, 2 * c + 1)),
            NodeId(j, (2 * r + 1, 2 * c)), NodeId(j, (2 * r + 1, 2 * c + 1))]


def _level_shape(dim, level):
    side = 2 ** level
    return (side,) if dim == 1 else (side, side)


class TreeMask:
    """Boolean inclusion flags for every node of the tree.

    levels[j] is a bool array shaped (2**j,) in 1-D or (2**j, 2**j) in
    2-D.  A mask is proper when every included node has its parent
    included; masks produced by sampling and pruning are proper by
    construction, arbitrary bit patterns can be projected with
    effective().
    """

    def __init__(self, dim, depth, levels):
        if dim not in (1, 2):
            raise DimensionError("dim must be 1 or 2")
        if len(levels) != depth + 1:
            raise DimensionError("need levels 0..J")
        self.dim = dim
        self.depth = depth
        self.levels = []
        for j, lvl in enumerate(levels):
            arr = np.asarray(lvl, dtype=bool)
            if arr.shape != _level_shape(dim, j):
                raise DimensionError("level %d has shape %s" % (j, arr.shape))
            self.levels.append(arr)

    def get(self, node):
        return bool(self.levels[node.level][node.index if node.dim == 2 else node.index[0]])

    def node_count(self):
        return int(sum(lvl.sum() for lvl in self.levels))

    def effective(self):
        """Project to the connected component of the root.

        Any node whose ancestor chain is broken is switched off; bits on
        unbroken chains are kept as they are.
        """
        out = [self.levels[0].copy()]
        for j in range(1, self.depth + 1):
            parent_on = _upsample(out[j - 1], self.dim)
            out.append(self.levels[j] & parent_on)
        return TreeMask(self.dim, self.depth, out)

    def __eq__(self, other):
        if not isinstance(other, TreeMask):
            return NotImplemented
        return (self.dim == other.dim and self.depth == other.depth
                and all(np.array_equal(a, b) for a, b in zip(self.levels, other.levels)))

    def to_dict(self):
        return {"J": self.depth, "dim": self.dim,
                "levels": [lvl.astype(int).ravel().tolist() for lvl in self.levels]}

    @classmethod
    def from_dict(cls, data):
        dim, depth = int(data["dim"]), int(data["J"])
        levels = [np.asarray(flat, dtype=bool).reshape(_level_shape(dim, j))
                  for j, flat in enumerate(data["levels"])]
        return cls(dim, depth, levels)


def _upsample(level, dim):
    """Replicate each parent flag onto its children block."""
    if dim == 1:
        return np.repeat(level, 2)
    return np.repeat(np.repeat(level, 2, axis=0), 2, axis=1)


def validate_proper(mask):
    """True iff every included node has an included parent."""
    for j in range(1, mask.depth + 1):
        parent_on = _upsample(mask.levels[j - 1], mask.dim)
        if np.any(mask.levels[j] & ~parent_on):
            return False
    return True


@dataclass
class BranchStats:
    """Per-node subtree energies plus node counts per subtree.

    energies[j][k] is the sum of squared detail coefficients (all bands)
    over the subtree rooted at node (j, k), including the node itself.
    subtree_counts[j] is the number of positions in any such subtree.
    """

    energies: list
    subtree_counts: list


def subtree_energies(pyramid):
    """Bottom-up subtree energy sweep over a coefficient pyramid."""
    depth = pyramid.depth
    child_sum = kernels.child_sum_1d if pyramid.dim == 1 else kernels.child_sum_2d
    energies = [None] * (depth + 1)
    energies[depth] = np.ascontiguousarray(pyramid.band_square_sums(depth))
    for j in range(depth - 1, -1, -1):
        energies[j] = pyramid.band_square_sums(j) + child_sum(energies[j + 1])
        energies[j] = np.ascontiguousarray(energies[j])
    arity = 2 ** pyramid.dim
    counts = [0] * (depth + 2)
    for j in range(depth, -1, -1):
        counts[j] = 1 + arity * counts[j + 1]
    return BranchStats(energies=energies, subtree_counts=counts[:depth + 1])
