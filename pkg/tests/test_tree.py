"""Node arithmetic, inclusion masks, and subtree statistics."""

import numpy as np
import pytest

from treebesov.errors import DimensionError
from treebesov.tree import (BranchStats, NodeId, TreeMask, children, parent,
                            subtree_energies, validate_proper)
from treebesov.wavelet import forward_dwt, get_basis


class TestNodeId:
    def test_parent_of_root_is_none(self):
        assert parent(NodeId(0, (0,))) is None
        assert parent(NodeId(0, (0, 0))) is None

    def test_parent_1d(self):
        assert parent(NodeId(3, (5,))) == NodeId(2, (2,))

    def test_parent_2d(self):
        assert parent(NodeId(2, (3, 1))) == NodeId(1, (1, 0))

    def test_children_1d_order(self):
        kids = children(NodeId(1, (1,)), depth=3)
        assert kids == [NodeId(2, (2,)), NodeId(2, (3,))]

    def test_children_2d_order(self):
        kids = children(NodeId(1, (1, 0)), depth=3)
        assert kids == [NodeId(2, (2, 0)), NodeId(2, (2, 1)),
                        NodeId(2, (3, 0)), NodeId(2, (3, 1))]

    def test_children_empty_at_bottom(self):
        assert children(NodeId(2, (1,)), depth=2) == []

    def test_parent_child_round_trip(self):
        node = NodeId(2, (1, 3))
        for kid in children(node, depth=5):
            assert parent(kid) == node

    def test_index_out_of_range(self):
        with pytest.raises(DimensionError):
            NodeId(1, (2,))
        with pytest.raises(DimensionError):
            NodeId(0, (0, 1))

    def test_bad_arity(self):
        with pytest.raises(DimensionError):
            NodeId(0, (0, 0, 0))


class TestTreeMask:
    def _mask(self):
        return TreeMask(1, 2, [np.array([True]),
                               np.array([True, False]),
                               np.array([True, True, False, True])])

    def test_get_and_count(self):
        m = self._mask()
        assert m.get(NodeId(1, (0,))) and not m.get(NodeId(1, (1,)))
        assert m.node_count() == 5

    def test_effective_cuts_orphans(self):
        m = self._mask()
        eff = m.effective()
        # children of the switched-off node (1, 1) must go dark
        assert not eff.get(NodeId(2, (3,)))
        assert eff.get(NodeId(2, (0,))) and eff.get(NodeId(2, (1,)))
        assert validate_proper(eff)

    def test_effective_keeps_proper_mask(self):
        levels = [np.array([True]), np.array([True, True]),
                  np.array([True, False, False, True])]
        m = TreeMask(1, 2, levels)
        assert validate_proper(m)
        assert m.effective() == m

    def test_validate_flags_orphans(self):
        assert not validate_proper(self._mask())

    def test_effective_2d(self):
        lv0 = np.array([[True]])
        lv1 = np.array([[True, False], [False, False]])
        lv2 = np.zeros((4, 4), dtype=bool)
        lv2[0, 0] = True
        lv2[3, 3] = True
        eff = TreeMask(2, 2, [lv0, lv1, lv2]).effective()
        assert eff.get(NodeId(2, (0, 0)))
        assert not eff.get(NodeId(2, (3, 3)))

    def test_dict_round_trip(self):
        m = self._mask()
        again = TreeMask.from_dict(m.to_dict())
        assert again == m

    def test_dict_round_trip_2d(self):
        rng = np.random.default_rng(7)
        levels = [rng.random((2 ** j, 2 ** j)) < 0.6 for j in range(3)]
        levels[0][:] = True
        m = TreeMask(2, 2, levels).effective()
        assert TreeMask.from_dict(m.to_dict()) == m

    def test_shape_mismatch_rejected(self):
        with pytest.raises(DimensionError):
            TreeMask(1, 1, [np.array([True]), np.array([True])])

    def test_level_count_checked(self):
        with pytest.raises(DimensionError):
            TreeMask(1, 2, [np.array([True])])

    def test_eq_ignores_foreign_types(self):
        assert self._mask().__eq__(42) is NotImplemented


class TestSubtreeEnergies:
    def test_counts_1d(self):
        pyr = forward_dwt(np.zeros(16), get_basis("haar"))
        stats = subtree_energies(pyr)
        assert isinstance(stats, BranchStats)
        # J = 3: bottom subtree is a single node, root subtree is 15 nodes
        assert stats.subtree_counts == [15, 7, 3, 1]

    def test_counts_2d(self):
        pyr = forward_dwt(np.zeros((8, 8)), get_basis("haar"))
        stats = subtree_energies(pyr)
        assert stats.subtree_counts == [21, 5, 1]

    def test_root_energy_is_total_detail_energy(self):
        rng = np.random.default_rng(11)
        x = rng.normal(0, 1, 64)
        pyr = forward_dwt(x, get_basis("haar"))
        stats = subtree_energies(pyr)
        total = sum(float(pyr.band_square_sums(j).sum())
                    for j in range(pyr.depth + 1))
        assert stats.energies[0][0] == pytest.approx(total, rel=1e-12)

    def test_recursion_matches_direct_sum(self):
        rng = np.random.default_rng(12)
        img = rng.normal(0, 1, (16, 16))
        pyr = forward_dwt(img, get_basis("db2"))
        stats = subtree_energies(pyr)
        sq = [pyr.band_square_sums(j) for j in range(pyr.depth + 1)]
        for j in range(pyr.depth + 1):
            side = 2 ** j
            for r in range(side):
                for c in range(side):
                    want = 0.0
                    for jj in range(j, pyr.depth + 1):
                        blk = 2 ** (jj - j)
                        want += sq[jj][r * blk:(r + 1) * blk,
                                       c * blk:(c + 1) * blk].sum()
                    assert stats.energies[j][r, c] == pytest.approx(want, rel=1e-10)

    def test_bottom_level_is_band_square_sum(self):
        rng = np.random.default_rng(13)
        pyr = forward_dwt(rng.normal(0, 1, 32), get_basis("haar"))
        assert np.allclose(stats_bottom := subtree_energies(pyr).energies[pyr.depth],
                           pyr.band_square_sums(pyr.depth))
        assert stats_bottom.shape == (2 ** pyr.depth,)
