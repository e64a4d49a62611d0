"""Sampling from the random-subtree prior and the sequence-space norm."""

import numpy as np
import pytest

from treebesov.errors import ParameterError
from treebesov.prior import (PriorConfig, as_seed, besov_norm,
                             sample_besov_function, sample_besov_pyramid,
                             sample_coefficient, sample_subtree)
from treebesov.tree import NodeId, validate_proper
from treebesov.wavelet import forward_dwt, get_basis


def _config(**kw):
    base = dict(smoothness=0.5, integrability=2.0, kappa=1.0, beta=0.3,
                dim=1, depth=4)
    base.update(kw)
    return PriorConfig(**base)


class TestConfig:
    def test_rejects_bad_integrability(self):
        with pytest.raises(ParameterError):
            _config(integrability=0.5)

    def test_rejects_bad_kappa(self):
        with pytest.raises(ParameterError):
            _config(kappa=0.0)

    def test_rejects_beta_outside_unit_interval(self):
        with pytest.raises(ParameterError):
            _config(beta=1.5)
        with pytest.raises(ParameterError):
            _config(beta=-0.1)

    def test_per_level_beta(self):
        cfg = _config(beta=[0.4, 0.3, 0.2, 0.1])
        assert cfg.beta_at(1) == pytest.approx(0.4)
        assert cfg.beta_at(3) == pytest.approx(0.2)

    def test_level_weight_closed_form(self):
        cfg = _config(smoothness=1.0, integrability=2.0, dim=1)
        # exponent s + d/2 - d/p = 1.0 at these settings
        assert cfg.level_weight(3) == pytest.approx(2.0 ** -3)


class TestSubtreeSampling:
    def test_masks_are_proper(self):
        cfg = _config(beta=0.6, depth=5)
        for s in range(30):
            assert validate_proper(sample_subtree(cfg, s))

    def test_root_always_on(self):
        cfg = _config(beta=0.0)
        for s in range(10):
            mask = sample_subtree(cfg, s)
            assert mask.get(NodeId(0, (0,)))
            assert mask.node_count() == 1

    def test_beta_one_fills_tree(self):
        cfg = _config(beta=1.0, depth=3)
        assert sample_subtree(cfg, 0).node_count() == 15

    def test_seed_reproducibility(self):
        cfg = _config(beta=0.5)
        assert sample_subtree(cfg, 42) == sample_subtree(cfg, 42)
        assert sample_subtree(cfg, 42) != sample_subtree(cfg, 43)

    def test_first_level_inclusion_rate(self):
        # children of the root are plain Bernoulli(beta) draws
        cfg = _config(beta=0.3, depth=1)
        hits = sum(sample_subtree(cfg, s).levels[1].sum() for s in range(4000))
        rate = hits / 8000.0
        assert abs(rate - 0.3) < 4 * np.sqrt(0.3 * 0.7 / 8000)

    def test_2d_masks(self):
        cfg = _config(beta=0.7, dim=2, depth=3)
        mask = sample_subtree(cfg, 5)
        assert validate_proper(mask)
        assert mask.levels[2].shape == (4, 4)


class TestCoefficientLaw:
    def test_gaussian_variance(self):
        draws = sample_coefficient(2.0, 1.7, 0, size=(200000,))
        assert np.var(draws) == pytest.approx(1.7 ** 2, rel=0.02)

    def test_laplace_mean_abs(self):
        # p = 1 with scale kappa has E|X| = 2*kappa
        draws = sample_coefficient(1.0, 0.5, 1, size=(200000,))
        assert np.mean(np.abs(draws)) == pytest.approx(1.0, rel=0.02)

    def test_symmetry(self):
        draws = sample_coefficient(1.5, 1.0, 2, size=(200000,))
        assert abs(np.mean(np.sign(draws))) < 0.01

    def test_scalar_return(self):
        assert isinstance(sample_coefficient(2.0, 1.0, 3), float)

    def test_kappa_scales_linearly(self):
        a = sample_coefficient(2.0, 1.0, 7, size=(100,))
        b = sample_coefficient(2.0, 3.0, 7, size=(100,))
        assert np.allclose(b, 3.0 * a)

    def test_invalid_parameters(self):
        with pytest.raises(ParameterError):
            sample_coefficient(0.5, 1.0, 0)
        with pytest.raises(ParameterError):
            sample_coefficient(2.0, -1.0, 0)


class TestFunctionSampling:
    def test_shapes(self):
        cfg = _config(depth=4)
        values, pyramid, mask = sample_besov_function(cfg, "haar", 0)
        assert values.shape == (32,)
        assert pyramid.depth == 4 and mask.depth == 4

    def test_2d_shapes(self):
        cfg = _config(dim=2, depth=3)
        values, pyramid, mask = sample_besov_function(cfg, "db2", 0)
        assert values.shape == (16, 16)

    def test_coefficients_vanish_off_mask(self):
        cfg = _config(beta=0.4, depth=5)
        pyramid, mask = sample_besov_pyramid(cfg, "haar", 9)
        for j in range(cfg.depth + 1):
            off = ~mask.levels[j]
            assert np.all(pyramid.details[j][:, off] == 0.0)

    def test_beta_zero_leaves_single_detail(self):
        cfg = _config(beta=0.0, depth=4)
        pyramid, _ = sample_besov_pyramid(cfg, "haar", 3)
        nonzero = sum(int(np.count_nonzero(pyramid.details[j]))
                      for j in range(cfg.depth + 1))
        assert nonzero == 1

    def test_transform_round_trip(self):
        cfg = _config(depth=4, beta=0.8)
        values, pyramid, _ = sample_besov_function(cfg, "db2", 4)
        again = forward_dwt(values, get_basis("db2"))
        for j in range(cfg.depth + 1):
            assert np.allclose(again.details[j], pyramid.details[j], atol=1e-10)

    def test_smoothness_capped_by_basis(self):
        cfg = _config(smoothness=1.2)
        with pytest.raises(ParameterError):
            sample_besov_pyramid(cfg, "haar", 0)
        # db2 has one more vanishing moment, so the same s is fine
        sample_besov_pyramid(cfg, "db2", 0)

    def test_seed_reproducibility(self):
        cfg = _config(beta=0.5)
        a, _, _ = sample_besov_function(cfg, "haar", 21)
        b, _, _ = sample_besov_function(cfg, "haar", 21)
        assert np.array_equal(a, b)


class TestBesovNorm:
    def test_single_root_coefficient(self):
        pyr = forward_dwt(np.zeros(16), get_basis("haar"))
        pyr.details[0][0, 0] = 3.0
        # level 0 weight is 1 whatever the exponents
        assert besov_norm(pyr, 0.5, 2.0) == pytest.approx(3.0)

    def test_scaling_block_weight(self):
        pyr = forward_dwt(np.zeros(16), get_basis("haar"))
        pyr.scaling[0] = 2.0
        # scaling sits one level below the root: weight 2**(-(s + d/2 - d/p))
        want = 2.0 * 2.0 ** -1.0
        assert besov_norm(pyr, 1.0, 2.0) == pytest.approx(want)

    def test_p2_is_weighted_l2(self):
        rng = np.random.default_rng(5)
        pyr = forward_dwt(rng.normal(0, 1, 32), get_basis("haar"))
        s, p = 0.5, 2.0
        e = s + 0.5 - 0.5
        want = 2.0 ** (-p * e) * np.sum(pyr.scaling ** 2)
        for j in range(pyr.depth + 1):
            want += 2.0 ** (j * p * e) * np.sum(pyr.details[j] ** 2)
        assert besov_norm(pyr, s, p) == pytest.approx(np.sqrt(want), rel=1e-12)

    def test_rejects_small_p(self):
        pyr = forward_dwt(np.zeros(8), get_basis("haar"))
        with pytest.raises(ParameterError):
            besov_norm(pyr, 0.5, 0.9)


class TestSeeds:
    def test_as_seed_accepts_int_and_passthrough(self):
        s = as_seed(5)
        assert as_seed(s) is s
        rng = s.generator()
        assert isinstance(rng, np.random.Generator)

    def test_same_seed_same_stream(self):
        a = as_seed(9).generator().random(4)
        b = as_seed(9).generator().random(4)
        assert np.array_equal(a, b)
