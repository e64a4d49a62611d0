"""The numba kernels must match the numpy kernels bit for bit."""

import subprocess
import sys

import numpy as np
import pytest

from treebesov import _kernels_np as knp
from treebesov import backend

nb = pytest.importorskip("treebesov._kernels_nb")


def _bank(rng, batch, n):
    x = rng.normal(0, 1, (batch, n))
    lo = np.array([0.7, 0.7])
    hi = np.array([0.7, -0.7])
    return x, lo, hi


class TestBitIdentity:
    def test_analysis_step(self):
        rng = np.random.default_rng(0)
        for batch, n in ((1, 2), (1, 8), (3, 64), (2, 256)):
            x, lo, hi = _bank(rng, batch, n)
            a1, d1 = knp.analysis_step(x, lo, hi)
            a2, d2 = nb.analysis_step(x, lo, hi)
            assert np.array_equal(a1, a2) and np.array_equal(d1, d2)

    def test_synthesis_step(self):
        rng = np.random.default_rng(1)
        for batch, half in ((1, 1), (2, 4), (3, 32)):
            a = rng.normal(0, 1, (batch, half))
            d = rng.normal(0, 1, (batch, half))
            lo = np.array([0.7, 0.7])
            hi = np.array([0.7, -0.7])
            assert np.array_equal(knp.synthesis_step(a, d, lo, hi),
                                  nb.synthesis_step(a, d, lo, hi))

    def test_child_sums(self):
        rng = np.random.default_rng(2)
        v1 = rng.normal(0, 1, 16)
        assert np.array_equal(knp.child_sum_1d(v1), nb.child_sum_1d(v1))
        v2 = rng.normal(0, 1, (8, 8))
        assert np.array_equal(knp.child_sum_2d(v2), nb.child_sum_2d(v2))

    def test_circular_filter_and_adjoint(self):
        rng = np.random.default_rng(3)
        x = rng.normal(0, 1, 37)
        taps = np.array([0.2, 0.5, 0.3])
        assert np.array_equal(knp.circular_filter(x, taps, 1),
                              nb.circular_filter(x, taps, 1))
        assert np.array_equal(knp.circular_filter_adjoint(x, taps, 1),
                              nb.circular_filter_adjoint(x, taps, 1))

    def test_longer_kernels(self):
        rng = np.random.default_rng(4)
        x = rng.normal(0, 1, 64)
        taps = rng.normal(0, 1, 7)
        for center in (0, 3, 6):
            assert np.array_equal(knp.circular_filter(x, taps, center),
                                  nb.circular_filter(x, taps, center))


class TestAdjointness:
    def test_filter_adjoint_inner_products(self):
        # <Ax, y> == <x, A*y> pins the adjoint convention
        rng = np.random.default_rng(5)
        taps = np.array([0.25, 0.5, 0.25])
        for _ in range(50):
            x = rng.normal(0, 1, 40)
            y = rng.normal(0, 1, 40)
            lhs = np.dot(knp.circular_filter(x, taps, 1), y)
            rhs = np.dot(x, knp.circular_filter_adjoint(y, taps, 1))
            assert abs(lhs - rhs) <= 1e-12


class TestSelection:
    def test_default_backend_is_numba_here(self):
        assert backend.BACKEND in ("numba", "numpy")

    def test_env_override(self):
        code = ("import os; os.environ['TREEBESOV_BACKEND']='numpy'; "
                "from treebesov import backend; print(backend.BACKEND)")
        out = subprocess.run([sys.executable, "-c", code],
                             capture_output=True, text=True, check=True)
        assert out.stdout.strip() == "numpy"

    def test_env_rejects_unknown(self):
        code = ("import os; os.environ['TREEBESOV_BACKEND']='gpu'; "
                "import treebesov.backend")
        out = subprocess.run([sys.executable, "-c", code],
                             capture_output=True, text=True)
        assert out.returncode != 0
