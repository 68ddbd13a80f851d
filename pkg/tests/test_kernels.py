import os
import subprocess
import sys

import numpy as np
import pytest

from admissible import kernels
from admissible._accel import HAS_NUMBA

rng = np.random.default_rng(7)
FAMILIES = [(0, 0.0, 0.0), (1, 2.0, 0.0), (1, 0.5, 0.0), (2, 0.7, 0.5)]

needs_numba = pytest.mark.skipif(not HAS_NUMBA, reason="numba not installed")


def random_lengths(n, m, hi=12):
    lx = rng.integers(0, hi, n)
    ly = rng.integers(0, hi, m)
    lxy = rng.integers(0, 2 * hi, (n, m))
    return lx, ly, lxy


@needs_numba
@pytest.mark.parametrize("code", FAMILIES)
def test_submultiplicative_scan_variants_agree(code):
    lx, ly, lxy = random_lengths(40, 33)
    a = kernels.submultiplicative_scan_numpy(lx, ly, lxy, *code)
    b = kernels.submultiplicative_scan_numba(lx, ly, lxy, *code)
    assert a[0] == pytest.approx(b[0], rel=1e-13)
    assert (a[1], a[2]) == (b[1], b[2])


@needs_numba
@pytest.mark.parametrize("w", FAMILIES)
@pytest.mark.parametrize("v", FAMILIES[:2])
def test_splitting_scan_variants_agree(w, v):
    ly, lz, lzy = random_lengths(25, 30)
    a = kernels.splitting_scan_numpy(ly, lz, lzy, *w, *v)
    b = kernels.splitting_scan_numba(ly, lz, lzy, *w, *v)
    assert a[0] == pytest.approx(b[0], rel=1e-13)
    assert (a[1], a[2]) == (b[1], b[2])


@needs_numba
def test_tradeoff_minimum_variants_agree():
    a = np.sort(rng.random(80))
    b = np.sort(rng.random(80))[::-1].copy()
    t = np.logspace(0, 4, 30)
    m1, i1 = kernels.tradeoff_minimum_numpy(a, b, t)
    m2, i2 = kernels.tradeoff_minimum_numba(a, b, t)
    np.testing.assert_allclose(m1, m2, rtol=1e-14)
    np.testing.assert_array_equal(i1, i2)


def test_submultiplicative_scan_brute_force():
    lx, ly, lxy = random_lengths(9, 7)
    best = max(((1 + lxy[i, j]) ** 2 / ((1 + lx[i]) ** 2 * (1 + ly[j]) ** 2), i, j)
               for i in range(9) for j in range(7))
    ratio, i, j = kernels.submultiplicative_scan(lx, ly, lxy, 1, 2.0)
    assert ratio == pytest.approx(best[0], rel=1e-14)
    assert (1 + lxy[i, j]) ** 2 / ((1 + lx[i]) ** 2 * (1 + ly[j]) ** 2) == pytest.approx(ratio, rel=1e-14)


def test_ties_go_to_last_pair():
    z = np.zeros(3, dtype=np.int64)
    ratio, i, j = kernels.submultiplicative_scan(z, z, np.zeros((3, 3), dtype=np.int64), 0)
    assert (ratio, i, j) == (1.0, 2, 2)


def test_tradeoff_minimum_first_index_on_ties():
    m, idx = kernels.tradeoff_minimum(np.array([1.0, 1.0]), np.array([0.0, 0.0]), np.array([3.0]))
    assert m[0] == 1.0 and idx[0] == 0


def test_disable_flag_selects_numpy_kernels():
    code = ("from admissible import kernels, _accel;"
            "import numpy as np;"
            "assert not _accel.USE_NUMBA;"
            "assert kernels.ACTIVE is kernels.NUMPY_KERNELS;"
            "r = kernels.submultiplicative_scan(np.array([1,2]), np.array([3]), np.array([[4],[5]]), 1, 2.0);"
            "print(repr(r))")
    env = dict(os.environ, ADMISSIBLE_DISABLE_NUMBA="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    expected = kernels.submultiplicative_scan(np.array([1, 2]), np.array([3]), np.array([[4], [5]]), 1, 2.0)
    assert out.stdout.strip() == repr(expected)
