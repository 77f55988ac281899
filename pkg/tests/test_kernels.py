import os
import subprocess
import sys

import numpy as np
import pytest

from svipipe import _ext
from svipipe._ext import _kernels_py as py

try:
    from svipipe._ext import _ckernels as cy
except ImportError:  # extension not built
    cy = None

needs_cy = pytest.mark.skipif(cy is None, reason="compiled kernels not built")


@pytest.fixture
def img(rng):
    return np.ascontiguousarray(rng.random((16, 32, 3)) * 255.0)


@needs_cy
def test_backend_is_cython_by_default():
    assert _ext.BACKEND == "cython"


def test_env_forces_fallback():
    env = dict(os.environ, SVIPIPE_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", "from svipipe import _ext; print(_ext.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"


@needs_cy
def test_bilinear_parity(img, rng):
    u = rng.uniform(-40, 70, size=(20, 30))
    v = rng.uniform(-3, 19, size=(20, 30))
    a, b = py.sample_bilinear(img, u, v), cy.sample_bilinear(img, u, v)
    assert a.shape == b.shape == (20, 30, 3)
    assert np.max(np.abs(a - b)) < 1e-9


@needs_cy
def test_nearest_parity(img, rng):
    u = rng.uniform(-40, 70, size=(50,))
    v = rng.uniform(-3, 19, size=(50,))
    assert np.array_equal(py.sample_nearest(img, u, v), cy.sample_nearest(img, u, v))


@needs_cy
def test_correlate_parity(rng):
    g = rng.random((13, 17)) * 255.0
    k = rng.normal(size=(3, 3))
    assert np.max(np.abs(py.correlate3x3(g, k) - cy.correlate3x3(g, k))) < 1e-9


@needs_cy
def test_nearest_centroid_parity(rng):
    x = rng.normal(size=(200, 4))
    c = rng.normal(size=(6, 4))
    la, da = py.nearest_centroid(x, c)
    lb, db = cy.nearest_centroid(x, c)
    assert np.array_equal(la, lb)
    assert np.max(np.abs(da - db)) < 1e-12


def test_bilinear_exact_at_pixel_centres(img):
    u = np.array([0.0, 5.0, 31.0])
    v = np.array([0.0, 7.0, 15.0])
    out = _ext.sample_bilinear(img, u, v)
    assert np.allclose(out, img[v.astype(int), u.astype(int)], atol=1e-9)


def test_bilinear_wraps_horizontally(img):
    # halfway between the last and first column
    out = _ext.sample_bilinear(img, np.array([31.5]), np.array([4.0]))
    assert np.allclose(out[0], (img[4, 31] + img[4, 0]) / 2.0, atol=1e-9)


def test_nearest_centroid_ties_lowest_index():
    x = np.array([[0.0, 0.0]])
    c = np.array([[1.0, 0.0], [-1.0, 0.0]])
    lab, _ = _ext.nearest_centroid(x, c)
    assert lab[0] == 0
