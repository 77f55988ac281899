"""Hot kernels.  The compiled extension is used when it imports; otherwise the
numpy versions.  Set ``SVIPIPE_PURE_PYTHON=1`` to force the fallback."""

import os

import numpy as _np

from . import _kernels_py as py

BACKEND = "python"
if os.environ.get("SVIPIPE_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _ckernels as _impl

        BACKEND = "cython"
    except ImportError:
        _impl = py
else:
    _impl = py


def _as_img(img):
    return _np.ascontiguousarray(img, dtype=_np.float64)


def sample_bilinear(img, u, v):
    return _impl.sample_bilinear(_as_img(img), u, v)


def sample_nearest(img, u, v):
    return _impl.sample_nearest(_as_img(img), u, v)


def correlate3x3(img, k):
    return _impl.correlate3x3(img, k)


def nearest_centroid(x, c):
    return _impl.nearest_centroid(x, c)
