"""Numpy reference versions of the compiled kernels in ``_ckernels.pyx``."""

import numpy as np


def sample_bilinear(img, u, v):
    """Bilinear sample of an (H, W, C) float image at continuous pixel coords.

    ``u``/``v`` are in pixel units with pixel centers at integers.  Columns
    wrap around; rows clamp to the first/last row.
    """
    h, w = img.shape[:2]
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    u0 = np.floor(u)
    v0 = np.floor(v)
    fu = (u - u0)[..., None]
    fv = (v - v0)[..., None]
    u0 = u0.astype(np.int64)
    v0 = v0.astype(np.int64)
    c0 = np.mod(u0, w)
    c1 = np.mod(u0 + 1, w)
    r0 = np.clip(v0, 0, h - 1)
    r1 = np.clip(v0 + 1, 0, h - 1)
    top = img[r0, c0] * (1.0 - fu) + img[r0, c1] * fu
    bot = img[r1, c0] * (1.0 - fu) + img[r1, c1] * fu
    return top * (1.0 - fv) + bot * fv


def sample_nearest(img, u, v):
    h, w = img.shape[:2]
    c = np.mod(np.floor(np.asarray(u) + 0.5).astype(np.int64), w)
    r = np.clip(np.floor(np.asarray(v) + 0.5).astype(np.int64), 0, h - 1)
    return img[r, c].astype(np.float64)


def correlate3x3(img, k):
    """3x3 correlation with edge-duplicating reflection (``d c b a | a b c d``)."""
    p = np.pad(np.asarray(img, dtype=np.float64), 1, mode="symmetric")
    h, w = img.shape
    out = np.zeros((h, w), dtype=np.float64)
    for di in range(3):
        for dj in range(3):
            kv = k[di][dj]
            if kv != 0.0:
                out += kv * p[di:di + h, dj:dj + w]
    return out


def nearest_centroid(x, c):
    """Index of the nearest centroid per row (lowest index on ties) and its squared distance."""
    d = ((x[:, None, :] - c[None, :, :]) ** 2).sum(axis=2)
    lab = np.argmin(d, axis=1)
    return lab.astype(np.int64), d[np.arange(len(x)), lab]
