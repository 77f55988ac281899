"""Edge maps, blur score and blob detection on 8-bit-scale grayscale images.

Borders use edge-duplicating reflection (``d c b a | a b c d``) everywhere.
"""

from __future__ import annotations

import numpy as np
from scipy import ndimage

from .. import _ext

LAPLACIAN_K = np.array([[0.0, 1.0, 0.0], [1.0, -4.0, 1.0], [0.0, 1.0, 0.0]])
SOBEL_X = np.array([[-1.0, 0.0, 1.0], [-2.0, 0.0, 2.0], [-1.0, 0.0, 1.0]])
SOBEL_Y = SOBEL_X.T.copy()
BT601 = (0.299, 0.587, 0.114)

CANNY_SIGMA = 1.4
CANNY_LOW = 50.0
CANNY_HIGH = 150.0
EDGE_METHODS = ("canny", "sobel_x", "sobel_y", "laplacian")


def to_gray(img):
    """BT.601 luma in float64 on the 0..255 scale; 2-D input passes through."""
    a = np.asarray(img)
    if a.ndim == 2:
        return a.astype(np.float64)
    if a.ndim == 3 and a.shape[2] >= 3:
        return a[..., 0] * BT601[0] + a[..., 1] * BT601[1] + a[..., 2] * BT601[2]
    if a.ndim == 3 and a.shape[2] == 1:
        return a[..., 0].astype(np.float64)
    raise ValueError(f"unsupported image shape {a.shape}")


def _check(gray):
    if gray.shape[0] < 3 or gray.shape[1] < 3:
        raise ValueError(f"image too small: {gray.shape[1]}x{gray.shape[0]} (need at least 3x3)")


def correlate(gray, kernel):
    return _ext.correlate3x3(gray, np.asarray(kernel, dtype=np.float64))


def canny(gray, sigma=CANNY_SIGMA, low=CANNY_LOW, high=CANNY_HIGH):
    """Binary edge map: Gaussian smoothing, Sobel gradient, non-maximum suppression,
    hysteresis with 8-connected weak-edge tracking."""
    g = ndimage.gaussian_filter(gray, sigma, mode="reflect") if sigma > 0 else gray
    gx = correlate(g, SOBEL_X)
    gy = correlate(g, SOBEL_Y)
    mag = np.hypot(gx, gy)
    ang = (np.degrees(np.arctan2(gy, gx)) + 180.0) % 180.0
    p = np.pad(mag, 1, mode="constant")
    h, w = mag.shape
    c = p[1:h + 1, 1:w + 1]
    # neighbours along the gradient direction, quantised to 0/45/90/135 degrees
    e, wst = p[1:h + 1, 2:w + 2], p[1:h + 1, 0:w]
    n, s = p[0:h, 1:w + 1], p[2:h + 2, 1:w + 1]
    ne, sw = p[0:h, 2:w + 2], p[2:h + 2, 0:w]
    nw, se = p[0:h, 0:w], p[2:h + 2, 2:w + 2]
    d0 = (ang < 22.5) | (ang >= 157.5)
    d45 = (ang >= 22.5) & (ang < 67.5)
    d90 = (ang >= 67.5) & (ang < 112.5)
    d135 = (ang >= 112.5) & (ang < 157.5)
    # rows grow downward, so +gy points south; the 45-degree gradient runs se/nw
    # plateaus of equal magnitude keep only their far side, giving one-pixel edges
    keep = (
        (d0 & (c > e) & (c >= wst))
        | (d90 & (c > s) & (c >= n))
        | (d45 & (c > se) & (c >= nw))
        | (d135 & (c > sw) & (c >= ne))
    )
    thin = np.where(keep, mag, 0.0)
    strong = thin >= high
    weak = thin >= low
    labels, nlab = ndimage.label(weak, structure=np.ones((3, 3)))
    if nlab == 0:
        return np.zeros_like(weak, dtype=np.uint8)
    hit = np.zeros(nlab + 1, dtype=bool)
    hit[np.unique(labels[strong])] = True
    hit[0] = False
    return hit[labels].astype(np.uint8)


def edge_map(image, method="laplacian", **kw):
    gray = to_gray(image)
    _check(gray)
    if method == "laplacian":
        return correlate(gray, LAPLACIAN_K)
    if method == "sobel_x":
        return correlate(gray, SOBEL_X)
    if method == "sobel_y":
        return correlate(gray, SOBEL_Y)
    if method == "canny":
        return canny(gray, **kw)
    raise ValueError(f"unknown edge method {method!r}; choose from {EDGE_METHODS}")


def blur_score(image) -> float:
    """Variance of the Laplacian response; low means blurry."""
    gray = to_gray(image)
    _check(gray)
    return float(np.var(correlate(gray, LAPLACIAN_K)))


def is_blurry(score, threshold=100.0, direction="below"):
    """Blur verdict.  ``below`` flags scores under the threshold (sharpness
    convention); ``above`` flags scores over it."""
    if direction == "below":
        return score < threshold
    if direction == "above":
        return score > threshold
    raise ValueError("direction must be 'below' or 'above'")


def blob_detect(image, min_area=1, threshold=127.0):
    """8-connected regions brighter than ``threshold`` with at least ``min_area`` pixels.

    Returns dicts with centroid ``x`` (column) and ``y`` (row) in pixel
    coordinates and ``area``, ordered by (y, x).
    """
    gray = to_gray(image)
    mask = gray > threshold
    labels, n = ndimage.label(mask, structure=np.ones((3, 3)))
    if n == 0:
        return []
    idx = np.arange(1, n + 1)
    areas = ndimage.sum_labels(mask, labels, idx)
    cents = ndimage.center_of_mass(mask, labels, idx)
    blobs = [{"x": float(cx), "y": float(cy), "area": int(a)}
             for (cy, cx), a in zip(cents, areas) if a >= min_area]
    blobs.sort(key=lambda b: (b["y"], b["x"]))
    return blobs
