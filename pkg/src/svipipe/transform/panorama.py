"""Equirectangular panorama conventions and image I/O.

Pixel (u, v) has its center at longitude (u + 0.5) / W * 360 - 180 and
latitude 90 - (v + 0.5) / H * 180, with W == 2 H.
"""

from __future__ import annotations

import numpy as np
from PIL import Image

from .. import _ext


def check_equirect(img):
    h, w = img.shape[:2]
    if w != 2 * h:
        raise ValueError(f"not equirectangular: {w}x{h} is not 2:1")
    return h, w


def pixel_to_lonlat(u, v, w, h):
    """Continuous pixel coordinates -> (lon, lat) degrees."""
    lon = (np.asarray(u, dtype=np.float64) + 0.5) / w * 360.0 - 180.0
    lat = 90.0 - (np.asarray(v, dtype=np.float64) + 0.5) / h * 180.0
    return lon, lat


def lonlat_to_pixel(lon, lat, w, h):
    u = (np.asarray(lon, dtype=np.float64) + 180.0) / 360.0 * w - 0.5
    v = (90.0 - np.asarray(lat, dtype=np.float64)) / 180.0 * h - 0.5
    return u, v


def sample(img, lon, lat, interpolation="bilinear"):
    """Sample a panorama at (lon, lat) degrees; wraps across the seam, clamps at the poles."""
    h, w = check_equirect(img)
    u, v = lonlat_to_pixel(lon, lat, w, h)
    if img.ndim == 2:
        img = img[:, :, None]
    if interpolation == "bilinear":
        out = _ext.sample_bilinear(img, u, v)
    elif interpolation == "nearest":
        out = _ext.sample_nearest(img, u, v)
    else:
        raise ValueError(f"unknown interpolation {interpolation!r}")
    return out


def to_uint8(a):
    return np.clip(np.floor(a + 0.5), 0, 255).astype(np.uint8)


def rotate_pano(img, delta_deg):
    """Panorama whose longitude ``lon`` shows what ``img`` shows at ``lon + delta``.

    Exact for shifts that are whole pixels; otherwise resampled bilinearly.
    """
    h, w = img.shape[:2]
    shift = delta_deg / 360.0 * w
    if abs(shift - round(shift)) < 1e-9:
        return np.roll(img, -int(round(shift)), axis=1)
    u = (np.arange(w) + shift)[None, :].repeat(h, axis=0)
    v = np.arange(h, dtype=np.float64)[:, None].repeat(w, axis=1)
    src = img if img.ndim == 3 else img[:, :, None]
    out = to_uint8(_ext.sample_bilinear(src, u, v)) if img.dtype == np.uint8 else _ext.sample_bilinear(src, u, v)
    return out if img.ndim == 3 else out[:, :, 0]


def load_image(path):
    with Image.open(path) as im:
        return np.asarray(im.convert("RGB"))


def save_image(img, path, quality=92):
    from ..io_utils import atomic_open

    fmt = "JPEG" if str(path).lower().endswith((".jpg", ".jpeg")) else "PNG"
    im = Image.fromarray(np.asarray(img, dtype=np.uint8))
    with atomic_open(path, "wb") as fh:
        if fmt == "JPEG":
            im.save(fh, fmt, quality=quality)
        else:
            im.save(fh, fmt)
