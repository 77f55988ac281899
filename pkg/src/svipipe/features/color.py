"""HSL statistics with a circular hue mean."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


@dataclass
class HslStats:
    hue: float  # degrees in [0, 360), circular mean over chromatic pixels
    saturation: float
    lightness: float
    hue_resultant: float  # mean resultant length in [0, 1]; near 0 means hue is ill-defined


def rgb_to_hsl(img):
    """(..., 3) uint8 or 0..1 floats -> (h degrees, s, l) arrays."""
    a = np.asarray(img, dtype=np.float64)
    if np.issubdtype(np.asarray(img).dtype, np.integer):
        a = a / 255.0
    r, g, b = a[..., 0], a[..., 1], a[..., 2]
    mx = np.maximum(np.maximum(r, g), b)
    mn = np.minimum(np.minimum(r, g), b)
    l = (mx + mn) / 2.0
    d = mx - mn
    with np.errstate(invalid="ignore", divide="ignore"):
        s = np.where(d == 0, 0.0, d / (1.0 - np.abs(2.0 * l - 1.0)))
        hr = np.mod((g - b) / d, 6.0)
        hg = (b - r) / d + 2.0
        hb = (r - g) / d + 4.0
    h = np.where(mx == r, hr, np.where(mx == g, hg, hb)) * 60.0
    h = np.where(d == 0, 0.0, h)
    return h, np.clip(s, 0.0, 1.0), l


def hsl_stats(image) -> HslStats:
    h, s, l = rgb_to_hsl(np.asarray(image)[..., :3])
    chroma = s > 0
    if chroma.any():
        rad = np.radians(h[chroma])
        sn, cs = np.sin(rad).mean(), np.cos(rad).mean()
        res = math.hypot(sn, cs)
        hue = math.degrees(math.atan2(sn, cs)) % 360.0 if res > 1e-12 else 0.0
        if hue >= 360.0:
            hue = 0.0
    else:
        hue, res = 0.0, 0.0
    return HslStats(hue, float(s.mean()), float(l.mean()), float(res))
