"""Histogram and kernel-density plots as SVG plus CSV sidecars."""

from __future__ import annotations

import csv
import io
import logging
import math
import os
import warnings

import numpy as np

from ..io_utils import atomic_write_text
from .svg import Svg

log = logging.getLogger(__name__)

KDE_POINTS = 256
KDE_FALLBACK_BANDWIDTH = 1e-3


def sidecar_path(out, suffix=".data.csv"):
    return os.path.splitext(out)[0] + suffix


def _finite(values):
    v = np.asarray([float(x) for x in values if x is not None], dtype=np.float64)
    return v[np.isfinite(v)]


def histogram(values, bins=10, bin_width=None):
    """(counts, edges): bins left-closed right-open, the last one closed."""
    v = _finite(values)
    if v.size == 0:
        raise ValueError("histogram needs at least one value")
    lo, hi = float(v.min()), float(v.max())
    if bin_width is not None:
        if bin_width <= 0:
            raise ValueError("bin_width must be positive")
        start = math.floor(lo / bin_width) * bin_width
        n = max(1, int(math.floor((hi - start) / bin_width)) + 1)
        edges = start + bin_width * np.arange(n + 1)
    elif np.ndim(bins) == 1:
        edges = np.asarray(bins, dtype=np.float64)
    else:
        if lo == hi:
            lo, hi = lo - 0.5, hi + 0.5
        edges = np.linspace(lo, hi, int(bins) + 1)
    idx = np.searchsorted(edges, v, side="right") - 1
    idx[v == edges[-1]] = len(edges) - 2
    inside = (idx >= 0) & (idx < len(edges) - 1)
    counts = np.bincount(idx[inside], minlength=len(edges) - 1)
    return counts, edges


def silverman_bandwidth(v):
    v = np.asarray(v, dtype=np.float64)
    sd = v.std(ddof=1) if v.size > 1 else 0.0
    q75, q25 = np.percentile(v, [75, 25])
    spread = min(sd, (q75 - q25) / 1.34) if q75 > q25 else sd
    return 0.9 * spread * v.size ** (-0.2)


def kde(values, bandwidth="auto", points=KDE_POINTS):
    """(xs, density, h): Gaussian kernel density on ``points`` samples over [min-3h, max+3h]."""
    v = _finite(values)
    if v.size < 2:
        raise ValueError("kde needs at least two values")
    if bandwidth == "auto":
        h = silverman_bandwidth(v)
        if h <= 0:
            h = KDE_FALLBACK_BANDWIDTH * max(1.0, abs(float(v.mean())))
            warnings.warn(f"zero spread; using fixed bandwidth {h:g}", RuntimeWarning, stacklevel=2)
    else:
        h = float(bandwidth)
        if not h > 0:
            raise ValueError("bandwidth must be positive or 'auto'")
    xs = np.linspace(v.min() - 3 * h, v.max() + 3 * h, points)
    dens = np.zeros_like(xs)
    for chunk in np.array_split(v, max(1, v.size // 4096)):
        z = (xs[:, None] - chunk[None, :]) / h
        dens += np.exp(-0.5 * z * z).sum(axis=1)
    dens /= v.size * h * math.sqrt(2 * math.pi)
    return xs, dens, h


def _frame(svg, x0, y0, w, h, xlo, xhi, ylo, yhi, xlabel, title):
    svg.line(x0, y0 + h, x0 + w, y0 + h)
    svg.line(x0, y0, x0, y0 + h)
    for i in range(5):
        t = i / 4
        xv = xlo + t * (xhi - xlo)
        yv = ylo + t * (yhi - ylo)
        svg.text(x0 + t * w, y0 + h + 16, f"{xv:.4g}", anchor="middle")
        svg.text(x0 - 6, y0 + h - t * h + 4, f"{yv:.4g}", anchor="end")
    if xlabel:
        svg.text(x0 + w / 2, y0 + h + 36, xlabel, anchor="middle")
    if title:
        svg.text(x0 + w / 2, y0 - 10, title, size=14, anchor="middle")


def _csv_text(header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\r\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def render_histogram(values, out, bins=10, bin_width=None, title="", xlabel="", size=(640, 400)):
    counts, edges = histogram(values, bins, bin_width)
    W, H = size
    x0, y0, w, h = 60, 40, W - 90, H - 100
    svg = Svg(W, H)
    top = max(1, int(counts.max()))
    _frame(svg, x0, y0, w, h, edges[0], edges[-1], 0, top, xlabel, title)
    span = edges[-1] - edges[0]
    for c, a, b in zip(counts, edges[:-1], edges[1:]):
        px = x0 + (a - edges[0]) / span * w
        pw = (b - a) / span * w
        ph = c / top * h
        svg.rect(px, y0 + h - ph, pw, ph, fill="#31688e", stroke="#ffffff")
    atomic_write_text(out, svg.render())
    rows = [(repr(float(a)), repr(float(b)), int(c)) for a, b, c in zip(edges[:-1], edges[1:], counts)]
    atomic_write_text(sidecar_path(out), _csv_text(["bin_start", "bin_end", "count"], rows))
    return counts, edges


def render_kde(values, out, bandwidth="auto", title="", xlabel="", size=(640, 400)):
    xs, dens, h = kde(values, bandwidth)
    W, H = size
    x0, y0, w, hh = 60, 40, W - 90, H - 100
    svg = Svg(W, H)
    top = float(dens.max()) or 1.0
    _frame(svg, x0, y0, w, hh, xs[0], xs[-1], 0, top, xlabel, title)
    span = xs[-1] - xs[0]
    pts = [(x0 + (x - xs[0]) / span * w, y0 + hh - d / top * hh) for x, d in zip(xs, dens)]
    svg.polyline(pts, stroke="#21918c", stroke_width=2)
    svg.text(x0 + w, y0 + 12, f"h = {h:.4g}", anchor="end")
    atomic_write_text(out, svg.render())
    rows = [(repr(float(x)), repr(float(d))) for x, d in zip(xs, dens)]
    atomic_write_text(sidecar_path(out), _csv_text(["x", "density"], rows))
    return xs, dens, h
