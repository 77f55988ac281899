"""Point, street-line and hex maps: SVG with legend plus a GeoJSON sidecar."""

from __future__ import annotations

import json
import math
import os

import numpy as np

from ..geo import GeoPoint, SegmentIndex, h3
from ..io_utils import atomic_write_text
from .colors import RAMP, Scale, hex_color
from .svg import Svg

KINDS = ("point", "line", "hex")


def _get(row, key):
    v = row.get(key) if isinstance(row, dict) else getattr(row, key, None)
    if isinstance(v, str):
        v = v.strip()
        if v == "" or v.lower() in ("na", "nan", "none"):
            return None
        return float(v)
    if v is None:
        return None
    v = float(v)
    return None if math.isnan(v) else v


def _has(rows, key):
    for r in rows:
        if (key in r) if isinstance(r, dict) else hasattr(r, key):
            return True
    return False


def _latlon(row):
    return _get(row, "lat"), _get(row, "lon")


def _reduce(groups, variable):
    """unit -> value: count when no variable, else the mean of non-missing values."""
    out = {}
    for unit, vals in groups.items():
        if variable is None:
            out[unit] = (float(len(vals)), len(vals))
        else:
            xs = [v for v in vals if v is not None]
            out[unit] = (sum(xs) / len(xs) if xs else None, len(vals))
    return out


def map_features(rows, kind="hex", variable=None, resolution=9, network=None):
    """GeoJSON features with ``value`` and ``count`` properties, in deterministic order."""
    rows = list(rows)
    if not rows:
        raise ValueError("nothing to map: no rows")
    if kind not in KINDS:
        raise ValueError(f"unknown map kind {kind!r}; expected one of {KINDS}")
    if variable and not _has(rows, variable):
        raise ValueError(f"variable not found in data: column {variable!r}")
    feats = []
    if kind == "point":
        for r in rows:
            lat, lon = _latlon(r)
            props = {"image_id": r.get("image_id") if isinstance(r, dict) else getattr(r, "image_id", None)}
            props["value"] = _get(r, variable) if variable else 1.0
            props["count"] = 1
            feats.append({"type": "Feature", "geometry": {"type": "Point", "coordinates": [lon, lat]},
                          "properties": props})
        return feats

    groups = {}
    pre = _has(rows, "cell_id") if kind == "hex" else False
    if kind == "hex" and pre:
        # already aggregated rows: one per cell
        for r in rows:
            cell = r["cell_id"] if isinstance(r, dict) else r.cell_id
            v = _get(r, variable) if variable else _get(r, "count")
            feats.append((cell, v, int(_get(r, "count") or 0)))
    elif kind == "hex":
        for r in rows:
            lat, lon = _latlon(r)
            cell = h3.cell_to_string(h3.latlng_to_cell(lat, lon, resolution))
            groups.setdefault(cell, []).append(_get(r, variable) if variable else 1.0)
    else:
        if not network:
            raise ValueError("line maps need a street network")
        index = network if isinstance(network, SegmentIndex) else SegmentIndex(list(network))
        for r in rows:
            lat, lon = _latlon(r)
            seg = index.nearest(GeoPoint(lat, lon))[0]
            groups.setdefault(seg, []).append(_get(r, variable) if variable else 1.0)

    if kind == "hex":
        items = feats if pre else [(u, v, n) for u, (v, n) in sorted(_reduce(groups, variable).items())]
        feats = []
        for cell, v, n in items:
            ring = [[lon, lat] for lat, lon in h3.cell_to_boundary(h3.string_to_cell(cell))]
            ring.append(ring[0])
            feats.append({"type": "Feature", "geometry": {"type": "Polygon", "coordinates": [ring]},
                          "properties": {"unit_id": cell, "value": v, "count": n}})
        return feats
    segs = {s.id: s for s in index.segments}
    for sid, (v, n) in sorted(_reduce(groups, variable).items()):
        coords = [[p.lon, p.lat] for p in segs[sid].polyline]
        feats.append({"type": "Feature", "geometry": {"type": "LineString", "coordinates": coords},
                      "properties": {"unit_id": sid, "value": v, "count": n}})
    return feats


def _coords(geom):
    t, c = geom["type"], geom["coordinates"]
    if t == "Point":
        return [c]
    if t == "LineString":
        return c
    return c[0]


class _Projector:
    """lon/lat to SVG pixels; equirectangular scaled by cos(mean latitude)."""

    def __init__(self, feats, box):
        pts = np.array([p for f in feats for p in _coords(f["geometry"])], dtype=np.float64)
        self.lon0, self.lat0 = pts[:, 0].min(), pts[:, 1].max()
        self.k = math.cos(math.radians(pts[:, 1].mean()))
        w = (pts[:, 0].max() - self.lon0) * self.k
        h = self.lat0 - pts[:, 1].min()
        x, y, bw, bh = box
        span = max(w, h)
        self.s = min(bw, bh) / span if span > 0 else 1.0
        self.ox = x + (bw - w * self.s) / 2
        self.oy = y + (bh - h * self.s) / 2

    def __call__(self, lon, lat):
        return self.ox + (lon - self.lon0) * self.k * self.s, self.oy + (self.lat0 - lat) * self.s


def _legend(svg, scale, x, y, label):
    svg.text(x, y - 8, label, size=12)
    if scale.breaks is not None:
        for i in range(scale.classes):
            yy = y + i * 18
            svg.rect(x, yy, 16, 14, fill=scale.color((scale.breaks[i] + scale.breaks[i + 1]) / 2))
            svg.text(x + 22, yy + 11, f"{scale.breaks[i]:.4g} - {scale.breaks[i + 1]:.4g}")
        return
    h = 160
    for i in range(0, len(RAMP), 4):
        svg.rect(x, y + h - (i + 4) / len(RAMP) * h, 16, h / len(RAMP) * 4 + 0.5, fill=hex_color(RAMP[i]))
    svg.text(x + 22, y + 10, f"{scale.hi:.4g}")
    svg.text(x + 22, y + h, f"{scale.lo:.4g}")


def render_map(rows, out, kind="hex", variable=None, resolution=9, network=None, classes=0,
               title="", size=(800, 600)):
    """Write ``out`` (SVG) and ``<out>.geojson``; returns the features."""
    feats = map_features(rows, kind, variable, resolution, network)
    W, H = size
    svg = Svg(W, H)
    proj = _Projector(feats, (20, 40, W - 200, H - 60))
    scale = Scale([f["properties"]["value"] for f in feats], classes)
    for f in feats:
        g = f["geometry"]
        col = scale.color(f["properties"]["value"])
        pts = [proj(lon, lat) for lon, lat in _coords(g)]
        if g["type"] == "Point":
            svg.circle(*pts[0], 4, fill=col, stroke="#333333", stroke_width=0.5)
        elif g["type"] == "LineString":
            svg.polyline(pts, stroke=col, stroke_width=3)
        else:
            svg.polygon(pts, fill=col, stroke="#ffffff", stroke_width=0.5)
    svg.text(20, 24, title or f"{kind} map: {variable or 'count'}", size=14)
    _legend(svg, scale, W - 160, 60, variable or "count")
    atomic_write_text(out, svg.render())
    atomic_write_text(os.path.splitext(out)[0] + ".geojson",
                      json.dumps({"type": "FeatureCollection", "features": feats}, indent=1))
    return feats
