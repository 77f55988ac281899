"""Great-circle distance, bearings, H3 lookup and nearest-street snapping."""

from __future__ import annotations

import math

import numpy as np

from . import h3
from .types import GeoPoint, HexId, StreetSegment

EARTH_RADIUS_M = 6_371_000.0


def haversine_distance(a: GeoPoint, b: GeoPoint) -> float:
    p1, p2 = math.radians(a.lat), math.radians(b.lat)
    dp = p2 - p1
    dl = math.radians(b.lon - a.lon)
    s = math.sin(dp / 2) ** 2 + math.cos(p1) * math.cos(p2) * math.sin(dl / 2) ** 2
    return 2 * EARTH_RADIUS_M * math.asin(min(1.0, math.sqrt(s)))


def haversine_np(lat1, lon1, lat2, lon2):
    """Vectorised haversine on degree arrays, meters."""
    p1, p2 = np.radians(lat1), np.radians(lat2)
    dl = np.radians(np.asarray(lon2) - np.asarray(lon1))
    s = np.sin((p2 - p1) / 2) ** 2 + np.cos(p1) * np.cos(p2) * np.sin(dl / 2) ** 2
    return 2 * EARTH_RADIUS_M * np.arcsin(np.minimum(1.0, np.sqrt(s)))


def initial_bearing(a: GeoPoint, b: GeoPoint) -> float:
    if a == b:
        raise ValueError("undefined bearing")
    p1, p2 = math.radians(a.lat), math.radians(b.lat)
    dl = math.radians(b.lon - a.lon)
    y = math.sin(dl) * math.cos(p2)
    x = math.cos(p1) * math.sin(p2) - math.sin(p1) * math.cos(p2) * math.cos(dl)
    if x == 0.0 and y == 0.0:
        # antipodes or poles: direction not defined
        raise ValueError("undefined bearing")
    deg = math.degrees(math.atan2(y, x)) % 360.0
    return 0.0 if deg >= 360.0 else deg


def hex_index(p: GeoPoint, resolution: int) -> HexId:
    if isinstance(resolution, bool) or not isinstance(resolution, (int, np.integer)) or not 0 <= resolution <= 15:
        raise ValueError(f"resolution must be an integer in [0, 15], got {resolution!r}")
    res = int(resolution)
    return HexId(h3.latlng_to_cell(p.lat, p.lon, res), res)


def _id_key(seg_id):
    return (0, seg_id, "") if isinstance(seg_id, (int, float)) else (1, 0, str(seg_id))


class SegmentIndex:
    """Flattened sub-edges of a street network for repeated nearest-segment queries.

    Segments are visited in ascending id order so that exact ties resolve to the
    lowest id.
    """

    TIE_EPS_M = 1e-9

    def __init__(self, network):
        segs = sorted(network, key=lambda s: _id_key(s.id))
        if not segs:
            raise ValueError("empty network")
        ids = set()
        a_lat, a_lon, b_lat, b_lon, owner = [], [], [], [], []
        for n, seg in enumerate(segs):
            if seg.id in ids:
                raise ValueError(f"duplicate segment id {seg.id!r}")
            ids.add(seg.id)
            for p, q in zip(seg.polyline, seg.polyline[1:]):
                a_lat.append(p.lat)
                a_lon.append(p.lon)
                b_lat.append(q.lat)
                b_lon.append(q.lon)
                owner.append(n)
        self.segments = segs
        self.a_lat = np.array(a_lat)
        self.a_lon = np.array(a_lon)
        self.b_lat = np.array(b_lat)
        self.b_lon = np.array(b_lon)
        self.owner = np.array(owner)

    def _edge_distances(self, lat, lon):
        k = math.radians(1.0) * EARTH_RADIUS_M
        coslat = math.cos(math.radians(lat))
        dlon_a = (self.a_lon - lon + 540.0) % 360.0 - 180.0
        dlon_b = (self.b_lon - lon + 540.0) % 360.0 - 180.0
        ax, ay = dlon_a * coslat * k, (self.a_lat - lat) * k
        bx, by = dlon_b * coslat * k, (self.b_lat - lat) * k
        ex, ey = bx - ax, by - ay
        ll = ex * ex + ey * ey
        with np.errstate(invalid="ignore", divide="ignore"):
            t = np.where(ll > 0, -(ax * ex + ay * ey) / ll, 0.0)
        t = np.clip(t, 0.0, 1.0)
        cx, cy = ax + t * ex, ay + t * ey
        return np.hypot(cx, cy)

    def nearest(self, p: GeoPoint):
        d = self._edge_distances(p.lat, p.lon)
        best = float(d.min())
        # first edge within tolerance of the minimum belongs to the lowest id
        e = int(np.flatnonzero(d <= best + self.TIE_EPS_M)[0])
        seg = self.segments[self.owner[e]]
        a = GeoPoint(self.a_lat[e], self.a_lon[e])
        b = GeoPoint(self.b_lat[e], self.b_lon[e])
        return seg.id, best, initial_bearing(a, b)

    def within(self, p: GeoPoint, radius_m: float):
        """Nearest segment if it lies within ``radius_m``, else None."""
        hit = self.nearest(p)
        return hit if hit[1] <= radius_m else None


def snap_to_segment(p: GeoPoint, network):
    """Nearest street segment to ``p`` as (segment_id, distance_m, segment_bearing_deg)."""
    if isinstance(network, SegmentIndex):
        return network.nearest(p)
    network = list(network)
    if not network:
        raise ValueError("empty network")
    return SegmentIndex(network).nearest(p)
