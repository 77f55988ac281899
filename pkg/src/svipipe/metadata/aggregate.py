"""Aggregate indicators per H3 cell or per street segment."""

from __future__ import annotations

import math
from dataclasses import dataclass
from datetime import date

import numpy as np
from shapely.geometry import LineString, Point, Polygon
from shapely.ops import unary_union

from ..geo import EARTH_RADIUS_M, GeoPoint, SegmentIndex, h3
from .enrich import RELATIVE_ANGLE_RADIUS_M

DEFAULT_BUFFER_M = 50.0
_M_PER_DEG = math.radians(1.0) * EARTH_RADIUS_M

AGGREGATE_FIELDS = [
    "unit_id",
    "coverage_pct",
    "count",
    "days_elapsed",
    "most_recent_date",
    "oldest_date",
    "number_of_years",
    "number_of_months",
    "number_of_days",
    "number_of_hours",
    "number_of_days_of_week",
    "number_of_daytime",
    "number_of_nighttime",
    "number_of_spring",
    "number_of_summer",
    "number_of_autumn",
    "number_of_winter",
    "number_of_users",
    "number_of_sequences",
    "number_of_organizations",
    "average_compass_angle",
    "average_relative_angle",
    "average_is_pano",
    "average_speed_kmh",
]


def circular_mean_deg(angles):
    """Mean direction of angles in degrees, in [0, 360); NaN when the vectors cancel."""
    a = np.radians(np.asarray(angles, dtype=float))
    if a.size == 0:
        return float("nan")
    s, c = float(np.sin(a).sum()), float(np.cos(a).sum())
    if math.hypot(s, c) < 1e-12 * a.size:
        return float("nan")
    deg = math.degrees(math.atan2(s, c)) % 360.0
    return 0.0 if deg >= 360.0 else deg


@dataclass
class LocalPlane:
    """Equirectangular projection to meters around an origin."""

    lat0: float
    lon0: float

    def xy(self, lat, lon):
        dlon = (np.asarray(lon, dtype=float) - self.lon0 + 540.0) % 360.0 - 180.0
        x = dlon * math.cos(math.radians(self.lat0)) * _M_PER_DEG
        y = (np.asarray(lat, dtype=float) - self.lat0) * _M_PER_DEG
        return x, y


class HexUnits:
    kind = "hex"

    def __init__(self, resolution=9):
        if not 0 <= resolution <= 15:
            raise ValueError("resolution must be in [0, 15]")
        self.resolution = resolution

    def assign(self, records):
        return {r.image_id: h3.cell_to_string(r.h3[self.resolution]) if self.resolution in r.h3
                else h3.cell_to_string(h3.latlng_to_cell(r.lat, r.lon, self.resolution))
                for r in records}

    def geometry(self, unit_id):
        ring = [(lon, lat) for lat, lon in h3.cell_to_boundary(h3.string_to_cell(unit_id))]
        return {"type": "Polygon", "coordinates": [ring + [ring[0]]]}

    def coverage(self, unit_id, lats, lons, buffer_m):
        cell = h3.string_to_cell(unit_id)
        clat, clon = h3.cell_to_latlng(cell)
        plane = LocalPlane(clat, clon)
        blat = [p[0] for p in h3.cell_to_boundary(cell)]
        blon = [p[1] for p in h3.cell_to_boundary(cell)]
        bx, by = plane.xy(blat, blon)
        poly = Polygon(list(zip(bx, by)))
        px, py = plane.xy(lats, lons)
        reach = math.sqrt(float(np.max(bx * bx + by * by))) + buffer_m
        near = np.hypot(px, py) <= reach
        if not near.any():
            return 0.0
        cover = unary_union([Point(x, y).buffer(buffer_m, 32) for x, y in zip(px[near], py[near])])
        return min(100.0, cover.intersection(poly).area / poly.area * 100.0)


class StreetUnits:
    kind = "street"

    def __init__(self, network, max_distance_m=RELATIVE_ANGLE_RADIUS_M):
        self.network = {s.id: s for s in network}
        self.index = SegmentIndex(network)
        self.max_distance_m = max_distance_m

    def assign(self, records):
        out = {}
        for r in records:
            hit = self.index.within(GeoPoint(r.lat, r.lon), self.max_distance_m)
            if hit is not None:
                out[r.image_id] = hit[0]
        return out

    def geometry(self, unit_id):
        seg = self.network[unit_id]
        return {"type": "LineString", "coordinates": [[p.lon, p.lat] for p in seg.polyline]}

    def coverage(self, unit_id, lats, lons, buffer_m):
        seg = self.network[unit_id]
        mid = seg.polyline[len(seg.polyline) // 2]
        plane = LocalPlane(mid.lat, mid.lon)
        sx, sy = plane.xy([p.lat for p in seg.polyline], [p.lon for p in seg.polyline])
        line = LineString(list(zip(sx, sy)))
        px, py = plane.xy(lats, lons)
        pts = np.column_stack([px, py])
        x0, y0, x1, y1 = line.bounds
        box = (px >= x0 - buffer_m) & (px <= x1 + buffer_m) & (py >= y0 - buffer_m) & (py <= y1 + buffer_m)
        near = [i for i in np.flatnonzero(box) if line.distance(Point(pts[i])) <= buffer_m]
        if not near:
            return 0.0
        cover = unary_union([Point(pts[i]).buffer(buffer_m, 32) for i in near])
        return min(100.0, line.intersection(cover).length / line.length * 100.0)


def _mean(values):
    vals = [v for v in values if v is not None and not (isinstance(v, float) and math.isnan(v))]
    return float(np.mean(vals)) if vals else float("nan")


def _summarise(unit_id, group, coverage):
    dates = sorted({date.fromisoformat(r.local_date) for r in group})
    seasons = [r.season for r in group]
    return {
        "unit_id": unit_id,
        "coverage_pct": coverage,
        "count": len(group),
        "days_elapsed": (dates[-1] - dates[0]).days,
        "most_recent_date": dates[-1].isoformat(),
        "oldest_date": dates[0].isoformat(),
        "number_of_years": len({r.year for r in group}),
        "number_of_months": len({(r.year, r.month) for r in group}),
        "number_of_days": len(dates),
        "number_of_hours": len({r.hour for r in group}),
        "number_of_days_of_week": len({r.day_of_week for r in group}),
        "number_of_daytime": sum(r.daytime_nighttime == "day" for r in group),
        "number_of_nighttime": sum(r.daytime_nighttime == "night" for r in group),
        "number_of_spring": seasons.count("spring"),
        "number_of_summer": seasons.count("summer"),
        "number_of_autumn": seasons.count("autumn"),
        "number_of_winter": seasons.count("winter"),
        "number_of_users": len({r.creator_id for r in group if r.creator_id}),
        "number_of_sequences": len({r.sequence_id for r in group if r.sequence_id}),
        "number_of_organizations": len({r.organization_id for r in group if r.organization_id}),
        "average_compass_angle": circular_mean_deg([r.compass_angle for r in group]),
        "average_relative_angle": _mean([r.relative_angle for r in group]),
        "average_is_pano": sum(bool(r.is_pano) for r in group) / len(group),
        "average_speed_kmh": _mean([r.speed_kmh for r in group]),
    }


def aggregate(records, unit, buffer_m=DEFAULT_BUFFER_M, coverage=True):
    """One row per non-empty unit, sorted by unit id.

    ``unit`` is a HexUnits or StreetUnits.  Coverage buffers use every record
    within reach of the unit, not only those assigned to it.
    """
    if buffer_m <= 0:
        raise ValueError("buffer_m must be positive")
    records = sorted(records, key=lambda r: r.image_id)
    if not records:
        return []
    assigned = unit.assign(records)
    groups = {}
    for r in records:
        u = assigned.get(r.image_id)
        if u is not None:
            groups.setdefault(u, []).append(r)
    lats = np.array([r.lat for r in records])
    lons = np.array([r.lon for r in records])
    rows = []
    for u in sorted(groups, key=lambda v: (str(type(v)), v)):
        cov = unit.coverage(u, lats, lons, buffer_m) if coverage else float("nan")
        rows.append(_summarise(u, groups[u], cov))
    return rows
