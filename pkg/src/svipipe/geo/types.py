from __future__ import annotations

import math
from dataclasses import dataclass

from . import h3


def normalize_lon(lon: float) -> float:
    """Wrap a longitude into (-180, 180]."""
    x = math.fmod(lon, 360.0)
    if x <= -180.0:
        x += 360.0
    elif x > 180.0:
        x -= 360.0
    return x


@dataclass(frozen=True)
class GeoPoint:
    lat: float
    lon: float

    def __post_init__(self):
        if not (math.isfinite(self.lat) and math.isfinite(self.lon)):
            raise ValueError(f"non-finite coordinate ({self.lat}, {self.lon})")
        if not -90.0 <= self.lat <= 90.0:
            raise ValueError(f"latitude {self.lat} outside [-90, 90]")
        object.__setattr__(self, "lon", normalize_lon(float(self.lon)))
        object.__setattr__(self, "lat", float(self.lat))


@dataclass(frozen=True)
class BBox:
    min_lat: float
    min_lon: float
    max_lat: float
    max_lon: float

    def __post_init__(self):
        if self.min_lat > self.max_lat:
            raise ValueError("bbox min_lat > max_lat")
        if self.min_lon > self.max_lon:
            raise ValueError("bbox min_lon > max_lon")

    @classmethod
    def from_points(cls, points) -> "BBox":
        pts = list(points)
        if not pts:
            raise ValueError("no coordinates")
        lats = [p.lat for p in pts]
        lons = [p.lon for p in pts]
        return cls(min(lats), min(lons), max(lats), max(lons))

    def contains(self, p: GeoPoint) -> bool:
        return self.min_lat <= p.lat <= self.max_lat and self.min_lon <= p.lon <= self.max_lon

    def as_tuple(self):
        return (self.min_lat, self.min_lon, self.max_lat, self.max_lon)


@dataclass(frozen=True)
class StreetSegment:
    id: object
    polyline: tuple

    def __post_init__(self):
        pts = tuple(self.polyline)
        if len(pts) < 2:
            raise ValueError(f"segment {self.id!r} needs at least 2 points")
        for a, b in zip(pts, pts[1:]):
            if a == b:
                raise ValueError(f"segment {self.id!r} has repeated consecutive points")
        object.__setattr__(self, "polyline", pts)


@dataclass(frozen=True)
class HexId:
    value: int
    resolution: int

    def __post_init__(self):
        if not h3.is_valid_cell(self.value):
            raise ValueError(f"invalid H3 index {self.value:#x}")
        if h3.get_resolution(self.value) != self.resolution:
            raise ValueError("resolution does not match index")

    @classmethod
    def from_int(cls, value: int) -> "HexId":
        return cls(value, h3.get_resolution(value))

    @classmethod
    def from_str(cls, s: str) -> "HexId":
        return cls.from_int(h3.string_to_cell(s))

    def __str__(self):
        return h3.cell_to_string(self.value)

    def parent(self, res: int) -> "HexId":
        return HexId(h3.cell_to_parent(self.value, res), res)

    def center(self) -> GeoPoint:
        return GeoPoint(*h3.cell_to_latlng(self.value))

    def boundary(self):
        return [GeoPoint(lat, lon) for lat, lon in h3.cell_to_boundary(self.value)]
