"""Web-Mercator (slippy map) tile enumeration."""

from __future__ import annotations

import math
from dataclasses import dataclass

MAX_LAT = 85.0511287798066
MAX_ZOOM = 22


@dataclass(frozen=True, order=True)
class TileCoord:
    z: int
    x: int
    y: int

    def __post_init__(self):
        if not 0 <= self.z <= MAX_ZOOM:
            raise ValueError(f"zoom {self.z} outside [0, {MAX_ZOOM}]")
        n = 1 << self.z
        if not (0 <= self.x < n and 0 <= self.y < n):
            raise ValueError(f"tile {self.x},{self.y} outside range for z={self.z}")

    @property
    def unit_id(self) -> str:
        return f"tile:{self.z}/{self.x}/{self.y}"

    def bounds(self):
        """(west, south, east, north) in degrees."""
        n = 1 << self.z
        west = self.x / n * 360.0 - 180.0
        east = (self.x + 1) / n * 360.0 - 180.0
        north = math.degrees(math.atan(math.sinh(math.pi * (1 - 2 * self.y / n))))
        south = math.degrees(math.atan(math.sinh(math.pi * (1 - 2 * (self.y + 1) / n))))
        return west, south, east, north


def lonlat_to_tile(lon, lat, z):
    n = 1 << z
    lat = max(-MAX_LAT, min(MAX_LAT, lat))
    x = int(math.floor((lon + 180.0) / 360.0 * n))
    s = math.log(math.tan(math.pi / 4 + math.radians(lat) / 2))
    y = int(math.floor((1.0 - s / math.pi) / 2.0 * n))
    return min(max(x, 0), n - 1), min(max(y, 0), n - 1)


def split_antimeridian(west, south, east, north):
    """Split a (west, south, east, north) box into boxes that do not cross +-180.

    A box crosses when west > east, or when its east edge is given past 180.
    """
    if east > 180.0 and west <= 180.0:
        east -= 360.0
    if west < -180.0:
        west += 360.0
    if west > east:
        return [(west, south, 180.0, north), (-180.0, south, east, north)]
    return [(west, south, east, north)]


class TileSet:
    """Lazy, duplicate-free set of tiles covering one or more boxes.

    Stored as column/row ranges so that very large sets (the whole world at
    z=14 is 4**14 tiles) can be counted without materialising them.
    """

    def __init__(self, z, ranges):
        self.z = z
        merged = []
        for x0, x1, y0, y1 in sorted(ranges):
            # boxes from an antimeridian split never overlap in x unless one spans the world
            if merged and merged[-1][2] == y0 and merged[-1][3] == y1 and x0 <= merged[-1][1] + 1:
                a = merged[-1]
                merged[-1] = (a[0], max(a[1], x1), y0, y1)
            else:
                merged.append((x0, x1, y0, y1))
        self.ranges = self._disjoint(merged)

    @staticmethod
    def _disjoint(ranges):
        # make rectangles pairwise disjoint by trimming rows already covered
        out = []
        for x0, x1, y0, y1 in ranges:
            pieces = [(x0, x1, y0, y1)]
            for ox0, ox1, oy0, oy1 in out:
                nxt = []
                for px0, px1, py0, py1 in pieces:
                    if px1 < ox0 or px0 > ox1 or py1 < oy0 or py0 > oy1:
                        nxt.append((px0, px1, py0, py1))
                        continue
                    if px0 < ox0:
                        nxt.append((px0, ox0 - 1, py0, py1))
                    if px1 > ox1:
                        nxt.append((ox1 + 1, px1, py0, py1))
                    cx0, cx1 = max(px0, ox0), min(px1, ox1)
                    if py0 < oy0:
                        nxt.append((cx0, cx1, py0, oy0 - 1))
                    if py1 > oy1:
                        nxt.append((cx0, cx1, oy1 + 1, py1))
                pieces = nxt
            out.extend(pieces)
        return out

    def __len__(self):
        return sum((x1 - x0 + 1) * (y1 - y0 + 1) for x0, x1, y0, y1 in self.ranges)

    def __iter__(self):
        for x0, x1, y0, y1 in self.ranges:
            for x in range(x0, x1 + 1):
                for y in range(y0, y1 + 1):
                    yield TileCoord(self.z, x, y)

    def __contains__(self, t):
        return t.z == self.z and any(x0 <= t.x <= x1 and y0 <= t.y <= y1 for x0, x1, y0, y1 in self.ranges)

    def __repr__(self):
        return f"TileSet(z={self.z}, n={len(self)})"


def enumerate_tiles(region, z: int = 14) -> TileSet:
    """Tiles at zoom ``z`` intersecting ``region``.

    ``region`` is a BBox or a (west, south, east, north) tuple; west > east
    means the box crosses the antimeridian.
    """
    if isinstance(z, bool) or not isinstance(z, int) or not 0 <= z <= MAX_ZOOM:
        raise ValueError(f"zoom must be an integer in [0, {MAX_ZOOM}]")
    if hasattr(region, "min_lat"):
        box = (region.min_lon, region.min_lat, region.max_lon, region.max_lat)
    else:
        box = tuple(float(v) for v in region)
    ranges = []
    for w, s, e, n in split_antimeridian(*box):
        x0, y0 = lonlat_to_tile(w, n, z)
        x1, y1 = lonlat_to_tile(e, s, z)
        ranges.append((x0, x1, y0, y1))
    return TileSet(z, ranges)
