"""Region inputs: points, CSV, GeoJSON, bounding box or place name."""

from __future__ import annotations

import csv
import json
import os
import re
from dataclasses import dataclass

import requests
from shapely.geometry import shape
from shapely.ops import unary_union

from ..geo import BBox, GeoPoint

LON_NAMES = ("lon", "lng", "long", "longitude", "x")
LAT_NAMES = ("lat", "latitude", "y")

_NUM = r"\s*(-?\d+(?:\.\d*)?(?:[eE][-+]?\d+)?)\s*"
_BBOX_RE = re.compile(f"^{_NUM},{_NUM},{_NUM},{_NUM}$")
_POINT_RE = re.compile(f"^{_NUM},{_NUM}$")


class PlaceNotFound(LookupError):
    pass


@dataclass
class RegionInput:
    kind: str  # points | csv | geojson | bbox | place
    value: object

    KINDS = ("points", "csv", "geojson", "bbox", "place")

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise ValueError(f"unknown region kind {self.kind!r}")

    @classmethod
    def detect(cls, text: str) -> "RegionInput":
        """Classify a CLI string.

        Existing files go by extension; ``w,s,e,n`` is a bbox (lon/lat order);
        ``lat,lon`` is a single point; anything else is a place name.
        """
        if os.path.exists(text):
            ext = os.path.splitext(text)[1].lower()
            if ext == ".csv":
                return cls("csv", text)
            if ext in (".geojson", ".json"):
                return cls("geojson", text)
            if ext == ".shp":
                raise ValueError("shapefile input is not supported; convert it to GeoJSON first (e.g. ogr2ogr -f GeoJSON out.geojson in.shp)")
            raise ValueError(f"unrecognised region file type: {text}")
        m = _BBOX_RE.match(text)
        if m:
            return cls("bbox", tuple(float(g) for g in m.groups()))
        m = _POINT_RE.match(text)
        if m:
            return cls("points", [(float(m.group(1)), float(m.group(2)))])
        return cls("place", text)


@dataclass
class Region:
    bbox: BBox
    polygon: object = None  # shapely geometry in lon/lat, when the source has one
    crosses_antimeridian: bool = False

    def tile_box(self):
        """(west, south, east, north); west > east for antimeridian-crossing boxes."""
        b = self.bbox
        if self.crosses_antimeridian:
            return (b.max_lon, b.min_lat, b.min_lon, b.max_lat)
        return (b.min_lon, b.min_lat, b.max_lon, b.max_lat)

    def contains(self, lat, lon) -> bool:
        b = self.bbox
        if not b.min_lat <= lat <= b.max_lat:
            return False
        if self.crosses_antimeridian:
            if b.min_lon < lon < b.max_lon:
                return False
        elif not b.min_lon <= lon <= b.max_lon:
            return False
        if self.polygon is not None:
            from shapely.geometry import Point

            return self.polygon.intersects(Point(lon, lat))
        return True


def _pick(header, names):
    low = {h.strip().lower(): h for h in header}
    for n in names:
        if n in low:
            return low[n]
    for h in header:
        hl = h.lower()
        if any(n in hl for n in names if len(n) > 2):
            return h
    return None


def points_from_csv(path):
    with open(path, newline="", encoding="utf-8-sig") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        lon_col, lat_col = _pick(header, LON_NAMES), _pick(header, LAT_NAMES)
        if lon_col is None or lat_col is None:
            raise ValueError(f"no coordinates: {path} has no longitude/latitude columns")
        pts = []
        for row in reader:
            lon, lat = row.get(lon_col, ""), row.get(lat_col, "")
            if lon.strip() == "" or lat.strip() == "":
                continue
            pts.append(GeoPoint(float(lat), float(lon)))
    if not pts:
        raise ValueError(f"no coordinates: {path} has no rows")
    return pts


def _walk_coords(c, out):
    if isinstance(c, (list, tuple)) and c and isinstance(c[0], (int, float)):
        out.append(GeoPoint(float(c[1]), float(c[0])))
    elif isinstance(c, (list, tuple)):
        for x in c:
            _walk_coords(x, out)


def region_from_geojson_obj(obj) -> Region:
    if obj.get("type") == "FeatureCollection":
        geoms = [f.get("geometry") for f in obj.get("features", [])]
    elif obj.get("type") == "Feature":
        geoms = [obj.get("geometry")]
    else:
        geoms = [obj]
    geoms = [g for g in geoms if g]
    pts = []
    areas = []
    for g in geoms:
        if g["type"] == "GeometryCollection":
            sub = g.get("geometries", [])
        else:
            sub = [g]
        for s in sub:
            _walk_coords(s.get("coordinates"), pts)
            if s["type"] in ("Polygon", "MultiPolygon"):
                areas.append(shape(s))
    if not pts:
        raise ValueError("no coordinates in GeoJSON")
    poly = unary_union(areas) if areas else None
    return Region(BBox.from_points(pts), poly)


class HttpGeocoder:
    """Nominatim-style geocoder: GET {base}/search?q=...&format=json&polygon_geojson=1."""

    def __init__(self, base_url="https://nominatim.openstreetmap.org", session=None, timeout=20.0,
                 user_agent="svipipe"):
        self.base_url = base_url.rstrip("/")
        self.session = session or requests.Session()
        self.timeout = timeout
        self.user_agent = user_agent

    def geocode(self, name):
        r = self.session.get(
            f"{self.base_url}/search",
            params={"q": name, "format": "json", "polygon_geojson": 1, "limit": 1},
            headers={"User-Agent": self.user_agent},
            timeout=self.timeout,
        )
        r.raise_for_status()
        hits = r.json()
        return hits[0] if hits else None


def _region_from_place(hit) -> Region:
    gj = hit.get("geojson")
    if gj:
        return region_from_geojson_obj(gj)
    # nominatim boundingbox is [south, north, west, east] as strings
    s, n, w, e = (float(v) for v in hit["boundingbox"])
    return Region(BBox(s, w, n, e))


def parse_region(region, geocoder=None) -> Region:
    """Resolve a region input to a bounding box and, where available, a clip polygon."""
    if isinstance(region, Region):
        return region
    if isinstance(region, BBox):
        return Region(region)
    if isinstance(region, str):
        region = RegionInput.detect(region)
    elif isinstance(region, (list, tuple)):
        if len(region) == 4 and all(isinstance(v, (int, float)) for v in region):
            region = RegionInput("bbox", tuple(region))
        else:
            region = RegionInput("points", region)

    kind, value = region.kind, region.value
    if kind == "points":
        pts = [p if isinstance(p, GeoPoint) else GeoPoint(float(p[0]), float(p[1])) for p in value]
        if not pts:
            raise ValueError("no coordinates")
        return Region(BBox.from_points(pts))
    if kind == "csv":
        return Region(BBox.from_points(points_from_csv(value)))
    if kind == "geojson":
        with open(value, encoding="utf-8") as fh:
            return region_from_geojson_obj(json.load(fh))
    if kind == "bbox":
        if isinstance(value, BBox):
            return Region(value)
        w, s, e, n = (float(v) for v in value)
        if w > e:
            return Region(BBox(s, e, n, w), crosses_antimeridian=True)
        return Region(BBox(s, w, n, e))
    if kind == "place":
        if geocoder is None:
            raise ValueError("a geocoder is required for place-name regions")
        hit = geocoder.geocode(value)
        if not hit:
            raise PlaceNotFound(f"place not found: {value}")
        return _region_from_place(hit)
    raise ValueError(f"unknown region kind {kind!r}")
