"""Street networks from GeoJSON LineString / MultiLineString features."""

import json

from .types import GeoPoint, StreetSegment


def _dedupe(coords):
    out = []
    for c in coords:
        p = GeoPoint(float(c[1]), float(c[0]))
        if not out or out[-1] != p:
            out.append(p)
    return out


def segments_from_geojson(obj, id_property="id"):
    """Parse a FeatureCollection (dict) into StreetSegments.

    MultiLineString parts become separate segments with ids ``<id>:<part>``.
    Features without an id get their ordinal position.
    """
    if obj.get("type") == "Feature":
        features = [obj]
    elif obj.get("type") == "FeatureCollection":
        features = obj.get("features", [])
    else:
        raise ValueError("expected a GeoJSON Feature or FeatureCollection")
    segs = []
    for n, feat in enumerate(features):
        geom = feat.get("geometry") or {}
        props = feat.get("properties") or {}
        fid = props.get(id_property, feat.get("id", n))
        kind = geom.get("type")
        if kind == "LineString":
            parts = [geom["coordinates"]]
        elif kind == "MultiLineString":
            parts = geom["coordinates"]
        else:
            continue
        for k, part in enumerate(parts):
            pts = _dedupe(part)
            if len(pts) < 2:
                continue
            sid = fid if len(parts) == 1 else f"{fid}:{k}"
            segs.append(StreetSegment(sid, tuple(pts)))
    return segs


def load_network(path, id_property="id"):
    with open(path, encoding="utf-8") as fh:
        return segments_from_geojson(json.load(fh), id_property)
