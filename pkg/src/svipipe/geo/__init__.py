from .geodesy import (
    EARTH_RADIUS_M,
    SegmentIndex,
    haversine_distance,
    hex_index,
    initial_bearing,
    snap_to_segment,
)
from .network import load_network, segments_from_geojson
from .types import BBox, GeoPoint, HexId, StreetSegment, normalize_lon

__all__ = [
    "EARTH_RADIUS_M",
    "BBox",
    "GeoPoint",
    "HexId",
    "SegmentIndex",
    "StreetSegment",
    "haversine_distance",
    "hex_index",
    "initial_bearing",
    "load_network",
    "normalize_lon",
    "segments_from_geojson",
    "snap_to_segment",
]
