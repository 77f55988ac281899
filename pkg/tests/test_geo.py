import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from svipipe.geo.geodesy import haversine_np
from svipipe.geo import (
    EARTH_RADIUS_M,
    BBox,
    GeoPoint,
    HexId,
    SegmentIndex,
    StreetSegment,
    haversine_distance,
    hex_index,
    initial_bearing,
    load_network,
    normalize_lon,
    segments_from_geojson,
    snap_to_segment,
)


def test_one_degree_of_latitude():
    # arc length R * pi / 180
    d = haversine_distance(GeoPoint(0, 0), GeoPoint(1, 0))
    assert d == pytest.approx(EARTH_RADIUS_M * math.pi / 180, rel=1e-12)


def test_quarter_meridian():
    assert haversine_distance(GeoPoint(0, 0), GeoPoint(90, 0)) == pytest.approx(EARTH_RADIUS_M * math.pi / 2)


def test_vectorised_matches_scalar(rng):
    la1, la2 = rng.uniform(-80, 80, 50), rng.uniform(-80, 80, 50)
    lo1, lo2 = rng.uniform(-180, 180, 50), rng.uniform(-180, 180, 50)
    v = haversine_np(la1, lo1, la2, lo2)
    for i in range(50):
        assert v[i] == pytest.approx(haversine_distance(GeoPoint(la1[i], lo1[i]), GeoPoint(la2[i], lo2[i])), rel=1e-12)


def test_cardinal_bearings():
    o = GeoPoint(0, 0)
    assert initial_bearing(o, GeoPoint(1, 0)) == pytest.approx(0.0)
    assert initial_bearing(o, GeoPoint(0, 1)) == pytest.approx(90.0)
    assert initial_bearing(o, GeoPoint(-1, 0)) == pytest.approx(180.0)
    assert initial_bearing(o, GeoPoint(0, -1)) == pytest.approx(270.0)


def test_bearing_undefined():
    with pytest.raises(ValueError, match="undefined bearing"):
        initial_bearing(GeoPoint(10, 10), GeoPoint(10, 10))


def test_point_validation():
    with pytest.raises(ValueError):
        GeoPoint(91, 0)
    with pytest.raises(ValueError):
        GeoPoint(float("nan"), 0)
    assert GeoPoint(0, 190).lon == pytest.approx(-170)
    assert normalize_lon(-180.0) == 180.0


def test_bbox_errors():
    with pytest.raises(ValueError, match="no coordinates"):
        BBox.from_points([])
    with pytest.raises(ValueError):
        BBox(2, 0, 1, 1)
    b = BBox.from_points([GeoPoint(1, 2), GeoPoint(-1, 5)])
    assert b.as_tuple() == (-1, 2, 1, 5)


def test_hex_index_resolution_check():
    with pytest.raises(ValueError):
        hex_index(GeoPoint(0, 0), 16)
    with pytest.raises(ValueError):
        hex_index(GeoPoint(0, 0), True)
    h = hex_index(GeoPoint(37.7752702151959, -122.418307270836), 9)
    assert str(h) == "8928308280fffff"
    assert HexId.from_str(str(h)) == h
    assert h.parent(8).resolution == 8


def _seg(sid, *pts):
    return StreetSegment(sid, tuple(GeoPoint(*p) for p in pts))


def test_snap_nearest_and_distance():
    net = [_seg("a", (0, 0), (0, 0.01)), _seg("b", (0.001, 0), (0.001, 0.01))]
    sid, dist, bearing = snap_to_segment(GeoPoint(0.0002, 0.005), net)
    assert sid == "a"
    assert dist == pytest.approx(0.0002 * math.pi / 180 * EARTH_RADIUS_M, rel=1e-6)
    assert bearing == pytest.approx(90.0, abs=1e-6)


def test_snap_tie_goes_to_lowest_id():
    net = [_seg("z", (0.001, 0), (0.001, 0.01)), _seg("m", (-0.001, 0), (-0.001, 0.01))]
    assert snap_to_segment(GeoPoint(0.0, 0.005), net)[0] == "m"


def test_snap_empty_network():
    with pytest.raises(ValueError):
        snap_to_segment(GeoPoint(0, 0), [])


def test_duplicate_ids_rejected():
    with pytest.raises(ValueError, match="duplicate"):
        SegmentIndex([_seg("a", (0, 0), (0, 1)), _seg("a", (1, 0), (1, 1))])


def test_within_radius():
    idx = SegmentIndex([_seg("a", (0, 0), (0, 0.01))])
    assert idx.within(GeoPoint(0.01, 0.005), 500) is None
    assert idx.within(GeoPoint(0.001, 0.005), 500)[0] == "a"


def test_geojson_network(tmp_path):
    obj = {"type": "FeatureCollection", "features": [
        {"type": "Feature", "properties": {"id": "m"}, "geometry": {
            "type": "MultiLineString", "coordinates": [[[0, 0], [0, 1]], [[1, 0], [1, 1], [1, 1]]]}},
        {"type": "Feature", "properties": {}, "geometry": {"type": "Point", "coordinates": [0, 0]}},
    ]}
    segs = segments_from_geojson(obj)
    assert [s.id for s in segs] == ["m:0", "m:1"]
    assert len(segs[1].polyline) == 2


def test_bundled_network(mini_dir):
    segs = load_network(f"{mini_dir}/network.geojson")
    assert len(segs) == 12


@settings(max_examples=200, deadline=None)
@given(st.floats(-60, 60), st.floats(-179, 179), st.floats(-60, 60), st.floats(-179, 179))
def test_haversine_symmetric_and_bounded(a, b, c, d):
    p, q = GeoPoint(a, b), GeoPoint(c, d)
    assert haversine_distance(p, q) == pytest.approx(haversine_distance(q, p), abs=1e-6)
    assert 0 <= haversine_distance(p, q) <= math.pi * EARTH_RADIUS_M + 1e-6


@settings(max_examples=100, deadline=None)
@given(st.floats(-1, 1), st.floats(-1, 1))
def test_snap_distance_not_more_than_vertex_distance(lat, lon):
    segs = [_seg(f"s{i}", (0.1 * i - 0.5, -1), (0.1 * i - 0.5, 1)) for i in range(10)]
    p = GeoPoint(lat, lon)
    sid, dist, _ = snap_to_segment(p, segs)
    nearest_vertex = min(haversine_distance(p, v) for s in segs for v in s.polyline)
    assert dist <= nearest_vertex * (1 + 1e-3) + 1e-6
    assert np.isfinite(dist)
