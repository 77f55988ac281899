import math
from datetime import datetime, timezone

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from svipipe.acquire.records import ImageRecord
from svipipe.geo import GeoPoint, StreetSegment, h3
from svipipe.metadata.aggregate import AGGREGATE_FIELDS, HexUnits, StreetUnits, aggregate, circular_mean_deg
from svipipe.metadata.enrich import enrich, fold_relative_angle, local_time, season_for
from svipipe.metadata.io import read_enriched_csv, write_aggregates_csv, write_enriched_csv
from svipipe.metadata.solar import is_daytime, solar_elevation

from synth import synthetic_records


def _utc(*a):
    return datetime(*a, tzinfo=timezone.utc)


# solar position

def test_solar_noon_elevation_matches_declination():
    # at solar noon the elevation is 90 - |lat - declination|; June solstice declination is 23.44
    t = _utc(2021, 6, 21, 12, 2)  # equation of time is about -2 min
    assert solar_elevation(0.0, 0.0, t) == pytest.approx(90.0 - 23.44, abs=0.1)
    assert solar_elevation(23.44, 0.0, t) == pytest.approx(90.0, abs=0.2)


def test_solar_midnight_below_horizon():
    assert solar_elevation(0.0, 0.0, _utc(2021, 3, 20, 0, 0)) < -80.0


def test_solar_accepts_epoch_ms():
    t = _utc(2021, 6, 21, 6, 0)
    ms = int(t.timestamp() * 1000)
    assert solar_elevation(51.5, -0.1, ms) == solar_elevation(51.5, -0.1, t)


def test_twilight_widens_day():
    # about 20 minutes after sunset at the equator the sun is between 0 and -6 degrees
    t = _utc(2021, 3, 20, 18, 27)
    el = solar_elevation(0.0, 0.0, t)
    assert -6.0 < el < 0.0
    assert not is_daytime(0.0, 0.0, t)
    assert is_daytime(0.0, 0.0, t, twilight=True)


# calendar

def test_seasons():
    assert season_for(10.0, 1) == "winter"
    assert season_for(-10.0, 1) == "summer"
    assert season_for(0.0, 4) == "spring"
    assert season_for(-0.0001, 10) == "spring"


@settings(max_examples=200)
@given(st.floats(0, 359.999), st.floats(0, 359.999))
def test_fold_relative_angle_range_and_symmetry(c, b):
    a = fold_relative_angle(c, b)
    assert 0.0 <= a <= 90.0
    assert a == pytest.approx(fold_relative_angle(c, (b + 180.0) % 360.0), abs=1e-9)
    assert a == pytest.approx(fold_relative_angle(b, c), abs=1e-9)


def test_fold_examples():
    assert fold_relative_angle(10.0, 190.0) == 0.0
    assert fold_relative_angle(0.0, 90.0) == 90.0
    assert fold_relative_angle(0.0, 135.0) == 45.0


def _rec(i, lat=1.3, lon=103.85, t=0, compass=0.0, seq="q", creator="u"):
    return ImageRecord(str(i), lat, lon, t, compass, False, seq, creator)


def test_local_time_nautical_and_explicit():
    r = _rec(1, lon=103.85, t=int(_utc(2021, 1, 1, 20).timestamp() * 1000))
    assert local_time(r).hour == 3  # round(103.85 / 15) = 7
    assert local_time(r, "+08:00").hour == 4
    assert local_time(r, "UTC").hour == 20
    assert local_time(r, "Asia/Singapore").hour == 4


def test_speed_from_successor():
    # 0.001 degree of latitude is about 111.2 m; 10 s apart gives about 40 km/h
    a = _rec("a", lat=1.300, t=0)
    b = _rec("b", lat=1.301, t=10_000)
    c = _rec("c", lat=1.302, t=20_000, seq="other")
    out = {e.image_id: e for e in enrich([a, b, c])}
    expected = math.radians(0.001) * 6371000.0 / 10.0 * 3.6
    assert out["a"].speed_kmh == pytest.approx(expected, rel=1e-9)
    assert out["b"].speed_kmh == out["a"].speed_kmh  # last one copies its predecessor
    assert out["c"].speed_kmh is None


def test_relative_angle_uses_nearest_street():
    seg = StreetSegment("ns", (GeoPoint(1.29, 103.85), GeoPoint(1.31, 103.85)))
    r_near = _rec("n", lon=103.8501, compass=30.0)
    r_far = _rec("f", lon=103.9, compass=30.0)  # about 5.5 km away
    out = {e.image_id: e for e in enrich([r_near, r_far], network=[seg])}
    assert out["n"].relative_angle == pytest.approx(30.0, abs=1e-6)
    assert out["f"].relative_angle is None


def test_enriched_csv_round_trip(tmp_path):
    recs = enrich(synthetic_records(20, seed=3), resolution=[7, 9])
    p = tmp_path / "m.csv"
    write_enriched_csv(recs, p)
    back = read_enriched_csv(p)
    assert [b.record for b in back] == [r.record for r in recs]
    assert [b.h3 for b in back] == [r.h3 for r in recs]
    assert [b.speed_kmh for b in back] == [r.speed_kmh for r in recs]


# circular mean

def test_circular_mean_wraps():
    assert circular_mean_deg([350.0, 10.0]) == pytest.approx(0.0, abs=1e-9)
    assert circular_mean_deg([90.0]) == pytest.approx(90.0, abs=1e-12)
    assert math.isnan(circular_mean_deg([0.0, 180.0]))
    assert math.isnan(circular_mean_deg([]))


@settings(max_examples=200)
@given(st.lists(st.floats(0, 60), min_size=1, max_size=30), st.floats(0, 360))
def test_circular_mean_rotation_equivariant(angles, d):
    # angles confined to a 60 degree arc never cancel
    m0 = circular_mean_deg(angles)
    m1 = circular_mean_deg([(a + d) % 360.0 for a in angles])
    diff = (m1 - (m0 + d) + 180.0) % 360.0 - 180.0
    assert abs(diff) < 1e-9


# aggregation invariants

@settings(max_examples=15, deadline=None)
@given(st.integers(1, 120), st.integers(0, 10_000))
def test_aggregate_invariants(n, seed):
    recs = enrich(synthetic_records(n, seed=seed), resolution=8)
    rows = aggregate(recs, HexUnits(8), coverage=False)
    assert sum(r["count"] for r in rows) == n
    for r in rows:
        assert r["number_of_daytime"] + r["number_of_nighttime"] == r["count"]
        assert sum(r[f"number_of_{s}"] for s in ("spring", "summer", "autumn", "winter")) == r["count"]
        assert r["days_elapsed"] >= 0
        assert r["oldest_date"] <= r["most_recent_date"]
        assert 1 <= r["number_of_months"] <= r["count"]
        assert 0.0 <= r["average_is_pano"] <= 1.0
    assert [r["unit_id"] for r in rows] == sorted(r["unit_id"] for r in rows)


def test_aggregate_hex_matches_assignment():
    recs = enrich(synthetic_records(60, seed=9), resolution=9)
    rows = aggregate(recs, HexUnits(9), coverage=False)
    counts = {}
    for r in recs:
        k = h3.cell_to_string(h3.latlng_to_cell(r.lat, r.lon, 9))
        counts[k] = counts.get(k, 0) + 1
    assert {r["unit_id"]: r["count"] for r in rows} == counts


def test_coverage_bounds_and_monotone_in_buffer():
    recs = enrich(synthetic_records(40, seed=1, spread=0.002), resolution=9)
    small = {r["unit_id"]: r["coverage_pct"] for r in aggregate(recs, HexUnits(9), buffer_m=10.0)}
    big = {r["unit_id"]: r["coverage_pct"] for r in aggregate(recs, HexUnits(9), buffer_m=200.0)}
    for k in small:
        assert 0.0 < small[k] <= big[k] <= 100.0
    # a 200 m buffer around any point inside a ~170 m-edge res 9 cell that has
    # dense neighbours should cover nearly all of it
    assert max(big.values()) > 99.0


def test_street_aggregate_and_coverage():
    seg = StreetSegment("s1", (GeoPoint(1.300, 103.850), GeoPoint(1.300, 103.852)))
    # one image at the western end: buffer 50 m covers 50 m of a ~222 m street
    r = enrich([_rec("x", lat=1.300, lon=103.850)])
    rows = aggregate(r, StreetUnits([seg]), buffer_m=50.0)
    assert len(rows) == 1 and rows[0]["count"] == 1
    length = math.radians(0.002) * 6371000.0 * math.cos(math.radians(1.3))
    assert rows[0]["coverage_pct"] == pytest.approx(50.0 / length * 100.0, rel=1e-3)


def test_aggregate_csv_header(tmp_path):
    rows = aggregate(enrich(synthetic_records(5)), HexUnits(9), coverage=False)
    p = tmp_path / "a.csv"
    write_aggregates_csv(rows, p)
    assert p.read_text().splitlines()[0] == ",".join(AGGREGATE_FIELDS)


def test_bad_buffer():
    with pytest.raises(ValueError):
        aggregate([], HexUnits(9), buffer_m=0)
