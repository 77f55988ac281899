import json
import os

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from svipipe.acquire.checkpoint import DONE, FAILED, Checkpoint
from svipipe.acquire.download import download_all, parse_filters
from svipipe.acquire.mockserver import MockProviderServer, MockState, load_corpus_state
from svipipe.acquire.providers import AuthError, HttpProvider
from svipipe.acquire.ratelimit import RetryExhausted, TokenBucket, backoff_delays, call_with_retry
from svipipe.acquire.records import ImageRecord, iso_to_ms, ms_to_iso, read_records_csv, write_records_csv
from svipipe.acquire.region import HttpGeocoder, PlaceNotFound, RegionInput, parse_region
from svipipe.acquire.tiles import TileCoord, enumerate_tiles, lonlat_to_tile, split_antimeridian

from conftest import MINI, MINI_BBOX


# tiles

def test_tile_zero_covers_world():
    assert lonlat_to_tile(0.0, 0.0, 0) == (0, 0)
    w, s, e, n = TileCoord(0, 0, 0).bounds()
    assert (w, e) == (-180.0, 180.0)
    assert n == pytest.approx(85.0511287798066, abs=1e-9)
    assert s == pytest.approx(-85.0511287798066, abs=1e-9)


def test_tile_known_value():
    # slippy-map reference: Berlin Brandenburger Tor at z=14
    assert lonlat_to_tile(13.37771, 52.51628, 14) == (8800, 5373)


def test_tile_range_check():
    with pytest.raises(ValueError):
        TileCoord(3, 8, 0)
    with pytest.raises(ValueError):
        enumerate_tiles((0, 0, 1, 1), 23)


def test_split_antimeridian():
    assert split_antimeridian(170, -10, -170, 10) == [(170, -10, 180.0, 10), (-180.0, -10, -170, 10)]
    assert split_antimeridian(170, -10, 190, 10) == [(170, -10, 180.0, 10), (-180.0, -10, -170, 10)]
    assert split_antimeridian(-10, -10, 10, 10) == [(-10, -10, 10, 10)]


def test_antimeridian_tiles_both_sides():
    ts = enumerate_tiles((179.9, -0.1, -179.9, 0.1), 10)
    xs = {t.x for t in ts}
    assert 0 in xs and 1023 in xs
    assert len(xs) == 2


def test_world_tileset_is_lazy():
    ts = enumerate_tiles((-180, -90, 180, 90), 14)
    assert len(ts) == 4 ** 14


@settings(max_examples=60, deadline=None)
@given(
    st.floats(-179.0, 178.0), st.floats(-60.0, 59.0),
    st.floats(0.001, 1.0), st.floats(0.001, 1.0), st.integers(0, 12),
)
def test_tileset_no_duplicates_and_covers_corners(w, s, dw, dh, z):
    box = (w, s, w + dw, s + dh)
    ts = enumerate_tiles(box, z)
    tiles = list(ts)
    assert len(tiles) == len(set(tiles)) == len(ts)
    for lon, lat in ((box[0], box[1]), (box[2], box[3]), (box[0], box[3]), (box[2], box[1])):
        x, y = lonlat_to_tile(lon, lat, z)
        assert TileCoord(z, x, y) in ts


# checkpoint

def test_checkpoint_replay_and_torn_line(tmp_path):
    p = tmp_path / "ck.tsv"
    with Checkpoint(p) as ck:
        ck.record("a", DONE)
        ck.record("b", FAILED)
        ck.record("b", DONE)
    with open(p, "a", encoding="utf-8") as fh:
        fh.write("c\tdo")  # crash mid-write
    ck = Checkpoint(p)
    assert ck.is_done("a") and ck.is_done("b")
    assert not ck.is_done("c")
    ck.record("d", DONE)
    ck.close()
    ck = Checkpoint(p)
    assert ck.is_done("d") and not ck.is_done("c")
    ck.close()


# rate limiting and retry

class FakeClock:
    def __init__(self):
        self.t = 0.0

    def __call__(self):
        return self.t

    def sleep(self, d):
        self.t += d


def test_token_bucket_rate():
    clk = FakeClock()
    b = TokenBucket(rate=5.0, capacity=1.0, clock=clk, sleep=clk.sleep)
    for _ in range(11):
        b.acquire()
    # first token is free, the next ten cost 0.2 s each
    assert clk.t == pytest.approx(2.0, abs=1e-9)


def test_backoff_delays():
    assert backoff_delays(5, 1.0, 2.0) == [1.0, 2.0, 4.0, 8.0]


def test_call_with_retry_exhausts():
    slept = []
    calls = []

    def boom():
        calls.append(1)
        raise KeyError("x")

    with pytest.raises(RetryExhausted) as ei:
        call_with_retry(boom, KeyError, max_attempts=3, base=0.5, sleep=slept.append)
    assert ei.value.attempts == 3
    assert len(calls) == 3
    assert slept == [0.5, 1.0]


def test_call_with_retry_other_errors_propagate():
    def bad():
        raise ZeroDivisionError

    with pytest.raises(ZeroDivisionError):
        call_with_retry(bad, KeyError, sleep=lambda s: None)


# records

def test_iso_round_trip():
    assert ms_to_iso(0) == "1970-01-01T00:00:00.000Z"
    assert iso_to_ms("2021-06-01T12:00:00.250Z") == 1622548800250
    assert iso_to_ms(ms_to_iso(1622548800250)) == 1622548800250


def test_record_validation():
    with pytest.raises(ValueError):
        ImageRecord("1", 91.0, 0.0, 0, 0.0, False, "s", "c")
    with pytest.raises(ValueError):
        ImageRecord("1", 0.0, 0.0, 0, 360.0, False, "s", "c")


def test_records_csv_round_trip(tmp_path):
    recs = [
        ImageRecord("7", 1.5, 103.25, 1622548800250, 12.5, True, "seq", "me", None, "images/7.jpg"),
        ImageRecord("8", -33.0, 151.0, 0, 359.5, False, "seq2", "you", "org"),
    ]
    p = tmp_path / "images.csv"
    write_records_csv(recs, p)
    assert read_records_csv(p) == recs
    assert open(p, "rb").read().startswith(b"image_id,lat,lon,captured_at,")


def test_record_from_dict_variants():
    r = ImageRecord.from_dict({"id": 5, "geometry": {"coordinates": [10.0, 20.0]},
                               "captured_at": "1970-01-01T00:00:01Z", "computed_compass_angle": -90})
    assert (r.image_id, r.lat, r.lon, r.captured_at, r.compass_angle) == ("5", 20.0, 10.0, 1000, 270.0)


# region

def test_region_detect(tmp_path):
    assert RegionInput.detect("1.0,2.0,3.0,4.0").kind == "bbox"
    assert RegionInput.detect("1.3,103.8").kind == "points"
    assert RegionInput.detect("Singapore").kind == "place"
    shp = tmp_path / "x.shp"
    shp.write_bytes(b"")
    with pytest.raises(ValueError, match="ogr2ogr"):
        RegionInput.detect(str(shp))


def test_region_bbox_order_and_antimeridian():
    r = parse_region("103.8,1.2,104.0,1.4")
    assert r.bbox.as_tuple() == (1.2, 103.8, 1.4, 104.0)
    r = parse_region("170,-10,-170,10")
    assert r.crosses_antimeridian
    assert r.contains(0.0, 179.0) and r.contains(0.0, -179.0)
    assert not r.contains(0.0, 0.0)


def test_region_csv_columns(tmp_path):
    p = tmp_path / "pts.csv"
    p.write_text("name,Latitude,Longitude\na,1.0,2.0\nb,3.0,4.0\n")
    r = parse_region(str(p))
    assert r.bbox.as_tuple() == (1.0, 2.0, 3.0, 4.0)
    q = tmp_path / "none.csv"
    q.write_text("a,b\n1,2\n")
    with pytest.raises(ValueError, match="no coordinates"):
        parse_region(str(q))


def test_region_geojson_polygon_clips(tmp_path):
    poly = {"type": "Polygon", "coordinates": [[[0, 0], [2, 0], [0, 2], [0, 0]]]}
    p = tmp_path / "r.geojson"
    p.write_text(json.dumps(poly))
    r = parse_region(str(p))
    assert r.contains(0.5, 0.5)
    assert not r.contains(1.9, 1.9)  # inside the bbox, outside the triangle


def test_place_lookup(mock_server):
    geo = HttpGeocoder(mock_server.url)
    r = parse_region("mini town", geo)
    assert r.polygon is not None
    with pytest.raises(PlaceNotFound):
        parse_region("atlantis", geo)


# download against the mock server

def _images(out):
    return sorted(os.listdir(os.path.join(out, "images")))


def test_download_mini(mock_server, tmp_path):
    prov = HttpProvider(mock_server.url)
    res = download_all(prov, MINI_BBOX, workers=4, out_dir=tmp_path, rate=500, backoff_base=0.01)
    with open(os.path.join(MINI, "images.json")) as fh:
        n_all = len(json.load(fh))
    assert len(res.records) == n_all
    assert not res.failed
    assert len(_images(tmp_path)) == n_all
    assert mock_server.state.metrics()["max_inflight"] <= 4
    # a second run is a no-op
    before = mock_server.state.metrics()["requests"]
    res2 = download_all(prov, MINI_BBOX, workers=4, out_dir=tmp_path, rate=500)
    assert mock_server.state.metrics()["requests"] == before
    assert [r.image_id for r in res2.records] == [r.image_id for r in res.records]


def test_download_filters(mock_server, tmp_path):
    prov = HttpProvider(mock_server.url)
    res = download_all(prov, MINI_BBOX, filters=["is_pano=false"], out_dir=tmp_path, rate=500)
    assert res.records and all(not r.is_pano for r in res.records)
    with pytest.raises(ValueError, match="unknown filter key"):
        download_all(prov, MINI_BBOX, filters=["colour=red"], out_dir=tmp_path / "b", rate=500)
    assert parse_filters(["a=b=c"]) == {"a": "b=c"}


def test_download_retries_429(tmp_path):
    state = load_corpus_state(MINI, faults={"fail_first": 2})
    with MockProviderServer(state) as srv:
        res = download_all(HttpProvider(srv.url), MINI_BBOX, workers=3, out_dir=tmp_path,
                           rate=1000, backoff_base=0.001)
        assert not res.failed
        assert srv.state.metrics()["max_inflight"] <= 3


def test_download_exhausted_unit_is_recorded(tmp_path):
    state = load_corpus_state(MINI, faults={"fail_first": 100})
    with MockProviderServer(state) as srv:
        res = download_all(HttpProvider(srv.url), MINI_BBOX, workers=2, out_dir=tmp_path,
                           rate=1000, max_attempts=2, backoff_base=0.001)
    assert res.records == []
    assert res.failed
    text = open(tmp_path / "images.errors.csv").read()
    assert "HTTP 429" in text


def test_download_bad_key_aborts(tmp_path):
    state = load_corpus_state(MINI, api_key="secret")
    with MockProviderServer(state) as srv:
        with pytest.raises(AuthError):
            download_all(HttpProvider(srv.url, api_key="wrong"), MINI_BBOX, out_dir=tmp_path, rate=1000)


def test_mock_empty_state_serves_empty_tiles():
    with MockProviderServer(MockState([])) as srv:
        prov = HttpProvider(srv.url)
        assert prov.discover(TileCoord(1, 0, 0)) == []
