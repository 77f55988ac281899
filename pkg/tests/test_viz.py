import csv
import json
import math
import os
import warnings
import xml.etree.ElementTree as ET

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from PIL import Image

from svipipe.analysis import aggregate_features
from svipipe.geo import GeoPoint, StreetSegment
from svipipe.metadata.enrich import enrich
from svipipe.viz.colors import NO_DATA, RAMP, Scale, ramp_color
from svipipe.viz.grid import image_grid
from svipipe.viz.maps import map_features, render_map
from svipipe.viz.plots import histogram, kde, render_histogram, render_kde, silverman_bandwidth

from synth import synthetic_records


def _svg_ok(path):
    root = ET.parse(path).getroot()
    assert root.tag.endswith("svg")
    return root


# histogram

def test_histogram_unit_bins():
    counts, edges = histogram([0, 0, 1], bin_width=1)
    assert counts.tolist() == [2, 1]
    assert edges.tolist() == [0.0, 1.0, 2.0]


def test_histogram_last_bin_closed():
    counts, edges = histogram([0.0, 0.5, 1.0], bins=2)
    assert counts.tolist() == [1, 2]


def test_histogram_ignores_nan_and_rejects_empty():
    counts, _ = histogram([1.0, float("nan"), 2.0], bins=1)
    assert counts.sum() == 2
    with pytest.raises(ValueError):
        histogram([float("nan")])


@settings(max_examples=100)
@given(st.lists(st.floats(-1e6, 1e6), min_size=1, max_size=200), st.integers(1, 30))
def test_histogram_conserves_count(vals, bins):
    counts, edges = histogram(vals, bins=bins)
    assert counts.sum() == len(vals)
    assert len(edges) == len(counts) + 1


def test_render_histogram_sidecar(tmp_path):
    out = tmp_path / "h.svg"
    render_histogram([0, 0, 1], str(out), bin_width=1)
    _svg_ok(out)
    rows = list(csv.reader(open(tmp_path / "h.data.csv")))
    assert rows == [["bin_start", "bin_end", "count"], ["0.0", "1.0", "2"], ["1.0", "2.0", "1"]]


# kde

def test_silverman_oracle():
    v = np.array([1.0, 2.0, 3.0, 4.0, 10.0])
    sd = v.std(ddof=1)
    iqr = np.subtract(*np.percentile(v, [75, 25]))
    want = 0.9 * min(sd, iqr / 1.34) * len(v) ** -0.2
    assert silverman_bandwidth(v) == pytest.approx(want, rel=1e-12)


def test_kde_symmetric():
    xs, d, _ = kde([-2.0, -1.0, 1.0, 2.0])
    assert np.allclose(xs, -xs[::-1], atol=1e-12)
    assert np.allclose(d, d[::-1], atol=1e-15)


@pytest.mark.parametrize("n", [2, 50, 1000])
def test_kde_integrates_to_one_minus_tail(rng, n):
    xs, d, _ = kde(rng.normal(size=n))
    area = np.trapezoid(d, xs)
    # truncation at 3 bandwidths past the extremes can drop up to 2 * 0.00135 of the mass
    assert 1.0 - 0.0028 < area < 1.0 + 1e-3


def test_kde_mode_near_zero_median_over_seeds():
    modes = []
    for s in range(50):
        xs, d, _ = kde(np.random.default_rng(s).normal(size=500))
        modes.append(xs[np.argmax(d)])
    assert abs(float(np.median(modes))) < 0.1


def test_kde_zero_spread_warns():
    with warnings.catch_warnings(record=True) as w:
        warnings.simplefilter("always")
        xs, d, h = kde([5.0, 5.0, 5.0])
    assert h == pytest.approx(5e-3)
    assert any("zero spread" in str(m.message) for m in w)


def test_kde_bad_input(tmp_path):
    with pytest.raises(ValueError):
        kde([1.0])
    with pytest.raises(ValueError):
        kde([1.0, 2.0], bandwidth=0)
    out = tmp_path / "k.svg"
    render_kde([1.0, 2.0, 4.0], str(out))
    _svg_ok(out)
    assert len(open(tmp_path / "k.data.csv").read().splitlines()) == 257


# colours

def test_ramp_ends_are_viridis():
    assert RAMP.shape == (256, 3)
    assert ramp_color(0.0) == "#440154" and ramp_color(1.0) == "#fde725"


def test_quantile_scale_classes():
    s = Scale(list(range(100)), classes=4)
    cols = {s.color(v) for v in range(100)}
    assert len(cols) == 4
    assert s.color(float("nan")) == NO_DATA


# maps

def _rows(n=30, seed=0):
    recs = synthetic_records(n, seed=seed, spread=0.004)
    return [{"image_id": r.image_id, "lat": r.lat, "lon": r.lon, "v": float(i)} for i, r in enumerate(recs)]


def test_point_map(tmp_path):
    out = tmp_path / "m.svg"
    feats = render_map(_rows(), str(out), kind="point", variable="v")
    root = _svg_ok(out)
    assert len(feats) == 30
    assert len([e for e in root.iter() if e.tag.endswith("circle")]) >= 30
    gj = json.load(open(tmp_path / "m.geojson"))
    assert gj["type"] == "FeatureCollection" and len(gj["features"]) == 30


def test_hex_map_agrees_with_feature_aggregation():
    rows = _rows(60, seed=1)
    feats = map_features(rows, "hex", "v", resolution=9)
    recs = enrich(synthetic_records(60, seed=1, spread=0.004), resolution=9)
    fm = aggregate_features(recs, {r["image_id"]: r for r in rows}, ["v"], resolution=9)
    got = {f["properties"]["unit_id"]: f["properties"]["value"] for f in feats}
    want = dict(zip(fm.row_ids, fm.values[:, 0]))
    assert got.keys() == want.keys()
    for k in got:
        assert got[k] == pytest.approx(want[k], abs=1e-12)
    assert sum(f["properties"]["count"] for f in feats) == 60


def test_hex_map_accepts_aggregated_rows(tmp_path):
    rows = [{"cell_id": "89283082e73ffff", "count": 3, "x": 2.0}]
    feats = render_map(rows, str(tmp_path / "a.svg"), "hex", "x")
    assert feats[0]["properties"] == {"unit_id": "89283082e73ffff", "value": 2.0, "count": 3}
    ring = feats[0]["geometry"]["coordinates"][0]
    assert len(ring) == 7 and ring[0] == ring[-1]


def test_line_map_assigns_nearest_segment(tmp_path):
    segs = [StreetSegment("a", (GeoPoint(0.0, 0.0), GeoPoint(0.0, 0.01))),
            StreetSegment("b", (GeoPoint(0.01, 0.0), GeoPoint(0.01, 0.01)))]
    rows = [{"lat": 0.001, "lon": 0.005, "v": 1.0}, {"lat": 0.009, "lon": 0.005, "v": 3.0},
            {"lat": 0.0005, "lon": 0.002, "v": 2.0}]
    feats = render_map(rows, str(tmp_path / "l.svg"), "line", "v", network=segs)
    got = {f["properties"]["unit_id"]: (f["properties"]["value"], f["properties"]["count"]) for f in feats}
    assert got == {"a": (1.5, 2), "b": (3.0, 1)}
    with pytest.raises(ValueError, match="street network"):
        map_features(rows, "line", "v")


def test_map_missing_variable():
    with pytest.raises(ValueError, match="variable not found in data: column 'nope'"):
        map_features(_rows(), "point", "nope")


# image grids

def _write_imgs(d, n, size=(20, 10)):
    paths = []
    for i in range(n):
        p = os.path.join(d, f"i{i}.png")
        Image.new("RGB", size, (i * 40 % 256, 0, 0)).save(p)
        paths.append(p)
    return paths


def test_grid_two_by_two(tmp_path):
    paths = _write_imgs(tmp_path, 4)
    img, placed = image_grid(paths, str(tmp_path / "g.png"), columns=2, cell=(20, 10),
                             sort_keys=[3, 1, 2, 0])
    assert img.size == (40, 20)
    assert [os.path.basename(p) for p in placed] == ["i3.png", "i1.png", "i2.png", "i0.png"]
    # top-left tile is i3: red 120
    assert img.getpixel((5, 5)) == (120, 0, 0)
    rows = list(csv.reader(open(tmp_path / "g.data.csv")))
    assert rows[1] == ["0", "0", "0", "i3.png", "0"]


def test_grid_partial_last_row(tmp_path):
    paths = _write_imgs(tmp_path, 5)
    img, _ = image_grid(paths, str(tmp_path / "g.png"), columns=2, cell=(20, 10))
    assert img.size == (40, 30)
    assert img.getpixel((30, 25)) == (0, 0, 0)


def test_grid_seeded_shuffle_is_deterministic(tmp_path):
    paths = _write_imgs(tmp_path, 6)
    _, a = image_grid(paths, str(tmp_path / "a.png"), seed=3)
    _, b = image_grid(paths, str(tmp_path / "b.png"), seed=3)
    assert a == b and sorted(a) == sorted(paths)


def test_grid_skips_unreadable(tmp_path):
    paths = _write_imgs(tmp_path, 2)
    bad = tmp_path / "bad.png"
    bad.write_bytes(b"not an image")
    with pytest.warns(RuntimeWarning, match="unreadable"):
        _, placed = image_grid(paths + [str(bad)], str(tmp_path / "g.png"), sort_keys=[0, 1, 2])
    assert len(placed) == 2
    with pytest.warns(RuntimeWarning), pytest.raises(ValueError, match="no readable"):
        image_grid([str(bad)], str(tmp_path / "h.png"))
