import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra import numpy as hnp

from svipipe.analysis import (
    FAIL,
    NA,
    PASS,
    FeatureMatrix,
    FilterProfile,
    add_complexity,
    aggregate_features,
    elbow_curve,
    evaluate_suitability,
    inertia_of,
    kmeans,
    read_attribute_table,
    zscore,
)
from svipipe.geo import h3
from svipipe.metadata.enrich import enrich

from synth import brute_force_inertia, synthetic_records

GOOD = {
    "image_id": "1",
    "quality": "good",
    "blur_score": 500.0,
    "complexity": 1.5,
    "speed_kmh": 40.0,
    "lighting": "day",
    "daytime_nighttime": "day",
    "view_direction": "front/back",
    "platform": "driving surface",
}


def _one(row, **kw):
    return evaluate_suitability([row], **kw)[0]


# suitability

def test_good_row_passes():
    r = _one(GOOD)
    assert r.is_suitable and set(r.verdicts.values()) == {PASS}


@pytest.mark.parametrize("col,val,crit", [
    ("quality", "very poor", "quality"),
    ("blur_score", 99.9, "sharpness"),
    ("complexity", 0.99, "complexity"),
    ("speed_kmh", 200.1, "speed"),
    ("lighting", "night", "lighting"),
    ("daytime_nighttime", "night", "lighting"),
    ("view_direction", "side", "view_direction"),
    ("platform", "walking surface", "platform"),
])
def test_single_failures(col, val, crit):
    r = _one(dict(GOOD, **{col: val}))
    assert r.verdicts[crit] == FAIL and not r.is_suitable


def test_boundaries_pass():
    r = _one(dict(GOOD, blur_score=100.0, complexity=1.0, speed_kmh=200.0))
    assert r.is_suitable


def test_slightly_poor_quality_kept():
    assert _one(dict(GOOD, quality="Slightly Poor")).is_suitable


def test_missing_is_na():
    row = {"image_id": "2", "quality": "", "blur_score": "NaN"}
    r = _one(row)
    assert r.verdicts["quality"] == NA and r.verdicts["sharpness"] == NA
    assert r.is_suitable
    assert not _one(row, strict=True).is_suitable


def test_unknown_label_rejected():
    with pytest.raises(ValueError, match="unknown labels"):
        evaluate_suitability([dict(GOOD, platform="hovercraft")])


def test_blur_direction_above():
    prof = FilterProfile(blur_direction="above")
    assert _one(dict(GOOD, blur_score=150.0), profile=prof).verdicts["sharpness"] == FAIL
    assert _one(dict(GOOD, blur_score=50.0), profile=prof).verdicts["sharpness"] == PASS


def test_profile_round_trip_and_unknown_key():
    p = FilterProfile(speed_max_kmh=80.0)
    assert FilterProfile.from_dict(p.as_dict()) == p
    with pytest.raises(ValueError, match="unknown filter keys"):
        FilterProfile.from_dict({"sped": 1})


@settings(max_examples=100)
@given(st.floats(0, 1000), st.floats(0, 1000), st.floats(0, 400), st.floats(0, 400))
def test_tightening_never_adds_images(b1, b2, s1, s2):
    # raising the blur floor or lowering the speed cap can only remove images
    row = dict(GOOD, blur_score=300.0, speed_kmh=120.0)
    loose = FilterProfile(blur_threshold=min(b1, b2), speed_max_kmh=max(s1, s2))
    tight = FilterProfile(blur_threshold=max(b1, b2), speed_max_kmh=min(s1, s2))
    if _one(row, profile=tight).is_suitable:
        assert _one(row, profile=loose).is_suitable


# attribute tables

def test_read_attribute_table(tmp_path):
    p = tmp_path / "a.csv"
    p.write_text("image_id,quality,blur_score,sky\n1,good,12.5,0.3\n2,,NA,\n")
    t = read_attribute_table(p)
    assert t["1"]["blur_score"] == 12.5 and t["1"]["quality"] == "good"
    assert t["2"]["sky"] is None or t["2"]["sky"] == ""
    p.write_text("image_id,sky\n1,0.1\n1,0.2\n")
    with pytest.raises(ValueError, match="duplicate"):
        read_attribute_table(p)


def test_add_complexity():
    t = {"1": {"a": 0.5, "b": 0.5}, "2": {"a": 1.0, "b": 0.0}, "3": {"complexity": 7.0}}
    add_complexity(t, ["a", "b"])
    assert t["1"]["complexity"] == pytest.approx(math.log(2), abs=1e-12)
    assert t["2"]["complexity"] == 0.0
    assert t["3"]["complexity"] == 7.0


# standardisation

def test_zscore_oracle():
    out = zscore(np.array([[1.0], [2.0], [3.0]]))
    s = math.sqrt(2.0 / 3.0)
    assert out[:, 0].tolist() == pytest.approx([-1 / s, 0.0, 1 / s], abs=1e-12)


def test_zscore_constant_column_is_zero():
    fm = FeatureMatrix(["a", "b"], ["x", "y"], np.array([[5.0, 1.0], [5.0, 3.0]]))
    z = zscore(fm)
    assert isinstance(z, FeatureMatrix) and np.all(z.values[:, 0] == 0.0)


@settings(max_examples=50)
@given(hnp.arrays(np.float64, st.tuples(st.integers(2, 20), st.integers(1, 4)),
                  elements=st.floats(-1e3, 1e3)))
def test_zscore_moments(x):
    z = zscore(x)
    assert np.all(np.isfinite(z))
    for j in range(x.shape[1]):
        if np.ptp(x[:, j]) > 1e-6 * max(1.0, np.abs(x[:, j]).max()):
            assert abs(z[:, j].mean()) < 1e-9
            assert z[:, j].std() == pytest.approx(1.0, abs=1e-9)


# clustering

@settings(max_examples=40, deadline=None)
@given(hnp.arrays(np.float64, st.tuples(st.integers(2, 8), st.integers(1, 2)),
                  elements=st.floats(-10, 10, allow_subnormal=False).map(lambda v: round(v, 3))),
       st.integers(1, 3))
def test_kmeans_matches_brute_force(x, k):
    k = min(k, len(np.unique(x, axis=0)))
    model = kmeans(x, k, seed=0)
    oracle = brute_force_inertia(x, k)
    assert model.inertia <= oracle + 1e-9 * max(1.0, oracle)
    assert model.inertia == pytest.approx(inertia_of(x, model.labels), abs=1e-9)


def test_kmeans_two_blobs(rng):
    a = rng.normal(0.0, 0.1, size=(30, 2))
    b = rng.normal(5.0, 0.1, size=(30, 2))
    model = kmeans(np.vstack([a, b]), 2, seed=1)
    assert set(model.labels[:30]) == {0} and set(model.labels[30:]) == {1}


def test_kmeans_k_range():
    with pytest.raises(ValueError):
        kmeans(np.zeros((3, 2)), 4, seed=0)
    with pytest.raises(ValueError):
        kmeans(np.zeros((3, 2)), 0, seed=0)


def test_kmeans_deterministic_across_workers(rng):
    x = rng.normal(size=(80, 3))
    a = kmeans(x, 4, seed=42, workers=1)
    b = kmeans(x, 4, seed=42, workers=4)
    c = kmeans(x, 4, seed=42, workers=1)
    for m in (b, c):
        assert np.array_equal(a.labels, m.labels)
        assert np.array_equal(a.centroids, m.centroids)
        assert a.inertia == m.inertia


def test_labels_are_canonical(rng):
    model = kmeans(rng.normal(size=(40, 2)), 3, seed=5)
    first = [int(v) for v in dict.fromkeys(model.labels.tolist())]
    assert first == [0, 1, 2]


def test_elbow_non_increasing(rng):
    x = rng.normal(size=(60, 2))
    curve = elbow_curve(x, range(1, 9), seed=3)
    ys = [y for _, y in curve]
    assert all(b <= a for a, b in zip(ys, ys[1:]))
    assert curve[0][1] == pytest.approx(float(((x - x.mean(axis=0)) ** 2).sum()), rel=1e-12)


# per-cell features

def test_aggregate_features_means_and_impute():
    recs = enrich(synthetic_records(40, seed=2, spread=0.02), resolution=9)
    attrs = {}
    for i, r in enumerate(recs):
        attrs[r.image_id] = {"sky": float(i), "tree": None if i % 2 else 1.0}
    fm = aggregate_features(recs, attrs, ["sky", "tree"], resolution=9)
    by_cell = {}
    for i, r in enumerate(recs):
        by_cell.setdefault(h3.cell_to_string(h3.latlng_to_cell(r.lat, r.lon, 9)), []).append(i)
    assert fm.row_ids == sorted(by_cell)
    for row, cell in zip(fm.values, fm.row_ids):
        assert row[0] == pytest.approx(np.mean([float(i) for i in by_cell[cell]]), abs=1e-12)
        # tree is 1.0 wherever present; cells with only odd rows get the column mean (also 1.0)
        assert row[1] == 1.0


def test_aggregate_features_suitable_subset():
    recs = enrich(synthetic_records(10, seed=4), resolution=9)
    attrs = {r.image_id: {"v": 1.0} for r in recs}
    fm = aggregate_features(recs, attrs, ["v"], suitable={recs[0].image_id})
    assert len(fm.row_ids) == 1
