import csv
import math
import os

import pytest
from hypothesis import given, settings, strategies as st

from svipipe.geo import h3
from svipipe.geo.h3 import _derive, _tables

VECTORS = os.path.join(os.path.dirname(__file__), "data", "h3_vectors.csv")


def _vectors():
    with open(VECTORS, newline="") as fh:
        return list(csv.DictReader(fh))


@pytest.mark.parametrize("row", _vectors(), ids=lambda r: f"{r['cell']}")
def test_published_vectors(row):
    cell = h3.latlng_to_cell(float(row["lat"]), float(row["lng"]), int(row["res"]))
    assert h3.cell_to_string(cell) == row["cell"]


def test_sf_example_exact():
    assert h3.latlng_to_cell(37.7752702151959, -122.418307270836, 9) == 0x8928308280FFFFF


def test_derived_tables_match_frozen():
    ns = {}
    exec(_derive.render_tables(), ns)
    assert ns["FACE_IJK_BASE_CELLS"] == _tables.FACE_IJK_BASE_CELLS
    assert ns["FACE_NEIGHBORS"] == _tables.FACE_NEIGHBORS
    assert ns["BASE_CELL_CW_OFFSET"] == _tables.BASE_CELL_CW_OFFSET


def test_base_cell_zero_center():
    lat, lng = h3.cell_to_latlng(h3.string_to_cell("8001fffffffffff"))
    assert lat == pytest.approx(79.2424, abs=1e-4)
    assert lng == pytest.approx(38.0234, abs=1e-4)


def test_resolution_and_base_cell():
    c = h3.string_to_cell("8928308280fffff")
    assert h3.get_resolution(c) == 9
    assert h3.get_base_cell(c) == 20
    assert h3.is_valid_cell(c)
    assert not h3.is_valid_cell(0)


def test_parent_chain():
    c = h3.latlng_to_cell(37.3615593, -122.0553238, 7)
    assert h3.cell_to_string(h3.cell_to_parent(c, 5)) == "85283473fffffff"
    with pytest.raises(h3.H3Error):
        h3.cell_to_parent(c, 8)


def test_twelve_pentagons_per_resolution():
    for res in (0, 1, 5):
        pents = []
        for bc in range(122):
            c = h3.string_to_cell(f"80{bc << 1:02x}fffffffffff")
            c = h3.latlng_to_cell(*h3.cell_to_latlng(c), res)
            if h3.is_pentagon(c):
                pents.append(c)
        assert len(set(pents)) == 12
        for p in pents:
            assert len(h3.cell_to_boundary(p)) in (5, 10)


def test_bad_resolution():
    with pytest.raises((ValueError, h3.H3Error)):
        h3.latlng_to_cell(0.0, 0.0, 16)


def _sphere_dist(a, b):
    la1, lo1, la2, lo2 = map(math.radians, (*a, *b))
    x = math.sin((la2 - la1) / 2) ** 2 + math.cos(la1) * math.cos(la2) * math.sin((lo2 - lo1) / 2) ** 2
    return 2 * math.asin(math.sqrt(min(1.0, x)))


lat_st = st.floats(-89.9, 89.9, allow_nan=False)
lng_st = st.floats(-179.99, 179.99, allow_nan=False)


@settings(max_examples=300, deadline=None)
@given(lat_st, lng_st, st.integers(0, 15))
def test_center_maps_back_to_cell(lat, lng, res):
    c = h3.latlng_to_cell(lat, lng, res)
    assert h3.is_valid_cell(c)
    assert h3.latlng_to_cell(*h3.cell_to_latlng(c), res) == c


@settings(max_examples=200, deadline=None)
@given(lat_st, lng_st, st.integers(1, 15))
def test_point_near_its_cell_center(lat, lng, res):
    c = h3.latlng_to_cell(lat, lng, res)
    centre = h3.cell_to_latlng(c)
    # any point lies within the circumradius of its cell; a generous bound per resolution
    edge_rad = 1.2 * 1107.712591e3 / 6371007.0 / (math.sqrt(7) ** res) * 1.1
    assert _sphere_dist((lat, lng), centre) <= 1.5 * edge_rad


@settings(max_examples=200, deadline=None)
@given(lat_st, lng_st, st.integers(2, 15))
def test_parent_chain_is_transitive(lat, lng, res):
    c = h3.latlng_to_cell(lat, lng, res)
    p1 = h3.cell_to_parent(c, res - 1)
    assert h3.get_resolution(p1) == res - 1
    assert h3.cell_to_parent(p1, res - 2) == h3.cell_to_parent(c, res - 2)
    # the centre child of the parent is the parent's own centre
    assert h3.latlng_to_cell(*h3.cell_to_latlng(p1), res - 1) == p1


@settings(max_examples=100, deadline=None)
@given(lat_st, lng_st, st.integers(0, 15))
def test_string_roundtrip(lat, lng, res):
    c = h3.latlng_to_cell(lat, lng, res)
    assert h3.string_to_cell(h3.cell_to_string(c)) == c
