"""Attribute-table ingest and suitability / cluster writers."""

from __future__ import annotations

import csv
import json

from ..geo import h3
from ..io_utils import atomic_open
from .suitability import SUITABILITY_COLUMNS, is_missing, report_rows

# label columns stay strings; every other non-empty value must parse as a number
LABEL_COLUMNS = frozenset({"image_id", "quality", "platform", "view_direction", "lighting"})


def read_attribute_table(path, label_columns=LABEL_COLUMNS):
    """image_id -> {column: value}.  Numeric columns become floats, missing values None."""
    table = {}
    with open(path, newline="", encoding="utf-8-sig") as fh:
        reader = csv.DictReader(fh)
        if "image_id" not in (reader.fieldnames or []):
            raise ValueError(f"{path}: attribute table needs an image_id column")
        for lineno, row in enumerate(reader, start=2):
            iid = row["image_id"].strip()
            if iid in table:
                raise ValueError(f"{path}:{lineno}: duplicate image_id {iid}")
            out = {}
            for k, v in row.items():
                if k == "image_id":
                    continue
                if is_missing(v):
                    out[k] = None
                elif k in label_columns:
                    out[k] = v.strip()
                else:
                    try:
                        out[k] = float(v)
                    except ValueError:
                        raise ValueError(f"{path}:{lineno}: column {k} is not numeric: {v!r}") from None
            table[iid] = out
    return table


def join_rows(records, *tables):
    """One dict per record: record fields, then each table's columns (later tables win).
    Records absent from a table simply lack its columns, which reads as missing."""
    rows = []
    for r in records:
        row = {"image_id": r.image_id}
        for name in ("speed_kmh", "daytime_nighttime"):
            if hasattr(r, name):
                row[name] = getattr(r, name)
        for t in tables:
            row.update(t.get(r.image_id, {}))
        rows.append(row)
    return rows


def write_suitability_csv(reports, path):
    with atomic_open(path, newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=SUITABILITY_COLUMNS, lineterminator="\r\n")
        w.writeheader()
        for row in report_rows(reports):
            w.writerow(row)


def read_suitability_csv(path):
    with open(path, newline="", encoding="utf-8") as fh:
        return {row["image_id"]: row["is_suitable"] == "true" for row in csv.DictReader(fh)}


def write_clusters_csv(matrix, model, path):
    cols = ["cell_id", "cluster"] + list(matrix.columns)
    with atomic_open(path, newline="") as fh:
        w = csv.writer(fh, lineterminator="\r\n")
        w.writerow(cols)
        for i, cell in enumerate(matrix.row_ids):
            w.writerow([cell, int(model.labels[i])] + [repr(float(v)) for v in matrix.values[i]])


def clusters_to_geojson(matrix, model):
    feats = []
    for i, cell in enumerate(matrix.row_ids):
        ring = [[lon, lat] for lat, lon in h3.cell_to_boundary(h3.string_to_cell(cell))]
        ring.append(ring[0])
        props = {"cell_id": cell, "cluster": int(model.labels[i])}
        props.update({c: float(v) for c, v in zip(matrix.columns, matrix.values[i])})
        feats.append({"type": "Feature", "geometry": {"type": "Polygon", "coordinates": [ring]}, "properties": props})
    return {"type": "FeatureCollection", "features": feats}


def write_clusters_geojson(matrix, model, path):
    with atomic_open(path) as fh:
        json.dump(clusters_to_geojson(matrix, model), fh, indent=1)


def write_elbow_csv(curve, path):
    with atomic_open(path, newline="") as fh:
        w = csv.writer(fh, lineterminator="\r\n")
        w.writerow(["k", "inertia"])
        for k, inertia in curve:
            w.writerow([k, repr(float(inertia))])
