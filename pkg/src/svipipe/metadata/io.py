"""CSV and GeoJSON export for enriched records and aggregates."""

from __future__ import annotations

import csv
import json
import math

from ..acquire.records import CSV_COLUMNS, ImageRecord
from ..geo import h3
from ..io_utils import atomic_open
from .aggregate import AGGREGATE_FIELDS
from .enrich import EnrichedRecord

ENRICHED_EXTRA = [
    "year",
    "month",
    "day",
    "hour",
    "day_of_week",
    "local_date",
    "daytime_nighttime",
    "season",
    "relative_angle",
    "speed_kmh",
]


def _fmt(v):
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return "" if math.isnan(v) else repr(v)
    return str(v)


def enriched_columns(records):
    res = sorted({k for r in records for k in r.h3})
    return CSV_COLUMNS + ENRICHED_EXTRA + [f"h3_{k}" for k in res]


def enriched_row(r: EnrichedRecord, columns):
    row = r.record.to_row()
    for c in ENRICHED_EXTRA:
        row[c] = _fmt(getattr(r, c))
    for k, v in r.h3.items():
        row[f"h3_{k}"] = h3.cell_to_string(v)
    return {c: row.get(c, "") for c in columns}


def write_enriched_csv(records, path):
    cols = enriched_columns(records)
    with atomic_open(path, newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=cols, lineterminator="\r\n")
        w.writeheader()
        for r in records:
            w.writerow(enriched_row(r, cols))


def _opt_float(s):
    return float(s) if s not in (None, "") else None


def read_enriched_csv(path):
    out = []
    with open(path, newline="", encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            rec = ImageRecord.from_dict(row)
            hx = {int(k[3:]): h3.string_to_cell(v) for k, v in row.items() if k.startswith("h3_") and v}
            out.append(EnrichedRecord(
                record=rec,
                year=int(row["year"]),
                month=int(row["month"]),
                day=int(row["day"]),
                hour=int(row["hour"]),
                day_of_week=row["day_of_week"],
                local_date=row["local_date"],
                daytime_nighttime=row["daytime_nighttime"],
                season=row["season"],
                h3=hx,
                relative_angle=_opt_float(row["relative_angle"]),
                speed_kmh=_opt_float(row["speed_kmh"]),
            ))
    return out


def write_aggregates_csv(rows, path):
    with atomic_open(path, newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=AGGREGATE_FIELDS, lineterminator="\r\n")
        w.writeheader()
        for row in rows:
            w.writerow({k: _fmt(row[k]) for k in AGGREGATE_FIELDS})


def _json_value(v):
    if isinstance(v, float) and math.isnan(v):
        return None
    return v


def aggregates_to_geojson(rows, unit):
    feats = []
    for row in rows:
        feats.append({
            "type": "Feature",
            "geometry": unit.geometry(row["unit_id"]),
            "properties": {k: _json_value(row[k]) for k in AGGREGATE_FIELDS},
        })
    return {"type": "FeatureCollection", "features": feats}


def write_aggregates_geojson(rows, unit, path):
    with atomic_open(path) as fh:
        json.dump(aggregates_to_geojson(rows, unit), fh, indent=1)
