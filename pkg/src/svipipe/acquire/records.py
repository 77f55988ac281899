"""ImageRecord and the images.csv format."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, fields, replace
from datetime import datetime, timezone

from ..geo import GeoPoint
from ..io_utils import atomic_write_text

CSV_COLUMNS = [
    "image_id",
    "lat",
    "lon",
    "captured_at",
    "compass_angle",
    "is_pano",
    "sequence_id",
    "creator_id",
    "organization_id",
    "path",
]


def ms_to_iso(ms: int) -> str:
    dt = datetime.fromtimestamp(ms / 1000.0, tz=timezone.utc)
    return dt.strftime("%Y-%m-%dT%H:%M:%S.") + f"{ms % 1000:03d}Z"


def iso_to_ms(s: str) -> int:
    s = s.strip()
    if s.endswith("Z"):
        s = s[:-1] + "+00:00"
    dt = datetime.fromisoformat(s)
    if dt.tzinfo is None:
        dt = dt.replace(tzinfo=timezone.utc)
    return int(round(dt.timestamp() * 1000))


def parse_bool(v) -> bool:
    if isinstance(v, bool):
        return v
    s = str(v).strip().lower()
    if s in ("1", "true", "t", "yes", "y"):
        return True
    if s in ("0", "false", "f", "no", "n", ""):
        return False
    raise ValueError(f"not a boolean: {v!r}")


@dataclass(frozen=True)
class ImageRecord:
    image_id: str
    lat: float
    lon: float
    captured_at: int  # UTC epoch milliseconds
    compass_angle: float
    is_pano: bool
    sequence_id: str
    creator_id: str
    organization_id: str | None = None
    path: str | None = None

    def __post_init__(self):
        if not self.image_id:
            raise ValueError("image_id required")
        if not 0.0 <= self.compass_angle < 360.0:
            raise ValueError(f"compass_angle {self.compass_angle} outside [0, 360)")
        if self.captured_at is None:
            raise ValueError("captured_at required")
        GeoPoint(self.lat, self.lon)

    @property
    def location(self) -> GeoPoint:
        return GeoPoint(self.lat, self.lon)

    @classmethod
    def from_dict(cls, d: dict) -> "ImageRecord":
        """Build from provider metadata; accepts a few common key spellings."""
        lat = d.get("lat", d.get("latitude"))
        lon = d.get("lon", d.get("lng", d.get("longitude")))
        if (lat is None or lon is None) and isinstance(d.get("geometry"), dict):
            lon, lat = d["geometry"]["coordinates"][:2]
        ts = d.get("captured_at")
        if isinstance(ts, str) and not ts.lstrip("-").isdigit():
            ts = iso_to_ms(ts)
        compass = float(d.get("compass_angle", d.get("computed_compass_angle", 0.0))) % 360.0
        org = d.get("organization_id")
        return cls(
            image_id=str(d.get("image_id", d.get("id"))),
            lat=float(lat),
            lon=float(lon),
            captured_at=int(ts),
            compass_angle=compass,
            is_pano=parse_bool(d.get("is_pano", False)),
            sequence_id=str(d.get("sequence_id", d.get("sequence", ""))),
            creator_id=str(d.get("creator_id", d.get("creator", ""))),
            organization_id=str(org) if org not in (None, "") else None,
            path=d.get("path") or None,
        )

    def to_row(self) -> dict:
        return {
            "image_id": self.image_id,
            "lat": repr(float(self.lat)),
            "lon": repr(float(self.lon)),
            "captured_at": ms_to_iso(self.captured_at),
            "compass_angle": repr(float(self.compass_angle)),
            "is_pano": "true" if self.is_pano else "false",
            "sequence_id": self.sequence_id,
            "creator_id": self.creator_id,
            "organization_id": self.organization_id or "",
            "path": self.path or "",
        }

    def as_meta(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}

    def with_path(self, path):
        return replace(self, path=path)


def records_to_csv_text(records) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\r\n")
    w.writeheader()
    for r in records:
        w.writerow(r.to_row())
    return buf.getvalue()


def write_records_csv(records, path):
    atomic_write_text(path, records_to_csv_text(records))


def read_records_csv(path):
    out = []
    with open(path, newline="", encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            out.append(ImageRecord.from_dict(row))
    return out
