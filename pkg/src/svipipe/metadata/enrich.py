"""Per-image indicators: calendar fields, day/night, season, relative angle, H3 ids, speed."""

from __future__ import annotations

import logging
import math
import re
from dataclasses import dataclass, field
from datetime import datetime, timedelta, timezone

from ..acquire.records import ImageRecord
from ..geo import GeoPoint, SegmentIndex, haversine_distance, hex_index
from .solar import is_daytime

log = logging.getLogger("svipipe.metadata")

RELATIVE_ANGLE_RADIUS_M = 500.0
DAY_NAMES = ("Monday", "Tuesday", "Wednesday", "Thursday", "Friday", "Saturday", "Sunday")
SEASONS_NORTH = {12: "winter", 1: "winter", 2: "winter", 3: "spring", 4: "spring", 5: "spring",
                 6: "summer", 7: "summer", 8: "summer", 9: "autumn", 10: "autumn", 11: "autumn"}
_FLIP = {"winter": "summer", "summer": "winter", "spring": "autumn", "autumn": "spring"}
_OFFSET_RE = re.compile(r"^(?:UTC)?([+-])(\d{1,2})(?::?(\d{2}))?$")


def season_for(lat: float, month: int) -> str:
    """Meteorological season; the equator counts as northern."""
    s = SEASONS_NORTH[month]
    return s if lat >= 0 else _FLIP[s]


def fold_relative_angle(compass: float, bearing: float) -> float:
    """Angle between a camera heading and an undirected street, in [0, 90]."""
    d = abs(compass - bearing) % 180.0
    return 180.0 - d if d > 90.0 else d


def _tzinfo(spec):
    if spec is None or spec == "":
        return None
    if isinstance(spec, (int, float)):
        return timezone(timedelta(hours=spec))
    m = _OFFSET_RE.match(str(spec).strip())
    if m:
        sign = 1 if m.group(1) == "+" else -1
        return timezone(sign * timedelta(hours=int(m.group(2)), minutes=int(m.group(3) or 0)))
    if str(spec).upper() in ("UTC", "Z"):
        return timezone.utc
    from zoneinfo import ZoneInfo

    return ZoneInfo(str(spec))


def local_time(rec: ImageRecord, tz=None) -> datetime:
    """Local civil time: explicit zone when given, else the nautical zone round(lon / 15) hours."""
    utc = datetime.fromtimestamp(rec.captured_at / 1000.0, tz=timezone.utc)
    z = _tzinfo(tz)
    if z is None:
        z = timezone(timedelta(hours=round(rec.lon / 15.0)))
    return utc.astimezone(z)


@dataclass
class EnrichedRecord:
    record: ImageRecord
    year: int
    month: int
    day: int
    hour: int
    day_of_week: str
    local_date: str
    daytime_nighttime: str
    season: str
    h3: dict = field(default_factory=dict)
    relative_angle: float | None = None
    speed_kmh: float | None = None

    def __getattr__(self, name):
        # record fields read through, e.g. er.image_id
        if name == "record":
            raise AttributeError(name)
        return getattr(self.record, name)

    def h3_id(self, resolution):
        return self.h3[resolution]


def _speeds(records):
    """image_id -> km/h using the successor in the same sequence."""
    by_seq = {}
    for r in records:
        if r.sequence_id:
            by_seq.setdefault(r.sequence_id, []).append(r)
    out = {}
    for seq in by_seq.values():
        seq.sort(key=lambda r: (r.captured_at, r.image_id))
        if len(seq) < 2:
            continue
        for a, b in zip(seq, seq[1:]):
            dt = (b.captured_at - a.captured_at) / 1000.0
            if dt > 0:
                out[a.image_id] = haversine_distance(a.location, b.location) / dt * 3.6
            else:
                out[a.image_id] = None
        out[seq[-1].image_id] = out[seq[-2].image_id]
    return out


def enrich(records, network=None, resolution=9, tz=None, twilight=False,
           max_street_distance_m=RELATIVE_ANGLE_RADIUS_M):
    """Compute image-level indicators.

    ``resolution`` is one H3 resolution or a list of them.  ``tz`` maps image
    ids to zone names or UTC offsets; images without one use the longitude
    rule.  Images with no street within ``max_street_distance_m`` get no
    relative angle.
    """
    records = list(records)
    resolutions = [resolution] if isinstance(resolution, int) else list(resolution)
    index = SegmentIndex(network) if network else None
    speeds = _speeds(records)
    tz = tz or {}
    out = []
    for r in records:
        lt = local_time(r, tz.get(r.image_id))
        rel = None
        if index is not None:
            hit = index.within(r.location, max_street_distance_m)
            if hit is not None:
                rel = fold_relative_angle(r.compass_angle, hit[2])
        out.append(EnrichedRecord(
            record=r,
            year=lt.year,
            month=lt.month,
            day=lt.day,
            hour=lt.hour,
            day_of_week=DAY_NAMES[lt.weekday()],
            local_date=lt.date().isoformat(),
            daytime_nighttime="day" if is_daytime(r.lat, r.lon, r.captured_at, twilight) else "night",
            season=season_for(r.lat, lt.month),
            h3={res: hex_index(r.location, res).value for res in resolutions},
            relative_angle=rel,
            speed_kmh=speeds.get(r.image_id),
        ))
    return out
