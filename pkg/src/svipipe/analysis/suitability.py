"""Per-image suitability: seven criteria, each pass / fail / not_applicable."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

from ..features.edges import is_blurry

PASS = "pass"
FAIL = "fail"
NA = "not_applicable"
CRITERIA = ("quality", "sharpness", "complexity", "speed", "lighting", "view_direction", "platform")

QUALITY_LABELS = ("good", "slightly poor", "very poor")
VIEW_LABELS = ("front/back", "side")
PLATFORM_LABELS = ("cycling surface", "driving surface", "fields", "railway", "tunnel", "walking surface")
LIGHTING_LABELS = ("day", "dusk/dawn", "night")
_MISSING = {"", "na", "n/a", "nan", "none", "null"}


@dataclass
class FilterProfile:
    """Thresholds and label rules; the defaults reproduce the reference case study."""

    quality_column: str = "quality"
    quality_exclude: list = field(default_factory=lambda: ["very poor"])
    blur_column: str = "blur_score"
    blur_threshold: float = 100.0
    blur_direction: str = "below"
    complexity_column: str = "complexity"
    complexity_min: float = 1.0
    speed_column: str = "speed_kmh"
    speed_max_kmh: float = 200.0
    lighting_columns: list = field(default_factory=lambda: ["lighting", "daytime_nighttime"])
    lighting_exclude: list = field(default_factory=lambda: ["night"])
    view_direction_column: str = "view_direction"
    view_direction_keep: list = field(default_factory=lambda: ["front/back"])
    platform_column: str = "platform"
    platform_keep: list = field(default_factory=lambda: ["driving surface"])
    na_as_pass: bool = True
    combine: str = "all"

    def as_dict(self):
        return asdict(self)

    @classmethod
    def from_dict(cls, d):
        known = set(cls.__dataclass_fields__)
        extra = set(d) - known
        if extra:
            raise ValueError(f"unknown filter keys: {sorted(extra)}")
        return cls(**d)


@dataclass
class SuitabilityReport:
    image_id: str
    verdicts: dict
    is_suitable: bool


def is_missing(v):
    if v is None:
        return True
    if isinstance(v, float) and math.isnan(v):
        return True
    return isinstance(v, str) and v.strip().lower() in _MISSING


def _num(v):
    return None if is_missing(v) else float(v)


def _label(v):
    return None if is_missing(v) else str(v).strip().lower()


def check_vocabulary(rows, profile: FilterProfile):
    """Raise listing every label outside the known vocabularies."""
    vocab = [
        (profile.quality_column, QUALITY_LABELS),
        (profile.view_direction_column, VIEW_LABELS),
        (profile.platform_column, PLATFORM_LABELS),
    ]
    for col in profile.lighting_columns:
        vocab.append((col, LIGHTING_LABELS))
    bad = {}
    for row in rows:
        for col, allowed in vocab:
            v = _label(row.get(col))
            if v is not None and v not in allowed:
                bad.setdefault(col, set()).add(v)
    if bad:
        detail = "; ".join(f"{c}: {sorted(v)}" for c, v in sorted(bad.items()))
        raise ValueError(f"unknown labels: {detail}")


def judge(row, profile: FilterProfile):
    """Verdict per criterion for one row (a mapping of column -> value)."""
    v = {}
    q = _label(row.get(profile.quality_column))
    v["quality"] = NA if q is None else (FAIL if q in profile.quality_exclude else PASS)

    b = _num(row.get(profile.blur_column))
    v["sharpness"] = NA if b is None else (FAIL if is_blurry(b, profile.blur_threshold, profile.blur_direction) else PASS)

    c = _num(row.get(profile.complexity_column))
    v["complexity"] = NA if c is None else (PASS if c >= profile.complexity_min else FAIL)

    s = _num(row.get(profile.speed_column))
    v["speed"] = NA if s is None else (PASS if s <= profile.speed_max_kmh else FAIL)

    lights = [_label(row.get(col)) for col in profile.lighting_columns]
    lights = [x for x in lights if x is not None]
    if not lights:
        v["lighting"] = NA
    else:
        v["lighting"] = FAIL if any(x in profile.lighting_exclude for x in lights) else PASS

    d = _label(row.get(profile.view_direction_column))
    v["view_direction"] = NA if d is None else (PASS if d in profile.view_direction_keep else FAIL)

    p = _label(row.get(profile.platform_column))
    v["platform"] = NA if p is None else (PASS if p in profile.platform_keep else FAIL)
    return v


def combine(verdicts, na_as_pass=True):
    ok = (PASS, NA) if na_as_pass else (PASS,)
    return all(verdicts[c] in ok for c in CRITERIA)


def evaluate_suitability(rows, profile: FilterProfile | None = None, strict=None):
    """Reports for rows that carry an ``image_id``; ``strict`` treats NA as fail."""
    profile = profile or FilterProfile()
    rows = list(rows)
    check_vocabulary(rows, profile)
    na_as_pass = profile.na_as_pass if strict is None else not strict
    out = []
    for row in rows:
        v = judge(row, profile)
        out.append(SuitabilityReport(str(row.get("image_id")), v, combine(v, na_as_pass)))
    return out


SUITABILITY_COLUMNS = ["image_id"] + list(CRITERIA) + ["is_suitable"]


def report_rows(reports):
    for r in reports:
        row = {"image_id": r.image_id}
        row.update(r.verdicts)
        row["is_suitable"] = "true" if r.is_suitable else "false"
        yield row
