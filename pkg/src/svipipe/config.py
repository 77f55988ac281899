"""Pipeline configuration: TOML file, validated against the default tree."""

from __future__ import annotations

import copy
import json
import os

try:
    import tomllib
except ModuleNotFoundError:  # py < 3.11
    import tomli as tomllib

from .analysis.suitability import FilterProfile

PLACES365 = ["highway", "residential_neighborhood", "construction_site", "tree_farm", "forest_path", "forest_road"]
PLACEPULSE = ["beautiful", "boring", "depressing", "lively", "safe", "wealthy"]
SEGMENTS = ["sky", "building", "vegetation", "road", "sidewalk"]


class ConfigError(ValueError):
    pass


def _defaults():
    return {
        "run": {
            "out_dir": "out",
            "workers": 4,
            "seed": 42,
        },
        "download": {
            "provider": "mock",
            "base_url": "",
            "corpus": "",
            "region": "",
            "zoom": 14,
            "rate": 10.0,
            "size": 2048,
            "max_attempts": 5,
            "backoff_base": 1.0,
            "filters": {},
            "retry_failed": False,
        },
        "metadata": {
            "resolution": 9,
            "network": "",
            "buffer_m": 50.0,
            "street_max_distance_m": 500.0,
            "twilight": False,
            "timezone": "",
        },
        "features": {
            "attributes": [],
            "segment_columns": [],
            "edge_method": "canny",
            "embeddings": "",
            "knn_k": 5,
        },
        "filter": FilterProfile().as_dict() | {"strict": False},
        "cluster": {
            "k": 5,
            "resolution": 9,
            "indicators": PLACES365 + PLACEPULSE + SEGMENTS,
            "restarts": 10,
            "elbow_k": [1, 2, 3, 4, 5, 6, 7, 8, 9, 10],
        },
        "transform": {
            "fov": 90.0,
            "yaw": 0.0,
            "pitch": 0.0,
            "width": 512,
            "height": 512,
            "projection": "equidistant",
            "fisheye_size": 512,
            "depth_dir": "",
            "stride": 4,
            "max_range_m": 50.0,
            "limit": 1,
        },
        "viz": {
            "kind": "hex",
            "variable": "",
            "resolution": 9,
            "classes": 0,
            "histogram": "",
            "bins": 20,
            "grid_columns": 5,
            "grid_sort_by": "",
        },
    }


DEFAULTS = _defaults()


def _check(tree, ref, path):
    for key, val in tree.items():
        where = f"{path}.{key}" if path else key
        if key not in ref:
            raise ConfigError(f"unknown config key: {where}")
        want = ref[key]
        if isinstance(want, dict) and want and not isinstance(val, dict):
            raise ConfigError(f"{where} must be a table")
        if isinstance(want, dict) and want:
            _check(val, want, where)
        elif isinstance(want, dict):
            if not isinstance(val, dict):
                raise ConfigError(f"{where} must be a table")
        elif isinstance(want, bool):
            if not isinstance(val, bool):
                raise ConfigError(f"{where} must be true or false")
        elif isinstance(want, float):
            if isinstance(val, bool) or not isinstance(val, (int, float)):
                raise ConfigError(f"{where} must be a number")
        elif isinstance(want, int):
            if isinstance(val, bool) or not isinstance(val, int):
                raise ConfigError(f"{where} must be an integer")
        elif isinstance(want, str):
            if not isinstance(val, str):
                raise ConfigError(f"{where} must be a string")
        elif isinstance(want, list) and not isinstance(val, list):
            raise ConfigError(f"{where} must be an array")


def _merge(base, over):
    for k, v in over.items():
        if isinstance(v, dict) and isinstance(base.get(k), dict) and base[k]:
            _merge(base[k], v)
        elif isinstance(base.get(k), float) and not isinstance(v, bool):
            base[k] = float(v)
        else:
            base[k] = v
    return base


def build_config(user=None, overrides=None):
    """Defaults <- user table <- overrides (dotted keys), each layer validated."""
    cfg = _defaults()
    if user:
        _check(user, DEFAULTS, "")
        _merge(cfg, user)
    for dotted, val in (overrides or {}).items():
        parts = dotted.split(".")
        nested = val
        for p in reversed(parts):
            nested = {p: nested}
        _check(nested, DEFAULTS, "")
        _merge(cfg, nested)
    try:
        FilterProfile.from_dict({k: v for k, v in cfg["filter"].items() if k != "strict"})
    except ValueError as e:
        raise ConfigError(str(e)) from None
    if cfg["filter"]["blur_direction"] not in ("below", "above"):
        raise ConfigError("filter.blur_direction must be 'below' or 'above'")
    if cfg["filter"]["combine"] != "all":
        raise ConfigError("filter.combine supports only 'all'")
    return cfg


def load_config(path=None, overrides=None):
    user = None
    base_dir = None
    if path:
        try:
            with open(path, "rb") as fh:
                user = tomllib.load(fh)
        except tomllib.TOMLDecodeError as e:
            raise ConfigError(f"{path}: {e}") from None
        except OSError as e:
            raise ConfigError(f"cannot read config {path}: {e.strerror}") from None
        base_dir = os.path.dirname(os.path.abspath(path))
    cfg = build_config(user, overrides)
    cfg["_base_dir"] = base_dir or os.getcwd()
    return cfg


def resolve(cfg, p):
    """Config-relative path (empty stays empty)."""
    if not p:
        return p
    return p if os.path.isabs(p) else os.path.normpath(os.path.join(cfg["_base_dir"], p))


def filter_profile(cfg):
    return FilterProfile.from_dict({k: copy.deepcopy(v) for k, v in cfg["filter"].items() if k != "strict"})


def _toml_value(v):
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (int, float)):
        return repr(v)
    if isinstance(v, str):
        return json.dumps(v)
    if isinstance(v, list):
        return "[" + ", ".join(_toml_value(x) for x in v) + "]"
    if isinstance(v, dict):
        return "{" + ", ".join(f"{k} = {_toml_value(x)}" for k, x in sorted(v.items())) + "}"
    raise TypeError(type(v))


def dump_config(cfg, sections=None):
    """Canonical TOML text (sorted keys) of the effective config."""
    lines = []
    for sec in sorted(k for k in cfg if not k.startswith("_")):
        if sections and sec not in sections:
            continue
        lines.append(f"[{sec}]")
        for k in sorted(cfg[sec]):
            lines.append(f"{k} = {_toml_value(cfg[sec][k])}")
        lines.append("")
    return "\n".join(lines)
