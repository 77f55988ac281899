"""Imagery providers.

A provider exposes two calls: ``discover(tile)`` returning metadata dicts for
the images inside a tile, and ``fetch(image_id, size)`` returning image bytes.
HTTP failures are mapped onto the exception classes below so the downloader can
decide between retrying, recording a failure, and aborting.
"""

from __future__ import annotations

import os
import threading

import requests


class ProviderError(Exception):
    """Permanent failure for one unit of work."""


class RetryableError(ProviderError):
    """Rate limiting, server errors and dropped connections."""


class AuthError(ProviderError):
    def __init__(self, detail=""):
        super().__init__("credentials rejected" + (f": {detail}" if detail else ""))


def check_response(resp):
    code = resp.status_code
    if code in (401, 403):
        raise AuthError(f"HTTP {code}")
    if code == 429 or code >= 500:
        raise RetryableError(f"HTTP {code} for {resp.url}")
    if code >= 400:
        raise ProviderError(f"HTTP {code} for {resp.url}")
    return resp


class HttpProvider:
    """Provider speaking the bundled mock server's endpoints.

    GET {base}/tiles/{z}/{x}/{y}  -> JSON list of image metadata
    GET {base}/images/{id}?size=N -> JPEG bytes
    The API key travels as the ``access_token`` query parameter.
    """

    name = "mock"

    def __init__(self, base_url, api_key=None, timeout=30.0):
        self.base_url = base_url.rstrip("/")
        self.api_key = api_key
        self.timeout = timeout
        self._local = threading.local()

    @property
    def session(self):
        s = getattr(self._local, "session", None)
        if s is None:
            s = self._local.session = requests.Session()
        return s

    def _get(self, url, **params):
        if self.api_key:
            params["access_token"] = self.api_key
        try:
            resp = self.session.get(url, params=params, timeout=self.timeout)
        except (requests.ConnectionError, requests.Timeout) as exc:
            raise RetryableError(f"connection error: {exc.__class__.__name__}") from exc
        return check_response(resp)

    def discover(self, tile):
        return self._get(f"{self.base_url}/tiles/{tile.z}/{tile.x}/{tile.y}").json()

    def fetch(self, image_id, size=2048):
        return self._get(f"{self.base_url}/images/{image_id}", size=size).content


class MapillaryProvider(HttpProvider):
    """Mapillary Graph API v4.  Discovery queries the ``images`` endpoint with the tile bbox."""

    name = "mapillary"
    FIELDS = "id,geometry,captured_at,compass_angle,computed_compass_angle,is_pano,sequence,creator,organization_id"
    THUMB_SIZES = (256, 1024, 2048)

    def __init__(self, api_key=None, base_url="https://graph.mapillary.com", timeout=30.0, limit=2000):
        super().__init__(base_url, api_key or os.environ.get("MAPILLARY_TOKEN"), timeout)
        self.limit = limit

    def discover(self, tile):
        w, s, e, n = tile.bounds()
        data = self._get(f"{self.base_url}/images", bbox=f"{w},{s},{e},{n}", fields=self.FIELDS, limit=self.limit).json()
        out = []
        for item in data.get("data", []):
            creator = item.get("creator") or {}
            seq = item.get("sequence")
            out.append({
                "image_id": item["id"],
                "geometry": item["geometry"],
                "captured_at": item["captured_at"],
                "compass_angle": item.get("computed_compass_angle", item.get("compass_angle", 0.0)) or 0.0,
                "is_pano": item.get("is_pano", False),
                "sequence_id": seq if isinstance(seq, str) else (seq or {}).get("id", ""),
                "creator_id": creator.get("id", "") if isinstance(creator, dict) else creator,
                "organization_id": item.get("organization_id"),
            })
        return out

    def fetch(self, image_id, size=2048):
        thumb = min(self.THUMB_SIZES, key=lambda t: (abs(t - size), t))
        field = f"thumb_{thumb}_url"
        url = self._get(f"{self.base_url}/{image_id}", fields=field).json()[field]
        try:
            resp = self.session.get(url, timeout=self.timeout)
        except (requests.ConnectionError, requests.Timeout) as exc:
            raise RetryableError(f"connection error: {exc.__class__.__name__}") from exc
        return check_response(resp).content


PROVIDERS = {"mock": HttpProvider, "mapillary": MapillaryProvider}


def make_provider(name, base_url=None, api_key=None, **kw):
    """Build a provider by name.  The API key falls back to ``SVIPIPE_API_KEY``."""
    api_key = api_key or os.environ.get("SVIPIPE_API_KEY")
    if name == "mock":
        base_url = base_url or os.environ.get("SVIPIPE_MOCK_URL")
        if not base_url:
            raise ValueError("mock provider needs a base URL (--provider-url or SVIPIPE_MOCK_URL)")
        return HttpProvider(base_url, api_key, **kw)
    if name == "mapillary":
        if base_url:
            kw["base_url"] = base_url
        return MapillaryProvider(api_key, **kw)
    raise ValueError(f"unknown provider {name!r}; choose from {sorted(PROVIDERS)}")
