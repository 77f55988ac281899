"""Local stand-in for an imagery provider and geocoder, with fault injection.

Endpoints:
  GET  /tiles/{z}/{x}/{y}      image metadata inside the tile (JSON list)
  GET  /images/{id}?size=N     image bytes
  GET  /search?q=name          Nominatim-style geocoder over stored places
  GET  /_metrics               request counters, current and peak in-flight requests
  POST /_faults                update fault settings (JSON body)
  POST /_reset                 zero the counters

Faults: fixed ``latency`` seconds per request; ``fail_first`` makes the first N
requests to each path answer ``fail_status`` (429 by default); ``drop_first``
closes the connection without a reply for the first N requests to each path;
``error_rate`` injects seeded random failures.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import threading
import time
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from urllib.parse import parse_qs, urlparse

from .tiles import TileCoord

DEFAULT_FAULTS = {
    "latency": 0.0,
    "fail_first": 0,
    "fail_status": 429,
    "drop_first": 0,
    "error_rate": 0.0,
    "seed": 0,
}


class MockState:
    def __init__(self, images, blobs=None, blob_dir=None, places=None, api_key=None, faults=None):
        self.images = {str(m["image_id"]): dict(m) for m in images}
        self.blobs = blobs or {}
        self.blob_dir = blob_dir
        self.places = places or {}
        self.api_key = api_key
        self.faults = dict(DEFAULT_FAULTS, **(faults or {}))
        self.lock = threading.Lock()
        self.reset()

    def reset(self):
        with self.lock:
            self.requests = 0
            self.by_kind = {"tiles": 0, "images": 0, "search": 0}
            self.per_path = {}
            self.inflight = 0
            self.max_inflight = 0
            self.rng = random.Random(self.faults.get("seed", 0))

    def metrics(self):
        with self.lock:
            return {
                "requests": self.requests,
                "tiles": self.by_kind["tiles"],
                "images": self.by_kind["images"],
                "search": self.by_kind["search"],
                "inflight": self.inflight,
                "max_inflight": self.max_inflight,
            }

    def blob(self, image_id):
        if image_id in self.blobs:
            return self.blobs[image_id]
        if self.blob_dir:
            p = os.path.join(self.blob_dir, f"{image_id}.jpg")
            if os.path.exists(p):
                with open(p, "rb") as fh:
                    return fh.read()
        return None


class _Handler(BaseHTTPRequestHandler):
    protocol_version = "HTTP/1.1"
    server_version = "svipipe-mock/1"

    def log_message(self, fmt, *args):
        pass

    @property
    def state(self) -> MockState:
        return self.server.state

    def _send(self, code, body=b"", ctype="application/json"):
        if isinstance(body, (dict, list)):
            body = json.dumps(body).encode()
        try:
            self.send_response(code)
            self.send_header("Content-Type", ctype)
            self.send_header("Content-Length", str(len(body)))
            self.end_headers()
            self.wfile.write(body)
        except (BrokenPipeError, ConnectionResetError):
            # client went away (killed mid-run); nothing to answer
            self.close_connection = True

    def do_POST(self):
        url = urlparse(self.path)
        n = int(self.headers.get("Content-Length") or 0)
        payload = json.loads(self.rfile.read(n) or b"{}")
        st = self.state
        if url.path == "/_faults":
            with st.lock:
                st.faults.update(payload)
            self._send(200, st.faults)
        elif url.path == "/_reset":
            st.reset()
            self._send(200, {"ok": True})
        else:
            self._send(404, {"error": "not found"})

    def do_GET(self):
        url = urlparse(self.path)
        if url.path == "/_metrics":
            self._send(200, self.state.metrics())
            return
        st = self.state
        parts = [p for p in url.path.split("/") if p]
        kind = parts[0] if parts else ""
        with st.lock:
            st.requests += 1
            if kind in st.by_kind:
                st.by_kind[kind] += 1
            seen = st.per_path.get(url.path, 0)
            st.per_path[url.path] = seen + 1
            st.inflight += 1
            st.max_inflight = max(st.max_inflight, st.inflight)
            f = dict(st.faults)
            roll = st.rng.random()
        try:
            if f["latency"]:
                time.sleep(f["latency"])
            if seen < f["drop_first"]:
                self.close_connection = True
                return
            if seen - f["drop_first"] < f["fail_first"] or roll < f["error_rate"]:
                self._send(int(f["fail_status"]), {"error": "injected"})
                return
            if kind != "search" and st.api_key is not None:
                token = parse_qs(url.query).get("access_token", [None])[0]
                if token != st.api_key:
                    self._send(401, {"error": "bad token"})
                    return
            self._route(kind, parts, parse_qs(url.query))
        finally:
            with st.lock:
                st.inflight -= 1

    def _route(self, kind, parts, query):
        st = self.state
        if kind == "tiles" and len(parts) == 4:
            try:
                tile = TileCoord(*(int(p) for p in parts[1:]))
            except ValueError:
                self._send(400, {"error": "bad tile"})
                return
            w, s, e, n = tile.bounds()
            hits = [m for m in st.images.values()
                    if w <= m["lon"] < e and s < m["lat"] <= n]
            hits.sort(key=lambda m: m["image_id"])
            self._send(200, hits)
        elif kind == "images" and len(parts) == 2:
            data = st.blob(parts[1]) if parts[1] in st.images else None
            if data is None:
                self._send(404, {"error": "no such image"})
            else:
                self._send(200, data, "image/jpeg")
        elif kind == "search":
            q = query.get("q", [""])[0].strip().lower()
            place = st.places.get(q)
            if place is None:
                self._send(200, [])
            else:
                self._send(200, [{"display_name": q, "geojson": place}])
        else:
            self._send(404, {"error": "not found"})


class MockProviderServer:
    """Threaded mock server; ``with MockProviderServer(state) as srv: srv.url``."""

    def __init__(self, state: MockState, host="127.0.0.1", port=0):
        self.state = state
        self.httpd = ThreadingHTTPServer((host, port), _Handler)
        self.httpd.daemon_threads = True
        self.httpd.state = state
        self._thread = None

    @property
    def url(self):
        host, port = self.httpd.server_address[:2]
        return f"http://{host}:{port}"

    def start(self):
        self._thread = threading.Thread(target=self.httpd.serve_forever, daemon=True)
        self._thread.start()
        return self

    def stop(self):
        self.httpd.shutdown()
        self.httpd.server_close()

    def __enter__(self):
        return self.start()

    def __exit__(self, *exc):
        self.stop()
        return False


def load_corpus_state(corpus_dir, api_key=None, faults=None) -> MockState:
    """State from a corpus directory: ``images.json``, ``images/<id>.jpg``, optional ``places.json``."""
    with open(os.path.join(corpus_dir, "images.json"), encoding="utf-8") as fh:
        images = json.load(fh)
    places = {}
    pp = os.path.join(corpus_dir, "places.json")
    if os.path.exists(pp):
        with open(pp, encoding="utf-8") as fh:
            places = {k.lower(): v for k, v in json.load(fh).items()}
    return MockState(images, blob_dir=os.path.join(corpus_dir, "images"), places=places,
                     api_key=api_key, faults=faults)


def main(argv=None):
    ap = argparse.ArgumentParser(description="Serve a corpus directory as a mock imagery provider.")
    ap.add_argument("corpus", help="directory with images.json and images/")
    ap.add_argument("--host", default="127.0.0.1")
    ap.add_argument("--port", type=int, default=8765)
    ap.add_argument("--api-key")
    ap.add_argument("--latency", type=float, default=0.0)
    ap.add_argument("--fail-first", type=int, default=0)
    ap.add_argument("--drop-first", type=int, default=0)
    ap.add_argument("--error-rate", type=float, default=0.0)
    args = ap.parse_args(argv)
    faults = {"latency": args.latency, "fail_first": args.fail_first,
              "drop_first": args.drop_first, "error_rate": args.error_rate}
    srv = MockProviderServer(load_corpus_state(args.corpus, args.api_key, faults), args.host, args.port)
    print(srv.url, flush=True)
    try:
        srv.httpd.serve_forever()
    except KeyboardInterrupt:
        pass
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
