"""Checkpointed parallel download: discover tiles, then fetch images.

Layout under ``out_dir``::

    images.csv            metadata for every downloaded image, sorted by id
    images.errors.csv     units that failed permanently
    images/<id>.jpg       image files
    checkpoint.tsv        default checkpoint location
    .svipipe/tiles/       cached discovery responses, one JSON file per tile
    .svipipe/errors.jsonl failure details, appended as they happen
"""

from __future__ import annotations

import csv
import io
import json
import logging
import os
import threading
from concurrent.futures import FIRST_EXCEPTION, ThreadPoolExecutor, wait
from dataclasses import dataclass, field

from ..io_utils import atomic_write_bytes, atomic_write_text
from .checkpoint import DONE, FAILED, Checkpoint
from .providers import AuthError, ProviderError, RetryableError
from .ratelimit import RetryExhausted, TokenBucket, call_with_retry
from .records import ImageRecord, parse_bool, write_records_csv
from .region import parse_region
from .tiles import enumerate_tiles

log = logging.getLogger("svipipe.acquire")

MAX_TILES = 250_000


@dataclass
class DownloadResult:
    records: list
    failed: list = field(default_factory=list)
    discovered: int = 0
    tiles_requested: int = 0
    images_fetched: int = 0


def parse_filters(items):
    """``["k=v", ...]`` or a dict -> dict of strings."""
    if not items:
        return {}
    if isinstance(items, dict):
        return {str(k): str(v) for k, v in items.items()}
    out = {}
    for it in items:
        if "=" not in it:
            raise ValueError(f"filter must be key=value, got {it!r}")
        k, v = it.split("=", 1)
        out[k.strip()] = v.strip()
    return out


def _matches(raw: dict, rec: ImageRecord, filters: dict) -> bool:
    meta = dict(raw)
    meta.update(rec.as_meta())
    for k, want in filters.items():
        if k not in meta:
            raise ValueError(f"unknown filter key {k!r}")
        have = meta[k]
        if isinstance(have, bool):
            if have != parse_bool(want):
                return False
        elif str(have if have is not None else "").lower() != want.lower():
            return False
    return True


class _ErrorLog:
    def __init__(self, path):
        self.path = path
        self.lock = threading.Lock()

    def add(self, unit_id, message):
        with self.lock, open(self.path, "a", encoding="utf-8") as fh:
            fh.write(json.dumps({"unit_id": unit_id, "error": str(message)}) + "\n")

    def load(self):
        out = {}
        if os.path.exists(self.path):
            with open(self.path, encoding="utf-8") as fh:
                for line in fh:
                    try:
                        d = json.loads(line)
                    except json.JSONDecodeError:
                        continue
                    out[d["unit_id"]] = d["error"]
        return out


def download_all(provider, region, filters=None, workers=4, checkpoint=None, out_dir=".",
                 size=2048, zoom=14, rate=10.0, max_attempts=5, backoff_base=1.0,
                 backoff_factor=2.0, geocoder=None, retry_failed=False, sleep=None):
    """Download every image in ``region`` that matches ``filters``.

    Safe to interrupt at any point: rerunning with the same arguments skips
    completed tiles and images and produces the same output files.
    """
    if workers < 1:
        raise ValueError("workers must be >= 1")
    filters = parse_filters(filters)
    reg = parse_region(region, geocoder)
    tiles = enumerate_tiles(reg.tile_box(), zoom)
    if len(tiles) > MAX_TILES:
        raise ValueError(f"region covers {len(tiles)} tiles at z={zoom}; limit is {MAX_TILES}")

    state_dir = os.path.join(out_dir, ".svipipe")
    tile_dir = os.path.join(state_dir, "tiles")
    img_dir = os.path.join(out_dir, "images")
    os.makedirs(tile_dir, exist_ok=True)
    os.makedirs(img_dir, exist_ok=True)
    ckpt = Checkpoint(checkpoint or os.path.join(out_dir, "checkpoint.tsv"))
    errors = _ErrorLog(os.path.join(state_dir, "errors.jsonl"))
    bucket = TokenBucket(rate)
    retry_kw = dict(max_attempts=max_attempts, base=backoff_base, factor=backoff_factor,
                    before_attempt=bucket.acquire)
    if sleep is not None:
        retry_kw["sleep"] = sleep
    counters = {"tiles": 0, "images": 0}
    clock = threading.Lock()

    def pending(unit):
        return not (ckpt.is_done(unit) or (ckpt.status.get(unit) == FAILED and not retry_failed))

    def settle_failure(unit, exc):
        log.warning("unit failed unit=%s error=%s", unit, exc)
        errors.add(unit, exc)
        ckpt.record(unit, FAILED)

    def tile_path(t):
        return os.path.join(tile_dir, f"{t.z}_{t.x}_{t.y}.json")

    def do_tile(t):
        try:
            items = call_with_retry(lambda: provider.discover(t), RetryableError, **retry_kw)
        except (RetryExhausted, ProviderError) as exc:
            if isinstance(exc, AuthError):
                raise
            settle_failure(t.unit_id, exc)
            return
        with clock:
            counters["tiles"] += 1
        atomic_write_text(tile_path(t), json.dumps(items, sort_keys=True))
        ckpt.record(t.unit_id, DONE)

    def do_image(rec):
        unit = f"image:{rec.image_id}"
        try:
            data = call_with_retry(lambda: provider.fetch(rec.image_id, size), RetryableError, **retry_kw)
        except (RetryExhausted, ProviderError) as exc:
            if isinstance(exc, AuthError):
                raise
            settle_failure(unit, exc)
            return
        with clock:
            counters["images"] += 1
        atomic_write_bytes(os.path.join(img_dir, f"{rec.image_id}.jpg"), data)
        ckpt.record(unit, DONE)

    def run_pool(fn, items):
        if not items:
            return
        ex = ThreadPoolExecutor(max_workers=workers)
        try:
            futures = [ex.submit(fn, it) for it in items]
            done, _ = wait(futures, return_when=FIRST_EXCEPTION)
            for f in done:
                exc = f.exception()
                if exc is not None:
                    ex.shutdown(wait=True, cancel_futures=True)
                    raise exc
        finally:
            ex.shutdown(wait=True, cancel_futures=True)

    try:
        todo_tiles = [t for t in tiles if pending(t.unit_id)]
        log.info("discover tiles=%d pending=%d", len(tiles), len(todo_tiles))
        run_pool(do_tile, todo_tiles)

        found = {}
        for t in tiles:
            if not ckpt.is_done(t.unit_id):
                continue
            with open(tile_path(t), encoding="utf-8") as fh:
                for raw in json.load(fh):
                    try:
                        rec = ImageRecord.from_dict(raw)
                    except (TypeError, ValueError, KeyError) as exc:
                        log.warning("bad metadata skipped error=%s", exc)
                        continue
                    if not reg.contains(rec.lat, rec.lon) or not _matches(raw, rec, filters):
                        continue
                    found[rec.image_id] = rec
        ordered = [found[k] for k in sorted(found)]
        todo_imgs = [r for r in ordered if pending(f"image:{r.image_id}")]
        log.info("fetch images=%d pending=%d", len(ordered), len(todo_imgs))
        run_pool(do_image, todo_imgs)

        ok = [r.with_path(f"images/{r.image_id}.jpg") for r in ordered if ckpt.is_done(f"image:{r.image_id}")]
        write_records_csv(ok, os.path.join(out_dir, "images.csv"))
        messages = errors.load()
        failed_units = sorted(u for u in ckpt.failed())
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\r\n")
        w.writerow(["unit_id", "error"])
        for u in failed_units:
            w.writerow([u, messages.get(u, "")])
        atomic_write_text(os.path.join(out_dir, "images.errors.csv"), buf.getvalue())
        log.info("download complete images=%d failed=%d fetched=%d", len(ok), len(failed_units), counters["images"])
        return DownloadResult(ok, failed_units, len(ordered), counters["tiles"], counters["images"])
    finally:
        ckpt.close()
