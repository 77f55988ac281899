"""Append-only completion log: one ``unit_id<TAB>status<TAB>iso8601`` line per event."""

from __future__ import annotations

import os
import threading
from datetime import datetime, timezone

DONE = "done"
FAILED = "failed"


def _now_iso():
    return datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%S.%fZ")


class Checkpoint:
    """Thread-safe writer and replayer for a checkpoint file.

    Replay keeps the last status per unit, so duplicated lines are harmless.
    A torn final line (crash mid-write) is ignored.
    """

    def __init__(self, path, fsync=False):
        self.path = os.fspath(path)
        self.fsync = fsync
        self._lock = threading.Lock()
        self.status = self._replay()
        d = os.path.dirname(os.path.abspath(self.path))
        os.makedirs(d, exist_ok=True)
        self._fh = open(self.path, "a", encoding="utf-8", newline="\n")
        # a crash can leave an unterminated line; start ours on a fresh one
        if self._fh.tell() > 0:
            with open(self.path, "rb") as fh:
                fh.seek(-1, os.SEEK_END)
                if fh.read(1) != b"\n":
                    self._fh.write("\n")
                    self._fh.flush()

    def _replay(self):
        status = {}
        if not os.path.exists(self.path):
            return status
        with open(self.path, encoding="utf-8", newline="\n") as fh:
            for line in fh:
                if not line.endswith("\n"):
                    break
                parts = line.rstrip("\n").split("\t")
                if len(parts) != 3 or not parts[0]:
                    continue
                status[parts[0]] = parts[1]
        return status

    def is_done(self, unit_id):
        return self.status.get(unit_id) == DONE

    def is_settled(self, unit_id):
        return self.status.get(unit_id) in (DONE, FAILED)

    def completed(self):
        return {u for u, s in self.status.items() if s == DONE}

    def failed(self):
        return {u for u, s in self.status.items() if s == FAILED}

    def record(self, unit_id, status=DONE):
        if "\t" in unit_id or "\n" in unit_id:
            raise ValueError(f"unit id may not contain tabs or newlines: {unit_id!r}")
        with self._lock:
            self._fh.write(f"{unit_id}\t{status}\t{_now_iso()}\n")
            self._fh.flush()
            if self.fsync:
                os.fsync(self._fh.fileno())
            self.status[unit_id] = status

    def close(self):
        with self._lock:
            if not self._fh.closed:
                self._fh.close()

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()
        return False
