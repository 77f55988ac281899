"""Atomic file writes: data goes to a temp file in the target directory, then rename."""

import os
import tempfile


def atomic_write_bytes(path, data: bytes):
    path = os.fspath(path)
    d = os.path.dirname(os.path.abspath(path))
    os.makedirs(d, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=".tmp-", dir=d)
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


def atomic_write_text(path, text: str, encoding="utf-8"):
    atomic_write_bytes(path, text.encode(encoding))


class atomic_open:
    """Context manager yielding a text handle whose contents replace ``path`` on success."""

    def __init__(self, path, mode="w", encoding="utf-8", newline=None):
        self.path = os.fspath(path)
        self.mode = mode
        self.encoding = None if "b" in mode else encoding
        self.newline = newline

    def __enter__(self):
        d = os.path.dirname(os.path.abspath(self.path))
        os.makedirs(d, exist_ok=True)
        fd, self.tmp = tempfile.mkstemp(prefix=".tmp-", dir=d)
        self.fh = os.fdopen(fd, self.mode, encoding=self.encoding, newline=self.newline)
        return self.fh

    def __exit__(self, exc_type, exc, tb):
        self.fh.close()
        if exc_type is None:
            os.replace(self.tmp, self.path)
        else:
            os.unlink(self.tmp)
        return False
