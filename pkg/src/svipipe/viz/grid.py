"""Image grids: uniform tiles in row-major order."""

from __future__ import annotations

import csv
import io
import logging
import os
import warnings

import numpy as np
from PIL import Image

from ..io_utils import atomic_write_bytes, atomic_write_text

log = logging.getLogger(__name__)


def grid_order(n, sort_keys=None, seed=0):
    if sort_keys is not None:
        return sorted(range(n), key=lambda i: (sort_keys[i], i))
    return [int(i) for i in np.random.default_rng(seed).permutation(n)]


def image_grid(paths, out, columns=4, cell=(160, 80), sort_keys=None, seed=0, background=(0, 0, 0)):
    """Composite PNG at ``out`` plus ``<out>.data.csv`` (paths relative to ``out``);
    returns the image and the placed paths in order.

    ``sort_keys`` (parallel to ``paths``) sorts ascending; otherwise a seeded shuffle.
    """
    if columns < 1:
        raise ValueError("columns must be >= 1")
    paths = list(paths)
    if not paths:
        raise ValueError("image grid needs at least one image")
    order = grid_order(len(paths), sort_keys, seed)
    tiles = []
    for i in order:
        try:
            with Image.open(paths[i]) as im:
                tiles.append((i, im.convert("RGB").resize(cell, Image.BILINEAR)))
        except (OSError, ValueError) as e:
            warnings.warn(f"skipping unreadable image {paths[i]}: {e}", RuntimeWarning, stacklevel=2)
    if not tiles:
        raise ValueError("no readable images for the grid")
    rows = -(-len(tiles) // columns)
    cw, ch = cell
    canvas = Image.new("RGB", (columns * cw, rows * ch), background)
    layout = []
    for pos, (i, tile) in enumerate(tiles):
        r, c = divmod(pos, columns)
        canvas.paste(tile, (c * cw, r * ch))
        rel = os.path.relpath(paths[i], os.path.dirname(os.path.abspath(out)))
        layout.append((pos, r, c, rel.replace(os.sep, "/"), "" if sort_keys is None else sort_keys[i]))
    buf = io.BytesIO()
    canvas.save(buf, format="PNG")
    atomic_write_bytes(out, buf.getvalue())
    text = io.StringIO()
    w = csv.writer(text, lineterminator="\r\n")
    w.writerow(["position", "row", "column", "path", "sort_key"])
    w.writerows(layout)
    atomic_write_text(os.path.splitext(out)[0] + ".data.csv", text.getvalue())
    return canvas, [paths[i] for i, _ in tiles]
