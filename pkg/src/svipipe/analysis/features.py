"""Per-cell feature matrices over suitable images."""

from __future__ import annotations

import numpy as np

from ..geo import h3
from .cluster import FeatureMatrix
from .suitability import is_missing


def aggregate_features(records, attributes, indicators, resolution=9, suitable=None):
    """Mean of each indicator per H3 cell over suitable images.

    ``records`` are enriched records (or anything with image_id/lat/lon and an
    ``h3`` dict); ``attributes`` maps image_id -> {column: value};
    ``suitable`` is a set of image ids (None means all).  Cells without a
    suitable image are dropped.  A cell whose images all lack an indicator gets
    the mean of that indicator over the other cells (0 when no cell has it).
    """
    sums = {}
    for r in sorted(records, key=lambda r: r.image_id):
        if suitable is not None and r.image_id not in suitable:
            continue
        hx = getattr(r, "h3", {}) or {}
        cell = hx.get(resolution)
        if cell is None:
            cell = h3.latlng_to_cell(r.lat, r.lon, resolution)
        row = attributes.get(r.image_id, {})
        acc = sums.setdefault(h3.cell_to_string(cell), [np.zeros(len(indicators)), np.zeros(len(indicators)), 0])
        acc[2] += 1
        for j, name in enumerate(indicators):
            v = row.get(name)
            if not is_missing(v):
                acc[0][j] += float(v)
                acc[1][j] += 1
    cells = sorted(sums)
    vals = np.full((len(cells), len(indicators)), np.nan)
    for i, c in enumerate(cells):
        s, n, _ = sums[c]
        with np.errstate(invalid="ignore", divide="ignore"):
            vals[i] = np.where(n > 0, s / np.maximum(n, 1), np.nan)
    for j in range(len(indicators)):
        col = vals[:, j]
        fill = np.nanmean(col) if np.isfinite(col).any() else 0.0
        col[~np.isfinite(col)] = fill
    return FeatureMatrix(cells, list(indicators), vals)


def add_complexity(table, segment_columns, column="complexity"):
    """Fill ``column`` with the Shannon index of each image's segment ratios.
    Rows that already carry a value keep it; rows with no ratios stay missing."""
    from ..features.vectors import shannon_index

    for row in table.values():
        if not is_missing(row.get(column)):
            continue
        ratios = [row.get(c) for c in segment_columns]
        ratios = [float(v) for v in ratios if not is_missing(v)]
        row[column] = shannon_index(ratios) if ratios and sum(ratios) > 0 else None
    return table
