"""Shannon index, cosine distance, k-NN retrieval, 2-D PCA and embedding files."""

from __future__ import annotations

import csv
import json
import math
import os
import warnings

import numpy as np

from ..io_utils import atomic_open, atomic_write_bytes


def shannon_index(ratios) -> float:
    """Natural-log entropy of the normalized ratios; zero entries contribute nothing."""
    p = np.asarray(list(ratios.values()) if isinstance(ratios, dict) else list(ratios), dtype=np.float64)
    if p.size == 0 or np.any(~np.isfinite(p)):
        raise ValueError("ratios must be a non-empty finite sequence")
    if np.any(p < 0):
        raise ValueError("ratios must be non-negative")
    total = p.sum()
    if total <= 0:
        raise ValueError("all ratios are zero")
    p = p[p > 0] / total
    return float(-(p * np.log(p)).sum())


def cosine_distance(a, b) -> float:
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    na, nb = np.linalg.norm(a), np.linalg.norm(b)
    if na == 0 or nb == 0:
        raise ValueError("zero vector has no direction")
    return float(1.0 - np.dot(a, b) / (na * nb))


def _id_key(i):
    return (0, i, "") if isinstance(i, (int, np.integer)) else (1, 0, str(i))


def knn_query(query, corpus, k):
    """k nearest corpus entries by cosine distance, ascending, ties by id.

    ``corpus`` is a mapping id -> vector or a sequence of (id, vector).
    """
    items = list(corpus.items()) if isinstance(corpus, dict) else list(corpus)
    if not items:
        raise ValueError("empty corpus")
    if not 1 <= k <= len(items):
        raise ValueError(f"k must be in [1, {len(items)}]")
    ids = [i for i, _ in items]
    m = np.asarray([v for _, v in items], dtype=np.float64)
    q = np.asarray(query, dtype=np.float64)
    if m.shape[1] != q.shape[0]:
        raise ValueError(f"dimension mismatch: query {q.shape[0]} vs corpus {m.shape[1]}")
    norms = np.linalg.norm(m, axis=1)
    if np.any(norms == 0) or np.linalg.norm(q) == 0:
        raise ValueError("zero vector has no direction")
    d = 1.0 - (m @ q) / (norms * np.linalg.norm(q))
    order = sorted(range(len(ids)), key=lambda n: (d[n], _id_key(ids[n])))
    return [(ids[n], float(d[n])) for n in order[:k]]


def pca_2d(vectors):
    """Project onto the top two principal components of the centered data.

    Each axis is signed so its largest-magnitude loading is positive.  With
    rank below 2 the second coordinate is zero and a warning is raised.
    """
    x = np.asarray(vectors, dtype=np.float64)
    if x.ndim != 2 or x.shape[0] < 3 or x.shape[1] < 2:
        raise ValueError("pca_2d needs at least 3 vectors of dimension >= 2")
    xc = x - x.mean(axis=0)
    _, s, vt = np.linalg.svd(xc, full_matrices=False)
    tol = s[0] * max(x.shape) * np.finfo(float).eps if s.size else 0.0
    rank = int((s > tol).sum())
    comps = vt[:2].copy()
    for i in range(comps.shape[0]):
        j = int(np.argmax(np.abs(comps[i])))
        if comps[i, j] < 0:
            comps[i] = -comps[i]
    out = xc @ comps.T
    if rank < 2:
        warnings.warn(f"corpus has rank {rank}; second PCA axis set to zero", RuntimeWarning, stacklevel=2)
        out[:, 1] = 0.0
        if rank == 0:
            out[:, 0] = 0.0
    return out


def read_embeddings_csv(path):
    """Rows of ``id, v0, v1, ...``; a header row is detected and skipped."""
    ids, rows = [], []
    with open(path, newline="", encoding="utf-8") as fh:
        for n, row in enumerate(csv.reader(fh)):
            if not row:
                continue
            try:
                vals = [float(v) for v in row[1:]]
            except ValueError:
                if n == 0:
                    continue
                raise
            ids.append(row[0])
            rows.append(vals)
    if rows and len({len(r) for r in rows}) != 1:
        raise ValueError("embedding rows have differing dimensions")
    return ids, np.asarray(rows, dtype=np.float64)


def write_embeddings_csv(ids, vectors, path):
    vectors = np.asarray(vectors, dtype=np.float64)
    with atomic_open(path, newline="") as fh:
        w = csv.writer(fh, lineterminator="\r\n")
        w.writerow(["id"] + [f"v{i}" for i in range(vectors.shape[1])])
        for i, v in zip(ids, vectors):
            w.writerow([i] + [repr(float(x)) for x in v])


def write_embeddings_bin(vectors, path, ids=None):
    """Raw little-endian float32 rows plus ``<path>.json`` with dim and count."""
    v = np.ascontiguousarray(vectors, dtype="<f4")
    if v.ndim != 2:
        raise ValueError("vectors must be 2-D")
    atomic_write_bytes(path, v.tobytes())
    meta = {"dim": int(v.shape[1]), "count": int(v.shape[0])}
    if ids is not None:
        meta["ids"] = [str(i) for i in ids]
    with atomic_open(str(path) + ".json") as fh:
        json.dump(meta, fh)


def read_embeddings_bin(path):
    with open(str(path) + ".json", encoding="utf-8") as fh:
        meta = json.load(fh)
    dim, count = int(meta["dim"]), int(meta["count"])
    size = os.path.getsize(path)
    if size != 4 * dim * count:
        raise ValueError(f"binary size {size} does not match dim={dim} count={count}")
    v = np.fromfile(path, dtype="<f4").reshape(count, dim).astype(np.float64)
    ids = meta.get("ids") or [str(i) for i in range(count)]
    return ids, v


def load_embeddings(path):
    return read_embeddings_csv(path) if str(path).lower().endswith(".csv") else read_embeddings_bin(path)
