"""Feature matrices, z-scores, k-means with k-means++ seeding, elbow curves."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .. import _ext

MAX_ITER = 300
DEFAULT_RESTARTS = 10


@dataclass
class FeatureMatrix:
    row_ids: list
    columns: list
    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.float64)
        if self.values.shape != (len(self.row_ids), len(self.columns)):
            raise ValueError("matrix shape does not match ids/columns")
        if len(set(self.columns)) != len(self.columns):
            raise ValueError("column names must be unique")


def zscore(m):
    """Columns to mean 0, population sd 1; constant columns become zeros."""
    fm = m if isinstance(m, FeatureMatrix) else None
    x = fm.values if fm else np.asarray(m, dtype=np.float64)
    mu = x.mean(axis=0)
    sd = x.std(axis=0)
    out = np.zeros_like(x)
    # sd of a constant float column can come out as a few ulps instead of 0
    nz = sd > 1e-12 * np.maximum(1.0, np.abs(mu))
    out[:, nz] = (x[:, nz] - mu[nz]) / sd[nz]
    if fm:
        return FeatureMatrix(list(fm.row_ids), list(fm.columns), out)
    return out


@dataclass
class ClusterModel:
    centroids: np.ndarray
    labels: np.ndarray
    inertia: float
    n_iter: int = 0
    history: list = field(default_factory=list)


def _values(m):
    return m.values if isinstance(m, FeatureMatrix) else np.asarray(m, dtype=np.float64)


def kmeans_pp_init(x, k, rng):
    n = len(x)
    idx = [int(rng.integers(n))]
    d2 = ((x - x[idx[0]]) ** 2).sum(axis=1)
    for _ in range(1, k):
        total = d2.sum()
        if total <= 0:
            # all remaining points coincide with chosen centers
            j = int(rng.integers(n))
        else:
            j = int(rng.choice(n, p=d2 / total))
        idx.append(j)
        d2 = np.minimum(d2, ((x - x[j]) ** 2).sum(axis=1))
    return x[idx].copy()


def lloyd(x, centroids, max_iter=MAX_ITER):
    """Lloyd iterations from given centroids; empty clusters move to the farthest point."""
    c = np.array(centroids, dtype=np.float64)
    k = len(c)
    labels, d = _ext.nearest_centroid(x, c)
    history = [float(d.sum())]
    it = 0
    for it in range(1, max_iter + 1):
        for j in range(k):
            members = labels == j
            if members.any():
                c[j] = x[members].mean(axis=0)
        counts = np.bincount(labels, minlength=k)
        for j in np.flatnonzero(counts == 0):
            _, dist = _ext.nearest_centroid(x, c)
            far = int(np.argmax(dist))
            c[j] = x[far]
        new, d = _ext.nearest_centroid(x, c)
        history.append(float(d.sum()))
        if np.array_equal(new, labels):
            labels = new
            break
        labels = new
    return ClusterModel(c, labels, float(d.sum()), it, history)


def hartigan(x, model, max_pass=MAX_ITER):
    """Single-point transfers that lower the inertia, until none does.

    Moving point p from cluster a (size na) to b changes the inertia by
    nb/(nb+1)|p-cb|^2 - na/(na-1)|p-ca|^2.  A partition stable under these
    moves is also stable under Lloyd's nearest-centroid step, so this only
    ever escapes Lloyd fixed points, never leaves one worse off.
    """
    labels = model.labels.copy()
    k = len(model.centroids)
    c = model.centroids.copy()
    n_of = np.bincount(labels, minlength=k).astype(np.float64)
    moved_any = False
    for _ in range(max_pass):
        moved = False
        for i in range(len(x)):
            a = labels[i]
            if n_of[a] <= 1:
                continue
            d2 = ((c - x[i]) ** 2).sum(axis=1)
            cost = n_of / (n_of + 1.0) * d2
            remove = n_of[a] / (n_of[a] - 1.0) * d2[a]
            cost[a] = np.inf
            b = int(np.argmin(cost))
            if cost[b] < remove - 1e-12 * max(1.0, remove):
                c[a] = (c[a] * n_of[a] - x[i]) / (n_of[a] - 1.0)
                c[b] = (c[b] * n_of[b] + x[i]) / (n_of[b] + 1.0)
                n_of[a] -= 1
                n_of[b] += 1
                labels[i] = b
                moved = moved_any = True
        if not moved:
            break
    if not moved_any:
        return model
    # recompute exactly and let Lloyd confirm the nearest-centroid property
    for j in range(k):
        c[j] = x[labels == j].mean(axis=0)
    out = lloyd(x, c, MAX_ITER)
    out.history = model.history + out.history
    return out


def _canonical(model):
    # number clusters by first appearance so equal partitions get equal labels
    order, seen = [], set()
    for lab in model.labels.tolist():
        if lab not in seen:
            seen.add(lab)
            order.append(lab)
    order += [j for j in range(len(model.centroids)) if j not in seen]
    remap = np.empty(len(order), dtype=np.int64)
    remap[order] = np.arange(len(order))
    return ClusterModel(model.centroids[order], remap[model.labels], model.inertia, model.n_iter, model.history)


def kmeans(m, k, seed, restarts=DEFAULT_RESTARTS, max_iter=MAX_ITER, workers=1, init=None,
           refine=True):
    """Best of ``restarts`` k-means++ runs, each Lloyd then (``refine``) Hartigan
    transfers.  Restart seeds derive from ``seed`` only, so results do not
    depend on ``workers``."""
    x = _values(m)
    n = len(x)
    if not 1 <= k <= n:
        raise ValueError(f"k={k} must be between 1 and the number of rows ({n})")
    seeds = np.random.SeedSequence(seed).spawn(restarts)

    def run(ss):
        m = lloyd(x, kmeans_pp_init(x, k, np.random.default_rng(ss)), max_iter)
        return hartigan(x, m) if refine else m

    if workers > 1 and restarts > 1:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            models = list(ex.map(run, seeds))
    else:
        models = [run(s) for s in seeds]
    if init is not None:
        m = lloyd(x, init, max_iter)
        models.append(hartigan(x, m) if refine else m)
    best = min(range(len(models)), key=lambda i: (models[i].inertia, i))
    return _canonical(models[best])


def elbow_curve(m, k_range, seed, restarts=DEFAULT_RESTARTS, workers=1):
    """(k, inertia) pairs.  Each k also tries the previous k's solution plus one
    centroid at the worst-fit point, which makes the curve non-increasing."""
    x = _values(m)
    ks = sorted(k_range)
    out = []
    prev = None
    for k in ks:
        init = None
        if prev is not None and len(prev.centroids) == k - 1:
            _, d = _ext.nearest_centroid(x, prev.centroids)
            init = np.vstack([prev.centroids, x[int(np.argmax(d))]])
        model = kmeans(x, k, seed, restarts, workers=workers, init=init)
        out.append((k, model.inertia))
        prev = model
    return out


def inertia_of(x, labels):
    x = np.asarray(x, dtype=np.float64)
    total = 0.0
    for lab in np.unique(labels):
        pts = x[labels == lab]
        total += float(((pts - pts.mean(axis=0)) ** 2).sum())
    return total


def elbow_knee(curve):
    """k at the largest second difference of inertia (informational)."""
    if len(curve) < 3:
        return None
    ks, ys = zip(*curve)
    second = [ys[i - 1] - 2 * ys[i] + ys[i + 1] for i in range(1, len(ys) - 1)]
    i = int(np.argmax(second))
    return ks[i + 1] if second[i] > 0 and not math.isclose(second[i], 0.0) else None
