"""Seeded synthetic image records for invariant tests."""

import numpy as np

from svipipe.acquire.records import ImageRecord

T0 = 1577836800000  # 2020-01-01T00:00:00Z


def synthetic_records(n, seed=0, lat=1.30, lon=103.85, spread=0.01, span_days=900):
    rng = np.random.default_rng(seed)
    out = []
    for i in range(n):
        out.append(ImageRecord(
            image_id=f"s{i:05d}",
            lat=float(lat + rng.uniform(-spread, spread)),
            lon=float(lon + rng.uniform(-spread, spread)),
            captured_at=int(T0 + rng.integers(0, span_days * 86400) * 1000),
            compass_angle=float(rng.uniform(0.0, 360.0)),
            is_pano=bool(rng.random() < 0.5),
            sequence_id=f"q{int(rng.integers(0, max(1, n // 10)))}",
            creator_id=f"u{int(rng.integers(0, 7))}",
            organization_id=None if rng.random() < 0.5 else f"o{int(rng.integers(0, 3))}",
        ))
    return out


def brute_force_inertia(x, k):
    """Smallest within-cluster sum of squares over every labeling into exactly k groups."""
    import itertools

    x = np.asarray(x, dtype=np.float64)
    best = np.inf
    for labels in itertools.product(range(k), repeat=len(x)):
        lab = np.asarray(labels)
        if len(set(labels)) != k or labels[0] != 0:
            continue  # empty group, or a relabeling of one already seen
        total = 0.0
        for g in range(k):
            pts = x[lab == g]
            total += float(((pts - pts.mean(axis=0)) ** 2).sum())
        best = min(best, total)
    return best
