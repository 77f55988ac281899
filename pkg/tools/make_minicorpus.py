"""Regenerate the bundled mini-corpus under src/svipipe/data/mini.

50 synthetic images (40 equirectangular panoramas, 10 flat frames) on a
small street grid, with provider metadata, an attribute table standing in
for model outputs, depth fixtures, embeddings and a street network.
Deterministic for a given --seed.
"""

import argparse
import csv
import io
import json
import math
import os
import struct
from datetime import datetime, timedelta, timezone

import numpy as np
from PIL import Image, ImageFilter

HERE = os.path.dirname(os.path.abspath(__file__))
DEFAULT_OUT = os.path.join(HERE, "..", "src", "svipipe", "data", "mini")

LAT0, LON0 = 1.2760, 103.8380
M_PER_DEG = 111_320.0
SGT = timezone(timedelta(hours=8))
PANO_W, PANO_H = 256, 128


def ll(x_m, y_m):
    """Local meters east/north of the origin -> (lat, lon)."""
    return LAT0 + y_m / M_PER_DEG, LON0 + x_m / (M_PER_DEG * math.cos(math.radians(LAT0)))


def street_grid():
    """Three east-west and three north-south streets, split at crossings."""
    xs = [0.0, 600.0, 1200.0]
    ys = [0.0, 600.0, 1200.0]
    segs = []
    for j, y in enumerate(ys):
        for i in range(len(xs) - 1):
            segs.append((f"ew{j}-{i}", [(xs[i], y), (xs[i + 1], y)]))
    for i, x in enumerate(xs):
        for j in range(len(ys) - 1):
            segs.append((f"ns{i}-{j}", [(x, ys[j]), (x, ys[j + 1])]))
    return segs


def network_geojson(segs):
    feats = []
    for sid, pts in segs:
        coords = [[round(lon, 7), round(lat, 7)] for lat, lon in (ll(x, y) for x, y in pts)]
        feats.append({"type": "Feature", "properties": {"id": sid},
                      "geometry": {"type": "LineString", "coordinates": coords}})
    return {"type": "FeatureCollection", "features": feats}


def pano_image(rng, night=False, blurred=False):
    h, w = PANO_H, PANO_W
    img = np.zeros((h, w, 3), dtype=np.float64)
    sky_top = np.array([60, 110, 200]) if not night else np.array([5, 8, 25])
    sky_bot = np.array([170, 200, 235]) if not night else np.array([20, 25, 50])
    for v in range(h // 2):
        t = v / (h / 2)
        img[v] = sky_top * (1 - t) + sky_bot * t
    # buildings: random-height blocks above the horizon
    u = 0
    while u < w:
        bw = int(rng.integers(10, 40))
        top = int(rng.integers(18, h // 2 - 4))
        col = rng.integers(80, 200, size=3) * (0.35 if night else 1.0)
        img[top:h // 2, u:u + bw] = col
        for wy in range(top + 3, h // 2 - 2, 6):
            for wx in range(u + 2, min(u + bw - 2, w), 5):
                lit = 230 if (night and rng.random() < 0.5) else (40 if night else 60)
                img[wy:wy + 2, wx:wx + 2] = lit
        u += bw
    # ground: sidewalk band then road with a centre line
    img[h // 2:h // 2 + 8] = (150, 150, 140) if not night else (40, 40, 38)
    img[h // 2 + 8:] = (85, 85, 90) if not night else (25, 25, 28)
    img[h // 2 + 30:h // 2 + 32, ::8] = 240 if not night else 120
    # trees
    for _ in range(int(rng.integers(2, 6))):
        cx, cy = int(rng.integers(0, w)), int(rng.integers(h // 2 - 20, h // 2 - 4))
        r = int(rng.integers(4, 9))
        yy, xx = np.ogrid[:h, :w]
        mask = (yy - cy) ** 2 + ((xx - cx + w // 2) % w - w // 2) ** 2 <= r * r
        img[mask] = (40, 120, 50) if not night else (10, 35, 15)
    img += rng.normal(0, 6, size=img.shape)
    im = Image.fromarray(np.clip(img, 0, 255).astype(np.uint8))
    if blurred:
        im = im.filter(ImageFilter.GaussianBlur(4))
    return im


def flat_image(rng):
    im = pano_image(rng).crop((0, 16, 160, 136 - 16)).resize((160, 120))
    return im


def depth_map(kind="absolute"):
    h, w = PANO_H, PANO_W
    v = np.arange(h) + 0.5
    lat = np.radians(90.0 - v / h * 180.0)
    d = np.full(h, 50.0)
    below = lat < -1e-9
    d[below] = np.minimum(2.5 / np.sin(-lat[below]), 50.0)
    above = (lat > 0) & (lat < np.radians(35))
    d[above] = np.minimum(15.0 / np.cos(lat[above]), 50.0)
    d = np.repeat(d[:, None], w, axis=1)
    if kind == "absolute":
        return d.astype("<f4")
    return np.clip(np.round(d / 50.0 * 255.0), 0, 255).astype(np.uint8)


def jpeg(im):
    buf = io.BytesIO()
    im.save(buf, format="JPEG", quality=90)
    return buf.getvalue()


def build(out, seed):
    rng = np.random.default_rng(seed)
    segs = street_grid()
    os.makedirs(os.path.join(out, "images"), exist_ok=True)
    os.makedirs(os.path.join(out, "depth"), exist_ok=True)

    # ten sequences of five captures, each along one street
    plan = []
    seg_cycle = [0, 3, 6, 1, 4, 7, 9, 11, 2, 5]
    base = datetime(2021, 1, 9, 9, 0, tzinfo=SGT)
    for s in range(10):
        sid, ((x0, y0), (x1, y1)) = segs[seg_cycle[s]]
        heading = (math.degrees(math.atan2(x1 - x0, y1 - y0)) + 360.0) % 360.0
        start = base + timedelta(days=int(37 * s), hours=int(3 * s) % 14)
        if s in (3, 8):
            start = start.replace(hour=21)  # two night sequences
        fast = s == 6
        for n in range(5):
            t = 0.12 + 0.16 * n
            x, y = x0 + t * (x1 - x0), y0 + t * (y1 - y0)
            x += float(rng.normal(0, 4))
            y += float(rng.normal(0, 4))
            step_s = 1.0 if fast else 9.0
            plan.append({
                "seq": s, "n": n, "x": x, "y": y, "heading": heading,
                "time": start + timedelta(seconds=step_s * n),
                "side": n == 4 and s % 2 == 1,
            })

    images, attrs, embeds = [], [], []
    for k, p in enumerate(plan):
        iid = f"{1000 + k}"
        is_pano = k % 5 != 2
        lat, lon = ll(p["x"], p["y"])
        compass = (p["heading"] + (90.0 if p["side"] else 0.0) + float(rng.normal(0, 3))) % 360.0
        night = p["time"].hour >= 19
        blurred = k in (7, 23, 41)
        im = pano_image(rng, night, blurred) if is_pano else flat_image(rng)
        with open(os.path.join(out, "images", f"{iid}.jpg"), "wb") as fh:
            fh.write(jpeg(im))
        images.append({
            "image_id": iid,
            "lat": round(lat, 7),
            "lon": round(lon, 7),
            "captured_at": int(p["time"].timestamp() * 1000),
            "compass_angle": round(compass, 2),
            "is_pano": is_pano,
            "sequence_id": f"seq{p['seq']:02d}",
            "creator_id": f"user{p['seq'] % 4}",
            "organization_id": "org1" if p["seq"] % 3 == 0 else None,
        })
        if k == 49:
            continue  # one image without model outputs
        seg = rng.dirichlet([3, 4, 3, 4, 2, 1])
        if k in (11, 29):
            seg = np.array([0.9, 0.05, 0.02, 0.02, 0.005, 0.005])  # nearly all sky: low complexity
        quality = "very poor" if k in (5, 33) else ("slightly poor" if k % 9 == 4 else "good")
        platform = "walking surface" if k % 11 == 3 else ("cycling surface" if k == 26 else "driving surface")
        row = {
            "image_id": iid,
            "quality": quality,
            "platform": platform,
            "view_direction": "side" if p["side"] else "front/back",
            "lighting": "night" if night else ("dusk/dawn" if p["time"].hour in (6, 18) else "day"),
        }
        for name, v in zip(["sky", "building", "vegetation", "road", "sidewalk", "other"], seg):
            row[name] = round(float(v), 5)
        for name in ["highway", "residential_neighborhood", "construction_site", "tree_farm", "forest_path",
                     "forest_road"]:
            row[name] = round(float(rng.beta(2, 8)), 5)
        for name in ["beautiful", "boring", "depressing", "lively", "safe", "wealthy"]:
            row[name] = round(float(rng.normal(5.0, 1.2)), 4)
        if k % 13 == 6:
            row["quality"] = ""
        if k % 17 == 8:
            row["platform"] = ""
        attrs.append(row)
        embeds.append([iid] + [round(float(x), 6) for x in rng.normal(size=8)])

    with open(os.path.join(out, "images.json"), "w", encoding="utf-8") as fh:
        json.dump(images, fh, indent=1)
    with open(os.path.join(out, "network.geojson"), "w", encoding="utf-8") as fh:
        json.dump(network_geojson(segs), fh, indent=1)
    lo_lat, lo_lon = ll(-100, -100)
    hi_lat, hi_lon = ll(1300, 1300)
    place = {"type": "Polygon", "coordinates": [[
        [round(lo_lon, 6), round(lo_lat, 6)], [round(hi_lon, 6), round(lo_lat, 6)],
        [round(hi_lon, 6), round(hi_lat, 6)], [round(lo_lon, 6), round(hi_lat, 6)],
        [round(lo_lon, 6), round(lo_lat, 6)]]]}
    with open(os.path.join(out, "places.json"), "w", encoding="utf-8") as fh:
        json.dump({"mini town": place}, fh, indent=1)
    cols = list(attrs[0])
    with open(os.path.join(out, "attributes.csv"), "w", newline="", encoding="utf-8") as fh:
        w = csv.DictWriter(fh, fieldnames=cols, lineterminator="\n")
        w.writeheader()
        w.writerows(attrs)
    with open(os.path.join(out, "embeddings.csv"), "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["id"] + [f"v{i}" for i in range(8)])
        w.writerows(embeds)

    panos = [m["image_id"] for m in images if m["is_pano"]]
    for iid in panos[:2]:
        d = depth_map("absolute")
        with open(os.path.join(out, "depth", f"{iid}.bin"), "wb") as fh:
            fh.write(struct.pack("<4I", PANO_W, PANO_H, 0, 0) + d.tobytes())
    Image.fromarray(depth_map("relative")).save(os.path.join(out, "depth", f"{panos[2]}.png"))
    print(f"wrote {len(images)} images to {os.path.normpath(out)}")


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default=DEFAULT_OUT)
    ap.add_argument("--seed", type=int, default=7)
    args = ap.parse_args(argv)
    build(args.out, args.seed)


if __name__ == "__main__":
    main()
