"""Pipeline steps.  Each reads and writes files under the output directory."""

from __future__ import annotations

import contextlib
import csv
import json
import logging
import os
import time

import numpy as np

from . import analysis, config as cfgmod, features, metadata, transform, viz
from .acquire import download_all, make_provider, read_records_csv
from .acquire.mockserver import MockProviderServer, load_corpus_state
from .acquire.region import HttpGeocoder
from .geo import load_network
from .io_utils import atomic_open, atomic_write_text

log = logging.getLogger("svipipe.pipeline")

FEATURE_COLUMNS = ["image_id", "blur_score", "edge_density", "blob_count", "hue", "saturation",
                   "lightness", "hue_resultant", "complexity"]


def out_path(cfg, *parts):
    return os.path.join(cfg["run"]["out_dir"], *parts)


def _fmt(v):
    if v is None:
        return ""
    if isinstance(v, float):
        return "" if np.isnan(v) else repr(v)
    return str(v)


def _read_csv(path):
    with open(path, newline="", encoding="utf-8") as fh:
        return list(csv.DictReader(fh))


def _require(path, what):
    if not os.path.exists(path):
        raise FileNotFoundError(f"{what} not found: {path} (run the earlier step first)")
    return path


@contextlib.contextmanager
def provider_for(cfg):
    """Provider plus geocoder; spins up the bundled mock server when configured with a corpus."""
    d = cfg["download"]
    server = None
    base = d["base_url"]
    if d["provider"] == "mock" and not base and d["corpus"]:
        server = MockProviderServer(load_corpus_state(cfgmod.resolve(cfg, d["corpus"]),
                                                      api_key=os.environ.get("SVIPIPE_API_KEY")))
        server.start()
        base = server.url
        log.info("mock provider started url=%s", base)
    try:
        provider = make_provider(d["provider"], base or None)
        geocoder = HttpGeocoder(base) if d["provider"] == "mock" and base else HttpGeocoder()
        yield provider, geocoder
    finally:
        if server is not None:
            server.stop()


def step_download(cfg):
    d = cfg["download"]
    if not d["region"]:
        raise cfgmod.ConfigError("download.region is required")
    region = d["region"]
    maybe_file = cfgmod.resolve(cfg, region)
    if os.path.exists(maybe_file):
        region = maybe_file
    with provider_for(cfg) as (provider, geocoder):
        res = download_all(
            provider, region, filters=d["filters"], workers=cfg["run"]["workers"],
            out_dir=cfg["run"]["out_dir"], size=d["size"], zoom=d["zoom"], rate=d["rate"],
            max_attempts=d["max_attempts"], backoff_base=d["backoff_base"], geocoder=geocoder,
            retry_failed=d["retry_failed"],
        )
    log.info("step=download images=%d failed=%d", len(res.records), len(res.failed))
    return res


def _network(cfg):
    p = cfg["metadata"]["network"]
    return load_network(cfgmod.resolve(cfg, p)) if p else None


def step_metadata(cfg):
    m = cfg["metadata"]
    records = read_records_csv(_require(out_path(cfg, "images.csv"), "images.csv"))
    network = _network(cfg)
    res = sorted({m["resolution"], cfg["cluster"]["resolution"], cfg["viz"]["resolution"]})
    tz = {r.image_id: m["timezone"] for r in records} if m["timezone"] else None
    enriched = metadata.enrich(records, network=network, resolution=res, tz=tz, twilight=m["twilight"],
                               max_street_distance_m=m["street_max_distance_m"])
    metadata.write_enriched_csv(enriched, out_path(cfg, "metadata.csv"))
    hexu = metadata.HexUnits(m["resolution"])
    rows = metadata.aggregate(enriched, hexu, m["buffer_m"])
    metadata.write_aggregates_csv(rows, out_path(cfg, "aggregates_hex.csv"))
    metadata.write_aggregates_geojson(rows, hexu, out_path(cfg, "aggregates_hex.geojson"))
    n_street = 0
    if network:
        su = metadata.StreetUnits(network, m["street_max_distance_m"])
        srows = metadata.aggregate(enriched, su, m["buffer_m"])
        metadata.write_aggregates_csv(srows, out_path(cfg, "aggregates_street.csv"))
        metadata.write_aggregates_geojson(srows, su, out_path(cfg, "aggregates_street.geojson"))
        n_street = len(srows)
    log.info("step=metadata records=%d cells=%d streets=%d", len(enriched), len(rows), n_street)
    return enriched


def load_attributes(cfg):
    """Merged attribute tables (later files win), with complexity filled from segment ratios."""
    merged = {}
    for p in cfg["features"]["attributes"]:
        for iid, row in analysis.read_attribute_table(cfgmod.resolve(cfg, p)).items():
            merged.setdefault(iid, {}).update(row)
    seg = cfg["features"]["segment_columns"]
    if seg:
        analysis.add_complexity(merged, seg, cfg["filter"]["complexity_column"])
    return merged


def image_features(img, edge_method="canny"):
    hsl = features.hsl_stats(img)
    edges = features.edge_map(img, edge_method)
    density = float(np.mean(edges > 0)) if edge_method == "canny" else float(np.mean(np.abs(edges)))
    return {
        "blur_score": features.blur_score(img),
        "edge_density": density,
        "blob_count": len(features.blob_detect(img, min_area=4, threshold=200)),
        "hue": hsl.hue,
        "saturation": hsl.saturation,
        "lightness": hsl.lightness,
        "hue_resultant": hsl.hue_resultant,
    }


def step_features(cfg):
    f = cfg["features"]
    records = read_records_csv(_require(out_path(cfg, "images.csv"), "images.csv"))
    attrs = load_attributes(cfg)
    ccol = cfg["filter"]["complexity_column"]
    rows = []
    for r in records:
        row = {"image_id": r.image_id}
        try:
            img = transform.load_image(os.path.join(cfg["run"]["out_dir"], r.path))
            row.update(image_features(img, f["edge_method"]))
        except (OSError, ValueError) as e:
            log.warning("features skipped image=%s error=%s", r.image_id, e)
        row["complexity"] = attrs.get(r.image_id, {}).get(ccol)
        rows.append(row)
    with atomic_open(out_path(cfg, "features.csv"), newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=FEATURE_COLUMNS, lineterminator="\r\n")
        w.writeheader()
        for row in rows:
            w.writerow({c: _fmt(row.get(c)) for c in FEATURE_COLUMNS})
    if f["embeddings"]:
        _embedding_outputs(cfg, cfgmod.resolve(cfg, f["embeddings"]), f["knn_k"])
    log.info("step=features images=%d", len(rows))
    return rows


def _embedding_outputs(cfg, path, k):
    ids, vecs = features.load_embeddings(path)
    xy = features.pca_2d(vecs)
    with atomic_open(out_path(cfg, "embeddings_pca.csv"), newline="") as fh:
        w = csv.writer(fh, lineterminator="\r\n")
        w.writerow(["image_id", "pc1", "pc2"])
        for i, (a, b) in zip(ids, xy):
            w.writerow([i, repr(float(a)), repr(float(b))])
    with atomic_open(out_path(cfg, "knn.csv"), newline="") as fh:
        w = csv.writer(fh, lineterminator="\r\n")
        w.writerow(["image_id", "rank", "neighbor_id", "cosine_distance"])
        for n, i in enumerate(ids):
            others = [j for j in range(len(ids)) if j != n]
            corpus = [(ids[j], vecs[j]) for j in others]
            hits = features.knn_query(vecs[n], corpus, min(k, len(corpus)))
            for rank, (j, d) in enumerate(hits, start=1):
                w.writerow([i, rank, j, repr(d)])


def joined_rows(cfg):
    enriched = metadata.read_enriched_csv(_require(out_path(cfg, "metadata.csv"), "metadata.csv"))
    feats = {}
    fp = out_path(cfg, "features.csv")
    if os.path.exists(fp):
        for row in _read_csv(fp):
            feats[row["image_id"]] = {k: v for k, v in row.items() if k != "image_id" and v != ""}
    attrs = load_attributes(cfg)
    return enriched, analysis.join_rows(enriched, attrs, feats)


def step_filter(cfg):
    _, rows = joined_rows(cfg)
    profile = cfgmod.filter_profile(cfg)
    reports = analysis.evaluate_suitability(rows, profile, strict=cfg["filter"]["strict"] or None)
    analysis.write_suitability_csv(reports, out_path(cfg, "suitability.csv"))
    n_ok = sum(r.is_suitable for r in reports)
    log.info("step=filter images=%d suitable=%d", len(reports), n_ok)
    return reports


def step_cluster(cfg):
    c = cfg["cluster"]
    enriched, rows = joined_rows(cfg)
    suitable = {k for k, v in analysis.read_suitability_csv(
        _require(out_path(cfg, "suitability.csv"), "suitability.csv")).items() if v}
    table = {r["image_id"]: r for r in rows}
    matrix = analysis.aggregate_features(enriched, table, c["indicators"], c["resolution"], suitable)
    n = len(matrix.row_ids)
    if n == 0:
        raise ValueError("no suitable images to cluster")
    z = analysis.zscore(matrix)
    k = min(c["k"], n)
    if k < c["k"]:
        log.warning("only %d cells; k reduced from %d", n, c["k"])
    model = analysis.kmeans(z, k, cfg["run"]["seed"], c["restarts"], workers=cfg["run"]["workers"])
    analysis.write_clusters_csv(matrix, model, out_path(cfg, "clusters.csv"))
    analysis.write_clusters_geojson(matrix, model, out_path(cfg, "clusters.geojson"))
    ks = [kk for kk in c["elbow_k"] if 1 <= kk <= n]
    curve = analysis.elbow_curve(z, ks, cfg["run"]["seed"], c["restarts"], workers=cfg["run"]["workers"])
    analysis.write_elbow_csv(curve, out_path(cfg, "elbow.csv"))
    log.info("step=cluster cells=%d k=%d inertia=%.6g", n, k, model.inertia)
    return matrix, model


def _depth_file(cfg, image_id):
    d = cfgmod.resolve(cfg, cfg["transform"]["depth_dir"])
    if not d:
        return None
    for ext in (".bin", ".png"):
        p = os.path.join(d, image_id + ext)
        if os.path.exists(p):
            return p
    return None


def step_transform(cfg, image_ids=None):
    t = cfg["transform"]
    records = read_records_csv(_require(out_path(cfg, "images.csv"), "images.csv"))
    done = []
    for r in records:
        if image_ids is not None and r.image_id not in image_ids:
            continue
        if image_ids is None and (not r.is_pano or len(done) >= t["limit"]):
            continue
        if image_ids is None and t["depth_dir"] and _depth_file(cfg, r.image_id) is None:
            continue
        pano = transform.load_image(os.path.join(cfg["run"]["out_dir"], r.path))
        transform.check_equirect(pano)
        persp = transform.to_perspective(pano, t["fov"], t["yaw"], t["pitch"], t["width"], t["height"])
        transform.save_image(persp, out_path(cfg, "perspective", f"{r.image_id}.jpg"))
        cam = transform.PerspectiveCamera(t["fov"], t["yaw"], t["pitch"], t["width"], t["height"])
        meta = {"image_id": r.image_id, "fov_deg": t["fov"], "yaw_deg": t["yaw"], "pitch_deg": t["pitch"],
                "width": t["width"], "height": t["height"], "focal_px": cam.f,
                "horizontal_span_deg": cam.horizontal_span_deg()}
        atomic_write_text(out_path(cfg, "perspective", f"{r.image_id}.json"), json.dumps(meta, indent=1))
        fish = transform.to_fisheye(pano, t["projection"], t["fisheye_size"])
        transform.save_image(fish, out_path(cfg, "fisheye", f"{r.image_id}_{t['projection']}.jpg"))
        dp = _depth_file(cfg, r.image_id)
        if dp:
            cloud = transform.to_pointcloud(pano, transform.load_depth(dp), t["stride"], t["max_range_m"])
            transform.write_ply(cloud, out_path(cfg, "pointcloud", f"{r.image_id}.ply"))
        done.append(r.image_id)
    log.info("step=transform panoramas=%d", len(done))
    return done


def step_viz(cfg, kind=None, variable=None, out=None, input_csv=None):
    v = cfg["viz"]
    kind = kind or v["kind"]
    variable = variable if variable is not None else (v["variable"] or None)
    if input_csv:
        rows = _read_csv(input_csv)
    else:
        enriched, joined = joined_rows(cfg)
        by_id = {r.image_id: r for r in enriched}
        rows = []
        for row in joined:
            r = by_id[row["image_id"]]
            rows.append(dict(row, lat=r.lat, lon=r.lon, path=r.path))
    default = {"hex": "map.svg", "point": "map_point.svg", "line": "map_line.svg",
               "histogram": "histogram.svg", "kde": "kde.svg", "grid": "grid.png"}
    if kind not in default:
        raise ValueError(f"unknown viz kind {kind!r}; choose from {sorted(default)}")
    target = out or default[kind]
    target = target if os.path.isabs(target) else out_path(cfg, target)
    if kind in ("hex", "point", "line"):
        viz.render_map(rows, target, kind, variable, v["resolution"], _network(cfg) if kind == "line" else None,
                       v["classes"])
    elif kind in ("histogram", "kde"):
        if not variable:
            raise ValueError(f"{kind} needs a variable")
        if rows and variable not in rows[0]:
            raise ValueError(f"variable not found in data: column {variable!r}")
        vals = [float(r[variable]) for r in rows if r.get(variable) not in (None, "")]
        if kind == "histogram":
            viz.render_histogram(vals, target, v["bins"], xlabel=variable)
        else:
            viz.render_kde(vals, target, xlabel=variable)
    else:
        paths = [os.path.join(cfg["run"]["out_dir"], r["path"]) for r in rows if r.get("path")]
        keys = None
        if v["grid_sort_by"]:
            col = v["grid_sort_by"]
            keep = [r for r in rows if r.get("path") and r.get(col) not in (None, "")]
            paths = [os.path.join(cfg["run"]["out_dir"], r["path"]) for r in keep]
            keys = [float(r[col]) for r in keep]
        viz.image_grid(paths, target, v["grid_columns"], sort_keys=keys, seed=cfg["run"]["seed"])
    log.info("step=viz kind=%s out=%s", kind, target)
    return target


def run_pipeline(cfg):
    t0 = time.monotonic()
    step_download(cfg)
    step_metadata(cfg)
    step_features(cfg)
    step_filter(cfg)
    step_cluster(cfg)
    step_transform(cfg)
    step_viz(cfg, "hex")
    hist_var = cfg["viz"]["histogram"] or "blur_score"
    step_viz(cfg, "histogram", hist_var)
    step_viz(cfg, "kde", hist_var)
    step_viz(cfg, "grid")
    log.info("pipeline complete seconds=%.2f out=%s", time.monotonic() - t0, cfg["run"]["out_dir"])
