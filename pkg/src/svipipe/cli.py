"""svipipe command line: one subcommand per pipeline step, plus ``pipeline``.

Exit codes: 0 success, 1 runtime failure, 2 usage or config error.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys

from . import config as cfgmod, steps
from .acquire import AuthError, ProviderError
from .acquire.ratelimit import RetryExhausted

log = logging.getLogger("svipipe.cli")

# flags whose value is a filesystem path given relative to the working directory
_CWD_PATHS = {"run.out_dir", "metadata.network", "download.corpus", "transform.depth_dir",
              "features.embeddings"}


class _Formatter(logging.Formatter):
    def format(self, record):
        msg = record.getMessage()
        line = f"{self.formatTime(record, '%Y-%m-%dT%H:%M:%S')} level={record.levelname.lower()} module={record.name} {msg}"
        if record.exc_info and logging.getLogger().isEnabledFor(logging.DEBUG):
            line += " traceback=" + repr(self.formatException(record.exc_info))
        return line


def setup_logging(verbosity):
    level = {-1: logging.WARNING, 0: logging.INFO}.get(verbosity, logging.DEBUG)
    h = logging.StreamHandler(sys.stderr)
    h.setFormatter(_Formatter())
    root = logging.getLogger()
    root.handlers[:] = [h]
    root.setLevel(level)
    logging.captureWarnings(True)


def _common(p, out_flag="--out"):
    p.add_argument("--config", help="TOML config file; flags override its keys")
    p.add_argument(out_flag, dest="run.out_dir", metavar="DIR", help="output directory (default: out)")
    p.add_argument("--workers", dest="run.workers", type=int, help="worker budget")
    p.add_argument("--seed", dest="run.seed", type=int)
    g = p.add_mutually_exclusive_group()
    g.add_argument("-q", "--quiet", action="store_const", const=-1, dest="verbosity")
    g.add_argument("-v", "--verbose", action="store_const", const=1, dest="verbosity")


def _download_flags(p):
    p.add_argument("--region", dest="download.region",
                   help="lat,lon | w,s,e,n bbox | .csv | .geojson | place name")
    p.add_argument("--provider", dest="download.provider", choices=["mock", "mapillary"])
    p.add_argument("--provider-url", dest="download.base_url", metavar="URL")
    p.add_argument("--corpus", dest="download.corpus", metavar="DIR",
                   help="serve this corpus through an in-process mock provider")
    p.add_argument("--filter", dest="filters", action="append", metavar="KEY=VALUE")
    p.add_argument("--zoom", dest="download.zoom", type=int)
    p.add_argument("--rate", dest="download.rate", type=float, help="requests per second")
    p.add_argument("--size", dest="download.size", type=int)
    p.add_argument("--max-attempts", dest="download.max_attempts", type=int)
    p.add_argument("--retry-failed", dest="download.retry_failed", action="store_const", const=True)


def build_parser():
    ap = argparse.ArgumentParser(prog="svipipe", description="Street view imagery pipeline.")
    sub = ap.add_subparsers(dest="command", metavar="COMMAND")
    sub.required = True

    p = sub.add_parser("download", help="discover and fetch images for a region")
    _common(p)
    _download_flags(p)

    p = sub.add_parser("metadata", help="image-level indicators and hex/street aggregates")
    _common(p)
    p.add_argument("--network", dest="metadata.network", metavar="GEOJSON")
    p.add_argument("--resolution", dest="metadata.resolution", type=int)
    p.add_argument("--buffer-m", dest="metadata.buffer_m", type=float)
    p.add_argument("--timezone", dest="metadata.timezone", help="zone name or UTC offset for all images")
    p.add_argument("--twilight", dest="metadata.twilight", action="store_const", const=True)

    p = sub.add_parser("transform", help="perspective, fisheye and point-cloud outputs")
    _common(p)
    p.add_argument("--image", dest="image_ids", action="append", metavar="ID")
    p.add_argument("--fov", dest="transform.fov", type=float)
    p.add_argument("--yaw", dest="transform.yaw", type=float)
    p.add_argument("--pitch", dest="transform.pitch", type=float)
    p.add_argument("--width", dest="transform.width", type=int)
    p.add_argument("--height", dest="transform.height", type=int)
    p.add_argument("--projection", dest="transform.projection",
                   choices=["orthographic", "equisolid", "equidistant", "stereographic"])
    p.add_argument("--depth-dir", dest="transform.depth_dir")
    p.add_argument("--stride", dest="transform.stride", type=int)
    p.add_argument("--limit", dest="transform.limit", type=int)

    p = sub.add_parser("features", help="blur, edges, blobs, colour; optional embedding neighbours")
    _common(p)
    p.add_argument("--attributes", dest="attributes", action="append", metavar="CSV")
    p.add_argument("--edge-method", dest="features.edge_method",
                   choices=["laplacian", "sobel_x", "sobel_y", "canny"])
    p.add_argument("--embeddings", dest="features.embeddings")

    p = sub.add_parser("filter", help="per-image suitability")
    _common(p)
    p.add_argument("--attributes", dest="attributes", action="append", metavar="CSV")
    p.add_argument("--strict", dest="filter.strict", action="store_const", const=True,
                   help="missing values fail instead of pass")
    p.add_argument("--blur-threshold", dest="filter.blur_threshold", type=float)
    p.add_argument("--blur-direction", dest="filter.blur_direction", choices=["below", "above"])
    p.add_argument("--complexity-min", dest="filter.complexity_min", type=float)
    p.add_argument("--speed-max", dest="filter.speed_max_kmh", type=float)

    p = sub.add_parser("cluster", help="per-cell feature means, z-score, k-means, elbow curve")
    _common(p)
    p.add_argument("--attributes", dest="attributes", action="append", metavar="CSV")
    p.add_argument("--k", dest="cluster.k", type=int)
    p.add_argument("--resolution", dest="cluster.resolution", type=int)
    p.add_argument("--indicators", dest="indicators", help="comma-separated column names")

    p = sub.add_parser("viz", help="maps, histogram, KDE or image grid")
    _common(p, "--data-dir")
    p.add_argument("--kind", choices=["hex", "point", "line", "histogram", "kde", "grid"])
    p.add_argument("--variable")
    p.add_argument("--resolution", dest="viz.resolution", type=int)
    p.add_argument("--classes", dest="viz.classes", type=int, help="quantile classes (0 = continuous)")
    p.add_argument("--bins", dest="viz.bins", type=int)
    p.add_argument("--columns", dest="viz.grid_columns", type=int)
    p.add_argument("--sort-by", dest="viz.grid_sort_by")
    p.add_argument("--input", dest="input_csv", help="CSV with lat/lon and variable columns")
    p.add_argument("--out", dest="out_file", metavar="FILE",
                   help="output file (default: <data-dir>/map.svg, histogram.svg, ...)")

    p = sub.add_parser("pipeline", help="download through viz as configured")
    _common(p)
    _download_flags(p)

    p = sub.add_parser("mock-server", help="serve a corpus directory as a mock provider",
                       add_help=False)
    p.add_argument("mock_args", nargs=argparse.REMAINDER)
    for sp in sub.choices.values():
        for a in sp._actions:
            if "." in a.dest and a.metavar is None and a.nargs != 0:
                a.metavar = a.dest.rsplit(".", 1)[1].upper()
    return ap


def overrides_from(args):
    over = {}
    for k, v in vars(args).items():
        if "." in k and v is not None:
            over[k] = os.path.abspath(v) if k in _CWD_PATHS else v
    if getattr(args, "filters", None):
        from .acquire import parse_filters

        over["download.filters"] = parse_filters(args.filters)
    if getattr(args, "attributes", None):
        over["features.attributes"] = [os.path.abspath(a) for a in args.attributes]
    if getattr(args, "indicators", None):
        over["cluster.indicators"] = [s.strip() for s in args.indicators.split(",") if s.strip()]
    return over


def run(argv=None):
    argv = list(sys.argv[1:] if argv is None else argv)
    if argv[:1] == ["mock-server"]:
        # the server has its own parser; hand it everything after the name
        from .acquire.mockserver import main as mock_main

        try:
            return mock_main(argv[1:]) or 0
        except SystemExit as e:
            return int(e.code or 0)
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    setup_logging(args.verbosity or 0)
    try:
        cfg = cfgmod.load_config(args.config, overrides_from(args))
    except cfgmod.ConfigError as e:
        log.error("config error: %s", e)
        return 2
    if not os.path.isabs(cfg["run"]["out_dir"]):
        cfg["run"]["out_dir"] = os.path.abspath(cfg["run"]["out_dir"])
    if cfg["run"]["workers"] < 1:
        log.error("config error: run.workers must be >= 1")
        return 2
    os.makedirs(cfg["run"]["out_dir"], exist_ok=True)
    try:
        if args.command == "download":
            steps.step_download(cfg)
        elif args.command == "metadata":
            steps.step_metadata(cfg)
        elif args.command == "transform":
            steps.step_transform(cfg, set(args.image_ids) if args.image_ids else None)
        elif args.command == "features":
            steps.step_features(cfg)
        elif args.command == "filter":
            steps.step_filter(cfg)
        elif args.command == "cluster":
            steps.step_cluster(cfg)
        elif args.command == "viz":
            out_file = os.path.abspath(args.out_file) if args.out_file else None
            steps.step_viz(cfg, args.kind, args.variable, out_file, args.input_csv)
        elif args.command == "pipeline":
            steps.run_pipeline(cfg)
    except cfgmod.ConfigError as e:
        log.error("config error: %s", e)
        return 2
    except AuthError as e:
        log.error("download aborted: %s", e)
        return 1
    except (ProviderError, RetryExhausted, OSError, ValueError, KeyError, LookupError) as e:
        log.error("%s failed: %s", args.command, e, exc_info=True)
        return 1
    return 0


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
