"""Panorama + depth -> colored point cloud, PLY output, depth file formats.

Point for pixel (u, v) with radius rho: x = rho cos(lat) cos(lon),
y = rho cos(lat) sin(lon), z = rho sin(lat).
"""

from __future__ import annotations

import math
import struct
from dataclasses import dataclass

import numpy as np
from PIL import Image

from ..io_utils import atomic_open, atomic_write_bytes
from .panorama import pixel_to_lonlat

MODE_ABSOLUTE = 0
MODE_RELATIVE = 1
_HEADER = struct.Struct("<4I")
DEFAULT_MAX_RANGE_M = 50.0


@dataclass
class DepthMap:
    values: np.ndarray  # (H, W) float
    mode: int = MODE_ABSOLUTE  # absolute meters, or relative 0..255

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.float64)
        if self.values.ndim != 2:
            raise ValueError("depth map must be 2-D")
        if self.mode not in (MODE_ABSOLUTE, MODE_RELATIVE):
            raise ValueError(f"unknown depth mode {self.mode}")
        finite = self.values[np.isfinite(self.values)]
        if finite.size and finite.min() < 0:
            raise ValueError("depth values must be >= 0")

    def radii(self, max_range_m=DEFAULT_MAX_RANGE_M):
        if self.mode == MODE_ABSOLUTE:
            return self.values
        return self.values / 255.0 * max_range_m


@dataclass
class PointCloud:
    xyz: np.ndarray  # (N, 3) float64
    rgb: np.ndarray  # (N, 3) uint8

    def __len__(self):
        return len(self.xyz)


def to_pointcloud(pano, depth: DepthMap, stride=1, max_range_m=DEFAULT_MAX_RANGE_M, max_depth_m=None):
    """Sample every ``stride``-th pixel in both directions.

    Pixels with non-finite depth, or depth above ``max_depth_m`` when given,
    are dropped.
    """
    if stride < 1:
        raise ValueError("stride must be >= 1")
    h, w = pano.shape[:2]
    if depth.values.shape != (h, w):
        raise ValueError(f"dimension mismatch: panorama {w}x{h}, depth {depth.values.shape[1]}x{depth.values.shape[0]}")
    rows = np.arange(0, h, stride)
    cols = np.arange(0, w, stride)
    lon, lat = pixel_to_lonlat(cols[None, :], rows[:, None], w, h)
    lon, lat = np.broadcast_arrays(lon, lat)
    rho = depth.radii(max_range_m)[np.ix_(rows, cols)]
    keep = np.isfinite(rho)
    if max_depth_m is not None:
        keep &= rho <= max_depth_m
    lo, la, r = np.radians(lon[keep]), np.radians(lat[keep]), rho[keep]
    xyz = np.column_stack([r * np.cos(la) * np.cos(lo), r * np.cos(la) * np.sin(lo), r * np.sin(la)])
    img = pano if pano.ndim == 3 else np.repeat(pano[:, :, None], 3, axis=2)
    rgb = np.asarray(img[np.ix_(rows, cols)][keep][:, :3], dtype=np.uint8)
    return PointCloud(xyz, rgb)


def write_ply(cloud: PointCloud, path):
    n = len(cloud)
    if n == 0:
        raise ValueError("empty point cloud")
    header = (
        "ply\nformat ascii 1.0\ncomment svipipe point cloud\n"
        f"element vertex {n}\n"
        "property float x\nproperty float y\nproperty float z\n"
        "property uchar red\nproperty uchar green\nproperty uchar blue\n"
        "end_header\n"
    )
    with atomic_open(path, newline="\n") as fh:
        fh.write(header)
        for (x, y, z), (r, g, b) in zip(cloud.xyz.tolist(), cloud.rgb.tolist()):
            fh.write(f"{x:.9g} {y:.9g} {z:.9g} {r} {g} {b}\n")


def read_ply(path) -> PointCloud:
    """Reader for the ASCII vertex-only files written by ``write_ply``."""
    with open(path, encoding="ascii") as fh:
        if fh.readline().strip() != "ply":
            raise ValueError("not a PLY file")
        n = None
        props = []
        for line in fh:
            line = line.strip()
            if line.startswith("format") and "ascii" not in line:
                raise ValueError("only ASCII PLY is supported")
            if line.startswith("element vertex"):
                n = int(line.split()[2])
            elif line.startswith("property"):
                props.append(line.split()[-1])
            elif line == "end_header":
                break
        if n is None:
            raise ValueError("PLY has no vertex element")
        data = np.loadtxt(fh, ndmin=2, max_rows=n) if n else np.zeros((0, len(props)))
    idx = {p: i for i, p in enumerate(props)}
    xyz = data[:, [idx["x"], idx["y"], idx["z"]]]
    rgb = data[:, [idx["red"], idx["green"], idx["blue"]]].astype(np.uint8)
    return PointCloud(xyz, rgb)


def write_depth_bin(depth: DepthMap, path):
    """16-byte header ``W H mode reserved`` (little-endian u32) then float32 row-major."""
    h, w = depth.values.shape
    body = np.ascontiguousarray(depth.values, dtype="<f4").tobytes()
    atomic_write_bytes(path, _HEADER.pack(w, h, depth.mode, 0) + body)


def read_depth_bin(path) -> DepthMap:
    with open(path, "rb") as fh:
        raw = fh.read()
    if len(raw) < _HEADER.size:
        raise ValueError("depth file too short")
    w, h, mode, _ = _HEADER.unpack_from(raw)
    need = _HEADER.size + 4 * w * h
    if len(raw) != need:
        raise ValueError(f"depth file size {len(raw)} does not match {w}x{h} header")
    vals = np.frombuffer(raw, dtype="<f4", offset=_HEADER.size).reshape(h, w).astype(np.float64)
    return DepthMap(vals, mode)


def read_depth_png(path) -> DepthMap:
    """Relative depth from a single-channel 8-bit PNG (0..255)."""
    with Image.open(path) as im:
        return DepthMap(np.asarray(im.convert("L"), dtype=np.float64), MODE_RELATIVE)


def load_depth(path) -> DepthMap:
    return read_depth_png(path) if str(path).lower().endswith(".png") else read_depth_bin(path)


def point_norms(cloud: PointCloud):
    return np.sqrt((cloud.xyz ** 2).sum(axis=1))


def expected_count(w, h, stride):
    return math.ceil(w / stride) * math.ceil(h / stride)
