"""Pinhole (rectilinear) crops of an equirectangular panorama.

World frame: x toward lon 0, y toward lon 90, z up.  A camera at yaw/pitch
looks along (lon=yaw, lat=pitch); image right points toward increasing lon,
image up toward increasing lat.
"""

from __future__ import annotations

import math

import numpy as np

from .panorama import check_equirect, sample, to_uint8


class PerspectiveCamera:
    def __init__(self, fov_deg=90.0, yaw_deg=0.0, pitch_deg=0.0, width=512, height=512):
        if not 0.0 < fov_deg < 180.0:
            raise ValueError(f"fov must be strictly between 0 and 180 degrees, got {fov_deg}")
        if not -90.0 <= pitch_deg <= 90.0:
            raise ValueError("pitch must be in [-90, 90]")
        if width < 1 or height < 1:
            raise ValueError("output size must be positive")
        self.fov = fov_deg
        self.yaw = yaw_deg
        self.pitch = pitch_deg
        self.width = width
        self.height = height
        self.f = (width / 2.0) / math.tan(math.radians(fov_deg) / 2.0)
        cy, sy = math.cos(math.radians(yaw_deg)), math.sin(math.radians(yaw_deg))
        cp, sp = math.cos(math.radians(pitch_deg)), math.sin(math.radians(pitch_deg))
        yaw_m = np.array([[cy, -sy, 0.0], [sy, cy, 0.0], [0.0, 0.0, 1.0]])
        # positive pitch lifts the forward axis toward +z
        pitch_m = np.array([[cp, 0.0, -sp], [0.0, 1.0, 0.0], [sp, 0.0, cp]])
        self.R = yaw_m @ pitch_m

    def pixel_to_ray(self, px, py):
        """Continuous pixel coords (centers at i + 0.5) -> unit world rays, shape (..., 3)."""
        xc = np.asarray(px, dtype=np.float64) - self.width / 2.0
        yc = np.asarray(py, dtype=np.float64) - self.height / 2.0
        cam = np.stack(np.broadcast_arrays(np.full_like(xc, self.f), xc, -yc), axis=-1)
        cam /= np.linalg.norm(cam, axis=-1, keepdims=True)
        return cam @ self.R.T

    def ray_to_pixel(self, ray):
        cam = np.asarray(ray, dtype=np.float64) @ self.R
        if np.any(cam[..., 0] <= 0):
            raise ValueError("ray points behind the camera")
        px = self.f * cam[..., 1] / cam[..., 0] + self.width / 2.0
        py = -self.f * cam[..., 2] / cam[..., 0] + self.height / 2.0
        return px, py

    def grid_rays(self):
        j = np.arange(self.width, dtype=np.float64) + 0.5
        i = np.arange(self.height, dtype=np.float64) + 0.5
        return self.pixel_to_ray(j[None, :], i[:, None])

    def horizontal_span_deg(self):
        """Angle between the rays through the left and right image edges at mid-height."""
        a = self.pixel_to_ray(0.0, self.height / 2.0)
        b = self.pixel_to_ray(float(self.width), self.height / 2.0)
        return math.degrees(math.acos(max(-1.0, min(1.0, float(np.dot(a, b))))))


def ray_to_lonlat(ray):
    ray = np.asarray(ray, dtype=np.float64)
    lon = np.degrees(np.arctan2(ray[..., 1], ray[..., 0]))
    lat = np.degrees(np.arctan2(ray[..., 2], np.hypot(ray[..., 0], ray[..., 1])))
    return lon, lat


def lonlat_to_ray(lon, lat):
    lo, la = np.radians(lon), np.radians(lat)
    return np.stack([np.cos(la) * np.cos(lo), np.cos(la) * np.sin(lo), np.sin(la)], axis=-1)


def to_perspective(pano, fov_deg=90.0, yaw_deg=0.0, pitch_deg=0.0, width=512, height=512,
                   interpolation="bilinear"):
    check_equirect(pano)
    cam = PerspectiveCamera(fov_deg, yaw_deg, pitch_deg, width, height)
    lon, lat = ray_to_lonlat(cam.grid_rays())
    out = sample(pano, lon, lat, interpolation)
    out = to_uint8(out) if pano.dtype == np.uint8 else out
    return out if pano.ndim == 3 else out[:, :, 0]
