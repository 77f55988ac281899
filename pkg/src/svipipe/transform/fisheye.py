"""Fisheye views of an equirectangular panorama.

Radius on the image is r(theta) / r(theta_max) for zenith angle theta, with
r = sin (orthographic), 2 sin(theta/2) (equisolid), theta (equidistant) or
2 tan(theta/2) (stereographic).  The image polar angle is the longitude.
"""

from __future__ import annotations

import math

import numpy as np

from .panorama import check_equirect, sample, to_uint8

PROJECTIONS = ("orthographic", "equisolid", "equidistant", "stereographic")


def radial(projection, theta):
    """r(theta) for angles in radians."""
    t = np.asarray(theta, dtype=np.float64)
    if projection == "orthographic":
        return np.sin(t)
    if projection == "equisolid":
        return 2.0 * np.sin(t / 2.0)
    if projection == "equidistant":
        return t
    if projection == "stereographic":
        return 2.0 * np.tan(t / 2.0)
    raise ValueError(f"unknown projection {projection!r}; choose from {PROJECTIONS}")


def rho_of_theta(projection, theta, theta_max=math.pi / 2):
    return radial(projection, theta) / radial(projection, theta_max)


def theta_of_rho(projection, rho, theta_max=math.pi / 2):
    """Zenith angle at normalized radius ``rho`` (closed-form inverse of r)."""
    r = np.asarray(rho, dtype=np.float64) * radial(projection, theta_max)
    if projection == "orthographic":
        return np.arcsin(np.clip(r, -1.0, 1.0))
    if projection == "equisolid":
        return 2.0 * np.arcsin(np.clip(r / 2.0, -1.0, 1.0))
    if projection == "equidistant":
        return r
    if projection == "stereographic":
        return 2.0 * np.arctan(r / 2.0)
    raise ValueError(f"unknown projection {projection!r}; choose from {PROJECTIONS}")


def fisheye_grid(size, projection, theta_max_deg=90.0, downward=False):
    """(lon, lat, inside) for every output pixel of an S x S fisheye."""
    if size < 2:
        raise ValueError("fisheye size must be >= 2")
    if not 0.0 < theta_max_deg <= 90.0:
        raise ValueError("theta_max must be in (0, 90]")
    tmax = math.radians(theta_max_deg)
    c = np.arange(size, dtype=np.float64) + 0.5 - size / 2.0
    x = c[None, :] / (size / 2.0)
    y = -c[:, None] / (size / 2.0)
    x, y = np.broadcast_arrays(x, y)
    rho = np.hypot(x, y)
    inside = rho <= 1.0
    theta = theta_of_rho(projection, np.minimum(rho, 1.0), tmax)
    lon = np.degrees(np.arctan2(y, x))
    lat = np.degrees(theta) - 90.0 if downward else 90.0 - np.degrees(theta)
    return lon, lat, inside


def to_fisheye(pano, projection="equidistant", size=512, theta_max_deg=90.0, downward=False,
               interpolation="bilinear"):
    """Square fisheye (upward-looking unless ``downward``); outside the disc is black."""
    check_equirect(pano)
    lon, lat, inside = fisheye_grid(size, projection, theta_max_deg, downward)
    out = sample(pano, lon, lat, interpolation)
    out[~inside] = 0.0
    out = to_uint8(out) if pano.dtype == np.uint8 else out
    return out if pano.ndim == 3 else out[:, :, 0]
