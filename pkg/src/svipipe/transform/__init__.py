from .fisheye import PROJECTIONS, fisheye_grid, radial, rho_of_theta, theta_of_rho, to_fisheye
from .panorama import check_equirect, load_image, lonlat_to_pixel, pixel_to_lonlat, rotate_pano, save_image
from .perspective import PerspectiveCamera, lonlat_to_ray, ray_to_lonlat, to_perspective
from .pointcloud import (
    MODE_ABSOLUTE,
    MODE_RELATIVE,
    DepthMap,
    PointCloud,
    load_depth,
    point_norms,
    read_depth_bin,
    read_depth_png,
    read_ply,
    to_pointcloud,
    write_depth_bin,
    write_ply,
)

__all__ = [
    "MODE_ABSOLUTE",
    "MODE_RELATIVE",
    "PROJECTIONS",
    "DepthMap",
    "PerspectiveCamera",
    "PointCloud",
    "check_equirect",
    "fisheye_grid",
    "load_depth",
    "load_image",
    "lonlat_to_pixel",
    "lonlat_to_ray",
    "pixel_to_lonlat",
    "point_norms",
    "radial",
    "ray_to_lonlat",
    "read_depth_bin",
    "read_depth_png",
    "read_ply",
    "rho_of_theta",
    "rotate_pano",
    "save_image",
    "theta_of_rho",
    "to_fisheye",
    "to_perspective",
    "to_pointcloud",
    "write_depth_bin",
    "write_ply",
]
