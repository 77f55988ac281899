from .colors import RAMP, Scale, ramp_color
from .grid import grid_order, image_grid
from .maps import KINDS, map_features, render_map
from .plots import histogram, kde, render_histogram, render_kde, silverman_bandwidth

__all__ = [
    "KINDS",
    "RAMP",
    "Scale",
    "grid_order",
    "histogram",
    "image_grid",
    "kde",
    "map_features",
    "ramp_color",
    "render_histogram",
    "render_kde",
    "render_map",
    "silverman_bandwidth",
]
