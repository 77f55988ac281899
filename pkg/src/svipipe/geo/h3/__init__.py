"""In-tree H3 hexagonal grid (cell index, center, boundary, parent)."""

from .core import (
    H3Error,
    cell_to_boundary,
    cell_to_latlng,
    cell_to_parent,
    cell_to_string,
    get_base_cell,
    get_resolution,
    is_pentagon,
    is_valid_cell,
    latlng_to_cell,
    string_to_cell,
)

__all__ = [
    "H3Error",
    "cell_to_boundary",
    "cell_to_latlng",
    "cell_to_parent",
    "cell_to_string",
    "get_base_cell",
    "get_resolution",
    "is_pentagon",
    "is_valid_cell",
    "latlng_to_cell",
    "string_to_cell",
]
