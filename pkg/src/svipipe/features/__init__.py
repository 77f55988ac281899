from .color import HslStats, hsl_stats, rgb_to_hsl
from .edges import (
    CANNY_HIGH,
    CANNY_LOW,
    CANNY_SIGMA,
    EDGE_METHODS,
    LAPLACIAN_K,
    blob_detect,
    blur_score,
    edge_map,
    is_blurry,
    to_gray,
)
from .vectors import (
    cosine_distance,
    knn_query,
    load_embeddings,
    pca_2d,
    read_embeddings_bin,
    read_embeddings_csv,
    shannon_index,
    write_embeddings_bin,
    write_embeddings_csv,
)

__all__ = [
    "CANNY_HIGH",
    "CANNY_LOW",
    "CANNY_SIGMA",
    "EDGE_METHODS",
    "LAPLACIAN_K",
    "HslStats",
    "blob_detect",
    "blur_score",
    "cosine_distance",
    "edge_map",
    "hsl_stats",
    "is_blurry",
    "knn_query",
    "load_embeddings",
    "pca_2d",
    "read_embeddings_bin",
    "read_embeddings_csv",
    "rgb_to_hsl",
    "shannon_index",
    "to_gray",
    "write_embeddings_bin",
    "write_embeddings_csv",
]
