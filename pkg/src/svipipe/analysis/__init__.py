from .cluster import ClusterModel, FeatureMatrix, elbow_curve, elbow_knee, inertia_of, kmeans, lloyd, zscore
from .features import add_complexity, aggregate_features
from .io import (
    clusters_to_geojson,
    join_rows,
    read_attribute_table,
    read_suitability_csv,
    write_clusters_csv,
    write_clusters_geojson,
    write_elbow_csv,
    write_suitability_csv,
)
from .suitability import (
    CRITERIA,
    FAIL,
    NA,
    PASS,
    FilterProfile,
    SuitabilityReport,
    evaluate_suitability,
    judge,
)

__all__ = [
    "CRITERIA",
    "ClusterModel",
    "FAIL",
    "FeatureMatrix",
    "FilterProfile",
    "NA",
    "PASS",
    "SuitabilityReport",
    "add_complexity",
    "aggregate_features",
    "clusters_to_geojson",
    "elbow_curve",
    "elbow_knee",
    "evaluate_suitability",
    "inertia_of",
    "join_rows",
    "judge",
    "kmeans",
    "lloyd",
    "read_attribute_table",
    "read_suitability_csv",
    "write_clusters_csv",
    "write_clusters_geojson",
    "write_elbow_csv",
    "write_suitability_csv",
    "zscore",
]
