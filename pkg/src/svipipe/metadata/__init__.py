from .aggregate import AGGREGATE_FIELDS, DEFAULT_BUFFER_M, HexUnits, StreetUnits, aggregate, circular_mean_deg
from .enrich import EnrichedRecord, enrich, fold_relative_angle, local_time, season_for
from .io import (
    aggregates_to_geojson,
    read_enriched_csv,
    write_aggregates_csv,
    write_aggregates_geojson,
    write_enriched_csv,
)
from .solar import is_daytime, solar_elevation

__all__ = [
    "AGGREGATE_FIELDS",
    "DEFAULT_BUFFER_M",
    "EnrichedRecord",
    "HexUnits",
    "StreetUnits",
    "aggregate",
    "aggregates_to_geojson",
    "circular_mean_deg",
    "enrich",
    "fold_relative_angle",
    "is_daytime",
    "local_time",
    "read_enriched_csv",
    "season_for",
    "solar_elevation",
    "write_aggregates_csv",
    "write_aggregates_geojson",
    "write_enriched_csv",
]
