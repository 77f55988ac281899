from .checkpoint import Checkpoint
from .download import DownloadResult, download_all, parse_filters
from .mockserver import MockProviderServer, MockState, load_corpus_state
from .providers import AuthError, HttpProvider, MapillaryProvider, ProviderError, RetryableError, make_provider
from .records import ImageRecord, read_records_csv, write_records_csv
from .region import HttpGeocoder, PlaceNotFound, Region, RegionInput, parse_region
from .tiles import TileCoord, TileSet, enumerate_tiles

__all__ = [
    "AuthError",
    "Checkpoint",
    "DownloadResult",
    "HttpGeocoder",
    "HttpProvider",
    "ImageRecord",
    "MapillaryProvider",
    "MockProviderServer",
    "MockState",
    "PlaceNotFound",
    "ProviderError",
    "Region",
    "RegionInput",
    "RetryableError",
    "TileCoord",
    "TileSet",
    "download_all",
    "enumerate_tiles",
    "load_corpus_state",
    "make_provider",
    "parse_filters",
    "parse_region",
    "read_records_csv",
    "write_records_csv",
]
