"""Maritime Connectivity Vulnerability Index: construction, uncertainty and analysis."""
from .dimensions import RawDimensionPanel, build_raw_panel
from .index import IndexPanel, WeightVector, aggregate_mcvi, derive_pca_weights, rank_countries
from .ingest import DataBundle, generate_fixture, load_bundle, load_dataset, write_bundle
from .normalize import Method, NormalizedPanel, normalize_panel
from .uncertainty import McConfig, McResult, decompose_variance, run_monte_carlo

__version__ = "0.1.0"

__all__ = [
    "DataBundle", "IndexPanel", "McConfig", "McResult", "Method", "NormalizedPanel",
    "RawDimensionPanel", "WeightVector", "aggregate_mcvi", "build_raw_panel",
    "decompose_variance", "derive_pca_weights", "generate_fixture", "load_bundle",
    "load_dataset", "normalize_panel", "rank_countries", "run_monte_carlo", "write_bundle",
]
