"""Report battery built on an :class:`~mcvi.index.IndexPanel`."""
from .decomposition import ClusterReport, DominantReport, cluster_profiles, dominant_dimensions
from .events import COVID_19, FINANCIAL_CRISIS, PRESET_EVENTS, RED_SEA, EventReport, EventSpec, event_study
from .groups import GroupReport, group_statistics
from .properties import PropertiesReport, descriptive_statistics, index_properties
from .robustness import robustness_suite
from .temporal import TrendReport, temporal_report
from .validation import RegressionReport, convergent_summary, convergent_validity, run_regressions

__all__ = [
    "COVID_19", "FINANCIAL_CRISIS", "PRESET_EVENTS", "RED_SEA",
    "ClusterReport", "DominantReport", "EventReport", "EventSpec", "GroupReport",
    "PropertiesReport", "RegressionReport", "TrendReport",
    "cluster_profiles", "convergent_summary", "convergent_validity", "descriptive_statistics",
    "dominant_dimensions", "event_study", "group_statistics", "index_properties",
    "robustness_suite", "run_regressions", "temporal_report",
]
