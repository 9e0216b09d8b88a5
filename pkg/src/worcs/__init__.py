"""Comparison-based search in metric spaces with weak (abstaining) oracles."""

from .demand import Demand, entropy, power_law_demand, uniform_demand
from .doubling import DoublingReport, doubling_constant, strong_doubling_constant
from .metric import (
    MetricDataset,
    Subset,
    ball,
    diameter,
    epsilon_net,
    is_cover,
)
from .oracle import (
    OracleAnswer,
    OracleConfig,
    OracleInstance,
    OracleMode,
    TripletOracle,
    TripletRelation,
    voronoi,
)
from .search import (
    ComparisonSearch,
    SearchOutcome,
    SearchStatus,
    Strategy,
    StrategyKind,
    run_strategy,
    run_worcs1,
    run_worcs2,
)

__version__ = "0.1.0"

__all__ = [
    "Demand", "entropy", "power_law_demand", "uniform_demand",
    "DoublingReport", "doubling_constant", "strong_doubling_constant",
    "MetricDataset", "Subset", "ball", "diameter", "epsilon_net", "is_cover",
    "OracleAnswer", "OracleConfig", "OracleInstance", "OracleMode",
    "TripletOracle", "TripletRelation", "voronoi",
    "ComparisonSearch", "SearchOutcome", "SearchStatus", "Strategy",
    "StrategyKind", "run_strategy", "run_worcs1", "run_worcs2",
]
