"""Triangle estimation with tripartite independent set (TIS) queries against a simulated oracle."""

from .graph import Graph, GeneratorSpec, count_triangles_brute, generate, load_edge_list
from .oracle import QueryLedger, TisOracle, tis_query
from .pipeline import EstimateReport, EstimatorConfig, estimate_triangles

__all__ = [
    "EstimateReport", "EstimatorConfig", "GeneratorSpec", "Graph", "QueryLedger", "TisOracle",
    "count_triangles_brute", "estimate_triangles", "generate", "load_edge_list", "tis_query",
]
__version__ = "0.1.0"
