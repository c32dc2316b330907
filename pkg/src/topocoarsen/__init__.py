"""Topology-preserving graph coarsening by strong collapse, edge collapse
and neighborhood coning, with a small homology oracle for checking it."""

from .collapse import (DominanceResult, Worklist, edge_collapse,
                       find_edge_dominator, find_node_dominator, strong_collapse)
from .coning import ConingPlan, neighborhood_coning, plan_coning
from .graph import (AttributedData, GraphError, InvalidEdgeError,
                    InvalidNodeError, SupernodeMap, WorkingGraph)
from .oracle import BettiVector, OracleScaleError, betti
from .pipeline import (CoarseningConfig, CoarseningReport, CoarseningResult,
                       ConfigError, aggregate_attributes, approximate_coarsening,
                       coarsen, drop_edges, exact_coarsening,
                       relaxed_strong_collapse)

__version__ = "0.1.0"
