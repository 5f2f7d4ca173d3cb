"""Average dilation of metric graphs and greedy shortcut augmentation."""

from .analysis import BenefitLedger, DilationReport, average_dilation, benefit, pair_dilation
from .augment import (
    BoundReport,
    GreedyTrace,
    LemmaVerdict,
    OptimalResult,
    check_key_lemma,
    check_theorem_bounds,
    greedy_augment,
    optimal_augment,
)
from .errors import *  # noqa: F401,F403
from .graph import DistanceOracle, Graph, apsp, augment_distances, build_graph, floyd_warshall, is_connected
from .instance import Instance, emit_instance, generate_instance, parse_instance
from .metric import EPS, MetricSpace, build_space, metric_distance
from .shortcuts import ShortcutSet
from .signatures import (
    Decomposition,
    benefit_decomposition,
    canonical_shortest_path,
    restricted_benefit,
    signature,
    signature_map,
)

__version__ = "0.1.0"
