"""Interactive force-directed graph layout engine.

Simulate attraction/repulsion physics on a graph, steer it live from a
browser, edit node positions by hand, and get the final N x 2 coordinate
matrix back in the calling process.
"""

from .editing import (EditError, rotate_selection, selection_centroid,
                      set_pinned, translate_selection)
from .estimator import ForceLayout
from .graph import (EdgeRecord, Graph, GraphParseError, GraphValidationError,
                    NodeRecord, as_graph, connected_components, degrees,
                    parse_edgelist, parse_json_graph, require_valid,
                    to_json_graph, validate)
from .packing import pack_components
from .quadtree import QuadTree
from .simulation import (DEFAULT_ALPHA_DECAY, DivergenceError, LayoutState,
                         SimParams, Simulation, TickReport, force_center,
                         force_collide, force_link, force_many_body,
                         init_positions, run_headless, step, step_annealed,
                         step_continuous)

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_ALPHA_DECAY", "DivergenceError", "EdgeRecord", "EditError",
    "ForceLayout", "Graph", "GraphParseError", "GraphValidationError",
    "LayoutState", "NodeRecord", "QuadTree", "SimParams", "Simulation",
    "TickReport", "as_graph", "connected_components", "degrees",
    "force_center", "force_collide", "force_link", "force_many_body",
    "init_positions", "pack_components", "parse_edgelist", "parse_json_graph",
    "require_valid", "rotate_selection", "run_headless", "selection_centroid",
    "set_pinned", "step", "step_annealed", "step_continuous",
    "to_json_graph", "translate_selection", "validate",
    "__version__",
]
