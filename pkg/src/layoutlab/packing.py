"""Rigidly repack disconnected components into a compact arrangement.

Loose components drift apart under repulsion; this shelf-packs their bounding
boxes (inflated by node radius) into rows whose width tracks the square root
of the total area, approximating a square composite without touching any
intra-component geometry.
"""

import numpy as np

from .graph import Graph, connected_components
from .simulation import LayoutState


def component_boxes(graph: Graph, state: LayoutState) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Per-component (min_xy, max_xy) over node discs, plus the labels."""
    labels, count = connected_components(graph)
    radii = graph.radii()
    lo = np.full((count, 2), np.inf)
    hi = np.full((count, 2), -np.inf)
    np.minimum.at(lo, labels, state.positions - radii[:, None])
    np.maximum.at(hi, labels, state.positions + radii[:, None])
    return lo, hi, labels


def pack_components(graph: Graph, state: LayoutState, margin: float = 0.0) -> LayoutState:
    """Translate each connected component so their boxes tile a near-square.

    Boxes are placed largest-area first, left to right on shelves, separated
    by at least `margin` on every side. Positions within a component move
    rigidly; velocities and pinned flags are untouched.
    """
    if margin < 0:
        raise ValueError("margin must be >= 0")
    out = state.copy()
    if state.n == 0:
        return out
    lo, hi, labels = component_boxes(graph, state)
    sizes = hi - lo
    areas = sizes[:, 0] * sizes[:, 1]
    order = np.argsort(-areas, kind="stable")

    target_width = max(float(np.sqrt(areas.sum())), float(sizes[:, 0].max()))
    cursor_x = 0.0
    cursor_y = 0.0
    row_height = 0.0
    for comp in order:
        w, h = float(sizes[comp, 0]), float(sizes[comp, 1])
        if cursor_x > 0.0 and cursor_x + w > target_width:
            cursor_y += row_height + margin
            cursor_x = 0.0
            row_height = 0.0
        shift = np.array([cursor_x, cursor_y]) - lo[comp]
        out.positions[labels == comp] += shift
        cursor_x += w + margin
        row_height = max(row_height, h)
    return out
