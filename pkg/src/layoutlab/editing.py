"""Manual layout edits: pure geometry on a LayoutState.

Every operation returns a new state, zeroes the velocities of edited nodes
(stale momentum would undo a manual placement on resume) and leaves every
unselected row bit-identical.
"""

import math

import numpy as np

from .simulation import LayoutState


class EditError(ValueError):
    pass


def normalize_selection(selection, n: int) -> np.ndarray:
    """Sorted unique indices, validated against the node count."""
    idx = np.unique(np.asarray(list(selection), dtype=np.int64))
    if idx.size and (idx[0] < 0 or idx[-1] >= n):
        bad = idx[0] if idx[0] < 0 else idx[-1]
        raise EditError(f"selection index {bad} out of range [0, {n})")
    return idx


def selection_centroid(state: LayoutState, selection) -> np.ndarray:
    sel = normalize_selection(selection, state.n)
    if sel.size == 0:
        raise EditError("selection is empty")
    return state.positions[sel].mean(axis=0)


def translate_selection(state: LayoutState, selection, delta) -> LayoutState:
    delta = np.asarray(delta, dtype=np.float64)
    if delta.shape != (2,) or not np.isfinite(delta).all():
        raise EditError(f"delta must be a finite 2-vector, got {delta!r}")
    sel = normalize_selection(selection, state.n)
    out = state.copy()
    out.positions[sel] += delta
    out.velocities[sel] = 0.0
    return out


def rotate_selection(state: LayoutState, selection, angle_rad: float,
                     pivot=None) -> LayoutState:
    if not math.isfinite(angle_rad):
        raise EditError(f"angle must be finite, got {angle_rad!r}")
    sel = normalize_selection(selection, state.n)
    if sel.size == 0:
        raise EditError("selection is empty")
    if pivot is None:
        pivot = state.positions[sel].mean(axis=0)
    else:
        pivot = np.asarray(pivot, dtype=np.float64)
        if pivot.shape != (2,) or not np.isfinite(pivot).all():
            raise EditError(f"pivot must be a finite 2-vector, got {pivot!r}")
    c, s = math.cos(angle_rad), math.sin(angle_rad)
    rot = np.array([[c, -s], [s, c]])
    out = state.copy()
    out.positions[sel] = pivot + (out.positions[sel] - pivot) @ rot.T
    out.velocities[sel] = 0.0
    return out


def set_pinned(state: LayoutState, selection, flag: bool) -> LayoutState:
    sel = normalize_selection(selection, state.n)
    out = state.copy()
    out.pinned[sel] = flag
    if flag:
        out.velocities[sel] = 0.0
    return out
