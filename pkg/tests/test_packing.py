import numpy as np
import pytest

from layoutlab.graph import Graph, connected_components
from layoutlab.packing import component_boxes, pack_components
from layoutlab.simulation import LayoutState

from helpers import make_graph


def boxes_after(graph, state):
    lo, hi, _ = component_boxes(graph, state)
    return lo, hi


def box_gap(lo_a, hi_a, lo_b, hi_b):
    """Largest axis gap between two axis-aligned boxes (negative = overlap)."""
    gx = max(lo_b[0] - hi_a[0], lo_a[0] - hi_b[0])
    gy = max(lo_b[1] - hi_a[1], lo_a[1] - hi_b[1])
    return max(gx, gy)


def pairwise_distances(points):
    return np.linalg.norm(points[:, None, :] - points[None, :, :], axis=2)


def test_single_component_is_pure_translation():
    g = make_graph(5, [(0, 1), (1, 2), (2, 3), (3, 4)])
    rng = np.random.default_rng(1)
    pos = rng.uniform(-40, 40, (5, 2))
    st = LayoutState(pos.copy(), rng.uniform(-1, 1, (5, 2)), np.zeros(5, bool))
    out = pack_components(g, st, margin=10.0)
    assert np.allclose(pairwise_distances(out.positions), pairwise_distances(pos), atol=1e-9)
    shift = out.positions - pos
    assert np.allclose(shift, shift[0], atol=1e-9)
    assert np.array_equal(out.velocities, st.velocities)


def test_two_components_margin_respected():
    g = make_graph(8, [(0, 1), (1, 2), (2, 3), (4, 5), (5, 6), (6, 7)], radius=1.0)
    rng = np.random.default_rng(2)
    pos = rng.uniform(-5, 5, (8, 2))
    st = LayoutState(pos, np.zeros((8, 2)), np.zeros(8, bool))
    out = pack_components(g, st, margin=10.0)
    lo, hi = boxes_after(g, out)
    assert box_gap(lo[0], hi[0], lo[1], hi[1]) >= 10.0 - 1e-9


def test_empty_graph():
    out = pack_components(Graph(), LayoutState.initial(0), margin=5.0)
    assert out.n == 0


def test_negative_margin_rejected():
    with pytest.raises(ValueError):
        pack_components(Graph(), LayoutState.initial(0), margin=-1.0)


@pytest.mark.parametrize("margin", [0.0, 3.0, 25.0])
def test_random_five_components(margin):
    # five chains of different sizes, scattered positions
    edges = []
    offset = 0
    for size in (2, 3, 4, 5, 6):
        edges.extend((offset + i, offset + i + 1) for i in range(size - 1))
        offset += size
    n = offset
    g = make_graph(n, edges)
    rng = np.random.default_rng(3)
    pos = rng.uniform(-500, 500, (n, 2))
    st = LayoutState(pos.copy(), np.zeros((n, 2)), np.zeros(n, bool))
    out = pack_components(g, st, margin=margin)

    labels, count = connected_components(g)
    assert count == 5
    for comp in range(count):
        sel = labels == comp
        assert np.allclose(pairwise_distances(out.positions[sel]),
                           pairwise_distances(pos[sel]), atol=1e-9)
    lo, hi = boxes_after(g, out)
    for a in range(count):
        for b in range(a + 1, count):
            assert box_gap(lo[a], hi[a], lo[b], hi[b]) >= margin - 1e-9


def test_composite_tracks_square():
    # many equal components should tile into multiple rows, not one long strip
    sizes = [(i, i + 1) for i in range(0, 24, 2)]
    g = make_graph(24, sizes)
    rng = np.random.default_rng(4)
    st = LayoutState(rng.uniform(-30, 30, (24, 2)), np.zeros((24, 2)), np.zeros(24, bool))
    out = pack_components(g, st, margin=2.0)
    lo, hi = boxes_after(g, out)
    width = hi[:, 0].max() - lo[:, 0].min()
    height = hi[:, 1].max() - lo[:, 1].min()
    assert height > 0
    assert width / height < 6.0
