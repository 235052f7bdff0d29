import numpy as np

from layoutlab.graph import EdgeRecord, Graph, NodeRecord
from layoutlab.jiggle import COINCIDENT_DIST, pair_jiggle


def make_graph(n, edge_pairs, radius=6.0, weight=1.0, edge_weight=1.0):
    nodes = tuple(NodeRecord(id=f"n{i}", radius=radius, weight=weight) for i in range(n))
    edges = tuple(EdgeRecord(source=s, target=t, weight=edge_weight) for s, t in edge_pairs)
    return Graph(nodes=nodes, edges=edges)


def random_graph(n, m, seed, radius=6.0):
    rng = np.random.default_rng(seed)
    pairs = []
    while len(pairs) < m:
        a, b = rng.integers(0, n, 2)
        if a != b:
            pairs.append((int(a), int(b)))
    return make_graph(n, pairs, radius=radius)


def cycle_graph(n):
    return make_graph(n, [(i, (i + 1) % n) for i in range(n)])


def brute_repulsion(positions, charges, seed=0):
    """Exact all-pairs charge/d^2 sum; the independent oracle for the tree."""
    n = len(positions)
    out = np.zeros((n, 2))
    eps2 = COINCIDENT_DIST * COINCIDENT_DIST
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            delta = positions[j] - positions[i]
            d2 = float(delta @ delta)
            if d2 < eps2:
                delta = pair_jiggle(seed, i, j)
                d2 = float(delta @ delta)
            out[i] += charges[j] * delta / d2
    return out


def random_wire_message(rng):
    """One random client/server message; floats span signs and magnitudes."""
    from layoutlab import protocol as P

    def num():
        mag = 10.0 ** rng.uniform(-12, 12)
        v = float(rng.choice([-1, 1]) * mag * rng.random())
        return v if rng.random() > 0.05 else float(rng.integers(-5, 6))

    def ident():
        length = int(rng.integers(1, 9))
        chars = "abcdefghij0123456789_-μλ"
        return "".join(chars[i] for i in rng.integers(0, len(chars), length))

    def ids():
        return tuple(ident() for _ in range(int(rng.integers(0, 5))))

    kind = int(rng.integers(0, 13))
    if kind == 0:
        nodes = tuple((ident(), abs(num()) + 1.0) for _ in range(int(rng.integers(0, 5))))
        edges = tuple((int(rng.integers(0, 5)), int(rng.integers(0, 5)))
                      for _ in range(int(rng.integers(0, 5))))
        return P.Init(nodes=nodes, edges=edges,
                      params={"alpha": num(), "engine": "annealed"},
                      phase=str(rng.choice(["SIMULATING", "PAUSED", "EDITING"])))
    if kind == 1:
        n = int(rng.integers(0, 6))
        return P.Positions(seq=int(rng.integers(0, 1 << 40)),
                           xy=tuple(num() for _ in range(2 * n)))
    if kind == 2:
        return P.PhaseChanged(phase=str(rng.choice(["SIMULATING", "PAUSED", "EDITING", "FINISHED"])))
    if kind == 3:
        return P.Error(message=ident() + " failed")
    if kind == 4:
        return P.SetParams(params={str(rng.choice(["alpha", "theta", "repulsion_strength"])): num()})
    if kind == 5:
        return P.Pause()
    if kind == 6:
        return P.Resume()
    if kind == 7:
        return P.EnterEdit()
    if kind == 8:
        return P.ExitEdit()
    if kind == 9:
        return P.EditTranslate(ids=ids(), dx=num(), dy=num())
    if kind == 10:
        pivot = None if rng.random() < 0.5 else (num(), num())
        return P.EditRotate(ids=ids(), angle_rad=num(), pivot=pivot)
    if kind == 11:
        return P.SetPinned(ids=ids(), pinned=bool(rng.random() < 0.5))
    return P.Finish()
