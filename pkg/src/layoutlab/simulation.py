"""Physics core: two engines, four forces, deterministic headless runs.

The `annealed` engine damps velocities and cools a global alpha toward zero,
so every run terminates on its own; the `continuous` engine never cools and
is stopped by a mean-movement threshold (or the user). Both share the
Barnes-Hut repulsion, the collision pass and the deterministic jiggle, so a
run is a pure function of (graph, params, seed, max_ticks).
"""

import math
import weakref
from dataclasses import dataclass, fields, replace

import numpy as np

from .graph import Graph, degrees, require_valid
from .jiggle import COINCIDENT_DIST, pair_jiggle, pair_jiggle_many
from .quadtree import QuadTree

_EPS2 = COINCIDENT_DIST * COINCIDENT_DIST

ENGINES = ("annealed", "continuous")

# Cooling rate that reaches alpha_min = 0.001 in exactly 300 ticks.
DEFAULT_ALPHA_DECAY = 1.0 - 0.001 ** (1.0 / 300.0)


class DivergenceError(RuntimeError):
    """A force stage produced a non-finite coordinate (parameter blow-up)."""

    def __init__(self, node: int, stage: str):
        self.node = node
        self.stage = stage
        super().__init__(f"non-finite value at node {node} after {stage} stage; "
                         f"simulation parameters are likely unstable")


@dataclass
class SimParams:
    """Every runtime-tunable knob for both engines.

    `link_strength=None` selects the per-edge default
    weight / min(degree(source), degree(target)); a number replaces the
    degree term and is still multiplied by the edge weight.
    """

    engine: str = "annealed"
    # annealed engine
    alpha: float = 1.0
    alpha_min: float = 0.001
    alpha_decay: float = DEFAULT_ALPHA_DECAY
    alpha_target: float = 0.0
    velocity_damping: float = 0.4
    # shared forces
    repulsion_strength: float = -30.0
    theta: float = 0.9
    link_strength: float | None = None
    link_rest_length: float = 30.0
    link_iterations: int = 3
    center_strength: float = 0.05
    collide_enabled: bool = False
    collide_padding: float = 2.0
    collide_iterations: int = 1
    # continuous engine
    time_step: float = 20.0
    spring_coefficient: float = 8e-4
    drag_coefficient: float = 0.02
    gravity_strength: float = -1.2
    stop_epsilon: float = 0.01

    def validate(self) -> None:
        problems = []
        if self.engine not in ENGINES:
            problems.append(f"engine must be one of {ENGINES}, got {self.engine!r}")
        for name, lo, hi in (("alpha", 0.0, 1.0), ("alpha_target", 0.0, 1.0),
                             ("alpha_decay", 0.0, 1.0), ("center_strength", 0.0, 1.0)):
            v = getattr(self, name)
            if not (isinstance(v, (int, float)) and lo <= v <= hi):
                problems.append(f"{name} must be in [{lo}, {hi}], got {v!r}")
        if not 0.0 < self.alpha_min <= 1.0:
            problems.append(f"alpha_min must be in (0, 1], got {self.alpha_min!r}")
        if not 0.0 <= self.velocity_damping < 1.0:
            problems.append(f"velocity_damping must be in [0, 1), got {self.velocity_damping!r}")
        if not self.repulsion_strength < 0.0:
            problems.append(f"repulsion_strength must be < 0 (negative repels), got {self.repulsion_strength!r}")
        if self.link_strength is not None and not self.link_strength > 0.0:
            problems.append(f"link_strength must be > 0 or None, got {self.link_strength!r}")
        for name in ("link_rest_length", "time_step", "spring_coefficient", "stop_epsilon"):
            if not getattr(self, name) > 0.0:
                problems.append(f"{name} must be > 0, got {getattr(self, name)!r}")
        if self.collide_padding < 0.0:
            problems.append(f"collide_padding must be >= 0, got {self.collide_padding!r}")
        for name in ("collide_iterations", "link_iterations"):
            v = getattr(self, name)
            if not (isinstance(v, int) and v >= 1):
                problems.append(f"{name} must be an integer >= 1, got {v!r}")
        if self.drag_coefficient < 0.0:
            problems.append(f"drag_coefficient must be >= 0, got {self.drag_coefficient!r}")
        if problems:
            raise ValueError("; ".join(problems))

    def to_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}

    def update(self, changes: dict) -> None:
        """Apply a partial update, rejecting unknown keys and bad values."""
        known = {f.name for f in fields(self)}
        unknown = set(changes) - known
        if unknown:
            raise KeyError(f"unknown parameter(s): {', '.join(sorted(unknown))}")
        trial = replace(self)
        for key, value in changes.items():
            setattr(trial, key, _coerce_param(key, value))
        trial.validate()
        for key in changes:
            setattr(self, key, getattr(trial, key))

    def copy(self) -> "SimParams":
        return replace(self)


_PARAM_TYPES = {
    "engine": str,
    "collide_enabled": bool,
    "collide_iterations": int,
    "link_iterations": int,
}


def _coerce_param(key: str, value):
    kind = _PARAM_TYPES.get(key, float)
    if kind is str:
        if not isinstance(value, str):
            raise ValueError(f"{key} must be a string, got {value!r}")
        return value
    if kind is bool:
        if isinstance(value, bool):
            return value
        if isinstance(value, str):
            if value.lower() in ("true", "1", "yes", "on"):
                return True
            if value.lower() in ("false", "0", "no", "off"):
                return False
        raise ValueError(f"{key} must be a boolean, got {value!r}")
    if key == "link_strength" and (value is None or (isinstance(value, str) and value.lower() in ("none", "null"))):
        return None
    if isinstance(value, bool):
        raise ValueError(f"{key} must be a number, got {value!r}")
    try:
        num = kind(value)
    except (TypeError, ValueError):
        raise ValueError(f"{key} must be a {kind.__name__}, got {value!r}") from None
    if kind is float and not math.isfinite(num):
        raise ValueError(f"{key} must be finite, got {value!r}")
    return num


@dataclass
class LayoutState:
    """Positions, velocities and pinned flags; one row per graph node."""

    positions: np.ndarray
    velocities: np.ndarray
    pinned: np.ndarray

    def __post_init__(self):
        self.positions = np.ascontiguousarray(self.positions, dtype=np.float64)
        self.velocities = np.ascontiguousarray(self.velocities, dtype=np.float64)
        self.pinned = np.ascontiguousarray(self.pinned, dtype=bool)
        n = self.positions.shape[0]
        if self.positions.shape != (n, 2) or self.velocities.shape != (n, 2) \
                or self.pinned.shape != (n,):
            raise ValueError("positions/velocities must be (N, 2) and pinned (N,)")

    @property
    def n(self) -> int:
        return self.positions.shape[0]

    def copy(self) -> "LayoutState":
        return LayoutState(self.positions.copy(), self.velocities.copy(), self.pinned.copy())

    @classmethod
    def initial(cls, n: int, seed: int = 0) -> "LayoutState":
        return cls(init_positions(n, seed), np.zeros((n, 2)), np.zeros(n, dtype=bool))


@dataclass
class TickReport:
    tick_index: int
    alpha: float | None
    mean_movement: float
    converged: bool


def init_positions(n: int, seed: int = 0) -> np.ndarray:
    """Phyllotaxis spiral: node i at radius 10*sqrt(0.5+i), angle i*pi*(3-sqrt(5)).

    Deterministic and independent of the seed (the seed only drives the
    coincidence jiggle elsewhere); no two nodes coincide.
    """
    del seed
    if n < 0:
        raise ValueError("n must be >= 0")
    i = np.arange(n, dtype=np.float64)
    radius = 10.0 * np.sqrt(0.5 + i)
    angle = i * (np.pi * (3.0 - np.sqrt(5.0)))
    return np.column_stack((radius * np.cos(angle), radius * np.sin(angle)))


# --------------------------------------------------------------------- forces

_edge_cache: "weakref.WeakKeyDictionary[Graph, dict]" = weakref.WeakKeyDictionary()


def _edge_arrays(graph: Graph) -> dict:
    """Per-graph arrays for the non-self-loop edges, cached weakly."""
    cached = _edge_cache.get(graph)
    if cached is not None:
        return cached
    deg = degrees(graph)
    src, tgt, wts, rest = [], [], [], []
    for e in graph.edges:
        if e.source == e.target:
            continue
        src.append(e.source)
        tgt.append(e.target)
        wts.append(e.weight)
        rest.append(np.nan if e.rest_length is None else e.rest_length)
    arrays = {
        "degrees": deg,
        "src": np.array(src, dtype=np.int64),
        "tgt": np.array(tgt, dtype=np.int64),
        "weight": np.array(wts, dtype=np.float64),
        "rest": np.array(rest, dtype=np.float64),
    }
    ds = deg[arrays["src"]] if len(src) else np.empty(0)
    dt = deg[arrays["tgt"]] if len(tgt) else np.empty(0)
    arrays["bias"] = ds / (ds + dt) if len(src) else np.empty(0)
    arrays["min_degree"] = np.minimum(ds, dt) if len(src) else np.empty(0)
    _edge_cache[graph] = arrays
    return arrays


def _separations(pos_a, pos_b, idx_a, idx_b, seed):
    """pos_b - pos_a with coincident rows replaced by the pair jiggle."""
    delta = pos_b - pos_a
    d2 = np.einsum("ij,ij->i", delta, delta)
    tiny = d2 < _EPS2
    if tiny.any():
        delta[tiny] = pair_jiggle_many(seed, idx_a[tiny], idx_b[tiny])
        d2 = np.einsum("ij,ij->i", delta, delta)
    return delta, np.sqrt(d2)


def force_link(graph: Graph, state: LayoutState, alpha: float, params: SimParams,
               seed: int = 0) -> np.ndarray:
    """Velocity increments from edge springs.

    Each non-self-loop edge pulls its endpoints toward the rest length at the
    provisional positions (position + velocity); the correction is split by
    the degree bias so high-degree endpoints move less. The pass runs
    link_iterations relaxation sweeps, each reading the velocities left by
    the previous one; stiff structures (cycles, lattices) need the extra
    sweeps to reach uniform edge lengths inside the cooling budget.
    """
    ea = _edge_arrays(graph)
    total = np.zeros((state.n, 2))
    src, tgt = ea["src"], ea["tgt"]
    if src.size == 0:
        return total
    rest = np.where(np.isnan(ea["rest"]), params.link_rest_length, ea["rest"])
    if params.link_strength is None:
        strength = ea["weight"] / ea["min_degree"]
    else:
        strength = ea["weight"] * params.link_strength
    bias = ea["bias"][:, None]
    vel = state.velocities
    # Non-finite inputs produce nan increments here; the per-stage finiteness
    # check in the step reports them, so silence the intermediate warnings.
    with np.errstate(invalid="ignore", divide="ignore", over="ignore"):
        for _ in range(params.link_iterations):
            provisional = state.positions + vel + total
            delta, d = _separations(provisional[src], provisional[tgt], src, tgt, seed)
            scale = (d - rest) / d * strength * alpha
            c = delta * scale[:, None]
            incr = np.zeros((state.n, 2))
            np.add.at(incr, tgt, -c * bias)
            np.add.at(incr, src, c * (1.0 - bias))
            total += incr
    return total


def force_many_body(graph: Graph, state: LayoutState, alpha: float, params: SimParams,
                    tree: QuadTree | None = None, seed: int = 0) -> np.ndarray:
    """Velocity increments from Barnes-Hut pairwise repulsion.

    Charges are repulsion_strength * node weight; the tree must have been
    built from the state's current positions if supplied.
    """
    if state.n == 0:
        return np.zeros((0, 2))
    if tree is None:
        charges = params.repulsion_strength * graph.weights()
        tree = QuadTree.build(state.positions, charges)
    return alpha * tree.repulsion_all(params.theta, seed=seed)


def force_center(state: LayoutState, params: SimParams, weights=None) -> np.ndarray:
    """Translation added to every unpinned position to recenter the layout.

    Returns -centroid * center_strength where the centroid is taken over
    unpinned nodes (weighted when node weights are supplied).
    """
    free = ~state.pinned
    if state.n == 0 or not free.any():
        return np.zeros(2)
    pts = state.positions[free]
    if weights is None:
        centroid = pts.mean(axis=0)
    else:
        w = np.asarray(weights, dtype=np.float64)[free]
        centroid = (pts * w[:, None]).sum(axis=0) / w.sum()
    return -centroid * params.center_strength


def force_collide(graph: Graph, state: LayoutState, params: SimParams,
                  seed: int = 0) -> np.ndarray:
    """Position corrections that push overlapping node discs apart.

    Candidate pairs come from circle queries against a fresh quadtree each
    pass; pairs are then resolved sequentially in (i, j) index order so later
    pairs see earlier corrections. The split is inverse to node weight, and a
    pinned node's share transfers to its free partner.
    """
    n = state.n
    deltas = np.zeros((n, 2))
    if n < 2:
        return deltas
    radii = graph.radii()
    weights = graph.weights()
    pad = params.collide_padding
    r_max = float(radii.max())
    pos = state.positions.copy()
    px = pos[:, 0].tolist()
    py = pos[:, 1].tolist()
    rad = radii.tolist()
    wt = weights.tolist()
    pinned = state.pinned.tolist()
    for _ in range(params.collide_iterations):
        tree = QuadTree.build(np.column_stack((px, py)), np.zeros(n))
        qi, pj = tree.query_circles(np.column_stack((px, py)), radii + r_max + pad)
        cand = pj > qi
        for i, j in zip(qi[cand].tolist(), pj[cand].tolist()):
            if pinned[i] and pinned[j]:
                continue
            dx = px[j] - px[i]
            dy = py[j] - py[i]
            d2 = dx * dx + dy * dy
            if d2 < _EPS2:
                jig = pair_jiggle(seed, i, j)
                dx, dy = float(jig[0]), float(jig[1])
                d2 = dx * dx + dy * dy
            thresh = rad[i] + rad[j] + pad
            if d2 >= thresh * thresh:
                continue
            d = math.sqrt(d2)
            overlap = thresh - d
            ux, uy = dx / d, dy / d
            if pinned[i]:
                px[j] += ux * overlap
                py[j] += uy * overlap
            elif pinned[j]:
                px[i] -= ux * overlap
                py[i] -= uy * overlap
            else:
                total = wt[i] + wt[j]
                share_i = overlap * wt[j] / total
                share_j = overlap * wt[i] / total
                px[i] -= ux * share_i
                py[i] -= uy * share_i
                px[j] += ux * share_j
                py[j] += uy * share_j
    deltas[:, 0] = np.asarray(px) - state.positions[:, 0]
    deltas[:, 1] = np.asarray(py) - state.positions[:, 1]
    return deltas


def _check_finite(arr: np.ndarray, stage: str) -> None:
    finite = np.isfinite(arr)
    if not finite.all():
        node = int(np.flatnonzero(~finite.reshape(arr.shape[0], -1).all(axis=1))[0])
        raise DivergenceError(node, stage)


# ---------------------------------------------------------------------- steps

def step_annealed(graph: Graph, state: LayoutState, params: SimParams,
                  seed: int = 0, tick_index: int = 1) -> tuple[LayoutState, TickReport]:
    """One cooling tick: link -> many-body -> integrate -> center -> collide.

    Mutates params.alpha (it is a live tunable); everything else is pure.
    """
    params.alpha = params.alpha + (params.alpha_target - params.alpha) * params.alpha_decay
    alpha = params.alpha
    n = state.n
    pos0 = state.positions
    pos = state.positions.copy()
    vel = state.velocities.copy()
    pinned = state.pinned.copy()
    free = ~pinned

    vel += force_link(graph, state, alpha, params, seed=seed)
    _check_finite(vel, "link")

    charges = params.repulsion_strength * graph.weights()
    tree = QuadTree.build(pos, charges)
    vel += alpha * tree.repulsion_all(params.theta, seed=seed)
    _check_finite(vel, "many-body")

    vel[pinned] = 0.0
    vel[free] *= 1.0 - params.velocity_damping
    pos[free] += vel[free]
    _check_finite(pos, "integrate")

    working = LayoutState(pos, vel, pinned)
    pos[free] += force_center(working, params, weights=graph.weights())
    _check_finite(pos, "center")

    if params.collide_enabled and n:
        pos += force_collide(graph, working, params, seed=seed)
        _check_finite(pos, "collide")

    movement = float(np.linalg.norm(pos - pos0, axis=1).mean()) if n else 0.0
    report = TickReport(tick_index, alpha, movement, alpha < params.alpha_min)
    return LayoutState(pos, vel, pinned), report


def step_continuous(graph: Graph, state: LayoutState, params: SimParams,
                    seed: int = 0, tick_index: int = 1) -> tuple[LayoutState, TickReport]:
    """One uncooled tick; converges when mean per-node movement drops below
    stop_epsilon.

    Acceleration is force over an inertial mass of 1 + degree/3; without it
    the large time step overshoots on hubs and the layout blows up.
    """
    n = state.n
    pos = state.positions.copy()
    vel = state.velocities.copy()
    pinned = state.pinned.copy()
    free = ~pinned
    forces = np.zeros((n, 2))

    ea = _edge_arrays(graph)
    src, tgt = ea["src"], ea["tgt"]
    if src.size:
        delta, d = _separations(pos[src], pos[tgt], src, tgt, seed)
        rest = np.where(np.isnan(ea["rest"]), params.link_rest_length, ea["rest"])
        c = delta * (params.spring_coefficient * (d - rest) / d)[:, None]
        np.add.at(forces, src, c)
        np.add.at(forces, tgt, -c)
    _check_finite(forces, "spring")

    if n:
        charges = params.gravity_strength * graph.weights()
        tree = QuadTree.build(pos, charges)
        forces += tree.repulsion_all(params.theta, seed=seed)
    _check_finite(forces, "repulsion")

    forces -= params.drag_coefficient * vel
    mass = 1.0 + ea["degrees"] / 3.0
    vel[free] += params.time_step * forces[free] / mass[free, None]
    # unit speed cap, so one tick never moves a node more than time_step units
    speed = np.linalg.norm(vel, axis=1)
    fast = speed > 1.0
    if fast.any():
        vel[fast] /= speed[fast, None]
    vel[pinned] = 0.0
    pos[free] += params.time_step * vel[free]
    _check_finite(pos, "integrate")

    working = LayoutState(pos, vel, pinned)
    if params.collide_enabled and n:
        pos += force_collide(graph, working, params, seed=seed)
        _check_finite(pos, "collide")

    movement = float(np.linalg.norm(params.time_step * vel, axis=1).mean()) if n else 0.0
    report = TickReport(tick_index, None, movement, movement < params.stop_epsilon)
    return LayoutState(pos, vel, pinned), report


def step(graph: Graph, state: LayoutState, params: SimParams,
         seed: int = 0, tick_index: int = 1) -> tuple[LayoutState, TickReport]:
    if params.engine == "continuous":
        return step_continuous(graph, state, params, seed=seed, tick_index=tick_index)
    return step_annealed(graph, state, params, seed=seed, tick_index=tick_index)


def run_headless(graph: Graph, params: SimParams | None = None, seed: int = 0,
                 max_ticks: int = 300) -> tuple[LayoutState, TickReport]:
    """Spiral init, then tick until converged or max_ticks; fully deterministic."""
    if max_ticks < 1:
        raise ValueError("max_ticks must be >= 1")
    require_valid(graph)
    params = SimParams() if params is None else params.copy()
    params.validate()
    n = len(graph.nodes)
    state = LayoutState.initial(n, seed)
    if n == 0:
        return state, TickReport(0, params.alpha, 0.0, True)
    report = TickReport(0, params.alpha, 0.0, False)
    for tick in range(1, max_ticks + 1):
        state, report = step(graph, state, params, seed=seed, tick_index=tick)
        if report.converged:
            break
    return state, report


class Simulation:
    """Owns the evolving state for a live session; one tick loop, one mutator."""

    def __init__(self, graph: Graph, params: SimParams | None = None, seed: int = 0):
        require_valid(graph)
        self.graph = graph
        self.params = SimParams() if params is None else params.copy()
        self.params.validate()
        self.seed = seed
        self.state = LayoutState.initial(len(graph.nodes), seed)
        self.tick_index = 0
        self.last_report = TickReport(0, self.params.alpha, 0.0, len(graph.nodes) == 0)

    def step(self) -> TickReport:
        self.tick_index += 1
        self.state, self.last_report = step(self.graph, self.state, self.params,
                                            seed=self.seed, tick_index=self.tick_index)
        return self.last_report
