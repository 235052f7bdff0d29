"""Scikit-learn style front door for the layout engine.

ForceLayout follows the estimator protocol (constructor params stored
verbatim, ``get_params``/``set_params``, ``fit``/``fit_transform``) without
importing scikit-learn, so it drops into pipelines and grid searches that
duck-type against the API. Like manifold learners, it has no ``transform``
for unseen data: the layout is the fitted ``embedding_``.
"""

import inspect
from dataclasses import fields

import numpy as np

from .graph import as_graph, require_valid
from .packing import pack_components
from .simulation import DEFAULT_ALPHA_DECAY, SimParams, run_headless


class ForceLayout:
    """Force-directed node embedding of a graph into the plane.

    Parameters mirror the live simulation knobs; see SimParams. `seed` fixes
    the coincidence jiggle, `max_ticks` bounds the run, and `pack_margin`
    (when not None) rigidly repacks disconnected components afterwards.

    Attributes set by fit: ``embedding_`` (n_nodes, 2), ``n_iter_``,
    ``report_`` and ``graph_``.
    """

    def __init__(self, engine="annealed", seed=42, max_ticks=1000, pack_margin=None,
                 alpha=1.0, alpha_min=0.001, alpha_decay=DEFAULT_ALPHA_DECAY,
                 alpha_target=0.0, velocity_damping=0.4,
                 repulsion_strength=-30.0, theta=0.9, link_strength=None,
                 link_rest_length=30.0, link_iterations=3, center_strength=0.05,
                 collide_enabled=False, collide_padding=2.0, collide_iterations=1,
                 time_step=20.0, spring_coefficient=8e-4, drag_coefficient=0.02,
                 gravity_strength=-1.2, stop_epsilon=0.01):
        self.engine = engine
        self.seed = seed
        self.max_ticks = max_ticks
        self.pack_margin = pack_margin
        self.alpha = alpha
        self.alpha_min = alpha_min
        self.alpha_decay = alpha_decay
        self.alpha_target = alpha_target
        self.velocity_damping = velocity_damping
        self.repulsion_strength = repulsion_strength
        self.theta = theta
        self.link_strength = link_strength
        self.link_rest_length = link_rest_length
        self.link_iterations = link_iterations
        self.center_strength = center_strength
        self.collide_enabled = collide_enabled
        self.collide_padding = collide_padding
        self.collide_iterations = collide_iterations
        self.time_step = time_step
        self.spring_coefficient = spring_coefficient
        self.drag_coefficient = drag_coefficient
        self.gravity_strength = gravity_strength
        self.stop_epsilon = stop_epsilon

    @classmethod
    def _param_names(cls) -> list[str]:
        sig = inspect.signature(cls.__init__)
        return [name for name in sig.parameters if name != "self"]

    def get_params(self, deep=True) -> dict:
        del deep
        return {name: getattr(self, name) for name in self._param_names()}

    def set_params(self, **params) -> "ForceLayout":
        known = set(self._param_names())
        for key, value in params.items():
            if key not in known:
                raise ValueError(f"invalid parameter {key!r} for ForceLayout; "
                                 f"valid parameters are {sorted(known)}")
            setattr(self, key, value)
        return self

    def _sim_params(self) -> SimParams:
        names = {f.name for f in fields(SimParams)}
        return SimParams(**{name: getattr(self, name) for name in names})

    def fit(self, X, y=None) -> "ForceLayout":
        """Run the simulation to convergence on X (a Graph, graph text, or an
        integer edge array) and store the coordinate matrix."""
        del y
        graph = require_valid(as_graph(X))
        if self.max_ticks < 1:
            raise ValueError("max_ticks must be >= 1")
        state, report = run_headless(graph, self._sim_params(), seed=self.seed,
                                     max_ticks=self.max_ticks)
        if self.pack_margin is not None:
            state = pack_components(graph, state, margin=self.pack_margin)
        self.graph_ = graph
        self.embedding_ = state.positions.copy()
        self.report_ = report
        self.n_iter_ = report.tick_index
        return self

    def fit_transform(self, X, y=None) -> np.ndarray:
        """Fit and return the (n_nodes, 2) coordinate matrix."""
        self.fit(X, y)
        return self.embedding_.copy()
