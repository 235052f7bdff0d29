"""Graph data types, ingestion and validation.

A graph is a frozen pair of node and edge lists. Node order is significant:
it fixes the row order of every coordinate matrix produced downstream. Edges
are undirected for layout purposes; directed inputs are accepted and the
direction is ignored.
"""

import json
import math
from dataclasses import dataclass, field

import numpy as np

DEFAULT_RADIUS = 6.0
DEFAULT_WEIGHT = 1.0


class GraphParseError(ValueError):
    """Malformed edge-list or graph-JSON input."""


class GraphValidationError(ValueError):
    """One or more graph invariants are violated."""

    def __init__(self, violations: list[str]):
        self.violations = violations
        super().__init__("; ".join(violations))


@dataclass(frozen=True)
class NodeRecord:
    id: str
    radius: float = DEFAULT_RADIUS
    weight: float = DEFAULT_WEIGHT


@dataclass(frozen=True)
class EdgeRecord:
    source: int
    target: int
    weight: float = DEFAULT_WEIGHT
    rest_length: float | None = None


@dataclass(frozen=True)
class Graph:
    nodes: tuple[NodeRecord, ...] = field(default_factory=tuple)
    edges: tuple[EdgeRecord, ...] = field(default_factory=tuple)

    @property
    def n_nodes(self) -> int:
        return len(self.nodes)

    def node_ids(self) -> list[str]:
        return [n.id for n in self.nodes]

    def index_of(self) -> dict[str, int]:
        return {n.id: i for i, n in enumerate(self.nodes)}

    def radii(self) -> np.ndarray:
        return np.array([n.radius for n in self.nodes], dtype=np.float64)

    def weights(self) -> np.ndarray:
        return np.array([n.weight for n in self.nodes], dtype=np.float64)


def _positive_finite(x) -> bool:
    return isinstance(x, (int, float)) and not isinstance(x, bool) \
        and math.isfinite(x) and x > 0


def parse_edgelist(text: str) -> Graph:
    """Parse `source target [weight]` lines into a Graph.

    Tokens are whitespace- or comma-separated; lines starting with `#` are
    comments. Nodes are created in first-appearance order, duplicate edges
    and self-loops are kept.

    Raises GraphParseError with a line number on any malformed line.
    """
    ids: list[str] = []
    index: dict[str, int] = {}
    edges: list[EdgeRecord] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.replace(",", " ").split()
        if len(tokens) < 2:
            raise GraphParseError(f"line {lineno}: expected `source target [weight]`, got {line!r}")
        if len(tokens) > 3:
            raise GraphParseError(f"line {lineno}: too many tokens in {line!r}")
        weight = DEFAULT_WEIGHT
        if len(tokens) == 3:
            try:
                weight = float(tokens[2])
            except ValueError:
                raise GraphParseError(f"line {lineno}: weight {tokens[2]!r} is not a number") from None
            if not _positive_finite(weight):
                raise GraphParseError(f"line {lineno}: weight must be finite and > 0, got {tokens[2]}")
        endpoints = []
        for tok in tokens[:2]:
            if tok not in index:
                index[tok] = len(ids)
                ids.append(tok)
            endpoints.append(index[tok])
        edges.append(EdgeRecord(source=endpoints[0], target=endpoints[1], weight=weight))
    nodes = tuple(NodeRecord(id=i) for i in ids)
    return Graph(nodes=nodes, edges=tuple(edges))


def parse_json_graph(text: str) -> Graph:
    """Parse the JSON graph format.

    Expected shape:
        {"nodes": [{"id": str, "radius"?: num, "weight"?: num}, ...],
         "edges": [{"source": str, "target": str, "weight"?: num, "length"?: num}, ...]}

    Edge endpoints are node ids and are resolved to indices. Unknown fields
    are ignored. Raises GraphParseError naming the offending element.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GraphParseError(f"invalid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise GraphParseError("top level must be a JSON object")
    for key in ("nodes", "edges"):
        if key not in doc:
            raise GraphParseError(f"missing required key {key!r}")
        if not isinstance(doc[key], list):
            raise GraphParseError(f"{key!r} must be an array")

    nodes: list[NodeRecord] = []
    index: dict[str, int] = {}
    for pos, item in enumerate(doc["nodes"]):
        if not isinstance(item, dict) or "id" not in item:
            raise GraphParseError(f"node {pos}: missing required key 'id'")
        nid = item["id"]
        if not isinstance(nid, str) or not nid:
            raise GraphParseError(f"node {pos}: id must be a nonempty string")
        if nid in index:
            raise GraphParseError(f"node {pos}: duplicate id {nid!r}")
        radius = item.get("radius", DEFAULT_RADIUS)
        weight = item.get("weight", DEFAULT_WEIGHT)
        if not _positive_finite(radius):
            raise GraphParseError(f"node {nid!r}: radius must be finite and > 0")
        if not _positive_finite(weight):
            raise GraphParseError(f"node {nid!r}: weight must be finite and > 0")
        index[nid] = len(nodes)
        nodes.append(NodeRecord(id=nid, radius=float(radius), weight=float(weight)))

    edges: list[EdgeRecord] = []
    for pos, item in enumerate(doc["edges"]):
        if not isinstance(item, dict):
            raise GraphParseError(f"edge {pos}: must be an object")
        for key in ("source", "target"):
            if key not in item:
                raise GraphParseError(f"edge {pos}: missing required key {key!r}")
            if item[key] not in index:
                raise GraphParseError(f"edge {pos}: unresolved endpoint {item[key]!r}")
        weight = item.get("weight", DEFAULT_WEIGHT)
        if not _positive_finite(weight):
            raise GraphParseError(f"edge {pos}: weight must be finite and > 0")
        rest_length = item.get("length")
        if rest_length is not None and not _positive_finite(rest_length):
            raise GraphParseError(f"edge {pos}: length must be finite and > 0")
        edges.append(EdgeRecord(
            source=index[item["source"]],
            target=index[item["target"]],
            weight=float(weight),
            rest_length=None if rest_length is None else float(rest_length),
        ))
    return Graph(nodes=tuple(nodes), edges=tuple(edges))


def to_json_graph(graph: Graph) -> str:
    """Serialize to the JSON graph format; inverse of parse_json_graph."""
    doc = {
        "nodes": [
            {"id": n.id, "radius": n.radius, "weight": n.weight}
            for n in graph.nodes
        ],
        "edges": [],
    }
    for e in graph.edges:
        item = {
            "source": graph.nodes[e.source].id,
            "target": graph.nodes[e.target].id,
            "weight": e.weight,
        }
        if e.rest_length is not None:
            item["length"] = e.rest_length
        doc["edges"].append(item)
    return json.dumps(doc, separators=(",", ":"), allow_nan=False)


def validate(graph: Graph) -> list[str]:
    """Return every violated invariant (empty list means the graph is valid)."""
    violations: list[str] = []
    seen: dict[str, int] = {}
    n = len(graph.nodes)
    for i, node in enumerate(graph.nodes):
        if not isinstance(node.id, str) or not node.id:
            violations.append(f"node {i}: id must be a nonempty string")
        elif node.id in seen:
            violations.append(f"node {i}: duplicate id {node.id!r} (first at {seen[node.id]})")
        else:
            seen[node.id] = i
        if not _positive_finite(node.radius):
            violations.append(f"node {node.id!r}: radius must be finite and > 0, got {node.radius}")
        if not _positive_finite(node.weight):
            violations.append(f"node {node.id!r}: weight must be finite and > 0, got {node.weight}")
    for i, edge in enumerate(graph.edges):
        for name, idx in (("source", edge.source), ("target", edge.target)):
            if not isinstance(idx, (int, np.integer)) or isinstance(idx, bool) or not (0 <= idx < n):
                violations.append(f"edge {i}: {name} {idx!r} out of range [0, {n})")
        if not _positive_finite(edge.weight):
            violations.append(f"edge {i}: weight must be finite and > 0, got {edge.weight}")
        if edge.rest_length is not None and not _positive_finite(edge.rest_length):
            violations.append(f"edge {i}: rest_length must be finite and > 0, got {edge.rest_length}")
    return violations


def require_valid(graph: Graph) -> Graph:
    violations = validate(graph)
    if violations:
        raise GraphValidationError(violations)
    return graph


def connected_components(graph: Graph) -> tuple[np.ndarray, int]:
    """Label nodes by undirected component, numbered in first-appearance order."""
    n = len(graph.nodes)
    labels = np.full(n, -1, dtype=np.int64)
    if n == 0:
        return labels, 0
    adjacency: list[list[int]] = [[] for _ in range(n)]
    for e in graph.edges:
        adjacency[e.source].append(e.target)
        adjacency[e.target].append(e.source)
    count = 0
    for start in range(n):
        if labels[start] >= 0:
            continue
        stack = [start]
        labels[start] = count
        while stack:
            u = stack.pop()
            for v in adjacency[u]:
                if labels[v] < 0:
                    labels[v] = count
                    stack.append(v)
        count += 1
    return labels, count


def degrees(graph: Graph) -> np.ndarray:
    """Edge-endpoint counts per node; a self-loop contributes 2."""
    out = np.zeros(len(graph.nodes), dtype=np.int64)
    for e in graph.edges:
        out[e.source] += 1
        out[e.target] += 1
    return out


def as_graph(obj) -> Graph:
    """Coerce common inputs to a Graph.

    Accepts a Graph, edge-list or JSON text, or a sequence of (source, target)
    / (source, target, weight) integer pairs (node ids become "0".."n-1").
    """
    if isinstance(obj, Graph):
        return obj
    if isinstance(obj, bytes):
        obj = obj.decode("utf-8")
    if isinstance(obj, str):
        stripped = obj.lstrip()
        if stripped.startswith("{"):
            return parse_json_graph(obj)
        return parse_edgelist(obj)
    arr = np.asarray(obj)
    if arr.ndim == 2 and arr.shape[1] in (2, 3) and arr.shape[0] > 0:
        n = int(arr[:, :2].max()) + 1
        if (arr[:, :2] < 0).any() or not np.allclose(arr[:, :2], np.round(arr[:, :2])):
            raise GraphParseError("edge array endpoints must be nonnegative integers")
        nodes = tuple(NodeRecord(id=str(i)) for i in range(n))
        edges = tuple(
            EdgeRecord(source=int(row[0]), target=int(row[1]),
                       weight=float(row[2]) if arr.shape[1] == 3 else DEFAULT_WEIGHT)
            for row in arr
        )
        return require_valid(Graph(nodes=nodes, edges=edges))
    raise GraphParseError(f"cannot interpret {type(obj).__name__} as a graph")
