"""Simple undirected labeled graphs with deterministic ordering.

Vertices are string labels and keep their input order; edges are stored
as ascending index pairs sorted lexicographically. That fixes a dense
edge index map which the F2 cycle-space layer addresses by position,
and it makes every downstream tie-break (BFS neighbor order, candidate
enumeration) reproducible across runs.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping

from .errors import GraphError

__all__ = [
    "Graph",
    "RootedTree",
    "is_connected",
    "betti",
    "has_triangles",
    "bfs_spanning_tree",
    "check_spanning_tree",
    "graph_from_dict",
    "graph_to_dict",
    "graph_to_json",
    "graph_to_dot",
    "load_graph",
    "dump_graph",
]


class Graph:
    """Simple connected-or-not undirected graph over string labels.

    Instances are immutable after construction and compare by value
    (labels plus canonical edge list), so they can be shared freely and
    used as dictionary keys.
    """

    __slots__ = ("labels", "edges", "_adj", "_edge_index", "_label_index")

    def __init__(self, labels: Iterable[str], edges: Iterable[tuple[str, str]]):
        labels = tuple(labels)
        if not labels:
            raise GraphError("graph needs at least one vertex")
        if len(set(labels)) != len(labels):
            seen: set[str] = set()
            for lab in labels:
                if lab in seen:
                    raise GraphError(f"duplicate vertex label {lab!r}")
                seen.add(lab)
        for lab in labels:
            if not isinstance(lab, str) or not lab:
                raise GraphError(f"vertex labels must be non-empty strings, got {lab!r}")
        label_index = {lab: i for i, lab in enumerate(labels)}

        pairs: list[tuple[int, int]] = []
        pair_set: set[tuple[int, int]] = set()
        for x, y in edges:
            for end in (x, y):
                if end not in label_index:
                    raise GraphError(f"edge endpoint {end!r} is not a vertex")
            i, j = label_index[x], label_index[y]
            if i == j:
                raise GraphError(f"loop at vertex {x!r} is not allowed")
            pair = (i, j) if i < j else (j, i)
            if pair in pair_set:
                raise GraphError(f"duplicate edge {x!r}-{y!r}")
            pair_set.add(pair)
            pairs.append(pair)
        pairs.sort()

        adj: list[list[int]] = [[] for _ in labels]
        for i, j in pairs:
            adj[i].append(j)
            adj[j].append(i)

        self.labels: tuple[str, ...] = labels
        self.edges: tuple[tuple[int, int], ...] = tuple(pairs)
        self._label_index = label_index
        self._adj = tuple(tuple(sorted(nbrs)) for nbrs in adj)
        self._edge_index = {pair: e for e, pair in enumerate(self.edges)}

    # --- accessors ---

    @property
    def num_vertices(self) -> int:
        return len(self.labels)

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def index_of(self, label: str) -> int:
        try:
            return self._label_index[label]
        except KeyError:
            raise GraphError(f"unknown vertex label {label!r}") from None

    def adjacency(self, i: int) -> tuple[int, ...]:
        """Neighbors of vertex ``i`` in ascending index order."""
        return self._adj[i]

    def degree(self, i: int) -> int:
        return len(self._adj[i])

    def has_edge(self, i: int, j: int) -> bool:
        pair = (i, j) if i < j else (j, i)
        return pair in self._edge_index

    def edge_position(self, i: int, j: int) -> int:
        """Dense index of the edge ``{i, j}`` in the canonical edge list."""
        pair = (i, j) if i < j else (j, i)
        try:
            return self._edge_index[pair]
        except KeyError:
            raise GraphError(
                f"no edge between {self.labels[i]!r} and {self.labels[j]!r}"
            ) from None

    @property
    def edge_index(self) -> Mapping[tuple[int, int], int]:
        return self._edge_index

    def edge_labels(self) -> list[tuple[str, str]]:
        return [(self.labels[i], self.labels[j]) for i, j in self.edges]

    # --- value semantics ---

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self.labels == other.labels and self.edges == other.edges

    def __hash__(self) -> int:
        return hash((self.labels, self.edges))

    def __repr__(self) -> str:
        return f"Graph(v={self.num_vertices}, e={self.num_edges})"


def _unreached_vertex(g: Graph, root: int = 0) -> int | None:
    """Index of some vertex not reachable from ``root``, or None."""
    seen = [False] * g.num_vertices
    seen[root] = True
    queue = deque([root])
    while queue:
        cur = queue.popleft()
        for nbr in g.adjacency(cur):
            if not seen[nbr]:
                seen[nbr] = True
                queue.append(nbr)
    for i, ok in enumerate(seen):
        if not ok:
            return i
    return None


def is_connected(g: Graph) -> bool:
    return _unreached_vertex(g) is None


def betti(g: Graph) -> int:
    """Cycle-space dimension ``e - v + 1`` of a connected graph."""
    missing = _unreached_vertex(g)
    if missing is not None:
        raise GraphError(
            f"graph must be connected: vertex {g.labels[missing]!r} is unreachable"
        )
    return g.num_edges - g.num_vertices + 1


def has_triangles(g: Graph) -> bool:
    for i, j in g.edges:
        if set(g.adjacency(i)) & set(g.adjacency(j)):
            return True
    return False


@dataclass(frozen=True)
class RootedTree:
    """Rooted spanning tree given by a parent map.

    ``order`` lists the vertices in the order the tree construction
    discovered them; for trees produced by :func:`bfs_spanning_tree`
    this is a breadth-first order, so depths never decrease along it.
    The square-family constructions rely on that property and check it.
    """

    root: int
    parent: Mapping[int, int]
    order: tuple[int, ...]

    def depths(self) -> tuple[int, ...]:
        """Depth of every vertex, indexed by vertex."""
        n = len(self.order)
        depth: dict[int, int] = {self.root: 0}
        for v in self.order:
            if v in depth:
                continue
            chain = []
            cur = v
            while cur not in depth:
                chain.append(cur)
                if cur not in self.parent:
                    raise GraphError(f"vertex {cur} has no parent and is not the root")
                cur = self.parent[cur]
                if len(chain) > n:
                    raise GraphError("parent map contains a cycle")
            base = depth[cur]
            for step, vtx in enumerate(reversed(chain), start=1):
                depth[vtx] = base + step
        return tuple(depth[i] for i in range(n))

    def tree_pairs(self) -> frozenset[tuple[int, int]]:
        """Canonical (ascending) vertex pairs of the tree edges."""
        return frozenset(
            (c, p) if c < p else (p, c) for c, p in self.parent.items()
        )

    def is_depth_ordered(self) -> bool:
        depth = self.depths()
        seq = [depth[v] for v in self.order]
        return all(a <= b for a, b in zip(seq, seq[1:]))


def bfs_spanning_tree(g: Graph, root: int = 0) -> RootedTree:
    """Breadth-first spanning tree with ascending-index tie-breaks."""
    if not 0 <= root < g.num_vertices:
        raise GraphError(f"root index {root} out of range")
    parent: dict[int, int] = {}
    order = [root]
    seen = {root}
    queue = deque([root])
    while queue:
        cur = queue.popleft()
        for nbr in g.adjacency(cur):
            if nbr not in seen:
                seen.add(nbr)
                parent[nbr] = cur
                order.append(nbr)
                queue.append(nbr)
    if len(order) != g.num_vertices:
        missing = next(i for i in range(g.num_vertices) if i not in seen)
        raise GraphError(
            f"graph must be connected: vertex {g.labels[missing]!r} is unreachable"
        )
    return RootedTree(root=root, parent=parent, order=tuple(order))


def check_spanning_tree(g: Graph, t: RootedTree) -> None:
    """Raise GraphError unless ``t`` is a spanning tree of ``g``.

    The order must start at the root and contain every vertex once;
    every parent edge must exist in the graph. Acyclicity follows from
    the depth computation, which rejects cyclic parent maps.
    """
    n = g.num_vertices
    if sorted(t.order) != list(range(n)):
        raise GraphError("tree order must list every vertex exactly once")
    if not t.order or t.order[0] != t.root:
        raise GraphError("tree order must start at the root")
    if t.root in t.parent:
        raise GraphError("root must not have a parent")
    if len(t.parent) != n - 1:
        raise GraphError("parent map must cover every non-root vertex")
    for child, par in t.parent.items():
        if not g.has_edge(child, par):
            raise GraphError(
                f"tree edge {g.labels[child]!r}-{g.labels[par]!r} is not a graph edge"
            )
    t.depths()  # raises on cycles or dangling parents


# --- serialization ---


def graph_from_dict(data: object, require_connected: bool = True) -> Graph:
    if not isinstance(data, dict):
        raise GraphError("graph document must be a JSON object")
    try:
        vertices = data["vertices"]
        edges = data["edges"]
    except KeyError as exc:
        raise GraphError(f"graph document is missing key {exc.args[0]!r}") from None
    if not isinstance(vertices, list) or not all(isinstance(x, str) for x in vertices):
        raise GraphError("'vertices' must be a list of strings")
    if not isinstance(edges, list):
        raise GraphError("'edges' must be a list of two-element lists")
    pairs = []
    for item in edges:
        if not isinstance(item, (list, tuple)) or len(item) != 2:
            raise GraphError(f"edge entry {item!r} must be a pair of labels")
        pairs.append((item[0], item[1]))
    g = Graph(vertices, pairs)
    if require_connected:
        missing = _unreached_vertex(g)
        if missing is not None:
            raise GraphError(
                f"graph must be connected: vertex {g.labels[missing]!r} is unreachable"
            )
    return g


def graph_to_dict(g: Graph) -> dict:
    return {
        "vertices": list(g.labels),
        "edges": [[g.labels[i], g.labels[j]] for i, j in g.edges],
    }


def graph_to_json(g: Graph) -> str:
    """Canonical JSON text; loading and dumping again is byte-stable."""
    return json.dumps(graph_to_dict(g), indent=2) + "\n"


def load_graph(path: str | Path, require_connected: bool = True) -> Graph:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise GraphError(f"cannot read graph file {path}: {exc}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GraphError(f"graph file {path} is not valid JSON: {exc}") from None
    return graph_from_dict(data, require_connected=require_connected)


def dump_graph(g: Graph, path: str | Path) -> None:
    Path(path).write_text(graph_to_json(g))


def graph_to_dot(g: Graph) -> str:
    lines = ["graph G {"]
    for lab in g.labels:
        lines.append(f'  "{lab}";')
    for i, j in g.edges:
        lines.append(f'  "{g.labels[i]}" -- "{g.labels[j]}";')
    lines.append("}")
    return "\n".join(lines) + "\n"
