"""F2 edge space, cycle space, and cycle bases of a host graph.

An edge subset is an integer bitset over the host's dense edge index.
Symmetric difference is XOR, so linear algebra over F2 reduces to
integer operations. The cycle space is the kernel of the boundary map
sending an edge to its endpoint pair; its dimension for a connected
host is e - v + 1.

A host is either a plain Graph or a ReducedPowerGraph; the latter
carries base-edge annotations that the projection onto the base cycle
space needs.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import CycleSpaceError
from .graph import Graph, RootedTree, betti, check_spanning_tree
from .power import Monomial, ReducedPowerGraph

__all__ = [
    "EdgeVector",
    "Gf2Span",
    "ElementInfo",
    "CycleBasis",
    "host_graph",
    "boundary",
    "is_cycle",
    "rank",
    "cycle_edge_vector",
    "fundamental_cycles",
    "greedy_mcb",
    "project_to_base",
    "cycle_decomposition",
    "enumerate_simple_cycles",
    "total_length",
]


def host_graph(host) -> Graph:
    """Plain graph of a host (identity on Graph instances)."""
    if isinstance(host, ReducedPowerGraph):
        return host.graph
    if isinstance(host, Graph):
        return host
    raise CycleSpaceError(f"{type(host).__name__} cannot host edge vectors")


@dataclass(frozen=True)
class EdgeVector:
    """Subset of host edges encoded as a bitset over edge indices."""

    host: object
    bits: int

    def __post_init__(self):
        g = host_graph(self.host)
        if not isinstance(self.bits, int) or self.bits < 0:
            raise CycleSpaceError("bits must be a non-negative integer")
        if self.bits >> g.num_edges:
            raise CycleSpaceError("bits reference edges outside the host")

    @classmethod
    def from_edges(cls, host, pairs: Iterable[tuple[int, int]]) -> "EdgeVector":
        g = host_graph(host)
        bits = 0
        for i, j in pairs:
            bits ^= 1 << g.edge_position(i, j)
        return cls(host, bits)

    @property
    def size(self) -> int:
        return self.bits.bit_count()

    @property
    def is_zero(self) -> bool:
        return self.bits == 0

    def edge_indices(self) -> list[int]:
        out = []
        b = self.bits
        while b:
            low = b & -b
            out.append(low.bit_length() - 1)
            b ^= low
        return out

    def edge_pairs(self) -> list[tuple[int, int]]:
        g = host_graph(self.host)
        return [g.edges[e] for e in self.edge_indices()]

    def __xor__(self, other: "EdgeVector") -> "EdgeVector":
        if not isinstance(other, EdgeVector):
            return NotImplemented
        if host_graph(self.host) != host_graph(other.host):
            raise CycleSpaceError("edge vectors live on different hosts")
        return EdgeVector(self.host, self.bits ^ other.bits)


def boundary(x: EdgeVector) -> frozenset[int]:
    """Vertices of odd degree in the edge subset."""
    g = host_graph(x.host)
    odd: set[int] = set()
    for e in x.edge_indices():
        for end in g.edges[e]:
            if end in odd:
                odd.remove(end)
            else:
                odd.add(end)
    return frozenset(odd)


def is_cycle(x: EdgeVector) -> bool:
    """True when every vertex has even degree in the subset."""
    return not boundary(x)


class Gf2Span:
    """Incrementally built row space over F2 with leading-bit pivots."""

    def __init__(self):
        self._pivots: dict[int, int] = {}

    def reduce(self, bits: int) -> int:
        while bits:
            lead = bits.bit_length() - 1
            row = self._pivots.get(lead)
            if row is None:
                break
            bits ^= row
        return bits

    def add(self, bits: int) -> bool:
        """Insert a vector; returns False if it was already in the span."""
        residue = self.reduce(bits)
        if residue == 0:
            return False
        self._pivots[residue.bit_length() - 1] = residue
        return True

    def contains(self, bits: int) -> bool:
        return self.reduce(bits) == 0

    @property
    def rank(self) -> int:
        return len(self._pivots)


def rank(vectors: Sequence[EdgeVector]) -> int:
    """Dimension of the span of the given edge vectors."""
    if not vectors:
        return 0
    g = host_graph(vectors[0].host)
    span = Gf2Span()
    for x in vectors:
        if host_graph(x.host) != g:
            raise CycleSpaceError("edge vectors live on different hosts")
        span.add(x.bits)
    return span.rank


def cycle_edge_vector(host, seq: Sequence[int]) -> EdgeVector:
    """Edge vector of a closed vertex walk with no repeated vertices."""
    g = host_graph(host)
    if len(seq) < 3:
        raise CycleSpaceError("a simple cycle needs at least three vertices")
    if len(set(seq)) != len(seq):
        raise CycleSpaceError("cycle sequence repeats a vertex")
    pairs = list(zip(seq, seq[1:])) + [(seq[-1], seq[0])]
    return EdgeVector.from_edges(host, pairs)


def _canonical_cycle(seq: Sequence[int]) -> tuple[int, ...]:
    """Rotate and reflect so the smallest vertex leads, smaller neighbor second."""
    n = len(seq)
    start = min(range(n), key=lambda i: seq[i])
    rot = [seq[(start + i) % n] for i in range(n)]
    if n >= 3 and rot[-1] < rot[1]:
        rot = [rot[0]] + rot[:0:-1]
    return tuple(rot)


@dataclass(frozen=True)
class ElementInfo:
    """Construction record for one basis element.

    ``tag`` names the family the element came from; ``base_edges``
    lists the base-graph edges involved (square generators only);
    ``f`` is the stationary monomial for embedded or square elements.
    """

    tag: str
    base_edges: tuple[tuple[int, int], ...] = ()
    f: Monomial | None = None


@dataclass(frozen=True)
class CycleBasis:
    """A basis of the cycle space with oriented vertex sequences.

    Every element is a simple cycle; ``cycles[i]`` is its vertex
    sequence (consecutive vertices adjacent, last wraps to first).
    Construction re-checks that the sequences match the bitsets, that
    the elements are independent, and that they span the cycle space.
    """

    host: object
    elements: tuple[EdgeVector, ...]
    kind: str
    cycles: tuple[tuple[int, ...], ...]
    certified_minimum: bool
    info: tuple[ElementInfo, ...] | None = None

    def __post_init__(self):
        g = host_graph(self.host)
        dim = betti(g)
        if len(self.elements) != dim:
            raise CycleSpaceError(
                f"basis has {len(self.elements)} elements, cycle space has dimension {dim}"
            )
        if len(self.cycles) != len(self.elements):
            raise CycleSpaceError("every element needs a vertex sequence")
        if self.info is not None and len(self.info) != len(self.elements):
            raise CycleSpaceError("info records do not match element count")
        span = Gf2Span()
        for x, seq in zip(self.elements, self.cycles):
            if host_graph(x.host) != g:
                raise CycleSpaceError("basis element lives on a different host")
            if cycle_edge_vector(self.host, seq).bits != x.bits:
                raise CycleSpaceError("vertex sequence does not trace its element")
            if x.size != len(seq):
                raise CycleSpaceError("element is not a single simple cycle")
            if not span.add(x.bits):
                raise CycleSpaceError("basis elements are linearly dependent")

    @property
    def total_length(self) -> int:
        return sum(x.size for x in self.elements)

    def coordinates(self, x: EdgeVector) -> int | None:
        """Membership test helper: residue of x against the basis span."""
        span = Gf2Span()
        for el in self.elements:
            span.add(el.bits)
        return span.reduce(x.bits)


def total_length(basis: CycleBasis) -> int:
    return basis.total_length


def fundamental_cycles(host, tree: RootedTree) -> CycleBasis:
    """Fundamental cycle basis of a spanning tree.

    Each non-tree edge closes exactly one cycle through the tree; the
    resulting vectors are independent because each contains a non-tree
    edge no other vector touches.
    """
    g = host_graph(host)
    check_spanning_tree(g, tree)
    tree_pairs = tree.tree_pairs()

    def path_to_root(v: int) -> list[int]:
        out = [v]
        while out[-1] != tree.root:
            out.append(tree.parent[out[-1]])
        return out

    elements = []
    cycles = []
    infos = []
    for i, j in g.edges:
        if (i, j) in tree_pairs:
            continue
        left, right = path_to_root(i), path_to_root(j)
        # drop the shared tail above the meeting vertex
        while len(left) > 1 and len(right) > 1 and left[-2] == right[-2]:
            left.pop()
            right.pop()
        assert left[-1] == right[-1]
        seq = left + right[-2::-1]
        seq = _canonical_cycle(seq)
        elements.append(cycle_edge_vector(host, seq))
        cycles.append(seq)
        infos.append(ElementInfo(tag="fundamental"))
    return CycleBasis(
        host=host,
        elements=tuple(elements),
        kind="fundamental",
        cycles=tuple(cycles),
        certified_minimum=False,
        info=tuple(infos),
    )


def _bfs_parents(g: Graph, src: int) -> list[int | None]:
    """Parent array of the BFS tree from src, ascending-index tie-break."""
    parent: list[int | None] = [None] * g.num_vertices
    seen = [False] * g.num_vertices
    seen[src] = True
    queue = deque([src])
    while queue:
        cur = queue.popleft()
        for nbr in g.adjacency(cur):
            if not seen[nbr]:
                seen[nbr] = True
                parent[nbr] = cur
                queue.append(nbr)
    return parent


def greedy_mcb(host) -> CycleBasis:
    """Minimum cycle basis by matroid greedy over shortest-path cycles.

    Candidates are the cycles formed by two shortest paths from a
    common vertex to the endpoints of an edge, over all vertex and edge
    choices. Candidates are sorted by length with a lexicographic
    edge-index tie-break and inserted greedily while independent.
    """
    g = host_graph(host)
    dim = betti(g)
    if dim == 0:
        return CycleBasis(host, (), "greedy-mcb", (), certified_minimum=True, info=())

    parents = [_bfs_parents(g, s) for s in range(g.num_vertices)]

    def path(src: int, dst: int) -> list[int] | None:
        out = [dst]
        while out[-1] != src:
            p = parents[src][out[-1]]
            if p is None:
                return None
            out.append(p)
        out.reverse()
        return out

    candidates: dict[int, tuple[int, tuple[int, ...], tuple[int, ...]]] = {}
    for x in range(g.num_vertices):
        for u, w in g.edges:
            pu = path(x, u)
            pw = path(x, w)
            if pu is None or pw is None:
                continue
            if set(pu) & set(pw) != {x}:
                continue
            seq = pu + pw[:0:-1]
            if len(seq) < 3 or len(set(seq)) != len(seq):
                continue
            vec = cycle_edge_vector(host, seq)
            if vec.size != len(seq):
                continue
            if vec.bits not in candidates:
                # edge_indices() is ascending, so the tie-break key is canonical
                key = (vec.size, tuple(vec.edge_indices()))
                candidates[vec.bits] = (key[0], key[1], _canonical_cycle(seq))

    ordered = sorted(candidates.items(), key=lambda kv: (kv[1][0], kv[1][1]))
    span = Gf2Span()
    elements = []
    cycles = []
    for bits, (_, _, seq) in ordered:
        if span.add(bits):
            elements.append(EdgeVector(host, bits))
            cycles.append(seq)
            if len(elements) == dim:
                break
    if len(elements) != dim:
        raise CycleSpaceError("shortest-path candidates failed to span the cycle space")
    return CycleBasis(
        host=host,
        elements=tuple(elements),
        kind="greedy-mcb",
        cycles=tuple(cycles),
        certified_minimum=True,
        info=tuple(ElementInfo(tag="greedy") for _ in elements),
    )


def project_to_base(x: EdgeVector) -> EdgeVector:
    """Project an edge vector of a reduced power onto the base graph.

    Linear over F2: each power edge maps to the base edge its moving
    token crosses. Cycles project to cycles; that is re-checked here.
    """
    rp = x.host
    if not isinstance(rp, ReducedPowerGraph):
        raise CycleSpaceError("projection needs a reduced power host with annotations")
    bits = 0
    for e in x.edge_indices():
        i, j, _ = rp.annotation(e)
        bits ^= 1 << rp.base.edge_position(i, j)
    out = EdgeVector(rp.base, bits)
    if is_cycle(x) and not is_cycle(out):
        raise CycleSpaceError("projection of a cycle failed to be a cycle")
    return out


def cycle_decomposition(x: EdgeVector) -> list[tuple[int, ...]]:
    """Split an even-degree edge subset into edge-disjoint simple cycles.

    Walks from the smallest active vertex, always taking the smallest
    unused edge other than the one just arrived by, until a vertex
    repeats; the enclosed portion is emitted and removed. Raises if the
    subset has odd-degree vertices.
    """
    if not is_cycle(x):
        raise CycleSpaceError("only even-degree subsets decompose into cycles")
    g = host_graph(x.host)
    remaining: dict[int, set[int]] = {}
    for e in x.edge_indices():
        i, j = g.edges[e]
        remaining.setdefault(i, set()).add(j)
        remaining.setdefault(j, set()).add(i)

    out: list[tuple[int, ...]] = []
    while remaining:
        start = min(remaining)
        path = [start]
        pos = {start: 0}
        prev: int | None = None
        while True:
            cur = path[-1]
            choices = remaining[cur]
            nxt = min(c for c in choices if c != prev) if len(choices) > 1 else min(choices)
            if nxt in pos:
                cyc = path[pos[nxt] :]
                for a, b in zip(cyc, cyc[1:] + [cyc[0]]):
                    remaining[a].discard(b)
                    remaining[b].discard(a)
                for vtx in cyc:
                    if vtx in remaining and not remaining[vtx]:
                        del remaining[vtx]
                out.append(_canonical_cycle(cyc))
                break
            path.append(nxt)
            pos[nxt] = len(path) - 1
            prev = cur
    return out


def enumerate_simple_cycles(host) -> list[tuple[int, ...]]:
    """All simple cycles of the host, canonically oriented.

    Exhaustive depth-first search; intended for small graphs used as
    test oracles. Each cycle appears once, anchored at its smallest
    vertex with the smaller neighbor second.
    """
    g = host_graph(host)
    cycles: list[tuple[int, ...]] = []
    n = g.num_vertices
    for s in range(n):
        path = [s]
        on_path = {s}

        def extend():
            cur = path[-1]
            for nbr in g.adjacency(cur):
                if nbr == s and len(path) >= 3:
                    if path[1] < path[-1]:
                        cycles.append(tuple(path))
                elif nbr > s and nbr not in on_path:
                    path.append(nbr)
                    on_path.add(nbr)
                    extend()
                    path.pop()
                    on_path.remove(nbr)

        extend()
    return cycles
