"""Cartesian squares in reduced powers and the structured cycle basis.

Moving one token along a base edge while a second token sits on either
end of another base edge traces a 4-cycle in the reduced power, the
Cartesian square of the two edges relative to a stationary monomial f
of degree k-2. These squares span the kernel of the projection onto
the base cycle space, and two spanning tree indexed families of them
give that kernel a basis:

* tree pair squares combine two distinct tree edges, the deeper one
  indexed j, with f running over monomials on the first j vertices in
  tree order;
* chord pair squares combine a non-tree edge with each tree edge under
  the same f convention.

Adjoining one embedded copy of a minimum cycle basis of the base graph
(all stationary tokens parked on the root) then yields a basis of the
whole cycle space of the power. Its total length is minimum exactly
when the base graph has no triangles: every cycle of a triangle-free
base has length at least four, so no basis can beat squares, while an
embedded triangle of length three would be shorter than any square
that could replace it.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from itertools import combinations_with_replacement
from math import comb

from .errors import GraphError, PowerError
from .graph import Graph, RootedTree, betti, bfs_spanning_tree, check_spanning_tree, has_triangles
from .power import Monomial, ReducedPowerGraph, build_reduced_power
from .cyclespace import (
    CycleBasis,
    EdgeVector,
    ElementInfo,
    Gf2Span,
    _canonical_cycle,
    cycle_edge_vector,
    greedy_mcb,
    project_to_base,
)

__all__ = [
    "CartesianSquare",
    "tree_pair_squares",
    "chord_pair_squares",
    "tree_square_count",
    "chord_square_count",
    "embed_cycle",
    "decomposition_basis",
    "SquareSpaceReport",
    "verify_square_space",
]


@dataclass(frozen=True)
class CartesianSquare:
    """4-cycle swapping single-token moves along two base edges.

    With edge1 = (a, b), edge2 = (c, d) and stationary monomial f the
    cycle visits acf, bcf, bdf, adf. The two edges must be distinct as
    unordered pairs; sharing an endpoint is fine.
    """

    edge1: tuple[int, int]
    edge2: tuple[int, int]
    f: Monomial

    def __post_init__(self):
        if frozenset(self.edge1) == frozenset(self.edge2):
            raise PowerError("a Cartesian square needs two distinct edges")

    def states(self, rp: ReducedPowerGraph) -> tuple[int, int, int, int]:
        if self.f.degree != rp.k - 2:
            raise PowerError(
                f"stationary monomial has degree {self.f.degree}, need {rp.k - 2}"
            )
        for pair in (self.edge1, self.edge2):
            if not rp.base.has_edge(*pair):
                raise PowerError(f"{pair} is not an edge of the base graph")
        a, b = self.edge1
        c, d = self.edge2
        fc = self.f.times(c)
        fd = self.f.times(d)
        return (
            rp.state_index(fc.times(a)),
            rp.state_index(fc.times(b)),
            rp.state_index(fd.times(b)),
            rp.state_index(fd.times(a)),
        )

    def edge_vector(self, rp: ReducedPowerGraph) -> EdgeVector:
        s = self.states(rp)
        return EdgeVector.from_edges(rp, list(zip(s, s[1:])) + [(s[-1], s[0])])

    def describe(self, labels: tuple[str, ...]) -> str:
        a, b = self.edge1
        c, d = self.edge2
        fs = self.f.to_string(labels)
        return f"({labels[a]}{labels[b]} x {labels[c]}{labels[d]}) f={fs}"


def _check_square_tree(g: Graph, t: RootedTree) -> None:
    check_spanning_tree(g, t)
    if not t.is_depth_ordered():
        raise GraphError("tree order must be non-decreasing in depth")


def _monomials_over(vertices: list[int], degree: int, size: int):
    """Monomials of the given degree supported on a vertex subset.

    Enumeration follows combinations with replacement over the subset
    in the order given, so square families are reproducible.
    """
    for combo in combinations_with_replacement(vertices, degree):
        yield Monomial.from_word(tuple(sorted(combo)), size)


def _tree_edges_in_order(t: RootedTree) -> list[tuple[int, int]]:
    """Tree edges keyed by their deeper endpoint, in tree order.

    Entry p (p >= 1) is the edge oriented (parent, child) whose child
    is the p-th vertex of the tree order; index 0 is None padding.
    """
    return [(t.parent[v], v) for v in t.order[1:]]


def tree_pair_squares(g: Graph, t: RootedTree, k: int) -> list[CartesianSquare]:
    """Squares built from two distinct tree edges.

    For the deeper edge at tree-order position j (0-based, so j >= 2)
    the shallower edge ranges over positions 1..j-1 and f over degree
    k-2 monomials on the first j+1 vertices in tree order.
    """
    _check_square_tree(g, t)
    if k < 2:
        warnings.warn("no Cartesian squares exist for k < 2", stacklevel=2)
        return []
    v = g.num_vertices
    edges = _tree_edges_in_order(t)
    out: list[CartesianSquare] = []
    for j in range(2, v):
        prefix = list(t.order[: j + 1])
        for i in range(1, j):
            for f in _monomials_over(prefix, k - 2, v):
                out.append(CartesianSquare(edges[i - 1], edges[j - 1], f))
    return out


def chord_pair_squares(g: Graph, t: RootedTree, k: int) -> list[CartesianSquare]:
    """Squares pairing each non-tree edge with each tree edge.

    The tree edge at position j (0-based, j >= 1) contributes with f
    over degree k-2 monomials on the first j+1 vertices in tree order;
    chords iterate in ascending edge-index order.
    """
    _check_square_tree(g, t)
    if k < 2:
        warnings.warn("no Cartesian squares exist for k < 2", stacklevel=2)
        return []
    v = g.num_vertices
    tree_pairs = t.tree_pairs()
    chords = [pair for pair in g.edges if pair not in tree_pairs]
    edges = _tree_edges_in_order(t)
    out: list[CartesianSquare] = []
    for chord in chords:
        for j in range(1, v):
            prefix = list(t.order[: j + 1])
            for f in _monomials_over(prefix, k - 2, v):
                out.append(CartesianSquare(chord, edges[j - 1], f))
    return out


def tree_square_count(v: int, k: int) -> int:
    """Closed form for the tree pair family size."""
    return (v - 1) * comb(k + v - 2, k - 1) - comb(k + v - 1, k) + 1


def chord_square_count(beta: int, v: int, k: int) -> int:
    """Closed form for the chord pair family size."""
    return beta * (comb(k + v - 2, k - 1) - 1)


def embed_cycle(rp: ReducedPowerGraph, cycle: tuple[int, ...], f: Monomial) -> EdgeVector:
    """Copy of a base cycle inside the power, stationary tokens on f.

    ``cycle`` is a simple cycle of the base graph as a vertex sequence;
    ``f`` must have degree k-1. Base vertex c maps to state c*f.
    """
    if f.degree != rp.k - 1:
        raise PowerError(f"stationary monomial has degree {f.degree}, need {rp.k - 1}")
    cycle_edge_vector(rp.base, cycle)  # validates the base cycle
    states = [rp.state_index(f.times(c)) for c in cycle]
    return EdgeVector.from_edges(rp, list(zip(states, states[1:])) + [(states[-1], states[0])])


def _embedded_states(rp: ReducedPowerGraph, cycle: tuple[int, ...], f: Monomial) -> tuple[int, ...]:
    return tuple(rp.state_index(f.times(c)) for c in cycle)


def decomposition_basis(base: Graph, k: int, root: int = 0) -> CycleBasis:
    """Cycle basis of the k-th reduced power from base MCB plus squares.

    Combines one embedded copy of a greedy minimum cycle basis of the
    base (stationary tokens parked on the root) with the tree pair and
    chord pair square families of a breadth-first spanning tree rooted
    there. The result is always a basis; it is a certified minimum
    cycle basis exactly when the base graph has no triangles.
    """
    if k < 2:
        raise PowerError("the decomposition basis needs k >= 2")
    rp = build_reduced_power(base, k)
    tree = bfs_spanning_tree(base, root)
    base_mcb = greedy_mcb(base)
    f_root = Monomial.from_word((root,) * (k - 1), base.num_vertices)

    elements: list[EdgeVector] = []
    cycles: list[tuple[int, ...]] = []
    infos: list[ElementInfo] = []

    for seq in base_mcb.cycles:
        states = _canonical_cycle(_embedded_states(rp, seq, f_root))
        elements.append(cycle_edge_vector(rp, states))
        cycles.append(states)
        infos.append(ElementInfo(tag="embedded", base_edges=(), f=f_root))

    for tag, family in (
        ("tree-square", tree_pair_squares(base, tree, k)),
        ("chord-square", chord_pair_squares(base, tree, k)),
    ):
        for sq in family:
            states = _canonical_cycle(sq.states(rp))
            elements.append(sq.edge_vector(rp))
            cycles.append(states)
            infos.append(
                ElementInfo(
                    tag=tag,
                    base_edges=(
                        tuple(sorted(sq.edge1)),
                        tuple(sorted(sq.edge2)),
                    ),
                    f=sq.f,
                )
            )

    return CycleBasis(
        host=rp,
        elements=tuple(elements),
        kind="decomposition",
        cycles=tuple(cycles),
        certified_minimum=not has_triangles(base),
        info=tuple(infos),
    )


@dataclass(frozen=True)
class SquareSpaceReport:
    """Outcome of the square-space rank and projection checks."""

    k: int
    tree_squares: int
    chord_squares: int
    tree_squares_formula: int
    chord_squares_formula: int
    betti_base: int
    betti_power: int
    rank_squares: int
    counts_match: bool
    independent: bool
    projects_to_zero: bool
    spans_kernel: bool
    direct_sum: bool

    @property
    def passed(self) -> bool:
        return (
            self.counts_match
            and self.independent
            and self.projects_to_zero
            and self.spans_kernel
            and self.direct_sum
        )

    def as_dict(self) -> dict:
        return {
            "k": self.k,
            "tree_squares": self.tree_squares,
            "chord_squares": self.chord_squares,
            "tree_squares_formula": self.tree_squares_formula,
            "chord_squares_formula": self.chord_squares_formula,
            "betti_base": self.betti_base,
            "betti_power": self.betti_power,
            "rank_squares": self.rank_squares,
            "counts_match": self.counts_match,
            "independent": self.independent,
            "projects_to_zero": self.projects_to_zero,
            "spans_kernel": self.spans_kernel,
            "direct_sum": self.direct_sum,
            "passed": self.passed,
        }


def verify_square_space(base: Graph, tree: RootedTree, k: int) -> SquareSpaceReport:
    """Check the square families against the kernel of the projection.

    Asserts four facts about the families over the given tree: their
    sizes match the closed forms, they are linearly independent, every
    square projects to zero in the base cycle space, and together with
    an embedded base MCB they span the full cycle space of the power.
    """
    rp = build_reduced_power(base, k)
    tsq = tree_pair_squares(base, tree, k)
    csq = chord_pair_squares(base, tree, k)
    beta_base = betti(base)
    beta_power = betti(rp.graph)

    span = Gf2Span()
    zero_proj = True
    for sq in tsq + csq:
        vec = sq.edge_vector(rp)
        span.add(vec.bits)
        if not project_to_base(vec).is_zero:
            zero_proj = False
    rank_squares = span.rank

    f_root = Monomial.from_word((tree.root,) * (k - 1), base.num_vertices)
    full = Gf2Span()
    for sq in tsq + csq:
        full.add(sq.edge_vector(rp).bits)
    for seq in greedy_mcb(base).cycles:
        full.add(embed_cycle(rp, seq, f_root).bits)

    return SquareSpaceReport(
        k=k,
        tree_squares=len(tsq),
        chord_squares=len(csq),
        tree_squares_formula=tree_square_count(base.num_vertices, k),
        chord_squares_formula=chord_square_count(beta_base, base.num_vertices, k),
        betti_base=beta_base,
        betti_power=beta_power,
        rank_squares=rank_squares,
        counts_match=(
            len(tsq) == tree_square_count(base.num_vertices, k)
            and len(csq) == chord_square_count(beta_base, base.num_vertices, k)
        ),
        independent=rank_squares == len(tsq) + len(csq),
        projects_to_zero=zero_proj,
        spans_kernel=rank_squares == beta_power - beta_base,
        direct_sum=full.rank == beta_power,
    )
