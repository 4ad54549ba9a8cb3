"""Cartesian square families, decomposition basis, square-space checks."""

from __future__ import annotations

import warnings

import pytest

from redpow import (
    CartesianSquare,
    Graph,
    GraphError,
    Monomial,
    PowerError,
    RootedTree,
    betti,
    bfs_spanning_tree,
    build_reduced_power,
    chord_pair_squares,
    chord_square_count,
    decomposition_basis,
    embed_cycle,
    greedy_mcb,
    is_cycle,
    project_to_base,
    rank,
    tree_pair_squares,
    tree_square_count,
    verify_square_space,
)

from conftest import cycle_graph, complete_graph, path_graph, random_connected_graph


def path_tree(n: int) -> RootedTree:
    return RootedTree(0, {i: i - 1 for i in range(1, n)}, tuple(range(n)))


# --- single squares ---


def test_square_states_disjoint_edges():
    g = cycle_graph(5, "abcde")
    rp = build_reduced_power(g, 2)
    sq = CartesianSquare((0, 1), (2, 3), Monomial((0,) * 5))
    states = sq.states(rp)
    labels = [rp.label(s) for s in states]
    assert labels == ["ac", "bc", "bd", "ad"]
    vec = sq.edge_vector(rp)
    assert vec.size == 4
    assert is_cycle(vec)
    assert project_to_base(vec).is_zero


def test_square_states_shared_endpoint():
    g = cycle_graph(5, "abcde")
    rp = build_reduced_power(g, 2)
    sq = CartesianSquare((0, 1), (1, 2), Monomial((0,) * 5))
    labels = [rp.label(s) for s in sq.states(rp)]
    assert labels == ["ab", "b^2", "bc", "ac"]
    assert sq.edge_vector(rp).size == 4


def test_square_rejects_same_edge():
    with pytest.raises(PowerError, match="distinct edges"):
        CartesianSquare((0, 1), (1, 0), Monomial((0,) * 5))


def test_square_rejects_wrong_degree_or_non_edge():
    g = cycle_graph(5, "abcde")
    rp = build_reduced_power(g, 2)
    with pytest.raises(PowerError, match="degree"):
        CartesianSquare((0, 1), (2, 3), Monomial((1, 0, 0, 0, 0))).states(rp)
    with pytest.raises(PowerError, match="not an edge"):
        CartesianSquare((0, 2), (2, 3), Monomial((0,) * 5)).states(rp)


def test_square_describe():
    sq = CartesianSquare((0, 1), (2, 3), Monomial((1, 0, 0, 0, 0)))
    assert sq.describe(("a", "b", "c", "d", "e")) == "(ab x cd) f=a"


# --- families ---


def test_family_sizes_pentagon():
    g = cycle_graph(5, "abcde")
    t = bfs_spanning_tree(g, 0)
    assert len(tree_pair_squares(g, t, 3)) == 26 == tree_square_count(5, 3)
    assert len(chord_pair_squares(g, t, 3)) == 14 == chord_square_count(1, 5, 3)
    assert len(tree_pair_squares(g, t, 2)) == 6 == tree_square_count(5, 2)
    assert len(chord_pair_squares(g, t, 2)) == 4 == chord_square_count(1, 5, 2)


def test_family_sizes_with_path_tree():
    g = cycle_graph(5, "abcde")
    t = path_tree(5)
    assert len(tree_pair_squares(g, t, 3)) == 26
    assert len(chord_pair_squares(g, t, 3)) == 14
    report = verify_square_space(g, t, 3)
    assert report.passed


def test_family_sizes_match_formulas(suite):
    for g in suite:
        t = bfs_spanning_tree(g, 0)
        b = betti(g)
        for k in (2, 3, 4):
            assert len(tree_pair_squares(g, t, k)) == tree_square_count(g.num_vertices, k)
            assert len(chord_pair_squares(g, t, k)) == chord_square_count(b, g.num_vertices, k)


def test_families_warn_for_small_k():
    g = cycle_graph(4)
    t = bfs_spanning_tree(g, 0)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        assert tree_pair_squares(g, t, 1) == []
        assert chord_pair_squares(g, t, 1) == []
    assert len(caught) == 2
    assert "k < 2" in str(caught[0].message)


def test_families_reject_depth_violating_tree():
    g = cycle_graph(5, "abcde")
    # same spanning tree, once with a depth-respecting order and once without
    t = RootedTree(0, {1: 0, 2: 1, 3: 2, 4: 0}, (0, 1, 4, 2, 3))
    bad = RootedTree(0, {1: 0, 2: 1, 3: 2, 4: 0}, (0, 1, 2, 3, 4))
    tree_pair_squares(g, t, 2)
    with pytest.raises(GraphError, match="non-decreasing in depth"):
        tree_pair_squares(g, bad, 2)


# --- embedding ---


def test_embed_cycle_validates():
    g = cycle_graph(5, "abcde")
    rp = build_reduced_power(g, 3)
    with pytest.raises(PowerError, match="degree"):
        embed_cycle(rp, (0, 1, 2, 3, 4), Monomial((1, 0, 0, 0, 0)))
    emb = embed_cycle(rp, (0, 1, 2, 3, 4), Monomial((2, 0, 0, 0, 0)))
    assert emb.size == 5
    assert is_cycle(emb)


def test_embedded_copies_are_independent_of_f_choice():
    g = cycle_graph(5, "abcde")
    rp = build_reduced_power(g, 3)
    t = bfs_spanning_tree(g, 0)
    squares = [
        sq.edge_vector(rp)
        for sq in tree_pair_squares(g, t, 3) + chord_pair_squares(g, t, 3)
    ]
    for f in (Monomial((2, 0, 0, 0, 0)), Monomial((0, 1, 1, 0, 0)), Monomial((0, 0, 0, 0, 2))):
        emb = embed_cycle(rp, (0, 1, 2, 3, 4), f)
        assert rank(squares + [emb]) == betti(rp.graph)


# --- decomposition basis ---


def test_decomposition_pentagon_k2():
    g = cycle_graph(5, "abcde")
    basis = decomposition_basis(g, 2)
    assert len(basis.elements) == 11
    assert basis.total_length == 45
    assert basis.certified_minimum
    assert basis.kind == "decomposition"
    tags = [info.tag for info in basis.info]
    assert tags.count("embedded") == 1
    assert tags.count("tree-square") == 6
    assert tags.count("chord-square") == 4
    assert basis.total_length == greedy_mcb(build_reduced_power(g, 2)).total_length


def test_decomposition_pentagon_k3():
    g = cycle_graph(5, "abcde")
    basis = decomposition_basis(g, 3)
    assert len(basis.elements) == 41 == betti(basis.host.graph)
    assert basis.total_length == 165
    assert basis.certified_minimum
    assert basis.total_length == greedy_mcb(basis.host).total_length


def test_decomposition_triangle_gap():
    g = cycle_graph(3)
    basis = decomposition_basis(g, 2)
    assert basis.total_length == 15
    assert not basis.certified_minimum
    greedy = greedy_mcb(build_reduced_power(g, 2))
    assert greedy.total_length == 12


def test_decomposition_matches_greedy_on_triangle_free(suite):
    for g in suite:
        from redpow import has_triangles

        if has_triangles(g) or betti(g) > 3:
            continue
        basis = decomposition_basis(g, 2)
        assert basis.certified_minimum
        assert basis.total_length == greedy_mcb(basis.host).total_length


def test_decomposition_root_invariance():
    g = cycle_graph(5, "abcde")
    totals = {decomposition_basis(g, 3, root=r).total_length for r in range(5)}
    assert totals == {165}


def test_decomposition_rejects_k1():
    with pytest.raises(PowerError, match="k >= 2"):
        decomposition_basis(cycle_graph(4), 1)


def test_decomposition_tree_only_base():
    g = path_graph(4)
    basis = decomposition_basis(g, 3)
    assert len(basis.elements) == betti(basis.host.graph)
    assert all(info.tag == "tree-square" for info in basis.info)
    assert basis.certified_minimum


# --- square space verification ---


def test_verify_square_space_suite(suite):
    for g in suite:
        t = bfs_spanning_tree(g, 0)
        for k in (2, 3):
            report = verify_square_space(g, t, k)
            assert report.passed, (g, k, report.as_dict())
            assert report.rank_squares == report.betti_power - report.betti_base


def test_verify_square_space_report_fields():
    g = cycle_graph(5, "abcde")
    report = verify_square_space(g, bfs_spanning_tree(g, 0), 3)
    doc = report.as_dict()
    assert doc["tree_squares"] == doc["tree_squares_formula"] == 26
    assert doc["chord_squares"] == doc["chord_squares_formula"] == 14
    assert doc["betti_power"] == 41
    assert doc["betti_base"] == 1
    assert doc["passed"]


def test_every_square_projects_to_zero(suite):
    for g in suite[:5]:
        t = bfs_spanning_tree(g, 0)
        rp = build_reduced_power(g, 2)
        for sq in tree_pair_squares(g, t, 2) + chord_pair_squares(g, t, 2):
            assert project_to_base(sq.edge_vector(rp)).is_zero
