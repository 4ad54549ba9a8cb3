"""Shared graph builders, the desk-scale host suite, and model helpers."""

from __future__ import annotations

import random
from fractions import Fraction

import pytest

from redpow import Graph, RateSpec


def cycle_graph(n: int, labels: str | None = None) -> Graph:
    labs = list(labels) if labels else [f"v{i}" for i in range(n)]
    edges = [(labs[i], labs[(i + 1) % n]) for i in range(n)]
    return Graph(labs, edges)


def path_graph(n: int, labels: str | None = None) -> Graph:
    labs = list(labels) if labels else [f"v{i}" for i in range(n)]
    edges = [(labs[i], labs[i + 1]) for i in range(n - 1)]
    return Graph(labs, edges)


def complete_graph(n: int) -> Graph:
    labs = [f"v{i}" for i in range(n)]
    edges = [(labs[i], labs[j]) for i in range(n) for j in range(i + 1, n)]
    return Graph(labs, edges)


def pentagon() -> Graph:
    return cycle_graph(5, "abcde")


def random_connected_graph(v: int, extra_edges: int, seed: int) -> Graph:
    """Random spanning tree plus a sample of extra chords."""
    rng = random.Random(seed)
    labs = [f"v{i}" for i in range(v)]
    edges = set()
    for i in range(1, v):
        p = rng.randrange(i)
        edges.add((min(i, p), max(i, p)))
    pool = [
        (i, j)
        for i in range(v)
        for j in range(i + 1, v)
        if (i, j) not in edges
    ]
    rng.shuffle(pool)
    edges.update(pool[:extra_edges])
    return Graph(labs, [(labs[i], labs[j]) for i, j in sorted(edges)])


def generator_suite() -> list[Graph]:
    """Connected graphs with v <= 6 exercising all structural cases."""
    suite = [
        path_graph(2),
        path_graph(4),
        cycle_graph(3),
        cycle_graph(4),
        cycle_graph(5, "abcde"),
        cycle_graph(6),
        complete_graph(4),
        random_connected_graph(5, 2, seed=7),
        random_connected_graph(6, 4, seed=11),
        random_connected_graph(6, 7, seed=13),
    ]
    return suite


def pentagon_spec(lam, mu, nu, alpha=0, beta=0, gamma=0, delta=0, eps=0) -> RateSpec:
    """Five-state ring model: one functional rate, constant elsewhere.

    Forward direction a->b->c->d->e->a runs at mu except a->b, which is
    lam plus occupancy couplings (alpha..eps by vertex); every backward
    rate is nu.
    """
    g = pentagon()
    base = {}
    for i in range(5):
        j = (i + 1) % 5
        base[(i, j)] = Fraction(mu)
        base[(j, i)] = Fraction(nu)
    base[(0, 1)] = Fraction(lam)
    coupling = {
        (0, 1): tuple(Fraction(c) for c in (alpha, beta, gamma, delta, eps))
    }
    return RateSpec(g, base, coupling)


@pytest.fixture(scope="session")
def suite() -> list[Graph]:
    return generator_suite()


@pytest.fixture(scope="session")
def c5() -> Graph:
    return pentagon()
