"""Master chains, cycle criterion, steady states, detailed balance."""

from __future__ import annotations

import random
from fractions import Fraction

import pytest

from redpow import (
    CycleBasis,
    Graph,
    ModelError,
    Monomial,
    RateSpec,
    SolverError,
    betti,
    build_master,
    build_reduced_power,
    decomposition_basis,
    detailed_balance_check,
    eval_rate,
    fundamental_cycles,
    bfs_spanning_tree,
    greedy_mcb,
    kolmogorov_check,
    model_from_dict,
    model_to_dict,
    parse_rational,
    single_automaton_check,
    steady_state,
)

from conftest import complete_graph, cycle_graph, pentagon, pentagon_spec

F = Fraction


# --- rational parsing ---


def test_parse_rational():
    assert parse_rational(3, "x") == F(3)
    assert parse_rational("3", "x") == F(3)
    assert parse_rational("1/3", "x") == F(1, 3)
    with pytest.raises(ModelError, match="floats are not exact"):
        parse_rational(0.5, "x")
    with pytest.raises(ModelError, match="cannot parse"):
        parse_rational("1/0", "x")
    with pytest.raises(ModelError, match="booleans"):
        parse_rational(True, "x")
    with pytest.raises(ModelError, match="expected an int or string"):
        parse_rational(None, "x")


# --- rate specifications ---


def test_rate_spec_requires_both_directions():
    g = Graph("ab", [("a", "b")])
    with pytest.raises(ModelError, match="missing rate for directed edge 'b->a'"):
        RateSpec(g, {(0, 1): F(1)})


def test_rate_spec_rejects_non_edges_and_bad_vectors():
    g = Graph("abc", [("a", "b"), ("b", "c")])
    full = {(0, 1): F(1), (1, 0): F(1), (1, 2): F(1), (2, 1): F(1)}
    with pytest.raises(ModelError, match="non-edge"):
        RateSpec(g, {**full, (0, 2): F(1)})
    with pytest.raises(ModelError, match="non-edge"):
        RateSpec(g, full, {(0, 2): (F(0),) * 3})
    with pytest.raises(ModelError, match="3 entries"):
        RateSpec(g, full, {(0, 1): (F(0),) * 2})


def test_eval_rate_functional():
    spec = pentagon_spec(32, 1, 2, alpha=1, beta=3, gamma=5, delta=7, eps=11)
    assert eval_rate(spec, 0, 1, Monomial((3, 0, 0, 0, 0))) == 32 + 2 * 1
    assert eval_rate(spec, 0, 1, Monomial((2, 0, 1, 0, 0))) == 32 + 1 + 5
    assert eval_rate(spec, 0, 1, Monomial((1, 1, 0, 0, 1))) == 32 + 3 + 11
    # constant rates ignore occupancy
    assert eval_rate(spec, 2, 3, Monomial((0, 0, 3, 0, 0))) == 1
    assert eval_rate(spec, 2, 1, Monomial((0, 0, 3, 0, 0))) == 2


def test_eval_rate_excludes_the_mover():
    spec = pentagon_spec(10, 1, 2, alpha=1)
    # a single token on a: coupling to its own vertex never fires
    assert eval_rate(spec, 0, 1, Monomial((1, 0, 0, 0, 0))) == 10


def test_eval_rate_requires_a_token():
    spec = pentagon_spec(10, 1, 2)
    with pytest.raises(ModelError, match="no token"):
        eval_rate(spec, 0, 1, Monomial((0, 1, 1, 1, 0)))


# --- master chain construction ---


def master_rate(mc, xs, ys):
    x = mc.rp.state_index(Monomial(xs))
    y = mc.rp.state_index(Monomial(ys))
    return mc.rate(x, y)


def test_master_rates_worked_values():
    lam, mu, nu = F(32), F(1), F(2)
    alpha, beta, gamma, delta, eps = F(1), F(3), F(5), F(7), F(11)
    spec = pentagon_spec(lam, mu, nu, alpha, beta, gamma, delta, eps)
    mc = build_master(pentagon(), 3, spec)
    assert master_rate(mc, (1, 0, 0, 2, 0), (1, 0, 0, 1, 1)) == 2 * mu
    assert master_rate(mc, (0, 0, 3, 0, 0), (0, 1, 2, 0, 0)) == 3 * nu
    assert master_rate(mc, (2, 0, 1, 0, 0), (2, 1, 0, 0, 0)) == nu
    assert master_rate(mc, (1, 1, 0, 0, 1), (0, 2, 0, 0, 1)) == lam + beta + eps
    assert master_rate(mc, (3, 0, 0, 0, 0), (2, 1, 0, 0, 0)) == 3 * (lam + 2 * alpha)
    assert master_rate(mc, (2, 0, 1, 0, 0), (1, 1, 1, 0, 0)) == 2 * (lam + alpha + gamma)


def test_master_rate_zero_for_non_adjacent():
    mc = build_master(pentagon(), 2, pentagon_spec(1, 1, 1))
    x = mc.rp.state_index(Monomial((2, 0, 0, 0, 0)))
    y = mc.rp.state_index(Monomial((0, 0, 2, 0, 0)))
    assert mc.rate(x, y) == 0


def test_master_rejects_nonpositive_rates():
    spec = pentagon_spec(1, 1, 2, alpha=-5)
    with pytest.raises(ModelError, match="must be positive"):
        build_master(pentagon(), 3, spec)


def test_master_rejects_wrong_graph():
    spec = pentagon_spec(1, 1, 1)
    with pytest.raises(ModelError, match="different graph"):
        build_master(cycle_graph(5), 2, spec)


def test_exit_rates_sum_outgoing():
    mc = build_master(pentagon(), 2, pentagon_spec(3, 1, 2, alpha=1))
    for x in range(mc.num_states):
        total = sum(
            (mc.rate(x, y) for y in mc.rp.graph.adjacency(x)), F(0)
        )
        assert mc.exit_rate(x) == total


def test_k1_master_equals_base_rates():
    spec = pentagon_spec(7, 2, 3, alpha=4, beta=5)
    mc = build_master(pentagon(), 1, spec)
    for i, j in spec.directed_pairs():
        assert mc.rate(i, j) == spec.base_rate(i, j)


# --- cycle criterion ---


def test_kolmogorov_uncoupled_reversible():
    spec = pentagon_spec(32, 1, 2)
    g = pentagon()
    for k in (2, 3):
        mc = build_master(g, k, spec)
        report = kolmogorov_check(mc, decomposition_basis(g, k))
        assert report.passed
        assert len(report.checks) == betti(mc.rp.graph)
    mc1 = build_master(g, 1, spec)
    assert kolmogorov_check(mc1, greedy_mcb(mc1.rp)).passed


def test_kolmogorov_uncoupled_squares_always_pass():
    # base rates violate the ring constraint, so only the embedded cycle fails
    spec = pentagon_spec(33, 1, 2)
    g = pentagon()
    mc = build_master(g, 3, spec)
    report = kolmogorov_check(mc, decomposition_basis(g, 3))
    assert not report.passed
    bad = report.violations()
    assert len(bad) == 1
    assert bad[0].tag == "embedded"
    # the a^3 state contributes an occupancy factor of 3 in both directions
    assert {bad[0].forward, bad[0].backward} == {F(3 * 33 * 1**4), F(3 * 2**5)}


def test_kolmogorov_verdict_is_basis_independent():
    g = pentagon()
    spec = pentagon_spec(32, 1, 2, alpha=1, beta=1, gamma=2, delta=1, eps=1)
    mc = build_master(g, 2, spec)
    rp = mc.rp
    verdicts = {
        kolmogorov_check(mc, decomposition_basis(g, 2)).passed,
        kolmogorov_check(mc, greedy_mcb(rp)).passed,
        kolmogorov_check(mc, fundamental_cycles(rp, bfs_spanning_tree(rp.graph, 0))).passed,
    }
    assert verdicts == {False}
    # k = 2: equal couplings give the constant lam + alpha, so lam = 31
    spec_ok = pentagon_spec(31, 1, 2, alpha=1, beta=1, gamma=1, delta=1, eps=1)
    mc_ok = build_master(g, 2, spec_ok)
    verdicts_ok = {
        kolmogorov_check(mc_ok, decomposition_basis(g, 2)).passed,
        kolmogorov_check(mc_ok, greedy_mcb(mc_ok.rp)).passed,
        kolmogorov_check(
            mc_ok, fundamental_cycles(mc_ok.rp, bfs_spanning_tree(mc_ok.rp.graph, 0))
        ).passed,
    }
    assert verdicts_ok == {True}


def test_kolmogorov_orientation_invariance():
    g = pentagon()
    spec = pentagon_spec(32, 1, 2, alpha=1, beta=2, gamma=3)
    mc = build_master(g, 2, spec)
    basis = decomposition_basis(g, 2)
    flipped = CycleBasis(
        host=basis.host,
        elements=basis.elements,
        kind=basis.kind,
        cycles=tuple(tuple(reversed(seq)) for seq in basis.cycles),
        certified_minimum=basis.certified_minimum,
        info=basis.info,
    )
    fwd = kolmogorov_check(mc, basis)
    rev = kolmogorov_check(mc, flipped)
    assert fwd.passed == rev.passed
    for a, b in zip(fwd.checks, rev.checks):
        assert a.passed == b.passed
        assert {a.forward, a.backward} == {b.forward, b.backward}


def test_kolmogorov_rejects_foreign_basis():
    g = pentagon()
    mc = build_master(g, 2, pentagon_spec(1, 1, 1))
    with pytest.raises(ModelError, match="different state graph"):
        kolmogorov_check(mc, greedy_mcb(cycle_graph(4)))


def test_single_automaton_check():
    assert single_automaton_check(pentagon(), pentagon_spec(32, 1, 2)).passed
    assert not single_automaton_check(pentagon(), pentagon_spec(33, 1, 2)).passed
    # couplings never activate a single automaton
    assert single_automaton_check(pentagon(), pentagon_spec(32, 1, 2, beta=9)).passed
    k4 = complete_graph(4)
    sym = RateSpec(
        k4,
        {pair: F(3) for i, j in k4.edges for pair in ((i, j), (j, i))},
    )
    report = single_automaton_check(k4, sym)
    assert report.passed
    assert len(report.checks) == 3


# --- steady state ---


def test_steady_state_two_state_closed_form():
    g = Graph("ab", [("a", "b")])
    p, q = F(3), F(5)
    spec = RateSpec(g, {(0, 1): p, (1, 0): q})
    mc = build_master(g, 1, spec)
    exact = steady_state(mc, mode="exact")
    assert exact.probabilities == (q / (p + q), p / (p + q))
    approx = steady_state(mc, mode="float")
    assert abs(approx.probabilities[0] - float(q / (p + q))) < 1e-12
    assert approx.residual_inf <= 1e-10


def test_steady_state_uniform_on_symmetric_ring():
    g = pentagon()
    spec = pentagon_spec(1, 1, 1)
    mc = build_master(g, 1, spec)
    exact = steady_state(mc, mode="exact")
    assert exact.probabilities == (F(1, 5),) * 5


def test_steady_state_modes_agree():
    spec = pentagon_spec(32, 1, 2, alpha=1, beta=2, gamma=1, delta=1, eps=3)
    mc = build_master(pentagon(), 2, spec)
    exact = steady_state(mc, mode="exact")
    approx = steady_state(mc, mode="float")
    for pe, pf in zip(exact.probabilities, approx.probabilities):
        assert abs(float(pe) - pf) < 1e-12


def test_steady_state_rejects_unknown_mode_and_large_exact():
    mc = build_master(pentagon(), 1, pentagon_spec(1, 1, 1))
    with pytest.raises(SolverError, match="unknown steady-state mode"):
        steady_state(mc, mode="symbolic")
    big = build_master(pentagon(), 8, pentagon_spec(1, 1, 1))
    assert big.num_states == 495
    with pytest.raises(SolverError, match="up to 400 states"):
        steady_state(big, mode="exact")


# --- detailed balance ---


def test_detailed_balance_exact_and_float():
    g = pentagon()
    mc = build_master(g, 3, pentagon_spec(32, 1, 2))
    assert detailed_balance_check(steady_state(mc, mode="exact"), mc).balanced
    assert detailed_balance_check(steady_state(mc, mode="float"), mc).balanced
    bad = build_master(g, 3, pentagon_spec(33, 1, 2))
    rep = detailed_balance_check(steady_state(bad, mode="exact"), bad)
    assert not rep.balanced
    assert rep.violations


def test_detailed_balance_rejects_mismatched_state():
    g = pentagon()
    mc2 = build_master(g, 2, pentagon_spec(1, 1, 1))
    mc3 = build_master(g, 3, pentagon_spec(1, 1, 1))
    ss = steady_state(mc2, mode="exact")
    with pytest.raises(ModelError, match="state count"):
        detailed_balance_check(ss, mc3)


def test_oracles_agree_on_random_points():
    rng = random.Random(42)
    g = pentagon()
    basis = decomposition_basis(g, 2)
    for trial in range(12):
        params = [F(rng.randint(1, 40), rng.randint(1, 8)) for _ in range(8)]
        if trial % 3 == 0:
            # engineered reversible point: equal couplings, ring constraint
            mu, nu, alpha = params[1], params[2], F(1, 4)
            lam = nu**5 / mu**4 - 2 * alpha
            if lam <= 0:
                continue
            spec = pentagon_spec(lam, mu, nu, alpha, alpha, alpha, alpha, alpha)
        else:
            spec = pentagon_spec(*params)
        mc = build_master(g, 2, spec)
        kol = kolmogorov_check(mc, basis)
        bal = detailed_balance_check(steady_state(mc, mode="exact"), mc)
        assert kol.passed == bal.balanced


# --- model documents ---


def model_doc():
    return {
        "graph": {
            "vertices": ["a", "b", "c", "d", "e"],
            "edges": [["a", "b"], ["b", "c"], ["c", "d"], ["d", "e"], ["e", "a"]],
        },
        "k": 3,
        "rates": {
            "a->b": {"base": "32", "coupling": {"a": "1", "b": "1/2"}},
            "b->a": {"base": "2"},
            "b->c": {"base": "1"},
            "c->b": {"base": "2"},
            "c->d": {"base": "1"},
            "d->c": {"base": "2"},
            "d->e": {"base": "1"},
            "e->d": {"base": "2"},
            "e->a": {"base": "1"},
            "a->e": {"base": "2"},
        },
    }


def test_model_round_trip():
    g, k, spec = model_from_dict(model_doc())
    assert k == 3
    assert g.labels == ("a", "b", "c", "d", "e")
    assert spec.base_rate(0, 1) == 32
    assert spec.coupling_vector(0, 1) == (F(1), F(1, 2), F(0), F(0), F(0))
    assert spec.base_rate(1, 0) == 2
    assert not spec.is_uncoupled()
    doc = model_to_dict(g, k, spec)
    g2, k2, spec2 = model_from_dict(doc)
    assert (g2, k2) == (g, k)
    assert spec2.base_rate(0, 1) == spec.base_rate(0, 1)
    assert spec2.coupling_vector(0, 1) == spec.coupling_vector(0, 1)


@pytest.mark.parametrize(
    "mutate,message",
    [
        (lambda d: d.pop("k"), "missing key 'k'"),
        (lambda d: d.update(k=0), "positive integer"),
        (lambda d: d.update(k="3"), "positive integer"),
        (lambda d: d["rates"].pop("b->a"), "missing rate"),
        (lambda d: d["rates"].update({"a=>b": {"base": 1}}), "src->dst"),
        (lambda d: d["rates"].update({"a->c": {"base": 1}}), "does not name an edge"),
        (lambda d: d["rates"]["a->b"].update(base=0.5), "floats are not exact"),
        (lambda d: d["rates"]["a->b"].update(extra=1), "unknown field"),
        (lambda d: d["rates"]["a->b"]["coupling"].update(z="1"), "unknown vertex"),
        (lambda d: d["rates"]["a->b"].pop("base"), "object with 'base'"),
    ],
)
def test_model_from_dict_rejects(mutate, message):
    doc = model_doc()
    mutate(doc)
    with pytest.raises((ModelError, Exception), match=message):
        model_from_dict(doc)
