"""Command-line interface.

Subcommands build reduced powers, construct and verify cycle bases,
and run the reversibility checks on coupled-automaton models. Exit
codes: 0 success (and checks passed), 2 a check ran and failed, 1 bad
input or internal failure.

The environment variable REDPOW_SEED is reserved for seeding future
randomized features; every current code path is deterministic and
ignores it.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .errors import RedpowError
from .graph import bfs_spanning_tree, graph_to_dot, graph_to_json, load_graph
from .power import (
    build_reduced_power,
    cartesian_power,
    edge_count,
    quotient_by_symmetry,
    vertex_count,
)
from .cyclespace import CycleBasis, greedy_mcb
from .squares import decomposition_basis, verify_square_space
from .ctmc import (
    build_master,
    detailed_balance_check,
    kolmogorov_check,
    load_model,
    single_automaton_check,
    steady_state,
)

__all__ = ["RunConfig", "main", "entry"]


@dataclass(frozen=True)
class RunConfig:
    """Parsed invocation, one field per command-line option."""

    command: str
    graph: Path | None = None
    model: Path | None = None
    k: int | None = None
    root: str | None = None
    out: Path | None = None
    dot: Path | None = None
    exact: bool = False
    budget: int = 10**6


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="redpow",
        description="Reduced graph powers, cycle bases, and reversibility checks.",
        epilog="REDPOW_SEED is reserved for future randomized features; "
        "all current commands are deterministic.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_graph_opts(p, with_k=True):
        p.add_argument("--graph", type=Path, required=True, help="graph JSON file")
        if with_k:
            p.add_argument("--k", type=int, required=True, help="number of tokens")
        p.add_argument("--out", type=Path, help="write the JSON result here")

    p = sub.add_parser("power", help="build the k-th reduced power of a graph")
    add_graph_opts(p)
    p.add_argument("--dot", type=Path, help="also write a Graphviz DOT file")
    p.add_argument(
        "--budget",
        type=int,
        default=10**6,
        help="largest v**k for which the product/quotient cross-check runs",
    )

    p = sub.add_parser("mcb", help="construct the structured cycle basis")
    add_graph_opts(p)
    p.add_argument("--root", help="root vertex label (default: first vertex)")

    p = sub.add_parser("verify-squares", help="check the square families against the kernel")
    add_graph_opts(p)
    p.add_argument("--root", help="root vertex label (default: first vertex)")

    p = sub.add_parser("check-reversibility", help="full reversibility check of a model")
    p.add_argument("--model", type=Path, required=True, help="model JSON file")
    p.add_argument("--out", type=Path, help="write the JSON report here")
    p.add_argument("--exact", action="store_true", help="exact rational steady state")
    p.add_argument("--root", help="root vertex label for the cycle basis")

    p = sub.add_parser("check-single", help="cycle criterion for a single automaton")
    p.add_argument("--model", type=Path, required=True, help="model JSON file")
    p.add_argument("--out", type=Path, help="write the JSON report here")

    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    return RunConfig(
        command=args.command,
        graph=getattr(args, "graph", None),
        model=getattr(args, "model", None),
        k=getattr(args, "k", None),
        root=getattr(args, "root", None),
        out=getattr(args, "out", None),
        dot=getattr(args, "dot", None),
        exact=getattr(args, "exact", False),
        budget=getattr(args, "budget", 10**6),
    )


def _write_json(doc: dict, out: Path | None) -> None:
    if out is not None:
        Path(out).write_text(json.dumps(doc, indent=2) + "\n")


def _root_index(g, root: str | None) -> int:
    return g.index_of(root) if root is not None else 0


def _basis_doc(basis: CycleBasis, labels: tuple[str, ...]) -> dict:
    elements = []
    for idx, seq in enumerate(basis.cycles):
        entry = {
            "length": len(seq),
            "vertices": [labels[s] for s in seq],
        }
        if basis.info is not None:
            entry["tag"] = basis.info[idx].tag
        elements.append(entry)
    return {
        "kind": basis.kind,
        "certified_minimum": basis.certified_minimum,
        "element_count": len(basis.elements),
        "total_length": basis.total_length,
        "elements": elements,
    }


def cmd_power(cfg: RunConfig) -> int:
    g = load_graph(cfg.graph)
    rp = build_reduced_power(g, cfg.k)
    v, e = g.num_vertices, g.num_edges
    print(
        f"states={rp.num_states} (formula {vertex_count(v, cfg.k)}) "
        f"edges={rp.num_edges} (formula {edge_count(e, v, cfg.k)})"
    )
    if v**cfg.k <= cfg.budget:
        oracle = quotient_by_symmetry(cartesian_power(g, cfg.k, cfg.budget), g, cfg.k)
        if oracle != rp:
            raise RedpowError("product/quotient cross-check disagrees with direct build")
        print("cross-check: quotient of the Cartesian power agrees")
    else:
        print(f"cross-check: skipped ({v}^{cfg.k} states exceed budget {cfg.budget})")
    if cfg.out is not None:
        Path(cfg.out).write_text(graph_to_json(rp.graph))
    if cfg.dot is not None:
        Path(cfg.dot).write_text(graph_to_dot(rp.graph))
    return 0


def cmd_mcb(cfg: RunConfig) -> int:
    g = load_graph(cfg.graph)
    root = _root_index(g, cfg.root)
    if cfg.k == 1:
        basis = greedy_mcb(g)
        labels = g.labels
    else:
        basis = decomposition_basis(g, cfg.k, root=root)
        labels = basis.host.graph.labels
    doc = _basis_doc(basis, labels)
    print(
        f"kind={doc['kind']} elements={doc['element_count']} "
        f"total_length={doc['total_length']} "
        f"certified_minimum={str(doc['certified_minimum']).lower()}"
    )
    _write_json(doc, cfg.out)
    return 0


def cmd_verify_squares(cfg: RunConfig) -> int:
    g = load_graph(cfg.graph)
    tree = bfs_spanning_tree(g, _root_index(g, cfg.root))
    report = verify_square_space(g, tree, cfg.k)
    doc = report.as_dict()
    for key in ("counts_match", "independent", "projects_to_zero", "spans_kernel", "direct_sum"):
        print(f"{key}: {'ok' if doc[key] else 'FAIL'}")
    print(f"square space: {'PASS' if report.passed else 'FAIL'}")
    _write_json(doc, cfg.out)
    return 0 if report.passed else 2


def cmd_check_reversibility(cfg: RunConfig) -> int:
    g, k, spec = load_model(cfg.model)
    single = single_automaton_check(g, spec)
    mc = build_master(g, k, spec)
    if k == 1:
        basis = greedy_mcb(mc.rp)
    else:
        basis = decomposition_basis(g, k, root=_root_index(g, cfg.root))
    kolmogorov = kolmogorov_check(mc, basis)
    ss = steady_state(mc, mode="exact" if cfg.exact else "float")
    balance = detailed_balance_check(ss, mc)

    if kolmogorov.passed != balance.balanced:
        raise RedpowError(
            "cycle criterion and detailed balance disagree; "
            "this indicates a numerical failure, rerun with --exact"
        )

    n_bad = len(kolmogorov.violations())
    print(f"single-automaton criterion: {'pass' if single.passed else 'fail'}")
    print(
        f"cycle criterion: {'pass' if kolmogorov.passed else 'fail'} "
        f"({len(kolmogorov.checks)} cycles, {n_bad} violations)"
    )
    print(f"detailed balance ({ss.mode}): {'pass' if balance.balanced else 'fail'}")
    verdict = "reversible" if kolmogorov.passed else "not reversible"
    print(f"verdict: {verdict}")

    doc = {
        "k": k,
        "states": mc.num_states,
        "single_automaton": single.as_dict(),
        "kolmogorov": kolmogorov.as_dict(),
        "steady_state": ss.as_dict(),
        "detailed_balance": balance.as_dict(),
        "reversible": kolmogorov.passed,
    }
    _write_json(doc, cfg.out)
    return 0 if kolmogorov.passed else 2


def cmd_check_single(cfg: RunConfig) -> int:
    g, _, spec = load_model(cfg.model)
    report = single_automaton_check(g, spec)
    n_bad = len(report.violations())
    print(
        f"single-automaton criterion: {'pass' if report.passed else 'fail'} "
        f"({len(report.checks)} cycles, {n_bad} violations)"
    )
    _write_json(report.as_dict(), cfg.out)
    return 0 if report.passed else 2


_COMMANDS = {
    "power": cmd_power,
    "mcb": cmd_mcb,
    "verify-squares": cmd_verify_squares,
    "check-reversibility": cmd_check_reversibility,
    "check-single": cmd_check_single,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    cfg = config_from_args(args)
    if cfg.k is not None and cfg.k < 1:
        print("error: --k must be a positive integer", file=sys.stderr)
        return 1
    try:
        return _COMMANDS[cfg.command](cfg)
    except RedpowError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def entry() -> None:
    sys.exit(main())
