"""Master chains of coupled automata and reversibility checks.

k identical tokens hop on a base graph; the hop rate from vertex i to
vertex j is affine in the occupancies, a base rate plus per-vertex
coupling terms evaluated with the moving token excluded. The master
chain lives on the k-th reduced power: the transition rate between
adjacent states multiplies the evaluated per-token rate by the number
of tokens available to move.

Reversibility is decided two independent ways. The cycle route checks
the Kolmogorov criterion (forward and backward rate products agree) on
every element of a cycle basis, which settles all cycles by linearity.
The steady-state route solves pi Q = 0 and tests detailed balance edge
by edge. All rate arithmetic is exact over the rationals; only the
optional float steady-state solve rounds.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Mapping

import numpy as np

from .errors import ModelError, SolverError
from .graph import Graph, graph_from_dict, graph_to_dict
from .power import Monomial, ReducedPowerGraph, build_reduced_power
from .cyclespace import CycleBasis, greedy_mcb, host_graph

__all__ = [
    "RateSpec",
    "eval_rate",
    "MasterChain",
    "build_master",
    "CycleCheck",
    "KolmogorovReport",
    "kolmogorov_check",
    "single_automaton_check",
    "SteadyState",
    "steady_state",
    "BalanceReport",
    "detailed_balance_check",
    "parse_rational",
    "model_from_dict",
    "load_model",
    "model_to_dict",
]


def parse_rational(value: object, where: str) -> Fraction:
    """Exact rational from an int or a string like '3' or '1/3'."""
    if isinstance(value, bool):
        raise ModelError(f"{where}: booleans are not rates")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError) as exc:
            raise ModelError(f"{where}: cannot parse rational {value!r}: {exc}") from None
    if isinstance(value, float):
        raise ModelError(
            f"{where}: floats are not exact; write the rate as a string like '1/10'"
        )
    raise ModelError(f"{where}: expected an int or string, got {type(value).__name__}")


class RateSpec:
    """Directed per-token rates, affine in the occupancy vector.

    For each directed edge (i, j) of the base graph there is a base
    rate and one coupling coefficient per vertex. The per-token rate
    from i to j in state x is

        base(i,j) + sum_l coupling(i,j)[l] * (n_l(x) - [l == i])

    so a token never counts itself. Both directions of every base edge
    must be specified. Coupling coefficients may be negative; the
    evaluated rate must come out positive, which build_master checks
    state by state.
    """

    __slots__ = ("graph", "_base", "_coupling")

    def __init__(
        self,
        graph: Graph,
        base: Mapping[tuple[int, int], Fraction],
        coupling: Mapping[tuple[int, int], tuple[Fraction, ...]] | None = None,
    ):
        directed = set()
        for i, j in graph.edges:
            directed.add((i, j))
            directed.add((j, i))
        base = dict(base)
        coupling = {k: tuple(v) for k, v in (coupling or {}).items()}
        for pair in base:
            if pair not in directed:
                raise ModelError(f"rate given for non-edge pair {pair}")
        for pair in directed:
            if pair not in base:
                i, j = pair
                raise ModelError(
                    f"missing rate for directed edge "
                    f"'{graph.labels[i]}->{graph.labels[j]}'"
                )
        v = graph.num_vertices
        for pair, coeffs in coupling.items():
            if pair not in directed:
                raise ModelError(f"coupling given for non-edge pair {pair}")
            if len(coeffs) != v:
                raise ModelError(f"coupling vector for {pair} must have {v} entries")
        zero = (Fraction(0),) * v
        self.graph = graph
        self._base = {pair: Fraction(base[pair]) for pair in directed}
        self._coupling = {pair: coupling.get(pair, zero) for pair in directed}

    def base_rate(self, i: int, j: int) -> Fraction:
        try:
            return self._base[(i, j)]
        except KeyError:
            raise ModelError(f"({i}, {j}) is not a directed edge") from None

    def coupling_vector(self, i: int, j: int) -> tuple[Fraction, ...]:
        try:
            return self._coupling[(i, j)]
        except KeyError:
            raise ModelError(f"({i}, {j}) is not a directed edge") from None

    def directed_pairs(self) -> list[tuple[int, int]]:
        return sorted(self._base)

    def is_uncoupled(self) -> bool:
        return all(all(c == 0 for c in vec) for vec in self._coupling.values())


def eval_rate(spec: RateSpec, i: int, j: int, state: Monomial) -> Fraction:
    """Per-token rate for a hop i -> j in the given occupancy state."""
    if state.exponents[i] < 1:
        raise ModelError(
            f"no token on {spec.graph.labels[i]!r} to move in state {state.exponents}"
        )
    rate = spec.base_rate(i, j)
    for l, coeff in enumerate(spec.coupling_vector(i, j)):
        if coeff:
            occ = state.exponents[l] - (1 if l == i else 0)
            rate += coeff * occ
    return rate


class MasterChain:
    """Continuous-time Markov chain of k tokens on the base graph.

    States are those of the k-th reduced power; ``rate(x, y)`` is the
    exact transition rate between adjacent state indices and zero for
    non-adjacent pairs.
    """

    __slots__ = ("rp", "spec", "_rates")

    def __init__(self, rp: ReducedPowerGraph, spec: RateSpec, rates: dict[tuple[int, int], Fraction]):
        self.rp = rp
        self.spec = spec
        self._rates = rates

    @property
    def num_states(self) -> int:
        return self.rp.num_states

    def labels(self) -> tuple[str, ...]:
        return self.rp.graph.labels

    def rate(self, x: int, y: int) -> Fraction:
        return self._rates.get((x, y), Fraction(0))

    def transitions(self) -> list[tuple[int, int, Fraction]]:
        return [(x, y, r) for (x, y), r in sorted(self._rates.items())]

    def exit_rate(self, x: int) -> Fraction:
        return sum(
            (self._rates[(x, y)] for y in self.rp.graph.adjacency(x)),
            Fraction(0),
        )


def build_master(base: Graph, k: int, spec: RateSpec) -> MasterChain:
    """Assemble the master chain of k coupled tokens.

    Every transition rate is checked to be strictly positive, which
    keeps the chain irreducible on the connected state space.
    """
    if spec.graph != base:
        raise ModelError("rate specification is for a different graph")
    rp = build_reduced_power(base, k)
    rates: dict[tuple[int, int], Fraction] = {}
    for e in range(rp.num_edges):
        i, j, f = rp.annotation(e)
        x = rp.state_index(f.times(i))
        y = rp.state_index(f.times(j))
        sx, sy = rp.states[x], rp.states[y]
        fwd = sx.exponents[i] * eval_rate(spec, i, j, sx)
        bwd = sy.exponents[j] * eval_rate(spec, j, i, sy)
        for val, src, a, b in ((fwd, x, i, j), (bwd, y, j, i)):
            if val <= 0:
                raise ModelError(
                    f"rate {base.labels[a]}->{base.labels[b]} evaluates to "
                    f"{val} in state {rp.label(src)!r}; master rates must be positive"
                )
        rates[(x, y)] = fwd
        rates[(y, x)] = bwd
    return MasterChain(rp, spec, rates)


@dataclass(frozen=True)
class CycleCheck:
    """Kolmogorov criterion outcome for one basis cycle."""

    index: int
    tag: str
    vertices: tuple[str, ...]
    forward_factors: tuple[Fraction, ...]
    backward_factors: tuple[Fraction, ...]
    forward: Fraction
    backward: Fraction
    base_edges: tuple[tuple[str, str], ...]

    @property
    def passed(self) -> bool:
        return self.forward == self.backward

    def as_dict(self) -> dict:
        return {
            "index": self.index,
            "tag": self.tag,
            "vertices": list(self.vertices),
            "forward": str(self.forward),
            "backward": str(self.backward),
            "passed": self.passed,
            "base_edges": [list(pair) for pair in self.base_edges],
        }


@dataclass(frozen=True)
class KolmogorovReport:
    """Cycle-criterion verdict over a full cycle basis."""

    checks: tuple[CycleCheck, ...]
    basis_kind: str

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def violations(self) -> list[CycleCheck]:
        return [c for c in self.checks if not c.passed]

    def as_dict(self) -> dict:
        return {
            "basis_kind": self.basis_kind,
            "cycles_checked": len(self.checks),
            "passed": self.passed,
            "violations": [c.as_dict() for c in self.violations()],
        }


def kolmogorov_check(mc: MasterChain, basis: CycleBasis) -> KolmogorovReport:
    """Compare forward and backward rate products over basis cycles.

    The criterion holds for every cycle of the chain iff it holds on a
    cycle basis, because log-rate ratios are additive over F2 sums of
    oriented cycles. All products are exact rationals.
    """
    if host_graph(basis.host) != mc.rp.graph:
        raise ModelError("cycle basis lives on a different state graph")
    labels = mc.rp.graph.labels
    checks = []
    for idx, seq in enumerate(basis.cycles):
        fwd_factors = []
        bwd_factors = []
        n = len(seq)
        for t in range(n):
            x, y = seq[t], seq[(t + 1) % n]
            fwd_factors.append(mc.rate(x, y))
            bwd_factors.append(mc.rate(y, x))
        if any(r == 0 for r in fwd_factors + bwd_factors):
            raise ModelError(f"basis cycle {idx} uses a transition the chain lacks")
        fwd = Fraction(1)
        for r in fwd_factors:
            fwd *= r
        bwd = Fraction(1)
        for r in bwd_factors:
            bwd *= r
        info = basis.info[idx] if basis.info else None
        base_edges = tuple(
            (mc.rp.base.labels[i], mc.rp.base.labels[j])
            for i, j in (info.base_edges if info else ())
        )
        checks.append(
            CycleCheck(
                index=idx,
                tag=info.tag if info else basis.kind,
                vertices=tuple(labels[s] for s in seq),
                forward_factors=tuple(fwd_factors),
                backward_factors=tuple(bwd_factors),
                forward=fwd,
                backward=bwd,
                base_edges=base_edges,
            )
        )
    return KolmogorovReport(checks=tuple(checks), basis_kind=basis.kind)


def single_automaton_check(base: Graph, spec: RateSpec) -> KolmogorovReport:
    """Kolmogorov criterion for one token (couplings never activate)."""
    mc = build_master(base, 1, spec)
    return kolmogorov_check(mc, greedy_mcb(mc.rp))


@dataclass(frozen=True)
class SteadyState:
    """Stationary distribution with solve diagnostics."""

    probabilities: tuple
    mode: str
    residual_inf: float
    sum_abs_error: float

    def as_dict(self) -> dict:
        probs = [
            str(p) if isinstance(p, Fraction) else float(p) for p in self.probabilities
        ]
        return {
            "mode": self.mode,
            "probabilities": probs,
            "residual_inf": self.residual_inf,
            "sum_abs_error": self.sum_abs_error,
        }


_EXACT_STATE_LIMIT = 400


def steady_state(mc: MasterChain, mode: str = "float", tol: float = 1e-10) -> SteadyState:
    """Solve pi Q = 0 with sum(pi) = 1.

    The transpose system with its last row replaced by ones is square
    and nonsingular for an irreducible generator, so a direct solve
    suffices. Float mode uses LAPACK and verifies the residual; exact
    mode eliminates over the rationals and verifies pi Q = 0 exactly.
    """
    n = mc.num_states
    if mode == "float":
        a = np.zeros((n, n))
        for (x, y), r in mc._rates.items():
            a[y, x] += float(r)
            a[x, x] -= float(r)
        a[-1, :] = 1.0
        b = np.zeros(n)
        b[-1] = 1.0
        try:
            pi = np.linalg.solve(a, b)
        except np.linalg.LinAlgError as exc:
            raise SolverError(f"steady-state solve failed: {exc}") from None
        residual = 0.0
        for x in range(n):
            acc = -float(mc.exit_rate(x)) * pi[x]
            for y in mc.rp.graph.adjacency(x):
                acc += pi[y] * float(mc.rate(y, x))
            residual = max(residual, abs(acc))
        sum_err = abs(pi.sum() - 1.0)
        if residual > tol or sum_err > tol:
            raise SolverError(
                f"steady-state residual {residual:.3e} exceeds tolerance {tol:.3e}"
            )
        if pi.min() <= 0:
            raise SolverError("steady-state solve produced a non-positive probability")
        return SteadyState(tuple(pi), "float", residual, sum_err)

    if mode == "exact":
        if n > _EXACT_STATE_LIMIT:
            raise SolverError(
                f"exact mode supports up to {_EXACT_STATE_LIMIT} states, got {n}"
            )
        a = [[Fraction(0)] * n for _ in range(n)]
        for (x, y), r in mc._rates.items():
            a[y][x] += r
            a[x][x] -= r
        for col in range(n):
            a[n - 1][col] = Fraction(1)
        rhs = [Fraction(0)] * n
        rhs[n - 1] = Fraction(1)
        pi = _solve_exact(a, rhs)
        for x in range(n):
            acc = -mc.exit_rate(x) * pi[x]
            for y in mc.rp.graph.adjacency(x):
                acc += pi[y] * mc.rate(y, x)
            if acc != 0:
                raise SolverError("exact steady state fails pi Q = 0")
        if sum(pi) != 1:
            raise SolverError("exact steady state does not sum to one")
        if min(pi) <= 0:
            raise SolverError("exact steady state has a non-positive probability")
        return SteadyState(tuple(pi), "exact", 0.0, 0.0)

    raise SolverError(f"unknown steady-state mode {mode!r}")


def _solve_exact(a: list[list[Fraction]], b: list[Fraction]) -> list[Fraction]:
    """Gaussian elimination over the rationals with row pivoting."""
    n = len(a)
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col] != 0), None)
        if pivot is None:
            raise SolverError("singular system in exact steady-state solve")
        if pivot != col:
            a[col], a[pivot] = a[pivot], a[col]
            b[col], b[pivot] = b[pivot], b[col]
        inv = 1 / a[col][col]
        a[col] = [x * inv for x in a[col]]
        b[col] *= inv
        for r in range(n):
            if r != col and a[r][col]:
                factor = a[r][col]
                a[r] = [x - factor * y for x, y in zip(a[r], a[col])]
                b[r] -= factor * b[col]
    return b


@dataclass(frozen=True)
class BalanceViolation:
    x: str
    y: str
    flow_xy: object
    flow_yx: object

    def as_dict(self) -> dict:
        return {
            "x": self.x,
            "y": self.y,
            "flow_xy": str(self.flow_xy),
            "flow_yx": str(self.flow_yx),
        }


@dataclass(frozen=True)
class BalanceReport:
    """Detailed-balance verdict of a steady state."""

    balanced: bool
    mode: str
    violations: tuple[BalanceViolation, ...]

    def as_dict(self) -> dict:
        return {
            "balanced": self.balanced,
            "mode": self.mode,
            "violations": [v.as_dict() for v in self.violations],
        }


def detailed_balance_check(
    ss: SteadyState, mc: MasterChain, rel_tol: float = 1e-9
) -> BalanceReport:
    """Test pi_x q(x,y) = pi_y q(y,x) on every transition.

    Exact steady states compare exactly; float ones use a relative
    tolerance on the larger flow.
    """
    if len(ss.probabilities) != mc.num_states:
        raise ModelError("steady state does not match the chain's state count")
    violations = []
    for x, y in mc.rp.graph.edges:
        qxy, qyx = mc.rate(x, y), mc.rate(y, x)
        if ss.mode == "exact":
            lhs = ss.probabilities[x] * qxy
            rhs = ss.probabilities[y] * qyx
            ok = lhs == rhs
        else:
            lhs = ss.probabilities[x] * float(qxy)
            rhs = ss.probabilities[y] * float(qyx)
            ok = abs(lhs - rhs) <= rel_tol * max(abs(lhs), abs(rhs), 1e-300)
        if not ok:
            labels = mc.rp.graph.labels
            violations.append(BalanceViolation(labels[x], labels[y], lhs, rhs))
    return BalanceReport(
        balanced=not violations, mode=ss.mode, violations=tuple(violations)
    )


# --- model serialization ---


def model_from_dict(data: object) -> tuple[Graph, int, RateSpec]:
    if not isinstance(data, dict):
        raise ModelError("model document must be a JSON object")
    for key in ("graph", "k", "rates"):
        if key not in data:
            raise ModelError(f"model document is missing key {key!r}")
    graph = graph_from_dict(data["graph"])
    k = data["k"]
    if not isinstance(k, int) or isinstance(k, bool) or k < 1:
        raise ModelError(f"'k' must be a positive integer, got {k!r}")
    rates_doc = data["rates"]
    if not isinstance(rates_doc, dict):
        raise ModelError("'rates' must be an object keyed by 'src->dst'")

    base: dict[tuple[int, int], Fraction] = {}
    coupling: dict[tuple[int, int], tuple[Fraction, ...]] = {}
    v = graph.num_vertices
    for key, entry in rates_doc.items():
        if "->" not in key:
            raise ModelError(f"rate key {key!r} must look like 'src->dst'")
        src, dst = key.split("->", 1)
        pair = (graph.index_of(src), graph.index_of(dst))
        if not graph.has_edge(*pair):
            raise ModelError(f"rate key {key!r} does not name an edge")
        if pair in base:
            raise ModelError(f"duplicate rate key {key!r}")
        if not isinstance(entry, dict) or "base" not in entry:
            raise ModelError(f"rate entry {key!r} must be an object with 'base'")
        base[pair] = parse_rational(entry["base"], f"rates[{key!r}].base")
        coeffs = [Fraction(0)] * v
        coupling_doc = entry.get("coupling", {})
        if not isinstance(coupling_doc, dict):
            raise ModelError(f"rates[{key!r}].coupling must be an object")
        for lab, val in coupling_doc.items():
            coeffs[graph.index_of(lab)] = parse_rational(
                val, f"rates[{key!r}].coupling[{lab!r}]"
            )
        coupling[pair] = tuple(coeffs)
        for extra in set(entry) - {"base", "coupling"}:
            raise ModelError(f"rates[{key!r}] has unknown field {extra!r}")

    return graph, k, RateSpec(graph, base, coupling)


def model_to_dict(graph: Graph, k: int, spec: RateSpec) -> dict:
    rates = {}
    for i, j in spec.directed_pairs():
        key = f"{graph.labels[i]}->{graph.labels[j]}"
        entry: dict = {"base": str(spec.base_rate(i, j))}
        coeffs = spec.coupling_vector(i, j)
        if any(c != 0 for c in coeffs):
            entry["coupling"] = {
                graph.labels[l]: str(c) for l, c in enumerate(coeffs) if c != 0
            }
        rates[key] = entry
    return {"graph": graph_to_dict(graph), "k": k, "rates": rates}


def load_model(path: str | Path) -> tuple[Graph, int, RateSpec]:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ModelError(f"cannot read model file {path}: {exc}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModelError(f"model file {path} is not valid JSON: {exc}") from None
    return model_from_dict(data)
