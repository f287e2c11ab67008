"""Max-min scheduling LPs and edge-fraction decomposition.

Two equivalent routes to an optimal schedule:

* the pattern LP optimises a distribution over alignment patterns
  directly (one variable per pattern, one constraint per cut), and
* the edge LP optimises per-link activation fractions under unit
  transmit/receive budgets, later peeled into a pattern schedule.

Both are epigraph LPs ``max t  s.t.  (cut value) >= t`` handed to
HiGHS via scipy.  The solver is deterministic for a fixed input, the
reported objective is always re-derived from the returned variables
(never read off solver internals), and the dual certificate is checked
whenever HiGHS provides one.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

import numpy as np
from scipy.optimize import linear_sum_assignment, linprog

from .enumeration import StateSpace, enumerate_cuts
from .model import AlignmentPattern, NetworkInstance

__all__ = [
    "MaxMinProblem",
    "Schedule",
    "EdgeFractions",
    "SolverError",
    "solve_maxmin",
    "solve_edge_lp",
    "decompose_edge_fractions",
]

# weights / fractions below this are snapped to exactly zero
WEIGHT_FLOOR = 1e-12
DUALITY_RTOL = 1e-7
_HIGHS_OPTIONS = {
    "primal_feasibility_tolerance": 1e-9,
    "dual_feasibility_tolerance": 1e-9,
}


class SolverError(RuntimeError):
    """LP solver failed or returned a certificate outside tolerance."""


@dataclass(frozen=True)
class MaxMinProblem:
    """Value table V[cut, pattern] for the schedule LP."""

    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.ndim != 2 or v.shape[0] < 1 or v.shape[1] < 1:
            raise ValueError(f"value table must be a non-empty 2-D array, got {v.shape}")
        if not np.all(np.isfinite(v)):
            raise ValueError("value table contains non-finite entries")
        if np.min(v) < -WEIGHT_FLOOR:
            raise ValueError("value table contains negative entries")
        object.__setattr__(self, "values", np.maximum(v, 0.0))


@dataclass(frozen=True)
class Schedule:
    """Activation-time distribution over canonical pattern indices.

    ``weights`` keeps only strictly positive entries; ``value`` is the
    achieved max-min objective when known (None for schedules produced
    without a value table in scope, e.g. by edge decomposition).
    """

    weights: dict[int, float]
    value: float | None = None

    @property
    def support_size(self) -> int:
        return len(self.weights)

    def total(self) -> float:
        return float(sum(self.weights.values()))


@dataclass(frozen=True)
class EdgeFractions:
    """Per-link activation fractions x[(i, j)] from the edge LP."""

    fractions: dict[tuple[int, int], float]


def _check_duality(res, b_ub, b_eq, reported: float) -> None:
    ineq = getattr(res, "ineqlin", None)
    eq = getattr(res, "eqlin", None)
    if ineq is None or ineq.marginals is None:
        return
    dual = float(b_ub @ ineq.marginals)
    if eq is not None and eq.marginals is not None and len(b_eq):
        dual += float(b_eq @ eq.marginals)
    gap = abs(res.fun - dual)
    if gap > DUALITY_RTOL * max(1.0, abs(reported)):
        raise SolverError(f"duality gap {gap:.3e} exceeds tolerance at value {reported:.6g}")


def solve_maxmin(problem: MaxMinProblem) -> Schedule:
    """Maximise the minimum cut value over pattern distributions.

    Returns a schedule whose value is the exact minimum over cuts
    recomputed from the (renormalised, floor-snapped) weights.
    """
    v = problem.values
    n_cuts, n_patterns = v.shape

    # variables z = (t, lambda_1 .. lambda_S); maximise t
    c = np.zeros(n_patterns + 1)
    c[0] = -1.0
    a_ub = np.hstack([np.ones((n_cuts, 1)), -v])
    b_ub = np.zeros(n_cuts)
    a_eq = np.zeros((1, n_patterns + 1))
    a_eq[0, 1:] = 1.0
    b_eq = np.ones(1)
    bounds = [(None, None)] + [(0, None)] * n_patterns

    res = linprog(
        c,
        A_ub=a_ub,
        b_ub=b_ub,
        A_eq=a_eq,
        b_eq=b_eq,
        bounds=bounds,
        method="highs",
        options=_HIGHS_OPTIONS,
    )
    if res.status != 0:
        raise SolverError(f"max-min LP failed: status {res.status} ({res.message})")

    lam = np.maximum(res.x[1:], 0.0)
    lam[lam < WEIGHT_FLOOR] = 0.0
    total = lam.sum()
    if total <= 0:
        raise SolverError("max-min LP returned an all-zero schedule")
    lam /= total

    value = float(np.min(v @ lam))
    _check_duality(res, b_ub, b_eq, value)
    weights = {k: float(w) for k, w in enumerate(lam) if w > 0.0}
    return Schedule(weights=weights, value=value)


def _validate_edge(inst: NetworkInstance, edge: tuple[int, int]) -> None:
    i, j = edge
    if not inst.has_link(i, j):
        raise ValueError(f"edge ({i}, {j}) is not a nonzero link of the instance")


def solve_edge_lp(
    inst: NetworkInstance, rates: Mapping[tuple[int, int], float]
) -> tuple[float, EdgeFractions]:
    """Max-min over per-edge activation fractions with unit node budgets.

    Each node may transmit for at most a unit fraction of the time and
    receive for at most a unit fraction, separately (full duplex).  The
    constraint x <= 1 is implied by the budgets.  Returns the optimum
    (recomputed from the cleaned fractions) and the fractions.
    """
    edges = sorted(rates)
    for e in edges:
        _validate_edge(inst, e)
        if rates[e] < 0 or not np.isfinite(rates[e]):
            raise ValueError(f"rate for edge {e} must be finite and nonnegative")
    cuts = enumerate_cuts(inst)
    n_e = len(edges)
    edge_pos = {e: k for k, e in enumerate(edges)}

    rows = []
    for cut in cuts:
        omega = set(cut.omega)
        row = np.zeros(n_e + 1)
        row[0] = 1.0
        for (i, j), k in edge_pos.items():
            if i in omega and j not in omega:
                row[k + 1] = -rates[(i, j)]
        rows.append(row)
    n_cut_rows = len(rows)

    for node in sorted({i for i, _ in edges}):
        row = np.zeros(n_e + 1)
        for (i, j), k in edge_pos.items():
            if i == node:
                row[k + 1] = 1.0
        rows.append(row)
    for node in sorted({j for _, j in edges}):
        row = np.zeros(n_e + 1)
        for (i, j), k in edge_pos.items():
            if j == node:
                row[k + 1] = 1.0
        rows.append(row)

    a_ub = np.array(rows)
    b_ub = np.zeros(len(rows))
    b_ub[n_cut_rows:] = 1.0
    c = np.zeros(n_e + 1)
    c[0] = -1.0
    bounds = [(None, None)] + [(0, None)] * n_e

    res = linprog(
        c, A_ub=a_ub, b_ub=b_ub, bounds=bounds, method="highs", options=_HIGHS_OPTIONS
    )
    if res.status != 0:
        raise SolverError(f"edge LP failed: status {res.status} ({res.message})")

    x = np.maximum(res.x[1:], 0.0)
    x[x < WEIGHT_FLOOR] = 0.0
    # keep budgets exactly feasible in the face of solver slack
    max_load = 0.0
    for node in {i for i, _ in edges} | {j for _, j in edges}:
        tx = sum(x[edge_pos[e]] for e in edges if e[0] == node)
        rx = sum(x[edge_pos[e]] for e in edges if e[1] == node)
        max_load = max(max_load, tx, rx)
    if max_load > 1.0:
        x /= max_load

    value = _min_cut_value(cuts, edges, rates, x)
    _check_duality(res, b_ub, np.zeros(0), value)
    fractions = {e: float(x[k]) for e, k in edge_pos.items() if x[k] > 0.0}
    return value, EdgeFractions(fractions=fractions)


def _min_cut_value(cuts, edges, rates, x) -> float:
    best = np.inf
    for cut in cuts:
        omega = set(cut.omega)
        total = sum(
            rates[e] * x[k]
            for k, e in enumerate(edges)
            if e[0] in omega and e[1] not in omega
        )
        best = min(best, total)
    return float(best)


def decompose_edge_fractions(x: EdgeFractions, space: StateSpace) -> Schedule:
    """Peel edge fractions into a schedule over partial matchings.

    Repeatedly extracts a matching that covers every node whose residual
    tx/rx load attains the current maximum and peels off as much weight
    as the matching supports.  That choice keeps the total extracted
    weight equal to the initial maximum load (hence <= 1) and terminates
    within #edges + #nodes rounds: every round either zeroes an edge or
    promotes a new node to the maximum-load set.  Leftover time goes to
    the empty pattern.  Reproduces every x[e] exactly (to 1e-9).
    """
    residual = {e: v for e, v in x.fractions.items() if v > WEIGHT_FLOOR}
    for e, v in residual.items():
        i, j = e
        if i == j or not (i >= 0 and j >= 1):
            raise ValueError(f"invalid edge {e} in fractions")
        if AlignmentPattern((e,)) not in space.pattern_index:
            raise ValueError(f"edge {e} is not a nonzero link of the state space")
        if v > 1.0 + 1e-9:
            raise ValueError(f"fraction for edge {e} exceeds 1: {v}")

    weights: dict[AlignmentPattern, float] = {}
    tx_nodes = sorted({i for i, _ in residual})
    rx_nodes = sorted({j for _, j in residual})
    max_rounds = len(residual) + 2 * (len(tx_nodes) + len(rx_nodes)) + 8

    for _ in range(max_rounds):
        if not residual:
            break
        tx_load = {i: 0.0 for i in tx_nodes}
        rx_load = {j: 0.0 for j in rx_nodes}
        for (i, j), v in residual.items():
            tx_load[i] += v
            rx_load[j] += v
        l_max = max(max(tx_load.values(), default=0.0), max(rx_load.values(), default=0.0))
        if l_max > 1.0 + 1e-9:
            raise ValueError(f"node budget exceeded: maximum load {l_max}")
        if l_max <= WEIGHT_FLOOR:
            break

        tight_tx = {i for i, v in tx_load.items() if v >= l_max - 1e-12}
        tight_rx = {j for j, v in rx_load.items() if v >= l_max - 1e-12}
        matching = _cover_matching(residual, tx_nodes, rx_nodes, tight_tx, tight_rx)

        covered_tx = {i for i, _ in matching}
        covered_rx = {j for _, j in matching}
        uncov = [v for i, v in tx_load.items() if i not in covered_tx]
        uncov += [v for j, v in rx_load.items() if j not in covered_rx]
        headroom = l_max - max(uncov, default=0.0)
        lam = min(min(residual[e] for e in matching), headroom)
        if lam <= 0:
            raise RuntimeError("decomposition stalled (internal error)")

        pattern = AlignmentPattern(tuple(matching))
        weights[pattern] = weights.get(pattern, 0.0) + lam
        for e in matching:
            residual[e] -= lam
            if residual[e] < WEIGHT_FLOOR:
                del residual[e]
    if residual:
        raise RuntimeError("decomposition did not terminate (internal error)")

    out: dict[int, float] = {}
    for pattern, w in weights.items():
        if w > WEIGHT_FLOOR:
            out[space.pattern_index[pattern]] = out.get(space.pattern_index[pattern], 0.0) + w
    remainder = 1.0 - sum(out.values())
    if remainder > WEIGHT_FLOOR:
        empty = space.empty_pattern_index
        out[empty] = out.get(empty, 0.0) + remainder
    return Schedule(weights=dict(sorted(out.items())), value=None)


def _cover_matching(residual, tx_nodes, rx_nodes, tight_tx, tight_rx):
    """Matching within the residual support covering all tight nodes.

    Found via a max-weight assignment where an edge scores one point per
    tight endpoint; a matching covering every tight node exists whenever
    the loads are substochastic, so the optimum attains full coverage.
    """
    tx_pos = {i: k for k, i in enumerate(tx_nodes)}
    rx_pos = {j: k for k, j in enumerate(rx_nodes)}
    weight = np.zeros((len(tx_nodes), len(rx_nodes)))
    for i, j in residual:
        weight[tx_pos[i], rx_pos[j]] = (i in tight_tx) + (j in tight_rx)
    rows, cols = linear_sum_assignment(weight, maximize=True)
    matching = [
        (tx_nodes[r], rx_nodes[c])
        for r, c in zip(rows, cols)
        if (tx_nodes[r], rx_nodes[c]) in residual
    ]
    covered_tx = {i for i, _ in matching}
    covered_rx = {j for _, j in matching}
    if not (tight_tx <= covered_tx and tight_rx <= covered_rx):
        raise RuntimeError("no matching covers the maximum-load nodes (internal error)")
    return matching
