"""Approximate capacities of the three channel models.

Three max-min objectives share one LP core and differ only in how a
(pattern, cut) pair is valued:

* ``capacity_imperfect`` -- log-det of the arranged cut/state block,
  side lobes included.  This is the general model.
* ``capacity_ideal`` -- sum of ideal point-to-point link rates over the
  aligned cross-cut links (the beta = 0 degeneration).
* ``rate_tsn`` -- same LP as the ideal model but with every link rate
  discounted by the worst-case side-lobe leakage treated as noise
  (treat-side-lobes-as-noise).

All rates are bits per channel use, logs base 2.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .enumeration import StateSpace, build_state_space
from .matrices import cut_state_matrix, log_det_capacity
from .model import Cut, NetworkInstance
from .optimize import MaxMinProblem, Schedule, decompose_edge_fractions, solve_edge_lp, solve_maxmin

__all__ = [
    "LinkRates",
    "CapacityResult",
    "UndefinedLinkError",
    "link_rate_ideal",
    "link_rate_tsn",
    "link_rate_leakage",
    "link_rates",
    "imperfect_value_table",
    "linear_value_table",
    "capacity_imperfect",
    "capacity_ideal",
    "rate_tsn",
]


class UndefinedLinkError(ValueError):
    """A point-to-point rate was requested for a zero link."""


@dataclass(frozen=True)
class LinkRates:
    """Per-link rates of the ideal and side-lobe-aware models.

    ``leakage[(i, j)]`` is the rate a single worst side-lobe interferer
    could sustain into receiver j; it upper-bounds what treating side
    lobes as noise costs on that link and vanishes at beta = 0.
    """

    ideal: dict[tuple[int, int], float]
    tsn: dict[tuple[int, int], float]
    leakage: dict[tuple[int, int], float]


def _require_link(inst: NetworkInstance, i: int, j: int) -> None:
    if not inst.has_link(i, j):
        raise UndefinedLinkError(f"no nonzero link ({i}, {j}) in this instance")


def _interference_gains(inst: NetworkInstance, i: int, j: int) -> list[float]:
    """Squared magnitudes |h_jm|^2 for side-lobe interferers m into j.

    Interferers are all transmit-capable nodes other than the aligned
    transmitter i and the receiver j itself.
    """
    return [
        float(abs(inst.channel[j, m]) ** 2)
        for m in range(inst.num_relays + 1)
        if m != i and m != j
    ]


def link_rate_ideal(inst: NetworkInstance, i: int, j: int) -> float:
    """Interference-free aligned-link rate log2(1 + P a^2 |h_ji|^2)."""
    _require_link(inst, i, j)
    gain = abs(inst.channel[j, i]) ** 2
    return float(np.log2(1.0 + inst.power * inst.alpha**2 * gain))


def link_rate_tsn(inst: NetworkInstance, i: int, j: int) -> float:
    """Aligned-link rate with all side-lobe leakage treated as noise."""
    _require_link(inst, i, j)
    gain = abs(inst.channel[j, i]) ** 2
    noise = 1.0 + inst.power * inst.beta**2 * sum(_interference_gains(inst, i, j))
    return float(np.log2(1.0 + inst.power * inst.alpha**2 * gain / noise))


def link_rate_leakage(inst: NetworkInstance, i: int, j: int) -> float:
    """Rate of the single strongest side-lobe interferer into j."""
    _require_link(inst, i, j)
    gains = _interference_gains(inst, i, j)
    worst = max(gains, default=0.0)
    return float(np.log2(1.0 + inst.power * inst.beta**2 * worst))


def link_rates(inst: NetworkInstance) -> LinkRates:
    """All three per-link rate maps over the nonzero links."""
    ideal, tsn, leakage = {}, {}, {}
    for i, j in inst.links():
        ideal[(i, j)] = link_rate_ideal(inst, i, j)
        tsn[(i, j)] = link_rate_tsn(inst, i, j)
        leakage[(i, j)] = link_rate_leakage(inst, i, j)
    return LinkRates(ideal=ideal, tsn=tsn, leakage=leakage)


def imperfect_value_table(inst: NetworkInstance, space: StateSpace) -> MaxMinProblem:
    """V[cut, pattern] = log-det capacity of the arranged channel block."""
    v = np.zeros((len(space.cuts), len(space.patterns)))
    for pk, pattern in enumerate(space.patterns):
        for ck, cut in enumerate(space.cuts):
            csm = cut_state_matrix(inst, pattern, cut)
            v[ck, pk] = log_det_capacity(csm, inst.power)
    return MaxMinProblem(values=v)


def linear_value_table(
    inst: NetworkInstance,
    space: StateSpace,
    rates: dict[tuple[int, int], float],
) -> MaxMinProblem:
    """V[cut, pattern] = sum of per-link rates over aligned cross-cut links."""
    edges = sorted(rates)
    edge_pos = {e: k for k, e in enumerate(edges)}
    rate_vec = np.array([rates[e] for e in edges])
    # crossing[k, c] = True iff edge k crosses cut c
    crossing = np.zeros((len(edges), len(space.cuts)), dtype=bool)
    for ck, cut in enumerate(space.cuts):
        omega = set(cut.omega)
        for e, k in edge_pos.items():
            crossing[k, ck] = e[0] in omega and e[1] not in omega
    v = np.zeros((len(space.cuts), len(space.patterns)))
    for pk, pattern in enumerate(space.patterns):
        idx = [edge_pos[e] for e in pattern]
        if idx:
            v[:, pk] = crossing[idx, :].T @ rate_vec[idx]
    return MaxMinProblem(values=v)


@dataclass(frozen=True)
class CapacityResult:
    """A capacity value with the schedule that achieves it.

    ``per_cut_values`` maps each cut to the value the returned schedule
    achieves across it; ``value`` is their minimum.
    """

    value: float
    schedule: Schedule
    model_tag: str
    per_cut_values: dict[Cut, float]


def _result_from_schedule(
    space: StateSpace, table: MaxMinProblem, schedule: Schedule, tag: str
) -> CapacityResult:
    lam = np.zeros(len(space.patterns))
    for k, w in schedule.weights.items():
        lam[k] = w
    per_cut = table.values @ lam
    value = float(np.min(per_cut))
    per_cut_values = {cut: float(per_cut[ck]) for ck, cut in enumerate(space.cuts)}
    return CapacityResult(
        value=value,
        schedule=replace(schedule, value=value),
        model_tag=tag,
        per_cut_values=per_cut_values,
    )


def capacity_imperfect(
    inst: NetworkInstance, space: StateSpace | None = None
) -> CapacityResult:
    """Approximate capacity of the side-lobe (imperfect beamforming) model."""
    space = space or build_state_space(inst)
    table = imperfect_value_table(inst, space)
    schedule = solve_maxmin(table)
    return _result_from_schedule(space, table, schedule, "imperfect")


def capacity_ideal(
    inst: NetworkInstance,
    method: str = "pattern_lp",
    space: StateSpace | None = None,
) -> CapacityResult:
    """Approximate capacity of the ideal (zero side-lobe) model.

    ``pattern_lp`` optimises over pattern distributions directly;
    ``edge_lp`` optimises per-link fractions and decomposes them into a
    pattern schedule.  Both agree to LP tolerance.
    """
    space = space or build_state_space(inst)
    rates = link_rates(inst).ideal
    table = linear_value_table(inst, space, rates)
    if method == "pattern_lp":
        schedule = solve_maxmin(table)
    elif method == "edge_lp":
        _, fractions = solve_edge_lp(inst, rates)
        schedule = decompose_edge_fractions(fractions, space)
    else:
        raise ValueError(f"unknown method {method!r}")
    return _result_from_schedule(space, table, schedule, "ideal")


def rate_tsn(inst: NetworkInstance, space: StateSpace | None = None) -> CapacityResult:
    """Achievable rate when side-lobe leakage is treated as noise."""
    space = space or build_state_space(inst)
    rates = link_rates(inst).tsn
    table = linear_value_table(inst, space, rates)
    schedule = solve_maxmin(table)
    return _result_from_schedule(space, table, schedule, "tsn")
