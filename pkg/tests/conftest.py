"""Shared builders and independent oracles for the test suite.

The oracle helpers deliberately avoid the library's own computation
paths (recursive pattern search, Cholesky log-det, value-table
assembly) so that agreement between the two routes is evidence, not
tautology.
"""

from __future__ import annotations

import itertools

import numpy as np

import otocap as oc

# -- instance builders ----------------------------------------------------


def line_instance(n, power=1.0, alpha=1.0, beta=0.0, gain=1.0):
    links = {(i, i + 1): gain for i in range(n + 1)}
    return oc.NetworkInstance.from_links(n, links, power, alpha, beta)


def diamond_instance(power=1.0, alpha=1.0, beta=0.0, gains=(1.0, 1.0, 1.0, 1.0)):
    g01, g02, g13, g23 = gains
    links = {(0, 1): g01, (0, 2): g02, (1, 3): g13, (2, 3): g23}
    return oc.NetworkInstance.from_links(2, links, power, alpha, beta)


def random_instance(seed, relays, topology="full", channel="rayleigh",
                    power=1.0, alpha=1.0, beta=0.0, edge_probability=1.0):
    spec = oc.GenSpec(
        topology=topology,
        relays=relays,
        channel=channel,
        power=power,
        alpha=alpha,
        beta=beta,
        seed=seed,
        edge_probability=edge_probability,
    )
    return oc.generate(spec)


def permute_relays(inst, perm):
    """Relabel relay r as perm[r-1] (perm is a permutation of [1:N])."""
    n = inst.num_relays
    mapping = {0: 0, n + 1: n + 1}
    for r in range(1, n + 1):
        mapping[r] = perm[r - 1]
    links = {
        (mapping[i], mapping[j]): inst.channel[j, i]
        for i, j in inst.links()
    }
    return oc.NetworkInstance.from_links(n, links, inst.power, inst.alpha, inst.beta)


# -- independent oracles --------------------------------------------------


def brute_force_patterns(links):
    """All partial matchings over the given (tx, rx) pairs, by filtering
    every subset of the link set."""
    links = sorted(links)
    found = set()
    for r in range(len(links) + 1):
        for combo in itertools.combinations(links, r):
            txs = [i for i, _ in combo]
            rxs = [j for _, j in combo]
            if len(set(txs)) == len(txs) and len(set(rxs)) == len(rxs):
                found.add(frozenset(combo))
    return found


def state_effective_channel(inst, state):
    """Effective channel computed directly from beam orientations:
    every entry leaks at beta, then mutually pointing pairs get alpha."""
    eff = inst.beta * np.array(inst.channel)
    for i, target in enumerate(state.tx_target):
        if target is not None and state.rx_source[target] == i:
            eff[target, i] = inst.alpha * inst.channel[target, i]
    return eff


def logdet_oracle(m, power):
    """log2 det(I + P M M^H) via slogdet, independent of the library."""
    a = np.eye(m.shape[0]) + power * (m @ m.conj().T)
    sign, logabs = np.linalg.slogdet(a)
    assert sign.real > 0
    return float(logabs / np.log(2.0))


def raw_state_capacities(inst):
    """(imperfect, ideal, tsn) values computed over raw node states.

    Columns are raw states (duplicates across states sharing a pattern
    are allowed); the LP is indifferent to duplicated columns.  Cut
    matrices are taken without any diagonal arrangement and the log-det
    goes through slogdet, so this path shares no matrix code with the
    library.
    """
    states = oc.enumerate_raw_states(inst)
    cuts = oc.enumerate_cuts(inst)
    n = inst.num_relays

    rate_ideal = {}
    rate_tsn = {}
    for i, j in inst.links():
        g = abs(inst.channel[j, i]) ** 2
        interf = sum(
            abs(inst.channel[j, m]) ** 2
            for m in range(n + 1)
            if m != i and m != j
        )
        rate_ideal[(i, j)] = np.log2(1 + inst.power * inst.alpha**2 * g)
        rate_tsn[(i, j)] = np.log2(
            1 + inst.power * inst.alpha**2 * g / (1 + inst.power * inst.beta**2 * interf)
        )

    def active_pairs(state):
        pairs = []
        for i, target in enumerate(state.tx_target):
            if (
                target is not None
                and state.rx_source[target] == i
                and inst.channel[target, i] != 0
            ):
                pairs.append((i, target))
        return pairs

    v_imp = np.zeros((len(cuts), len(states)))
    v_ideal = np.zeros_like(v_imp)
    v_tsn = np.zeros_like(v_imp)
    for si, state in enumerate(states):
        eff = state_effective_channel(inst, state)
        pairs = active_pairs(state)
        for ci, cut in enumerate(cuts):
            rows = sorted(cut.complement)
            cols = sorted(cut.omega)
            v_imp[ci, si] = logdet_oracle(eff[np.ix_(rows, cols)], inst.power)
            crossing = [
                (i, j) for i, j in pairs if i in cut.omega and j not in cut.omega
            ]
            v_ideal[ci, si] = sum(rate_ideal[e] for e in crossing)
            v_tsn[ci, si] = sum(rate_tsn[e] for e in crossing)

    return tuple(
        oc.solve_maxmin(oc.MaxMinProblem(v)).value for v in (v_imp, v_ideal, v_tsn)
    )
