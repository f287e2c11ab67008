"""Max-min LP, edge-fraction LP, and schedule decomposition."""

import math

import numpy as np
import pytest

import otocap as oc
from conftest import diamond_instance, line_instance, random_instance


def solve(v):
    return oc.solve_maxmin(oc.MaxMinProblem(np.asarray(v, dtype=float)))


def test_maxmin_single_cell():
    sched = solve([[1.0]])
    assert math.isclose(sched.value, 1.0, abs_tol=1e-9)
    assert sched.weights == {0: 1.0}


def test_maxmin_symmetric_split():
    sched = solve([[1.0, 0.0], [0.0, 1.0]])
    assert math.isclose(sched.value, 0.5, abs_tol=1e-9)
    assert math.isclose(sched.weights[0], 0.5, abs_tol=1e-9)
    assert math.isclose(sched.weights[1], 0.5, abs_tol=1e-9)


def test_maxmin_picks_dominant_column():
    sched = solve([[1.0, 3.0]])
    assert math.isclose(sched.value, 3.0, abs_tol=1e-9)
    assert sched.weights == {1: 1.0}


def test_maxmin_weight_cleanup():
    sched = solve([[1.0, 1.0 - 1e-15]])
    assert math.isclose(sched.total(), 1.0, abs_tol=1e-9)
    assert all(w > 0 for w in sched.weights.values())


def test_maxmin_rejects_bad_tables():
    with pytest.raises(ValueError):
        oc.MaxMinProblem(np.array([[1.0, float("nan")]]))
    with pytest.raises(ValueError):
        oc.MaxMinProblem(np.array([[1.0, -0.5]]))
    with pytest.raises(ValueError):
        oc.MaxMinProblem(np.zeros((0, 3)))
    # a tiny negative from upstream floating error is clamped, not fatal
    prob = oc.MaxMinProblem(np.array([[1.0, -1e-14]]))
    assert prob.values.min() == 0.0


def test_maxmin_scale_equivariance():
    rng = np.random.Generator(np.random.Philox(77))
    for _ in range(10):
        v = rng.uniform(0.0, 5.0, size=(rng.integers(1, 6), rng.integers(1, 7)))
        base = solve(v)
        c = float(rng.uniform(0.2, 9.0))
        scaled = solve(c * v)
        assert math.isclose(scaled.value, c * base.value, rel_tol=1e-7, abs_tol=1e-9)
        lam = np.zeros(v.shape[1])
        for k, w in scaled.weights.items():
            lam[k] = w
        achieved = float(np.min((c * v) @ lam))
        assert achieved >= scaled.value - 1e-7


def test_maxmin_schedule_self_consistency():
    rng = np.random.Generator(np.random.Philox(78))
    v = rng.uniform(0.0, 3.0, size=(6, 12))
    sched = solve(v)
    lam = np.zeros(v.shape[1])
    for k, w in sched.weights.items():
        assert w >= 0
        lam[k] = w
    assert math.isclose(lam.sum(), 1.0, abs_tol=1e-9)
    assert math.isclose(float(np.min(v @ lam)), sched.value, abs_tol=1e-6)


def test_edge_lp_single_link():
    inst = oc.NetworkInstance.from_links(0, {(0, 1): 1.0}, 1.0, 2.0, 0.0)
    rates = {(0, 1): math.log2(5)}
    value, fractions = oc.solve_edge_lp(inst, rates)
    assert math.isclose(value, math.log2(5), abs_tol=1e-9)
    assert math.isclose(fractions.fractions[(0, 1)], 1.0, abs_tol=1e-9)


def test_edge_lp_line_full_duplex():
    inst = line_instance(1)
    value, fractions = oc.solve_edge_lp(inst, {(0, 1): 1.0, (1, 2): 1.0})
    assert math.isclose(value, 1.0, abs_tol=1e-9)
    assert math.isclose(fractions.fractions[(0, 1)], 1.0, abs_tol=1e-9)
    assert math.isclose(fractions.fractions[(1, 2)], 1.0, abs_tol=1e-9)


def test_edge_lp_diamond_value_and_budgets():
    inst = diamond_instance()
    rates = {e: 1.0 for e in inst.links()}
    value, fractions = oc.solve_edge_lp(inst, rates)
    assert math.isclose(value, 1.0, abs_tol=1e-9)
    x = fractions.fractions
    for node in range(4):
        assert sum(w for (i, _), w in x.items() if i == node) <= 1 + 1e-9
        assert sum(w for (_, j), w in x.items() if j == node) <= 1 + 1e-9
    # the half-on-every-edge point is one optimum; any optimum must put
    # a total of 1 across the source's two outgoing edges
    assert math.isclose(x.get((0, 1), 0.0) + x.get((0, 2), 0.0), 1.0, abs_tol=1e-9)


def test_edge_lp_rejects_bad_rates():
    inst = line_instance(1)
    with pytest.raises(ValueError):
        oc.solve_edge_lp(inst, {(0, 1): 1.0, (0, 2): 1.0})  # zero link
    with pytest.raises(ValueError):
        oc.solve_edge_lp(inst, {(0, 1): -1.0, (1, 2): 1.0})


def test_decompose_trivial_cases():
    inst = line_instance(1)
    space = oc.build_state_space(inst)
    one_edge = oc.EdgeFractions(fractions={(0, 1): 1.0})
    sched = oc.decompose_edge_fractions(one_edge, space)
    key = space.pattern_index[oc.AlignmentPattern(((0, 1),))]
    assert math.isclose(sched.weights[key], 1.0, abs_tol=1e-9)

    empty = oc.EdgeFractions(fractions={})
    sched = oc.decompose_edge_fractions(empty, space)
    assert sched.weights == {space.empty_pattern_index: 1.0}


def test_decompose_diamond_half_fractions():
    # Half on every edge peels into two complementary two-edge matchings
    # at weight 1/2 (which pair is returned is an implementation choice;
    # both the perfect-matching and the path-matching splits are valid).
    inst = diamond_instance()
    space = oc.build_state_space(inst)
    x = oc.EdgeFractions(fractions={e: 0.5 for e in inst.links()})
    sched = oc.decompose_edge_fractions(x, space)
    assert len(sched.weights) == 2
    per_edge = {e: 0.0 for e in inst.links()}
    for k, w in sched.weights.items():
        assert math.isclose(w, 0.5, abs_tol=1e-9)
        assert len(space.patterns[k].pairs) == 2
        for pair in space.patterns[k].pairs:
            per_edge[pair] += w
    assert all(math.isclose(v, 0.5, abs_tol=1e-9) for v in per_edge.values())


def test_decompose_rejects_budget_violation():
    inst = diamond_instance()
    space = oc.build_state_space(inst)
    with pytest.raises(ValueError):
        oc.decompose_edge_fractions(
            oc.EdgeFractions(fractions={(0, 1): 0.8, (0, 2): 0.8}), space
        )


def _edge_loads(x):
    tx, rx = {}, {}
    for (i, j), w in x.items():
        tx[i] = tx.get(i, 0.0) + w
        rx[j] = rx.get(j, 0.0) + w
    return tx, rx


@pytest.mark.parametrize("seed", range(8))
def test_decompose_reproduces_random_fractions(seed):
    rng = np.random.Generator(np.random.Philox(900 + seed))
    inst = random_instance(seed=seed, relays=int(rng.integers(1, 4)),
                           topology="random", edge_probability=0.8)
    links = inst.links()
    if not links:
        pytest.skip("drew a linkless instance")
    raw = {e: float(rng.uniform(0.0, 1.0)) for e in links}
    tx, rx = _edge_loads(raw)
    worst = max(list(tx.values()) + list(rx.values()))
    x = {e: w / max(worst, 1.0) for e, w in raw.items()}

    space = oc.build_state_space(inst)
    sched = oc.decompose_edge_fractions(oc.EdgeFractions(fractions=x), space)

    assert sched.total() <= 1 + 1e-9
    assert all(w > 0 for w in sched.weights.values())
    assert len(sched.weights) <= len(links) + inst.num_relays + 2 + 1

    per_edge = {e: 0.0 for e in links}
    for k, w in sched.weights.items():
        for pair in space.patterns[k].pairs:
            per_edge[pair] += w
    for e in links:
        assert math.isclose(per_edge[e], x[e], abs_tol=1e-9)


def test_decompose_saturated_budgets():
    # every node budget exactly tight: the line with x = 1 everywhere
    inst = line_instance(3)
    space = oc.build_state_space(inst)
    x = {e: 1.0 for e in inst.links()}
    sched = oc.decompose_edge_fractions(oc.EdgeFractions(fractions=x), space)
    full = space.pattern_index[oc.AlignmentPattern(tuple(inst.links()))]
    assert sched.weights == {full: 1.0}
