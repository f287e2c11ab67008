"""Link rates and the three scheduling capacities."""

import dataclasses
import math

import numpy as np
import pytest

import otocap as oc
from conftest import (
    diamond_instance,
    line_instance,
    permute_relays,
    random_instance,
    raw_state_capacities,
)


def two_receiver_instance(g_main=1.0, g_interf=1.0, power=1.0, alpha=1.0, beta=1.0):
    """Node 1 hears both node 0 (intended) and node 2 (interferer)."""
    links = {(0, 1): g_main, (2, 1): g_interf, (1, 3): 1.0, (0, 2): 1.0, (2, 3): 1.0}
    return oc.NetworkInstance.from_links(2, links, power, alpha, beta)


def test_link_rate_ideal_hand_values():
    inst = oc.NetworkInstance.from_links(0, {(0, 1): 1.0}, 1.0, 2.0, 0.0)
    assert math.isclose(oc.link_rate_ideal(inst, 0, 1), math.log2(5), rel_tol=1e-12)
    inst = oc.NetworkInstance.from_links(0, {(0, 1): 1.0}, 1.0, 1.0, 0.0)
    assert math.isclose(oc.link_rate_ideal(inst, 0, 1), 1.0, rel_tol=1e-12)
    tiny = dataclasses.replace(inst, alpha=1e-12)
    assert oc.link_rate_ideal(tiny, 0, 1) < 1e-20


def test_link_rate_tsn_hand_values():
    quiet = two_receiver_instance(beta=0.0)
    assert oc.link_rate_tsn(quiet, 0, 1) == oc.link_rate_ideal(quiet, 0, 1)

    noisy = two_receiver_instance()
    assert math.isclose(oc.link_rate_tsn(noisy, 0, 1), math.log2(1.5), rel_tol=1e-12)

    # no third party transmits into node 3's other neighbors here
    lone = line_instance(1, beta=0.9)
    assert oc.link_rate_tsn(lone, 0, 1) == oc.link_rate_ideal(lone, 0, 1)


def test_link_rate_leakage_hand_values():
    assert oc.link_rate_leakage(two_receiver_instance(beta=0.0), 0, 1) == 0.0
    assert math.isclose(oc.link_rate_leakage(two_receiver_instance(), 0, 1), 1.0)

    two = oc.NetworkInstance.from_links(
        3,
        {(0, 1): 1.0, (2, 1): 1.0, (3, 1): 2.0, (1, 4): 1.0},
        1.0, 1.0, 1.0,
    )
    assert math.isclose(oc.link_rate_leakage(two, 0, 1), math.log2(5), rel_tol=1e-12)


def test_interferer_set_excludes_sender_and_receiver():
    inst = two_receiver_instance(g_interf=3.0)
    # For 0 -> 1 the only interferer is node 2 (m ranges over senders
    # other than 0; node 1 cannot transmit to itself, node 3 is the
    # destination and never transmits).
    expect = math.log2(1 + 1.0 / (1 + 9.0))
    assert math.isclose(oc.link_rate_tsn(inst, 0, 1), expect, rel_tol=1e-12)
    # For 2 -> 1 the interferer is node 0.
    expect = math.log2(1 + 9.0 / (1 + 1.0))
    assert math.isclose(oc.link_rate_tsn(inst, 2, 1), expect, rel_tol=1e-12)


def test_link_rates_require_existing_link():
    inst = line_instance(1)
    for fn in (oc.link_rate_ideal, oc.link_rate_tsn, oc.link_rate_leakage):
        with pytest.raises(oc.UndefinedLinkError):
            fn(inst, 0, 2)


def test_link_rates_table_invariants():
    for seed in range(6):
        inst = random_instance(seed=seed, relays=3, beta=0.5, alpha=1.5)
        rates = oc.link_rates(inst)
        assert set(rates.ideal) == set(inst.links())
        for e in inst.links():
            assert 0.0 <= rates.tsn[e] <= rates.ideal[e] + 1e-12
            assert rates.leakage[e] >= 0.0


def test_capacity_single_hop():
    inst = oc.NetworkInstance.from_links(0, {(0, 1): 1.0}, 1.0, 2.0, 0.0)
    for result in (
        oc.capacity_imperfect(inst),
        oc.capacity_ideal(inst),
        oc.capacity_ideal(inst, method="edge_lp"),
        oc.rate_tsn(inst),
    ):
        assert math.isclose(result.value, math.log2(5), abs_tol=1e-9)


def test_capacity_line_one_bit():
    inst = line_instance(1)
    assert math.isclose(oc.capacity_imperfect(inst).value, 1.0, abs_tol=1e-9)
    assert math.isclose(oc.capacity_ideal(inst).value, 1.0, abs_tol=1e-9)
    assert math.isclose(oc.rate_tsn(inst).value, 1.0, abs_tol=1e-9)


def test_capacity_line_with_leakage_at_least_one_bit():
    inst = line_instance(1, beta=0.5)
    assert oc.capacity_imperfect(inst).value >= 1.0 - 1e-9


def test_capacity_diamond_hand_values():
    ideal = oc.capacity_ideal(diamond_instance())
    assert math.isclose(ideal.value, 1.0, abs_tol=1e-9)
    tsn = oc.rate_tsn(diamond_instance(beta=1.0))
    assert math.isclose(tsn.value, math.log2(1.5), abs_tol=1e-6)


def test_beta_zero_collapses_all_three():
    for seed in range(5):
        inst = random_instance(seed=seed, relays=2, beta=0.0, alpha=1.3)
        space = oc.build_state_space(inst)
        imp = oc.capacity_imperfect(inst, space).value
        ideal = oc.capacity_ideal(inst, space=space).value
        tsn = oc.rate_tsn(inst, space).value
        assert math.isclose(imp, ideal, abs_tol=1e-6)
        assert math.isclose(tsn, ideal, abs_tol=1e-6)


def test_capacities_monotone_in_power_and_alpha():
    base = random_instance(seed=40, relays=2, beta=0.3)
    for field, values in (("power", (0.5, 1.0, 4.0)), ("alpha", (0.5, 1.0, 3.0))):
        prev = None
        for v in values:
            inst = dataclasses.replace(base, **{field: v})
            triple = (
                oc.capacity_imperfect(inst).value,
                oc.capacity_ideal(inst).value,
                oc.rate_tsn(inst).value,
            )
            if prev is not None:
                assert all(b >= a - 1e-9 for a, b in zip(prev, triple))
            prev = triple


def test_relabeling_invariance():
    inst = random_instance(seed=50, relays=3, beta=0.4, alpha=2.0)
    relabeled = permute_relays(inst, (2, 3, 1))
    for fn in (oc.capacity_imperfect, oc.capacity_ideal, oc.rate_tsn):
        assert math.isclose(fn(inst).value, fn(relabeled).value, abs_tol=1e-9)


def test_tsn_never_exceeds_ideal():
    for seed in range(8):
        inst = random_instance(seed=seed, relays=2, beta=float(seed % 3) / 2,
                               alpha=1.0 + seed % 2)
        assert oc.rate_tsn(inst).value <= oc.capacity_ideal(inst).value + 1e-9


def test_imperfect_beats_any_fixed_pattern():
    inst = random_instance(seed=60, relays=2, beta=0.6)
    space = oc.build_state_space(inst)
    table = oc.imperfect_value_table(inst, space)
    best = oc.capacity_imperfect(inst, space).value
    for col in range(table.values.shape[1]):
        assert best >= float(table.values[:, col].min()) - 1e-9


def test_result_self_consistency():
    inst = random_instance(seed=70, relays=2, beta=0.5, alpha=2.0)
    for result in (
        oc.capacity_imperfect(inst),
        oc.capacity_ideal(inst),
        oc.capacity_ideal(inst, method="edge_lp"),
        oc.rate_tsn(inst),
    ):
        assert math.isclose(result.value, min(result.per_cut_values.values()),
                            abs_tol=1e-6)
        assert math.isclose(result.schedule.total(), 1.0, abs_tol=1e-9)
        assert result.model_tag in {"imperfect", "ideal", "tsn"}


def test_edge_route_matches_pattern_route():
    for seed in range(5):
        inst = random_instance(seed=seed + 100, relays=3, topology="random",
                               edge_probability=0.7)
        a = oc.capacity_ideal(inst, method="pattern_lp").value
        b = oc.capacity_ideal(inst, method="edge_lp").value
        assert math.isclose(a, b, abs_tol=1e-6)


def test_capacity_ideal_rejects_unknown_method():
    with pytest.raises(ValueError):
        oc.capacity_ideal(line_instance(1), method="magic")


@pytest.mark.parametrize("seed,relays,beta", [
    (0, 0, 0.7), (1, 1, 0.0), (2, 1, 1.0), (3, 2, 0.3), (4, 2, 1.0),
])
def test_raw_state_oracle_agreement(seed, relays, beta):
    inst = random_instance(seed=seed, relays=relays, beta=beta, alpha=1.5)
    imp, ideal, tsn = raw_state_capacities(inst)
    assert math.isclose(oc.capacity_imperfect(inst).value, imp, abs_tol=1e-9)
    assert math.isclose(oc.capacity_ideal(inst).value, ideal, abs_tol=1e-9)
    assert math.isclose(oc.rate_tsn(inst).value, tsn, abs_tol=1e-9)
