import numpy as np
import pytest

import reference
from conftest import make_instance, random_instance
from remlot import (GeneratorConfig, Instance, enumerate_optimal,
                    evaluate, generate_instance, initial_solution, vnd)


def test_oracle_two_period_example(tiny_instance):
    cost, plan = enumerate_optimal(tiny_instance)
    assert cost == 1300
    assert plan.setup_m.tolist() == [[True, False]]
    # cross-check against the fully independent brute force
    ref = reference.best_pattern_cost([2, 3], [0, 0], 1000, 400, 100, 100)
    assert ref == 1300


def test_oracle_matches_reference_bruteforce():
    for seed in range(6):
        inst = random_instance(seed, products=2, periods=4, return_ratio=1.0)
        cost, plan = enumerate_optimal(inst)
        expected = sum(
            reference.best_pattern_cost(
                inst.demand[k].tolist(), inst.returns[k].tolist(),
                int(inst.setup_cost_m[k]), int(inst.setup_cost_r[k]),
                int(inst.holding_cost_m[k]), int(inst.holding_cost_r[k]),
                int(inst.unit_cost_m[k]), int(inst.unit_cost_r[k]))
            for k in range(2))
        assert cost == expected
        assert evaluate(inst, plan) == cost


def test_oracle_zero_demand():
    inst = make_instance([[0, 0, 0]])
    cost, plan = enumerate_optimal(inst)
    assert cost == 0
    assert not plan.setup_m.any() and not plan.setup_r.any()


def test_oracle_separability_over_products():
    inst = random_instance(3, products=3, periods=5)
    total, _ = enumerate_optimal(inst)
    parts = 0
    for k in range(3):
        single = Instance(
            products=1, periods=5, demand=inst.demand[k:k + 1],
            returns=inst.returns[k:k + 1],
            setup_cost_m=inst.setup_cost_m[k:k + 1],
            setup_cost_r=inst.setup_cost_r[k:k + 1],
            holding_cost_m=inst.holding_cost_m[k:k + 1],
            holding_cost_r=inst.holding_cost_r[k:k + 1],
            unit_cost_m=inst.unit_cost_m[k:k + 1],
            unit_cost_r=inst.unit_cost_r[k:k + 1])
        parts += enumerate_optimal(single)[0]
    assert total == parts


def test_oracle_invariant_under_product_permutation():
    inst = random_instance(4, products=4, periods=5)
    perm = np.array([2, 0, 3, 1])
    shuffled = Instance(
        products=4, periods=5, demand=inst.demand[perm],
        returns=inst.returns[perm], setup_cost_m=inst.setup_cost_m[perm],
        setup_cost_r=inst.setup_cost_r[perm],
        holding_cost_m=inst.holding_cost_m[perm],
        holding_cost_r=inst.holding_cost_r[perm],
        unit_cost_m=inst.unit_cost_m[perm],
        unit_cost_r=inst.unit_cost_r[perm])
    assert enumerate_optimal(inst)[0] == enumerate_optimal(shuffled)[0]


def test_oracle_refuses_long_horizons():
    inst = generate_instance(GeneratorConfig(products=1, periods=11, seed=0))
    with pytest.raises(ValueError, match="periods"):
        enumerate_optimal(inst)


def test_heuristics_never_beat_oracle():
    for seed in range(8):
        inst = random_instance(seed, products=3, periods=6)
        optimum, _ = enumerate_optimal(inst)
        assert evaluate(inst, initial_solution(inst)) >= optimum
        _, cost = vnd(inst, initial_solution(inst))
        assert cost >= optimum
