import numpy as np
import pytest

from remlot import GeneratorConfig, Instance, SetupPlan, generate_instance


def make_instance(demand, returns=None, setup_m=1000, setup_r=400,
                  holding_m=100, holding_r=100, unit_m=0, unit_r=0):
    """Small instance from literal demand rows; scalar costs shared by all products."""
    demand = np.asarray(demand, dtype=np.int64)
    K = demand.shape[0]
    if returns is None:
        returns = np.zeros_like(demand)
    rep = lambda x: np.full(K, x, dtype=np.int64)
    return Instance(products=K, periods=demand.shape[1], demand=demand,
                    returns=returns, setup_cost_m=rep(setup_m),
                    setup_cost_r=rep(setup_r), holding_cost_m=rep(holding_m),
                    holding_cost_r=rep(holding_r), unit_cost_m=rep(unit_m),
                    unit_cost_r=rep(unit_r))


def random_instance(seed, products=3, periods=6, demand_max=9, return_ratio=0.6):
    return generate_instance(GeneratorConfig(
        products=products, periods=periods, demand_max=demand_max,
        return_ratio=return_ratio, seed=seed))


def random_plan(inst, rng, density=0.4):
    """Random setup pattern; often infeasible by construction."""
    K, T = inst.products, inst.periods
    return SetupPlan(rng.random((K, T)) < density, rng.random((K, T)) < density)


@pytest.fixture
def tiny_instance():
    return make_instance([[2, 3]])
