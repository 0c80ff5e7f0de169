"""Exhaustive reference solver over the setup-pattern space.

Products are independent, so the optimum factorizes: every product's
2^(2T) patterns are enumerated and decoded with the same policy the
search uses.  "Optimal" therefore means optimal within that decoder,
which is exactly the space vnd/gvns explore.  Tractable only for short
horizons; used by tests and the acceptance suite.
"""

import numpy as np

from . import _kernels
from .model import Instance
from .plan import SetupPlan

MAX_PERIODS = 10


def enumerate_optimal(inst: Instance):
    """Return (cost, plan) minimizing the decoded cost per product.

    Refuses instances with more than MAX_PERIODS periods: the per-product
    pattern count 2^(2T) would exceed 2^20.
    """
    T = inst.periods
    if T > MAX_PERIODS:
        raise ValueError(
            f"exhaustive enumeration needs periods <= {MAX_PERIODS} "
            f"(2^(2*{T}) patterns per product is intractable)")
    K = inst.products
    setup_m = np.zeros((K, T), dtype=np.bool_)
    setup_r = np.zeros((K, T), dtype=np.bool_)
    total = 0
    for k in range(K):
        cost, mask_m, mask_r = _kernels.oracle_product(
            inst.demand[k], inst.returns[k],
            inst.setup_cost_m[k], inst.setup_cost_r[k],
            inst.holding_cost_m[k], inst.holding_cost_r[k],
            inst.unit_cost_m[k], inst.unit_cost_r[k])
        total += int(cost)
        for t in range(T):
            setup_m[k, t] = (mask_m >> t) & 1
            setup_r[k, t] = (mask_r >> t) & 1
    return total, SetupPlan(setup_m, setup_r)
