"""Solution encoding as setup patterns plus exact decoding and evaluation.

A solution is a pair of boolean K x T matrices marking the periods with a
manufacturing / remanufacturing batch.  Quantities follow deterministically:
each batch covers all demand up to the next batch period, drawing on
recoverable stock first.  Costs are exact integer cents; plans whose
pattern cannot cover demand evaluate to INFEASIBLE.
"""

import io

import numpy as np

from . import _kernels
from ._kernels import INFEASIBLE
from .model import Instance

__all__ = ["INFEASIBLE", "SetupPlan", "DecodedPlan", "decode", "evaluate",
           "evaluate_product", "initial_solution"]


class SetupPlan:
    """Pair of K x T boolean setup matrices; treated as immutable."""

    __slots__ = ("setup_m", "setup_r")

    def __init__(self, setup_m, setup_r):
        self.setup_m = np.array(setup_m, dtype=np.bool_, order="C")
        self.setup_r = np.array(setup_r, dtype=np.bool_, order="C")
        if self.setup_m.shape != self.setup_r.shape or self.setup_m.ndim != 2:
            raise ValueError("setup matrices must share one K x T shape")

    @classmethod
    def all_false(cls, products, periods):
        return cls(np.zeros((products, periods), dtype=np.bool_),
                   np.zeros((products, periods), dtype=np.bool_))

    @property
    def shape(self):
        return self.setup_m.shape

    def copy(self):
        return SetupPlan(self.setup_m, self.setup_r)

    def __eq__(self, other):
        if not isinstance(other, SetupPlan):
            return NotImplemented
        return (np.array_equal(self.setup_m, other.setup_m)
                and np.array_equal(self.setup_r, other.setup_r))

    def __repr__(self):
        K, T = self.shape
        bits = int(self.setup_m.sum() + self.setup_r.sum())
        return f"SetupPlan({K}x{T}, {bits} setups)"


class DecodedPlan:
    """Quantities, inventories, and costs implied by a SetupPlan.

    For infeasible products the matrix rows are zero and
    cost_per_product[k] == INFEASIBLE; total_cost is then INFEASIBLE.
    """

    __slots__ = ("qty_m", "qty_r", "inv_m", "inv_r", "cost_per_product",
                 "total_cost")

    def __init__(self, qty_m, qty_r, inv_m, inv_r, cost_per_product, total_cost):
        self.qty_m = qty_m
        self.qty_r = qty_r
        self.inv_m = inv_m
        self.inv_r = inv_r
        self.cost_per_product = cost_per_product
        self.total_cost = total_cost

    def to_csv(self):
        """Debug dump: one line per (product, period)."""
        buf = io.StringIO()
        buf.write("product,period,x_m,x_r,y_m,y_r\n")
        K, T = self.qty_m.shape
        for k in range(K):
            for t in range(T):
                buf.write(f"{k},{t},{self.qty_m[k, t]},{self.qty_r[k, t]},"
                          f"{self.inv_m[k, t]},{self.inv_r[k, t]}\n")
        return buf.getvalue()


def _check_dims(inst: Instance, plan: SetupPlan):
    if plan.shape != (inst.products, inst.periods):
        raise ValueError(
            f"plan shape {plan.shape} does not match instance "
            f"{inst.products}x{inst.periods}")


def _cost_args(inst):
    return (inst.setup_cost_m, inst.setup_cost_r, inst.holding_cost_m,
            inst.holding_cost_r, inst.unit_cost_m, inst.unit_cost_r)


def decode(inst: Instance, plan: SetupPlan) -> DecodedPlan:
    """Expand a setup pattern into quantities, inventories, and costs."""
    _check_dims(inst, plan)
    K, T = plan.shape
    qty_m = np.zeros((K, T), dtype=np.int64)
    qty_r = np.zeros((K, T), dtype=np.int64)
    inv_m = np.zeros((K, T), dtype=np.int64)
    inv_r = np.zeros((K, T), dtype=np.int64)
    costs = np.zeros(K, dtype=np.int64)
    _kernels.decode_all(plan.setup_m, plan.setup_r, inst.demand, inst.returns,
                        *_cost_args(inst), qty_m, qty_r, inv_m, inv_r, costs)
    if (costs == INFEASIBLE).any():
        total = INFEASIBLE
    else:
        total = int(costs.sum())
    return DecodedPlan(qty_m, qty_r, inv_m, inv_r, costs, total)


def evaluate(inst: Instance, plan: SetupPlan) -> int:
    """Total plan cost in cents; INFEASIBLE if any product is infeasible."""
    _check_dims(inst, plan)
    K = inst.products
    costs = np.empty(K, dtype=np.int64)
    _kernels.product_costs(0, K, plan.setup_m, plan.setup_r,
                           inst.demand, inst.returns, *_cost_args(inst), costs)
    if (costs == INFEASIBLE).any():
        return INFEASIBLE
    return int(costs.sum())


def evaluate_product(inst: Instance, plan: SetupPlan, k: int) -> int:
    """Cost contribution of product ``k`` alone (0-based index)."""
    _check_dims(inst, plan)
    if not 0 <= k < inst.products:
        raise IndexError(f"product index {k} out of range 0..{inst.products - 1}")
    costs = np.empty(inst.products, dtype=np.int64)
    _kernels.product_costs(k, k + 1, plan.setup_m, plan.setup_r,
                           inst.demand, inst.returns, *_cost_args(inst), costs)
    return int(costs[k])


def initial_solution(inst: Instance) -> SetupPlan:
    """Remanufacture-first lot-for-lot start; always decodes feasibly.

    Every positive-demand period gets its own batch: a remanufacturing
    setup as far as recoverable stock reaches, a manufacturing setup for
    the remainder.
    """
    K, T = inst.products, inst.periods
    setup_m = np.zeros((K, T), dtype=np.bool_)
    setup_r = np.zeros((K, T), dtype=np.bool_)
    demand = inst.demand.tolist()
    returns = inst.returns.tolist()
    for k in range(K):
        avail = 0
        d_row = demand[k]
        r_row = returns[k]
        for t in range(T):
            avail += r_row[t]
            d = d_row[t]
            if d <= 0:
                continue
            take = min(avail, d)
            if take > 0:
                setup_r[k, t] = True
                avail -= take
            if d - take > 0:
                setup_m[k, t] = True
    return SetupPlan(setup_m, setup_r)
