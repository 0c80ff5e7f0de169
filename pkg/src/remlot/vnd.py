"""Variable neighborhood descent over setup patterns.

Four neighborhoods act on one product's rows at a time:

  1: flip one manufacturing setup bit
  2: flip one remanufacturing setup bit
  3: shift one set bit to an adjacent free period (same matrix)
  4: swap the two bits of one period where they differ

Each pass finds the best strictly-improving move independently per product
and applies them together; products do not interact, so the summed cost
decrease is exact.  The per-product scans can run serially or fan out over
a shared thread pool (product-parallel mode); both modes give bit-identical
results for any parallelism degree.
"""

import os
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .model import Instance
from .plan import SetupPlan, _check_dims, evaluate

MODE_SERIAL = "serial"
MODE_PRODUCT_PARALLEL = "product-parallel"
VND_MODES = (MODE_SERIAL, MODE_PRODUCT_PARALLEL)

NEIGHBORHOOD_COUNT = 4
DEFAULT_PARALLELISM = 4

# below this many products per chunk, fanning out costs more than it saves
_MIN_CHUNK = 64

_pool = None
_pool_lock = threading.Lock()


def _compute_pool():
    """Process-wide bounded pool shared by all product-parallel scans."""
    global _pool
    with _pool_lock:
        if _pool is None:
            _pool = ThreadPoolExecutor(
                max_workers=max(4, os.cpu_count() or 1),
                thread_name_prefix="remlot-scan")
    return _pool


@dataclass(frozen=True)
class Move:
    """One neighborhood edit of a single product's setup rows.

    ``periods`` lists the affected periods (one or two); the aligned bit
    tuples give the new and prior values of both rows there, so a move can
    be applied, checked for staleness, and inverted.
    """

    product: int
    neighborhood: int
    periods: tuple
    new_m: tuple
    new_r: tuple
    old_m: tuple
    old_r: tuple

    def apply(self, plan: SetupPlan) -> SetupPlan:
        """Return the plan with this move applied; raises if bits are stale."""
        setup_m = plan.setup_m.copy()
        setup_r = plan.setup_r.copy()
        _write_move(setup_m, setup_r, self)
        return SetupPlan(setup_m, setup_r)

    def inverted(self) -> "Move":
        return Move(self.product, self.neighborhood, self.periods,
                    self.old_m, self.old_r, self.new_m, self.new_r)


@dataclass(frozen=True)
class ImprovementDelta:
    """Best per-product moves of one pass and their summed cost decrease."""

    moves: tuple
    decreases: tuple
    diff: int


def _write_move(setup_m, setup_r, move):
    k = move.product
    for i, t in enumerate(move.periods):
        if (bool(setup_m[k, t]) != move.old_m[i]
                or bool(setup_r[k, t]) != move.old_r[i]):
            raise ValueError(
                f"stale move: plan bits at product {k} period {t} changed "
                "since the move was computed")
    for i, t in enumerate(move.periods):
        setup_m[k, t] = move.new_m[i]
        setup_r[k, t] = move.new_r[i]


def _move_buffers(periods):
    cap = 2 * periods
    return (np.empty(cap, np.int64), np.empty(cap, np.bool_),
            np.empty(cap, np.bool_), np.empty(cap, np.int64),
            np.empty(cap, np.bool_), np.empty(cap, np.bool_))


def _check_neighborhood(nbh):
    if not 1 <= nbh <= NEIGHBORHOOD_COUNT:
        raise ValueError(f"neighborhood id must be in 1..{NEIGHBORHOOD_COUNT}, got {nbh}")


def enumerate_neighbors(plan: SetupPlan, nbh: int, k: int) -> list:
    """All moves of neighborhood ``nbh`` for product ``k``, canonical order."""
    _check_neighborhood(nbh)
    K, T = plan.shape
    if not 0 <= k < K:
        raise IndexError(f"product index {k} out of range 0..{K - 1}")
    mp0, mm0, mr0, mp1, mm1, mr1 = _move_buffers(T)
    count = _kernels.list_moves(nbh, plan.setup_m[k], plan.setup_r[k],
                                mp0, mm0, mr0, mp1, mm1, mr1)
    moves = []
    for i in range(count):
        periods = [int(mp0[i])]
        new_m = [bool(mm0[i])]
        new_r = [bool(mr0[i])]
        if mp1[i] >= 0:
            periods.append(int(mp1[i]))
            new_m.append(bool(mm1[i]))
            new_r.append(bool(mr1[i]))
        old_m = tuple(bool(plan.setup_m[k, t]) for t in periods)
        old_r = tuple(bool(plan.setup_r[k, t]) for t in periods)
        moves.append(Move(k, nbh, tuple(periods), tuple(new_m), tuple(new_r),
                          old_m, old_r))
    return moves


def _scan_args(inst, setup_m, setup_r, nbh, out):
    return (setup_m, setup_r, inst.demand, inst.returns,
            inst.setup_cost_m, inst.setup_cost_r, inst.holding_cost_m,
            inst.holding_cost_r, inst.unit_cost_m, inst.unit_cost_r,
            nbh) + out


def _scan_outputs(products):
    return (np.zeros(products, np.int64),
            np.full(products, -1, np.int64), np.empty(products, np.bool_),
            np.empty(products, np.bool_),
            np.full(products, -1, np.int64), np.empty(products, np.bool_),
            np.empty(products, np.bool_))


def _move_from_outputs(plan, nbh, k, out):
    _, p0, m0, r0, p1, m1, r1 = out
    periods = [int(p0[k])]
    new_m = [bool(m0[k])]
    new_r = [bool(r0[k])]
    if p1[k] >= 0:
        periods.append(int(p1[k]))
        new_m.append(bool(m1[k]))
        new_r.append(bool(r1[k]))
    old_m = tuple(bool(plan.setup_m[k, t]) for t in periods)
    old_r = tuple(bool(plan.setup_r[k, t]) for t in periods)
    return Move(k, nbh, tuple(periods), tuple(new_m), tuple(new_r),
                old_m, old_r)


def best_neighbor(inst: Instance, plan: SetupPlan, nbh: int, k: int):
    """Best strictly-improving move for one product, or None.

    Returns (move, decrease) with decrease > 0 in cents; ties are broken
    by enumeration order.  The plan is not modified.
    """
    _check_neighborhood(nbh)
    _check_dims(inst, plan)
    K, _ = plan.shape
    if not 0 <= k < K:
        raise IndexError(f"product index {k} out of range 0..{K - 1}")
    out = _scan_outputs(K)
    _kernels.scan_products(k, k + 1,
                           *_scan_args(inst, plan.setup_m, plan.setup_r, nbh, out))
    dec = int(out[0][k])
    if dec <= 0:
        return None
    return _move_from_outputs(plan, nbh, k, out), dec


def _run_scan(inst, setup_m, setup_r, nbh, mode, parallelism, out):
    """Fill ``out`` with each product's best move, serially or chunked."""
    K = setup_m.shape[0]
    args = _scan_args(inst, setup_m, setup_r, nbh, out)
    chunks = 1
    if mode == MODE_PRODUCT_PARALLEL and parallelism > 1:
        chunks = min(parallelism, K // _MIN_CHUNK)
    if chunks <= 1:
        _kernels.scan_products(0, K, *args)
        return
    bounds = np.linspace(0, K, chunks + 1, dtype=np.int64)
    pool = _compute_pool()
    futures = [pool.submit(_kernels.scan_products, int(lo), int(hi), *args)
               for lo, hi in zip(bounds[:-1], bounds[1:])]
    for fut in futures:
        fut.result()


def vnd_pass(inst: Instance, plan: SetupPlan, nbh: int,
             mode: str = MODE_SERIAL,
             parallelism: int = DEFAULT_PARALLELISM) -> ImprovementDelta:
    """One best-move-per-product sweep of a single neighborhood.

    The plan is not modified.  Results are bit-identical across modes and
    parallelism degrees: every product is scanned independently and the
    reduction runs in product order.
    """
    _check_neighborhood(nbh)
    if mode not in VND_MODES:
        raise ValueError(f"unknown vnd mode {mode!r}")
    _check_dims(inst, plan)
    K, _ = plan.shape
    out = _scan_outputs(K)
    _run_scan(inst, plan.setup_m, plan.setup_r, nbh, mode, parallelism, out)
    dec = out[0]
    moves = []
    decreases = []
    diff = 0
    for k in range(K):
        d = int(dec[k])
        if d > 0:
            moves.append(_move_from_outputs(plan, nbh, k, out))
            decreases.append(d)
            diff += d
    return ImprovementDelta(tuple(moves), tuple(decreases), diff)


def apply_delta(plan: SetupPlan, delta: ImprovementDelta) -> SetupPlan:
    """Apply all per-product moves of ``delta``; cost drops by exactly diff.

    The delta must have been computed against this very plan; a changed
    bit at any affected period raises ValueError.
    """
    if not delta.moves:
        return plan
    setup_m = plan.setup_m.copy()
    setup_r = plan.setup_r.copy()
    for move in delta.moves:
        _write_move(setup_m, setup_r, move)
    return SetupPlan(setup_m, setup_r)


def vnd(inst: Instance, plan: SetupPlan, k_max: int = NEIGHBORHOOD_COUNT,
        mode: str = MODE_SERIAL, parallelism: int = DEFAULT_PARALLELISM,
        trace: list = None):
    """Descend through neighborhoods 1..k_max until no product improves.

    Whole sweeps repeat as long as any pass found an improvement.  Returns
    (plan, cost); cost is exact cents, computed once up front and updated
    by the per-pass decreases.  ``trace`` (if given) collects the running
    cost after every applied pass.
    """
    if not 1 <= k_max <= NEIGHBORHOOD_COUNT:
        raise ValueError(f"k_max must be in 1..{NEIGHBORHOOD_COUNT}, got {k_max}")
    if mode not in VND_MODES:
        raise ValueError(f"unknown vnd mode {mode!r}")
    _check_dims(inst, plan)
    cost = evaluate(inst, plan)
    if trace is not None:
        trace.append(cost)
    # in-place scan/apply loop: same scan kernel and product-ordered
    # reduction as vnd_pass + apply_delta, minus the per-pass wrapping
    setup_m = plan.setup_m.copy()
    setup_r = plan.setup_r.copy()
    K = inst.products
    out = _scan_outputs(K)
    while True:
        improvement = False
        for nbh in range(1, k_max + 1):
            _run_scan(inst, setup_m, setup_r, nbh, mode, parallelism, out)
            diff = int(_kernels.apply_scan(0, K, *out, setup_m, setup_r))
            if diff > 0:
                cost -= diff
                improvement = True
            if trace is not None:
                trace.append(cost)
        if not improvement:
            break
    return SetupPlan(setup_m, setup_r), cost
