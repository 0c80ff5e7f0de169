"""General VNS: shaking plus multi-worker rounds under a wall-clock budget.

Each round forks W workers; worker w shakes the incumbent at strength k
and descends with VND, all on its own RNG stream derived from
(seed, round, worker).  The coordinator joins, keeps the minimum-cost
candidate (lowest worker index on ties), accepts strict improvements, and
adjusts the shake strength.  Results are therefore a pure function of
(instance, config) no matter how the workers are scheduled.
"""

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from . import _kernels
from .model import Instance
from .plan import INFEASIBLE, SetupPlan, evaluate, initial_solution
from .vnd import DEFAULT_PARALLELISM, MODE_PRODUCT_PARALLEL, MODE_SERIAL, VND_MODES, vnd

SCHEME_SERIAL_VND = "serial-vnd"
SCHEME_MULTIWORKER = "multiworker"
SCHEME_PRODUCT_PARALLEL = "product-parallel"
SCHEME_HYBRID = "hybrid"
SCHEMES = (SCHEME_SERIAL_VND, SCHEME_MULTIWORKER, SCHEME_PRODUCT_PARALLEL,
           SCHEME_HYBRID)

_SHAKE_REDRAWS = 50


@dataclass(frozen=True)
class SolverConfig:
    """Knobs for one solve.

    t_max is the wall-clock budget in seconds, checked between rounds only,
    so the final round may overshoot it.  max_rounds optionally caps the
    round count for exactly reproducible runs.
    """

    t_max: float
    k_max: int = 5
    k_vnd_max: int = 4
    workers: int = 2
    parallelism: int = DEFAULT_PARALLELISM
    vnd_mode: str = MODE_SERIAL
    scheme: str = SCHEME_HYBRID
    seed: int = 0
    max_rounds: int = None

    def __post_init__(self):
        if self.k_max < 1:
            raise ValueError("k_max must be >= 1")
        if self.k_vnd_max < 1:
            raise ValueError("k_vnd_max must be >= 1")
        if self.t_max <= 0:
            raise ValueError("t_max must be > 0")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")
        if self.parallelism < 1:
            raise ValueError("parallelism must be >= 1")
        if self.vnd_mode not in VND_MODES:
            raise ValueError(f"unknown vnd mode {self.vnd_mode!r}")
        if self.scheme not in SCHEMES:
            raise ValueError(f"unknown scheme {self.scheme!r}")


@dataclass
class SearchState:
    """Mutable loop state of one GVNS run."""

    incumbent: SetupPlan
    incumbent_cost: int
    strength: int = 1
    elapsed_s: float = 0.0
    rounds: int = 0


@dataclass(frozen=True)
class GvnsResult:
    plan: SetupPlan
    cost: int
    rounds: int
    wall_s: float
    shake_calls: int = 0


def _worker_rng(seed, round_index, worker):
    entropy = (seed & 0xFFFFFFFFFFFFFFFF, round_index, worker)
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(entropy)))


def _flip_flat(setup_m, setup_r, pos, periods):
    cells = setup_m.size
    matrix = setup_m if pos < cells else setup_r
    rem = pos % cells
    k, t = divmod(rem, periods)
    matrix[k, t] = not matrix[k, t]


def shake(inst: Instance, plan: SetupPlan, k: int, rng) -> SetupPlan:
    """Flip k distinct uniformly-random setup bits; always returns feasible.

    Infeasible draws are redrawn up to 50 times; after that, randomly
    chosen bits are flipped toward the lot-for-lot initial solution until
    the result is feasible (at worst it becomes that solution itself, so
    this path cannot fail but may move more or fewer than k bits).
    """
    if k < 1:
        raise ValueError("shake strength must be >= 1")
    K, T = plan.shape
    total_bits = 2 * K * T
    k_eff = min(k, total_bits)
    for _ in range(_SHAKE_REDRAWS):
        positions = rng.choice(total_bits, size=k_eff, replace=False)
        setup_m = plan.setup_m.copy()
        setup_r = plan.setup_r.copy()
        for pos in positions:
            _flip_flat(setup_m, setup_r, int(pos), T)
        candidate = SetupPlan(setup_m, setup_r)
        if evaluate(inst, candidate) != INFEASIBLE:
            return candidate

    base = initial_solution(inst)
    setup_m = plan.setup_m.copy()
    setup_r = plan.setup_r.copy()
    diff_m = np.flatnonzero(setup_m != base.setup_m)
    diff_r = np.flatnonzero(setup_r != base.setup_r) + K * T
    diffs = np.concatenate([diff_m, diff_r])
    rng.shuffle(diffs)
    for flipped, pos in enumerate(diffs, start=1):
        _flip_flat(setup_m, setup_r, int(pos), T)
        if flipped >= k_eff:
            candidate = SetupPlan(setup_m, setup_r)
            if evaluate(inst, candidate) != INFEASIBLE:
                return candidate
    return base


def _worker_task(inst, incumbent, k, config, round_index, worker):
    rng = _worker_rng(config.seed, round_index, worker)
    shaken = shake(inst, incumbent, k, rng)
    return vnd(inst, shaken, config.k_vnd_max, mode=config.vnd_mode,
               parallelism=config.parallelism)


def worker_round(inst: Instance, incumbent: SetupPlan, k: int,
                 config: SolverConfig, round_index: int = 0,
                 executor: ThreadPoolExecutor = None):
    """Fork W shake+VND workers and return the minimum-cost candidate.

    Worker w draws from its own stream seeded by (seed, round, w); ties
    at the join go to the lowest worker index, so the outcome does not
    depend on scheduling.
    """
    W = config.workers
    if W == 1:
        return _worker_task(inst, incumbent, k, config, round_index, 0)
    own = executor is None
    pool = executor or ThreadPoolExecutor(max_workers=W,
                                          thread_name_prefix="remlot-worker")
    try:
        futures = [pool.submit(_worker_task, inst, incumbent, k, config,
                               round_index, w)
                   for w in range(W)]
        results = [f.result() for f in futures]
    finally:
        if own:
            pool.shutdown(wait=False)
    best_plan, best_cost = results[0]
    for cand_plan, cand_cost in results[1:]:
        if cand_cost < best_cost:
            best_plan, best_cost = cand_plan, cand_cost
    return best_plan, best_cost


def next_strength(k: int, improved: bool, k_max: int) -> int:
    """Neighborhood-change step: reset on improvement, else advance and wrap."""
    if improved or k >= k_max:
        return 1
    return k + 1


def gvns(inst: Instance, config: SolverConfig) -> GvnsResult:
    """Run GVNS from the lot-for-lot start until the time budget runs out.

    The clock is checked between rounds only (never inside a VND), so the
    budget can be overshot by at most one round.  Returns the best plan
    ever accepted; the incumbent only moves on strict improvement.
    """
    _kernels.warm_up()   # JIT latency must not eat the search budget
    start = time.monotonic()
    incumbent = initial_solution(inst)
    state = SearchState(incumbent, evaluate(inst, incumbent))
    shake_calls = 0
    pool = None
    if config.workers > 1:
        pool = ThreadPoolExecutor(max_workers=config.workers,
                                  thread_name_prefix="remlot-worker")
    try:
        while True:
            state.elapsed_s = time.monotonic() - start
            if state.elapsed_s > config.t_max:
                break
            if config.max_rounds is not None and state.rounds >= config.max_rounds:
                break
            cand, cand_cost = worker_round(inst, state.incumbent, state.strength,
                                           config, state.rounds, pool)
            shake_calls += config.workers
            state.rounds += 1
            improved = cand_cost < state.incumbent_cost
            if improved:
                state.incumbent = cand
                state.incumbent_cost = cand_cost
            state.strength = next_strength(state.strength, improved, config.k_max)
    finally:
        if pool is not None:
            pool.shutdown(wait=False)
    wall = time.monotonic() - start
    return GvnsResult(state.incumbent, state.incumbent_cost, state.rounds,
                      wall, shake_calls)


def solve_scheme(inst: Instance, config: SolverConfig) -> GvnsResult:
    """Dispatch one of the four benchmark schemes.

    serial-vnd runs a single descent with no shaking; the other three are
    GVNS variants differing in worker count and VND execution mode.
    """
    scheme = config.scheme
    if scheme == SCHEME_SERIAL_VND:
        _kernels.warm_up()
        start = time.monotonic()
        plan, cost = vnd(inst, initial_solution(inst), config.k_vnd_max,
                         mode=MODE_SERIAL, parallelism=config.parallelism)
        return GvnsResult(plan, cost, 0, time.monotonic() - start, 0)
    if scheme == SCHEME_MULTIWORKER:
        return gvns(inst, replace(config, vnd_mode=MODE_SERIAL))
    if scheme == SCHEME_PRODUCT_PARALLEL:
        return gvns(inst, replace(config, workers=1,
                                  vnd_mode=MODE_PRODUCT_PARALLEL))
    if scheme == SCHEME_HYBRID:
        return gvns(inst, replace(config, vnd_mode=MODE_PRODUCT_PARALLEL))
    raise ValueError(f"unknown scheme {scheme!r}")
