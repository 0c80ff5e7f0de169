"""Acceptance suite: one test per criterion, one printed PASS/FAIL line each.

Run with `pytest tests/test_acceptance.py -v -s`.  Criteria 1 and 2 solve
under real wall-clock budgets and together take roughly 12 minutes; the
remaining criteria are quick.  Criterion 7 is informational only and never
fails the suite.
"""

import importlib
import statistics
import time

import numpy as np

from conftest import random_instance
from remlot import (INFEASIBLE, MODE_PRODUCT_PARALLEL, MODE_SERIAL, SCHEMES,
                    BenchReport, BenchRow, GeneratorConfig, SolverConfig,
                    apply_delta, best_neighbor, decode, emit_markdown,
                    enumerate_optimal, evaluate, generate_instance, gvns,
                    initial_solution, shake, solve_scheme, vnd, vnd_pass)

vnd_module = importlib.import_module("remlot.vnd")


def _verdict(num, ok, detail):
    print(f"\nACCEPTANCE {num} {'PASS' if ok else 'FAIL'} - {detail}")
    return ok


def _tiny_config(seed):
    # setup costs scaled so the optimal batch spans 2-3 of the 5 periods;
    # the package defaults target the 52-period desk scale instead
    return GeneratorConfig(products=2, periods=5, demand_max=9,
                           return_ratio=0.5, setup_cost_range=(2000, 8000),
                           holding_cost_range=(100, 500), seed=seed)


def _assert_feasible(inst, plan):
    decoded = decode(inst, plan)
    assert decoded.total_cost != INFEASIBLE
    K, T = inst.products, inst.periods
    x_m, x_r, y_m, y_r = decoded.qty_m, decoded.qty_r, decoded.inv_m, decoded.inv_r
    prev_m = np.zeros(K, dtype=np.int64)
    prev_r = np.zeros(K, dtype=np.int64)
    for t in range(T):
        assert (y_m[:, t] == prev_m + x_m[:, t] + x_r[:, t] - inst.demand[:, t]).all()
        assert (y_r[:, t] == prev_r + inst.returns[:, t] - x_r[:, t]).all()
        prev_m, prev_r = y_m[:, t], y_r[:, t]
    assert (y_m >= 0).all() and (y_r >= 0).all()
    assert (x_m >= 0).all() and (x_r >= 0).all()
    assert (x_r.cumsum(axis=1) <= inst.returns.cumsum(axis=1)).all()


def test_criterion_1_oracle_equivalence():
    """GVNS matches the exhaustive optimum on >= 95% of 50 tiny instances;
    plain VND reaches a median gap <= 5%."""
    start = time.monotonic()
    matches = 0
    gaps = []
    for i in range(50):
        inst = generate_instance(_tiny_config(1000 + i))
        optimum, _ = enumerate_optimal(inst)
        result = gvns(inst, SolverConfig(t_max=2.0, workers=2, seed=7,
                                         vnd_mode=MODE_PRODUCT_PARALLEL))
        matches += (result.cost == optimum)
        _, vnd_cost = vnd(inst, initial_solution(inst))
        gaps.append(100.0 * (vnd_cost - optimum) / optimum if optimum else 0.0)
    elapsed = time.monotonic() - start
    median_gap = statistics.median(gaps)
    ok = matches >= 48 and median_gap <= 5.0 and elapsed < 180.0
    _verdict(1, ok, f"gvns oracle matches {matches}/50 (need >=48), "
                    f"vnd median gap {median_gap:.2f}% (need <=5%), "
                    f"runtime {elapsed:.0f}s (need <180s)")
    assert matches >= 48
    assert median_gap <= 5.0
    assert elapsed < 180.0


def test_criterion_2_scheme_quality_ordering():
    """Every parallel scheme beats or matches serial VND on >= 90% of 30
    desk-scale instances; hybrid's win+tie count leads the suite."""
    budget = 5.0
    n = 30
    rows = []
    dominate = {s: 0 for s in SCHEMES[1:]}
    start = time.monotonic()
    for i in range(n):
        inst = generate_instance(GeneratorConfig(products=50, periods=52,
                                                 seed=2000 + i))
        cells = {}
        for scheme in SCHEMES:
            result = solve_scheme(inst, SolverConfig(
                t_max=budget, workers=2, seed=1, scheme=scheme))
            cells[scheme] = result.cost
            rows.append(BenchRow(f"i{i}", scheme, result.cost,
                                 result.wall_s, 1, result.rounds))
        for scheme in SCHEMES[1:]:
            dominate[scheme] += (cells[scheme] <= cells["serial-vnd"])
    elapsed = time.monotonic() - start
    report = BenchReport(rows=tuple(rows), schemes=SCHEMES)
    tallies = {a.scheme: a.wins + a.ties for a in report.aggregates()}
    hybrid = tallies["hybrid"]
    dominance_ok = all(dominate[s] >= 27 for s in SCHEMES[1:])
    lead_ok = all(hybrid >= tallies[s] for s in SCHEMES if s != "hybrid")
    ok = dominance_ok and lead_ok
    _verdict(2, ok, f"vs serial-vnd {dominate} (need >=27 each); "
                    f"win+tie {tallies}; runtime {elapsed:.0f}s")
    assert dominance_ok, f"parallel schemes must dominate serial-vnd: {dominate}"
    assert lead_ok, f"hybrid win+tie must lead: {tallies}"


def test_criterion_3_exact_reduction():
    """evaluate(apply_delta(p, d)) == evaluate(p) - d.diff, 200 pairs, exact."""
    rng = np.random.default_rng(33)
    checked = 0
    for trial in range(200):
        inst = random_instance(3000 + trial, products=int(rng.integers(2, 7)),
                               periods=int(rng.integers(5, 11)))
        plan = shake(inst, initial_solution(inst),
                     int(rng.integers(1, 6)), rng)
        nbh = int(rng.integers(1, 5))
        mode = MODE_SERIAL if trial % 2 else MODE_PRODUCT_PARALLEL
        delta = vnd_pass(inst, plan, nbh, mode=mode)
        before = evaluate(inst, plan)
        after = evaluate(inst, apply_delta(plan, delta))
        assert after == before - delta.diff
        checked += 1
    ok = checked == 200
    _verdict(3, ok, f"{checked}/200 (instance, plan) pairs reduced bit-exactly")
    assert ok


def test_criterion_4_mode_and_run_determinism(monkeypatch):
    """vnd outputs are bit-identical across execution modes and parallelism
    degrees; gvns repeats bit-identically for equal (seed, W)."""
    rng = np.random.default_rng(44)
    vnd_checked = 0
    # large-K instances exercise real chunk fan-out, small-K the fallback
    for trial in range(20):
        if trial < 10:
            inst = random_instance(4000 + trial, products=130, periods=8)
        else:
            inst = random_instance(4000 + trial, products=6, periods=8)
            monkeypatch.setattr(vnd_module, "_MIN_CHUNK", 2)
        plan = shake(inst, initial_solution(inst), 3, rng)
        base = vnd(inst, plan, mode=MODE_SERIAL)
        for degree in (1, 2, 4, 8):
            par = vnd(inst, plan, mode=MODE_PRODUCT_PARALLEL, parallelism=degree)
            assert par[1] == base[1] and par[0] == base[0]
        vnd_checked += 1
    monkeypatch.undo()

    gvns_ok = True
    for seed in range(3):
        inst = random_instance(4100 + seed, products=4, periods=7)
        config = SolverConfig(t_max=1e9, max_rounds=40, workers=2, seed=seed,
                              vnd_mode=MODE_PRODUCT_PARALLEL)
        a = gvns(inst, config)
        b = gvns(inst, config)
        gvns_ok &= (a.cost == b.cost and a.plan == b.plan and a.rounds == b.rounds)
    ok = vnd_checked == 20 and gvns_ok
    _verdict(4, ok, f"vnd bit-identical on {vnd_checked}/20 instances x "
                    f"degrees 1/2/4/8; gvns repeats identical: {gvns_ok}")
    assert ok


def test_criterion_5_feasibility_suite():
    """1000 randomized trials across decode/shake/vnd/gvns outputs: flow
    balance, non-negative stocks, cumulative-returns bound, no violations."""
    rng = np.random.default_rng(55)
    trials = 0
    for i in range(400):   # initial_solution decodes
        inst = random_instance(5000 + i, products=int(rng.integers(1, 5)),
                               periods=int(rng.integers(3, 9)),
                               return_ratio=float(rng.uniform(0, 1)))
        _assert_feasible(inst, initial_solution(inst))
        trials += 1
    for i in range(400):   # shake outputs
        inst = random_instance(5400 + i % 80, products=3, periods=6)
        plan = shake(inst, initial_solution(inst), int(rng.integers(1, 8)), rng)
        _assert_feasible(inst, plan)
        trials += 1
    for i in range(150):   # vnd returns
        inst = random_instance(5500 + i, products=3, periods=7)
        start = shake(inst, initial_solution(inst), int(rng.integers(1, 5)), rng)
        plan, _ = vnd(inst, start)
        _assert_feasible(inst, plan)
        trials += 1
    for i in range(50):    # gvns returns
        inst = random_instance(5600 + i, products=2, periods=6)
        result = gvns(inst, SolverConfig(t_max=0.05, workers=2, seed=i))
        _assert_feasible(inst, result.plan)
        trials += 1
    ok = trials == 1000
    _verdict(5, ok, f"{trials}/1000 trials feasible with exact flow balance")
    assert ok


def test_criterion_6_monotone_descent_and_fixpoint():
    """VND cost traces never increase over 100 random starts and the final
    plans admit no improving move in any neighborhood."""
    rng = np.random.default_rng(66)
    starts = 0
    for i in range(100):
        inst = random_instance(6000 + i, products=3, periods=6)
        start = shake(inst, initial_solution(inst), int(rng.integers(1, 6)), rng)
        trace = []
        plan, cost = vnd(inst, start, trace=trace)
        assert all(a >= b for a, b in zip(trace, trace[1:]))
        assert trace[-1] == cost
        for nbh in (1, 2, 3, 4):
            for k in range(inst.products):
                assert best_neighbor(inst, plan, nbh, k) is None
        starts += 1
    ok = starts == 100
    _verdict(6, ok, f"{starts}/100 descents monotone, terminating, and "
                    f"fixpoint-sound")
    assert ok


def test_criterion_7_product_parallel_speedup():
    """Informational only: product-parallel pass speedup at the paper's
    300x52 scale, parallelism 4.  Never fails the suite."""
    inst = generate_instance(GeneratorConfig(products=300, periods=52, seed=77))
    plan = initial_solution(inst)
    for nbh in (1, 2, 3, 4):   # JIT warm-up
        vnd_pass(inst, plan, nbh, MODE_SERIAL)
        vnd_pass(inst, plan, nbh, MODE_PRODUCT_PARALLEL, 4)

    def sweep(mode, parallelism, reps=25):
        best = float("inf")
        for _ in range(reps):
            t0 = time.perf_counter()
            for nbh in (1, 2, 3, 4):
                vnd_pass(inst, plan, nbh, mode, parallelism)
            best = min(best, time.perf_counter() - t0)
        return best

    serial = sweep(MODE_SERIAL, 1)
    parallel = sweep(MODE_PRODUCT_PARALLEL, 4)
    speedup = serial / parallel
    status = "PASS" if speedup >= 1.5 else "BELOW TARGET (informational)"
    print(f"\nACCEPTANCE 7 {status} - vnd_pass K=300 T=52: "
          f"serial {serial * 1e3:.1f} ms, parallel(4) {parallel * 1e3:.1f} ms, "
          f"speedup {speedup:.2f}x (soft target 1.5x; not gating)")
    assert speedup > 0   # never gates


def test_criterion_8_report_bold_fidelity():
    """Markdown emission bolds exactly the benchmark table's minima for the
    three reference rows (sole hybrid win, two-way tie, third-scheme win)."""
    rows_cents = {
        "1": (327028260, 326568640, 326568640, 326445840),
        "19": (893065180, 892436580, 892436580, 892550820),
        "5": (447992800, 447921500, 447901250, 447901500),
    }
    expected = {"1": {"hybrid"}, "19": {"multiworker", "product-parallel"},
                "5": {"product-parallel"}}
    rows = []
    for row_id, cells in rows_cents.items():
        for scheme, cents in zip(SCHEMES, cells):
            rows.append(BenchRow(row_id, scheme, cents, 60.0, 1, 0))
    markdown = emit_markdown(BenchReport(rows=tuple(rows), schemes=SCHEMES))
    bolded = {}
    for line in markdown.splitlines():
        cells = [c.strip() for c in line.split("|")[1:-1]]
        if len(cells) == len(SCHEMES) + 1 and cells[0] in rows_cents:
            bolded[cells[0]] = {s for s, c in zip(SCHEMES, cells[1:])
                                if c.startswith("**")}
    ok = bolded == expected
    _verdict(8, ok, f"bolded cells {bolded}")
    assert ok
