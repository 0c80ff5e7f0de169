"""Benchmark harness: run scheme suites and emit CSV / markdown tables.

A suite lists instances (files or generator configs), the schemes to
compare, a shared per-cell time budget, and solver seeds.  Every
(instance, scheme, seed) cell is solved; per instance the schemes hitting
the exact minimum objective are marked (a sole minimum is a win, a shared
one a tie for each holder).
"""

import json
import statistics
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path

from .gvns import SCHEMES, SolverConfig, solve_scheme
from .model import GeneratorConfig, generate_instance, parse_instance, validate_instance

CSV_HEADER = "id,scheme,objective_cents,wall_s,seed,iterations"


def format_cents(cents: int) -> str:
    """Fixed-point money with two decimals, exact integer arithmetic."""
    sign = "-" if cents < 0 else ""
    cents = abs(int(cents))
    return f"{sign}{cents // 100}.{cents % 100:02d}"


@dataclass(frozen=True)
class BenchRow:
    instance_id: str
    scheme: str
    objective_cents: int
    wall_s: float
    seed: int
    iterations: int


@dataclass(frozen=True)
class SchemeAggregate:
    scheme: str
    wins: int
    ties: int
    mean_objective_cents: float


@dataclass(frozen=True)
class BenchReport:
    rows: tuple
    schemes: tuple

    def objectives_by_instance(self):
        """Ordered {instance_id: {scheme: objective_cents}}."""
        table = {}
        for row in self.rows:
            table.setdefault(row.instance_id, {})[row.scheme] = row.objective_cents
        return table

    def aggregates(self):
        wins = {s: 0 for s in self.schemes}
        ties = {s: 0 for s in self.schemes}
        values = {s: [] for s in self.schemes}
        for cells in self.objectives_by_instance().values():
            for scheme, obj in cells.items():
                values[scheme].append(obj)
            low = min(cells.values())
            holders = [s for s in self.schemes if cells.get(s) == low]
            if len(holders) == 1:
                wins[holders[0]] += 1
            else:
                for s in holders:
                    ties[s] += 1
        return [SchemeAggregate(s, wins[s], ties[s],
                                statistics.fmean(values[s]) if values[s] else 0.0)
                for s in self.schemes]


@dataclass(frozen=True)
class BenchSuite:
    """Parsed suite file: instance sources plus shared solver settings."""

    instances: tuple          # (instance_id, path or GeneratorConfig) pairs
    schemes: tuple
    time_limit_s: float
    seeds: tuple
    workers: int = 2
    parallelism: int = 4
    k_max: int = 5
    k_vnd_max: int = 4
    parallel_cells: bool = False


def load_suite(path) -> BenchSuite:
    """Read a suite JSON file; relative instance paths resolve next to it."""
    path = Path(path)
    try:
        data = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise ValueError(f"malformed suite file {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise ValueError(f"suite file {path}: top level must be an object")

    raw_instances = data.get("instances")
    if not raw_instances:
        raise ValueError("suite lists no instances")
    instances = []
    for i, entry in enumerate(raw_instances):
        if not isinstance(entry, dict):
            raise ValueError(f"instances[{i}]: expected an object")
        if ("path" in entry) == ("generator" in entry):
            raise ValueError(f"instances[{i}]: need exactly one of path/generator")
        if "path" in entry:
            source = path.parent / entry["path"]
            default_id = Path(entry["path"]).stem
        else:
            try:
                source = GeneratorConfig(**entry["generator"])
            except TypeError as exc:
                raise ValueError(f"instances[{i}].generator: {exc}") from exc
            default_id = f"gen{i}"
        instances.append((str(entry.get("id", default_id)), source))

    schemes = tuple(data.get("schemes", SCHEMES))
    for s in schemes:
        if s not in SCHEMES:
            raise ValueError(f"unknown scheme {s!r} in suite")
    time_limit = float(data.get("time_limit_s", 5.0))
    seeds = data.get("seeds")
    if seeds is None:
        base = int(data.get("seed", 1))
        seeds = [base + i for i in range(int(data.get("repetitions", 1)))]
    return BenchSuite(
        instances=tuple(instances),
        schemes=schemes,
        time_limit_s=time_limit,
        seeds=tuple(int(s) for s in seeds),
        workers=int(data.get("workers", 2)),
        parallelism=int(data.get("parallelism", 4)),
        k_max=int(data.get("kmax", 5)),
        k_vnd_max=int(data.get("kmax_vnd", 4)),
        parallel_cells=bool(data.get("parallel_cells", False)),
    )


def default_suite(n_instances=30, time_limit_s=5.0, base_seed=2000) -> BenchSuite:
    """Desk-scale stand-in for the full benchmark: generated 50x52
    instances under a short shared budget.  The full-scale experiment
    (300 products, 52 periods, 60 s) is the same suite with bigger numbers.
    """
    instances = tuple(
        (f"gen{i}", GeneratorConfig(products=50, periods=52, seed=base_seed + i))
        for i in range(n_instances))
    return BenchSuite(instances=instances, schemes=SCHEMES,
                      time_limit_s=time_limit_s, seeds=(1,))


def _load_instances(suite):
    loaded = []
    for instance_id, source in suite.instances:
        if isinstance(source, GeneratorConfig):
            inst = generate_instance(source)
        else:
            inst = parse_instance(Path(source).read_text())
        violations = validate_instance(inst)
        if violations:
            raise ValueError(f"instance {instance_id!r} invalid: "
                             + "; ".join(violations))
        loaded.append((instance_id, inst))
    return loaded


def run_bench(suite: BenchSuite) -> BenchReport:
    """Solve every (instance, scheme, seed) cell and assemble the report.

    Cells run sequentially unless suite.parallel_cells is set (which skews
    timings and must stay off when measuring speedups).  With several
    seeds, each (instance, seed) pair becomes its own report row group.
    """
    loaded = _load_instances(suite)
    base = SolverConfig(t_max=suite.time_limit_s, k_max=suite.k_max,
                        k_vnd_max=suite.k_vnd_max, workers=suite.workers,
                        parallelism=suite.parallelism)
    cells = []
    for instance_id, inst in loaded:
        for seed in suite.seeds:
            row_id = instance_id if len(suite.seeds) == 1 else f"{instance_id}#s{seed}"
            for scheme in suite.schemes:
                cells.append((row_id, inst, scheme, seed))

    def solve_cell(cell):
        row_id, inst, scheme, seed = cell
        result = solve_scheme(inst, replace(base, scheme=scheme, seed=seed))
        return BenchRow(row_id, scheme, result.cost, result.wall_s, seed,
                        result.rounds)

    if suite.parallel_cells:
        with ThreadPoolExecutor(max_workers=4) as pool:
            rows = list(pool.map(solve_cell, cells))
    else:
        rows = [solve_cell(cell) for cell in cells]
    return BenchReport(rows=tuple(rows), schemes=suite.schemes)


def emit_csv(report: BenchReport) -> str:
    lines = [CSV_HEADER]
    for row in report.rows:
        lines.append(f"{row.instance_id},{row.scheme},{row.objective_cents},"
                     f"{row.wall_s:.3f},{row.seed},{row.iterations}")
    return "\n".join(lines) + "\n"


def emit_markdown(report: BenchReport) -> str:
    """Table-style comparison: one row per instance, minima in bold."""
    schemes = report.schemes
    out = ["| instance | " + " | ".join(schemes) + " |",
           "|" + "---|" * (len(schemes) + 1)]
    for instance_id, cells in report.objectives_by_instance().items():
        low = min(cells.values())
        rendered = []
        for s in schemes:
            if s not in cells:
                rendered.append("")
                continue
            text = format_cents(cells[s])
            rendered.append(f"**{text}**" if cells[s] == low else text)
        out.append(f"| {instance_id} | " + " | ".join(rendered) + " |")
    out.append("")
    out.append("| scheme | wins | ties | mean objective |")
    out.append("|---|---|---|---|")
    for agg in report.aggregates():
        out.append(f"| {agg.scheme} | {agg.wins} | {agg.ties} | "
                   f"{format_cents(round(agg.mean_objective_cents))} |")
    return "\n".join(out) + "\n"
