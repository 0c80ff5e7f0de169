"""Parallel GVNS solver for multi-item lot sizing with remanufacturing."""

from ._kernels import INFEASIBLE
from .bench import (BenchReport, BenchRow, BenchSuite, SchemeAggregate,
                    default_suite, emit_csv, emit_markdown, format_cents,
                    load_suite, run_bench)
from .gvns import (SCHEME_HYBRID, SCHEME_MULTIWORKER, SCHEME_PRODUCT_PARALLEL,
                   SCHEME_SERIAL_VND, SCHEMES, GvnsResult, SearchState,
                   SolverConfig, gvns, next_strength, shake, solve_scheme,
                   worker_round)
from .model import (GeneratorConfig, Instance, InstanceFormatError,
                    generate_instance, parse_instance, serialize_instance,
                    validate_instance)
from .oracle import enumerate_optimal
from .plan import (DecodedPlan, SetupPlan, decode, evaluate, evaluate_product,
                   initial_solution)
from .vnd import (DEFAULT_PARALLELISM, MODE_PRODUCT_PARALLEL, MODE_SERIAL,
                  NEIGHBORHOOD_COUNT, VND_MODES, ImprovementDelta, Move,
                  apply_delta, best_neighbor, enumerate_neighbors, vnd,
                  vnd_pass)

__version__ = "0.1.0"
