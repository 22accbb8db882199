"""Configurable gather/scatter memory bandwidth benchmark suite.

Patterns describe which elements an iteration touches; a run configuration
adds the per-iteration base advance, iteration count, repetitions, and
backend; the engine times the kernels against preallocated buffers; the
metrics layer folds best-run bandwidths into reports the CLI renders as
text, CSV, JSON, and figures.
"""

from .engine import (
    BufferArena,
    KernelResult,
    ValidationStatus,
    ValidationVerdict,
    large_allocation_count,
    run_gather,
    run_scatter,
    sweep,
    trace_gather,
    validate,
)
from .errors import (
    BenchmarkError,
    ConfigError,
    EngineError,
    PatternError,
    UsageError,
)
from .metrics import (
    BwbwData,
    BwbwPoint,
    SuiteReport,
    bwbw_points,
    harmonic_mean,
    normalize_to_baseline,
    pearson_r,
    summarize,
)
from .patterns import (
    IndexPattern,
    custom_pattern,
    extent,
    gen_laplacian,
    gen_ms1,
    gen_random,
    gen_uniform,
    parse_pattern,
    render_pattern,
)
from .planner import (
    ArenaPlan,
    Backend,
    Kernel,
    RunConfig,
    emit_json,
    parse_cli,
    parse_json,
    plan_arena,
    required_elements,
)
from .suites import (
    SUITE_NAMES,
    Suite,
    get_suite,
    suite_apps,
    suite_stream_like,
    suite_ustride,
)

__version__ = "0.1.0"

__all__ = [
    "ArenaPlan",
    "Backend",
    "BenchmarkError",
    "BufferArena",
    "BwbwData",
    "BwbwPoint",
    "ConfigError",
    "EngineError",
    "IndexPattern",
    "Kernel",
    "KernelResult",
    "PatternError",
    "RunConfig",
    "SUITE_NAMES",
    "Suite",
    "SuiteReport",
    "UsageError",
    "ValidationStatus",
    "ValidationVerdict",
    "bwbw_points",
    "custom_pattern",
    "emit_json",
    "extent",
    "gen_laplacian",
    "gen_ms1",
    "gen_random",
    "gen_uniform",
    "get_suite",
    "harmonic_mean",
    "large_allocation_count",
    "normalize_to_baseline",
    "parse_cli",
    "parse_json",
    "parse_pattern",
    "pearson_r",
    "plan_arena",
    "render_pattern",
    "required_elements",
    "run_gather",
    "run_scatter",
    "suite_apps",
    "suite_stream_like",
    "suite_ustride",
    "summarize",
    "sweep",
    "trace_gather",
    "validate",
]
