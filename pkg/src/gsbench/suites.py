"""Prebuilt benchmark suites.

Every suite derives per-configuration iteration counts from a traffic
target (count = target_bytes / (8 * pattern length)) and then clamps the
count so the large buffer stays inside an arena byte limit.  The clamp is
what keeps huge-delta application patterns runnable on one machine: the
traffic target alone would demand a terabyte-scale buffer for a pattern
whose base address advances by a million elements per iteration.
"""

from __future__ import annotations

from dataclasses import dataclass

from .app_patterns import APP_PATTERNS
from .errors import ConfigError
from .patterns import IndexPattern, custom_pattern, extent, gen_uniform
from .planner import Backend, Kernel, RunConfig, emit_json

DEFAULT_TARGET_BYTES = 2**28
DEFAULT_ARENA_LIMIT_BYTES = 2**30
_USTRIDE_STRIDES = tuple(2**k for k in range(8))

SUITE_NAMES = (
    "ustride-gather",
    "ustride-scatter",
    "stream",
    "apps",
    "apps-gather",
    "apps-scatter",
)


@dataclass(frozen=True)
class Suite:
    """A named batch plus the position of its stride-1 baseline config."""

    name: str
    configs: tuple[RunConfig, ...]
    baseline_index: int

    def __post_init__(self) -> None:
        if not self.configs:
            raise ConfigError(f"suite {self.name!r} has no configurations")
        if not 0 <= self.baseline_index < len(self.configs):
            raise ConfigError(
                f"suite {self.name!r}: baseline index {self.baseline_index} out of range"
            )


def _capped_count(pattern: IndexPattern, delta: int, target_bytes: int,
                  max_arena_bytes: int | None) -> int:
    """Iterations hitting the traffic target without outgrowing the arena."""
    count = max(1, target_bytes // (8 * len(pattern)))
    if max_arena_bytes is None:
        return count
    cap_elements = max_arena_bytes // 8
    ext = extent(pattern)
    if ext > cap_elements:
        raise ConfigError(
            f"pattern extent {ext} elements exceeds the arena limit of "
            f"{max_arena_bytes} bytes"
        )
    if delta > 0:
        count = min(count, (cap_elements - ext) // delta + 1)
    return max(1, count)


def _resolve(target_bytes: int | None, max_arena_bytes: int | None,
             backend: Backend | None) -> tuple[int, int, Backend]:
    target = DEFAULT_TARGET_BYTES if target_bytes is None else target_bytes
    limit = DEFAULT_ARENA_LIMIT_BYTES if max_arena_bytes is None else max_arena_bytes
    if target < 8:
        raise ConfigError(f"target_bytes must be at least 8, got {target}")
    if limit < 8:
        raise ConfigError(f"arena limit must be at least 8 bytes, got {limit}")
    return target, limit, backend or Backend.with_threads()


def suite_ustride(kernel: Kernel, *, length: int = 16,
                  target_bytes: int | None = None,
                  max_arena_bytes: int | None = None,
                  runs: int = 10, backend: Backend | None = None) -> Suite:
    """Power-of-two stride sweep, stride 1 through 128.

    delta equals pattern length times stride, so consecutive iterations
    touch disjoint windows and no element is ever reused.
    """
    target, limit, backend = _resolve(target_bytes, max_arena_bytes, backend)
    configs = []
    for stride in _USTRIDE_STRIDES:
        pattern = gen_uniform(length, stride)
        delta = length * stride
        configs.append(RunConfig(
            kernel=kernel,
            pattern=pattern,
            delta=delta,
            count=_capped_count(pattern, delta, target, limit),
            runs=runs,
            backend=backend,
            name=f"stride-{stride}",
        ))
    return Suite(name=f"ustride-{kernel.value}", configs=tuple(configs), baseline_index=0)


def suite_stream_like(*, runs: int = 10, max_arena_bytes: int | None = None,
                      backend: Backend | None = None) -> Suite:
    """Single sequential-copy workload: 8-wide stride-1 gather, 2**24 iterations."""
    backend = backend or Backend.with_threads()
    pattern = gen_uniform(8, 1)
    count = 2**24
    if max_arena_bytes is not None:
        count = min(count, _capped_count(pattern, 8, 8 * 8 * count, max_arena_bytes))
    config = RunConfig(
        kernel=Kernel.GATHER,
        pattern=pattern,
        delta=8,
        count=count,
        runs=runs,
        backend=backend,
        name="stream",
    )
    return Suite(name="stream", configs=(config,), baseline_index=0)


def suite_apps(kernel_filter: Kernel | None = None, *,
               target_bytes: int | None = None,
               max_arena_bytes: int | None = None,
               runs: int = 10, backend: Backend | None = None) -> Suite:
    """Application-trace patterns plus one stride-1 baseline per kernel.

    The baseline configs come first, and the first of them anchors the
    normalised view.
    """
    target, limit, backend = _resolve(target_bytes, max_arena_bytes, backend)
    rows = [p for p in APP_PATTERNS if kernel_filter is None or p.kernel is kernel_filter]
    if not rows:
        raise ConfigError("no application patterns match the requested kernel")

    def make(kernel: Kernel, pattern: IndexPattern, delta: int, name: str) -> RunConfig:
        return RunConfig(
            kernel=kernel,
            pattern=pattern,
            delta=delta,
            count=_capped_count(pattern, delta, target, limit),
            runs=runs,
            backend=backend,
            name=name,
        )

    configs = []
    for kernel in (Kernel.GATHER, Kernel.SCATTER):
        if any(p.kernel is kernel for p in rows):
            configs.append(make(kernel, gen_uniform(16, 1), 16, f"baseline-{kernel.value}"))
    for p in rows:
        configs.append(make(p.kernel, custom_pattern(p.indices, label=p.name), p.delta, p.name))

    if kernel_filter is None:
        name = "apps"
    else:
        name = f"apps-{kernel_filter.value}"
    return Suite(name=name, configs=tuple(configs), baseline_index=0)


def get_suite(name: str, *, target_bytes: int | None = None,
              max_arena_bytes: int | None = None, runs: int = 10,
              backend: Backend | None = None) -> Suite:
    """Look up a suite by its public name."""
    common = dict(target_bytes=target_bytes, max_arena_bytes=max_arena_bytes,
                  runs=runs, backend=backend)
    if name == "ustride-gather":
        return suite_ustride(Kernel.GATHER, **common)
    if name == "ustride-scatter":
        return suite_ustride(Kernel.SCATTER, **common)
    if name == "stream":
        return suite_stream_like(runs=runs, max_arena_bytes=max_arena_bytes, backend=backend)
    if name == "apps":
        return suite_apps(None, **common)
    if name == "apps-gather":
        return suite_apps(Kernel.GATHER, **common)
    if name == "apps-scatter":
        return suite_apps(Kernel.SCATTER, **common)
    raise ConfigError(f"unknown suite {name!r}; expected one of: {', '.join(SUITE_NAMES)}")


def export_suite_json(suite: Suite) -> str:
    """Suite configurations as a JSON config document."""
    return emit_json(suite.configs)
